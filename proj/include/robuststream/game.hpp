#pragma once
//
// Two-player adversarial game runner. Strict alternation: the adversary sees
// exactly the responses to updates 1..t-1 when producing update t, and only
// response values ever cross the boundary. The transcript records digests so
// long horizons stay small.
//

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "robuststream/row_buffer.hpp"

namespace robuststream {

// FNV-1a over the binary representation; stable for replay comparison on a
// fixed platform.
inline std::uint64_t digest_bytes(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t digest(const Vector& v, std::uint64_t h = 1469598103934665603ULL) {
    return digest_bytes(v.data(), sizeof(double) * static_cast<std::size_t>(v.size()), h);
}

inline std::uint64_t digest(const WeightedRowBuffer& buf) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& r : buf.rows()) {
        h = digest(r.row, h);
        h = digest_bytes(&r.weight, sizeof(double), h);
    }
    return h;
}

inline std::uint64_t digest(double x) { return digest_bytes(&x, sizeof(double)); }

struct GameRound {
    std::uint64_t update_digest = 0;
    std::uint64_t response_digest = 0;
    std::map<std::string, double> metrics;
};

struct GameTranscript {
    std::vector<GameRound> rounds;
    std::uint64_t seed_algorithm = 0;
    std::uint64_t seed_adversary = 0;
    bool aborted = false;
};

// Alg:      update(const Payload&) -> Response
// Adv:      next(const std::vector<Response>&) -> Payload
// Metrics:  (round, payload, response) -> std::map<std::string,double>
template <class Payload, class Response, class Alg, class Adv, class Metrics>
GameTranscript run_game(Alg& alg, Adv& adv, std::size_t horizon, Metrics&& metrics,
                        std::uint64_t seed_algorithm = 0, std::uint64_t seed_adversary = 0) {
    if (horizon < 1) throw std::invalid_argument("run_game: horizon >= 1");
    GameTranscript tr;
    tr.seed_algorithm = seed_algorithm;
    tr.seed_adversary = seed_adversary;
    std::vector<Response> responses;
    responses.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        GameRound round;
        try {
            Payload u = adv.next(responses);
            round.update_digest = digest(u);
            Response r = alg.update(u);
            round.response_digest = digest(r);
            round.metrics = metrics(t, u, r);
            responses.push_back(std::move(r));
        } catch (...) {
            tr.aborted = true;
            tr.rounds.push_back(round);
            return tr;
        }
        tr.rounds.push_back(std::move(round));
    }
    return tr;
}

} // namespace robuststream
