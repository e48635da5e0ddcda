#pragma once
//
// Streaming cut sparsification: each arriving edge is kept with probability
// min(rho / c_e, 1), where c_e is its strong connectivity in the current
// sparsifier H with the candidate edge itself counted, and kept edges carry
// weight 1/p_e times the original. The coin at edge index t is a pure
// function of (seed, t).
//

#include <cmath>
#include <cstdint>
#include <vector>

#include "robuststream/graph.hpp"
#include "robuststream/rng.hpp"

namespace robuststream {

struct SparsifierConfig {
    int n = 0;                      // vertex count
    std::uint64_t m_bound = 0;      // a-priori stream length bound
    double eps = 0.5;
    double c = 4.0;                 // rho constant
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 2) throw std::invalid_argument("SparsifierConfig: n >= 2");
        if (m_bound < 1) throw std::invalid_argument("SparsifierConfig: m_bound >= 1");
        if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("SparsifierConfig: eps in (0,1)");
        if (!(c > 0.0)) throw std::invalid_argument("SparsifierConfig: C positive");
    }
};

struct KeptEdge {
    Edge edge;          // stored weight = original / sample_prob
    double sample_prob = 1.0;
};

class CutSparsifier {
public:
    explicit CutSparsifier(SparsifierConfig cfg) : cfg_(cfg) {
        cfg_.validate();
        rho_ = cfg_.c *
               (std::log(static_cast<double>(cfg_.n)) + std::log(static_cast<double>(cfg_.m_bound))) /
               (cfg_.eps * cfg_.eps);
    }

    bool process_edge(const Edge& e) {
        validate_edge(e, cfg_.n);
        if (edges_seen_ >= cfg_.m_bound)
            throw std::invalid_argument("process_edge: stream-length bound exceeded");
        const std::uint64_t index = edges_seen_++;

        std::vector<Edge> h_plus = h_edges();
        h_plus.push_back(e);
        double ce = strong_connectivity(h_plus, cfg_.n, e.u, e.v);
        double pe = ce > 0.0 ? std::min(rho_ / ce, 1.0) : 1.0;
        max_connectivity_ = std::max(max_connectivity_, ce);
        min_connectivity_ = min_connectivity_ <= 0.0 ? ce : std::min(min_connectivity_, ce);

        bool keep = pe >= 1.0 || counter_uniform(cfg_.seed, index) < pe;
        if (keep) kept_.push_back({{e.u, e.v, e.w / pe}, pe});
        return keep;
    }

    std::vector<Edge> h_edges() const {
        std::vector<Edge> out;
        out.reserve(kept_.size());
        for (const auto& k : kept_) out.push_back(k.edge);
        return out;
    }

    const std::vector<KeptEdge>& kept() const { return kept_; }
    double rho() const { return rho_; }
    std::uint64_t edges_seen() const { return edges_seen_; }
    const SparsifierConfig& config() const { return cfg_; }
    // post-hoc kappa proxy: ratio of extreme edge connectivities observed
    double kappa_proxy() const {
        return min_connectivity_ > 0.0 ? max_connectivity_ / min_connectivity_ : 1.0;
    }

private:
    SparsifierConfig cfg_;
    double rho_ = 0.0;
    std::vector<KeptEdge> kept_;
    std::uint64_t edges_seen_ = 0;
    double max_connectivity_ = 0.0;
    double min_connectivity_ = 0.0;
};

struct SparsifierReport {
    bool ok = true;
    double worst_ratio = 1.0;            // H/G ratio farthest from 1
    std::size_t cuts_checked = 0;
    std::size_t violations = 0;
};

// Checks Val_H(C) within (1 +- eps) Val_G(C). Exhaustive over all 2^(n-1)-1
// cuts for n <= 20 via Gray-code incremental updates; otherwise `trials`
// random sides plus G's global min cut.
inline SparsifierReport sparsifier_check(const std::vector<Edge>& g,
                                         const std::vector<Edge>& h, int n, double eps,
                                         std::size_t trials = 2000,
                                         std::uint64_t seed = 0) {
    SparsifierReport rep;
    auto adj_g = detail::adjacency_full(g, n);
    auto adj_h = detail::adjacency_full(h, n);

    auto record = [&](double vg, double vh) {
        ++rep.cuts_checked;
        bool bad = vh < (1.0 - eps) * vg - 1e-9 || vh > (1.0 + eps) * vg + 1e-9;
        if (bad) ++rep.violations;
        double ratio = vg > 0.0 ? vh / vg : (vh > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
        if (std::abs(ratio - 1.0) > std::abs(rep.worst_ratio - 1.0)) rep.worst_ratio = ratio;
    };

    if (n <= 20) {
        // Gray code over vertices 1..n-1; vertex 0 stays on the fixed shore
        std::vector<bool> side(n, false);
        double vg = 0.0, vh = 0.0;
        std::uint64_t total = (1ULL << (n - 1)) - 1;
        for (std::uint64_t i = 1; i <= total; ++i) {
            int bit = static_cast<int>(__builtin_ctzll(i)) + 1;  // vertex flipped
            double delta_g = 0.0, delta_h = 0.0;
            for (int v = 0; v < n; ++v) {
                if (v == bit) continue;
                double sign = (side[v] != side[bit]) ? -1.0 : 1.0;  // crossing state after flip
                delta_g += sign * adj_g[bit][v];
                delta_h += sign * adj_h[bit][v];
            }
            side[bit] = !side[bit];
            vg += delta_g;
            vh += delta_h;
            record(vg, vh);
        }
    } else {
        CounterRng rng(seed);
        for (std::size_t t = 0; t < trials; ++t) {
            std::vector<bool> side(n, false);
            bool any = false, all = true;
            for (int v = 0; v < n; ++v) {
                side[v] = rng.uniform() < 0.5;
                any |= side[v];
                all &= side[v];
            }
            if (!any || all) { side[0] = !side[0]; }
            record(cut_value(g, side), cut_value(h, side));
        }
        MinCut mc = global_min_cut(g, n);
        if (!mc.side.empty() && mc.side.size() < static_cast<std::size_t>(n)) {
            std::vector<bool> side(n, false);
            for (int v : mc.side) side[v] = true;
            record(cut_value(g, side), cut_value(h, side));
        }
    }
    rep.ok = rep.violations == 0;
    return rep;
}

} // namespace robuststream
