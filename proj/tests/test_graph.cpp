#include <catch2/catch_amalgamated.hpp>

#include "robuststream/graph.hpp"
#include "robuststream/sparsifier.hpp"

using namespace robuststream;

namespace {

// brute-force min cut over all 2^(n-1)-1 proper sides restricted to `verts`
double brute_min_cut(const std::vector<Edge>& edges, const std::vector<int>& verts) {
    const std::size_t n = verts.size();
    std::vector<Edge> sub;
    std::set<int> in(verts.begin(), verts.end());
    for (const auto& e : edges)
        if (in.count(e.u) && in.count(e.v)) sub.push_back(e);
    int nmax = *std::max_element(verts.begin(), verts.end()) + 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 1; mask < (1ULL << (n - 1)); ++mask) {
        std::vector<bool> side(nmax, false);
        for (std::size_t i = 0; i + 1 < n; ++i)
            if ((mask >> i) & 1) side[verts[i + 1]] = true;
        side[verts[0]] = false;
        double val = 0.0;
        for (const auto& e : sub)
            if (side[e.u] != side[e.v]) val += e.w;
        best = std::min(best, val);
    }
    return best;
}

// definition-level oracle: max over vertex subsets containing {u,v} of the
// induced subgraph's min cut
double brute_strong_connectivity(const std::vector<Edge>& edges, int n, int u, int v) {
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        if (!((mask >> u) & 1) || !((mask >> v) & 1)) continue;
        std::vector<int> verts;
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1) verts.push_back(i);
        if (verts.size() < 2) continue;
        best = std::max(best, brute_min_cut(edges, verts));
    }
    return best;
}

std::vector<Edge> random_graph(int n, double p, CounterRng& rng, bool integer_weights) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform() < p) {
                double w = integer_weights ? 1.0 + rng.index(5) : 0.1 + rng.uniform() * 4.0;
                edges.push_back({u, v, w});
            }
    return edges;
}

const std::vector<Edge> kTwoK4Bridge = [] {
    std::vector<Edge> edges;
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) edges.push_back({u, v, 1.0});
    for (int u = 4; u < 8; ++u)
        for (int v = u + 1; v < 8; ++v) edges.push_back({u, v, 1.0});
    edges.push_back({0, 4, 1.0});
    return edges;
}();

} // namespace

TEST_CASE("cut_value") {
    std::vector<Edge> tri = {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 4.0}};
    REQUIRE(cut_value(tri, {true, false, false}) == Catch::Approx(5.0));
    REQUIRE(cut_value(tri, {false, true, false}) == Catch::Approx(3.0));
    REQUIRE(cut_value(tri, {true, true, false}) == Catch::Approx(6.0));
    REQUIRE_THROWS_AS(cut_value(tri, {true, true, true}), std::invalid_argument);
    REQUIRE_THROWS_AS(cut_value(tri, {false, false, false}), std::invalid_argument);
    REQUIRE_THROWS_AS(cut_value(tri, {true, false}), std::invalid_argument);
}

TEST_CASE("validate_edge") {
    REQUIRE_NOTHROW(validate_edge({0, 1, 0.5}, 2));
    REQUIRE_THROWS_AS(validate_edge({1, 1, 1.0}, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(validate_edge({0, 3, 1.0}, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(validate_edge({0, 1, 0.0}, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(validate_edge({0, 1, -2.0}, 3), std::invalid_argument);
}

TEST_CASE("global_min_cut closed forms") {
    std::vector<Edge> single = {{0, 1, 3.0}};
    auto mc = global_min_cut(single, 2);
    REQUIRE(mc.value == Catch::Approx(3.0));
    REQUIRE(mc.side.size() == 1);

    std::vector<Edge> tri = {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 4.0}};
    auto mct = global_min_cut(tri, 3);
    REQUIRE(mct.value == Catch::Approx(3.0));  // isolate vertex 1
    REQUIRE(mct.side == std::vector<int>{1});

    auto mcb = global_min_cut(kTwoK4Bridge, 8);
    REQUIRE(mcb.value == Catch::Approx(1.0));  // the bridge

    std::vector<Edge> disconnected = {{0, 1, 1.0}, {2, 3, 1.0}};
    auto mcd = global_min_cut(disconnected, 4);
    REQUIRE(mcd.value == 0.0);
    REQUIRE((mcd.side == std::vector<int>{0, 1} || mcd.side == std::vector<int>{2, 3}));
}

TEST_CASE("global_min_cut matches brute force on random graphs") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        CounterRng rng(derive_seed(100, seed));
        int n = 4 + static_cast<int>(rng.index(4));  // 4..7
        auto edges = random_graph(n, 0.6, rng, seed % 2 == 0);
        std::vector<int> verts(n);
        std::iota(verts.begin(), verts.end(), 0);
        double expect = edges.empty() ? 0.0 : brute_min_cut(edges, verts);
        auto mc = global_min_cut(edges, n);
        REQUIRE(mc.value == Catch::Approx(expect).margin(1e-9));
    }
}

TEST_CASE("strong_connectivity closed forms") {
    std::vector<Edge> tri = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    REQUIRE(strong_connectivity(tri, 3, 0, 1) == Catch::Approx(2.0));

    std::vector<Edge> path = {{0, 1, 1.0}, {1, 2, 1.0}};
    REQUIRE(strong_connectivity(path, 3, 0, 2) == Catch::Approx(1.0));

    // two triangles joined by a bridge: within-triangle pairs stay at 2
    std::vector<Edge> twotri = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0},
                                {3, 4, 1.0}, {4, 5, 1.0}, {3, 5, 1.0}, {2, 3, 1.0}};
    REQUIRE(strong_connectivity(twotri, 6, 0, 1) == Catch::Approx(2.0));
    REQUIRE(strong_connectivity(twotri, 6, 3, 5) == Catch::Approx(2.0));
    REQUIRE(strong_connectivity(twotri, 6, 0, 5) == Catch::Approx(1.0));

    REQUIRE(strong_connectivity(kTwoK4Bridge, 8, 1, 2) == Catch::Approx(3.0));
    REQUIRE(strong_connectivity(kTwoK4Bridge, 8, 1, 6) == Catch::Approx(1.0));

    std::vector<Edge> disconnected = {{0, 1, 1.0}, {2, 3, 1.0}};
    REQUIRE(strong_connectivity(disconnected, 4, 0, 2) == 0.0);

    // parallel edges merge
    std::vector<Edge> par = {{0, 1, 1.0}, {0, 1, 2.5}};
    REQUIRE(strong_connectivity(par, 2, 0, 1) == Catch::Approx(3.5));

    REQUIRE_THROWS_AS(strong_connectivity(tri, 3, 1, 1), std::invalid_argument);
}

TEST_CASE("strong_connectivity matches the subset-enumeration oracle") {
    // exhaustive over all graphs on <= 5 vertices with weights in {1, 3}
    for (int n = 2; n <= 5; ++n) {
        std::vector<std::pair<int, int>> slots;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) slots.push_back({u, v});
        std::uint64_t patterns = 1ULL << slots.size();
        std::uint64_t stride = n == 5 ? 11 : 1;  // thin the 1024 five-vertex graphs
        for (std::uint64_t mask = 0; mask < patterns; mask += stride) {
            std::vector<Edge> edges;
            for (std::size_t i = 0; i < slots.size(); ++i)
                if ((mask >> i) & 1)
                    edges.push_back({slots[i].first, slots[i].second, (i % 3 == 0) ? 3.0 : 1.0});
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    REQUIRE(strong_connectivity(edges, n, u, v) ==
                            Catch::Approx(brute_strong_connectivity(edges, n, u, v)).margin(1e-9));
        }
    }

    // random weighted graphs on 6-7 vertices
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        CounterRng rng(derive_seed(300, seed));
        int n = 6 + static_cast<int>(rng.index(2));
        auto edges = random_graph(n, 0.5, rng, false);
        int u = static_cast<int>(rng.index(static_cast<std::uint64_t>(n)));
        int v = static_cast<int>(rng.index(static_cast<std::uint64_t>(n)));
        if (u == v) v = (v + 1) % n;
        REQUIRE(strong_connectivity(edges, n, u, v) ==
                Catch::Approx(brute_strong_connectivity(edges, n, u, v)).margin(1e-9));
    }
}

TEST_CASE("sparsifier keeps everything when rho saturates") {
    SparsifierConfig cfg;
    cfg.n = 8;
    cfg.m_bound = 64;
    cfg.eps = 0.5;
    cfg.c = 4.0;
    cfg.seed = 11;
    CutSparsifier sp(cfg);
    // rho = 4 (ln 8 + ln 64) / 0.25 ~ 99.8 dominates every unit connectivity
    for (const auto& e : kTwoK4Bridge) REQUIRE(sp.process_edge(e));
    REQUIRE(sp.kept().size() == kTwoK4Bridge.size());
    for (const auto& k : sp.kept()) {
        REQUIRE(k.sample_prob == 1.0);
        REQUIRE(k.edge.w == 1.0);
    }
    auto rep = sparsifier_check(kTwoK4Bridge, sp.h_edges(), cfg.n, cfg.eps);
    REQUIRE(rep.ok);
    REQUIRE(rep.worst_ratio == Catch::Approx(1.0));
    REQUIRE(rep.cuts_checked == (1ULL << 7) - 1);
}

TEST_CASE("sparsifier samples genuinely on a heavy graph and stays unbiased") {
    // K6 with weight-30 edges: c_e exceeds rho (~72) once the graph fills in,
    // so later edges are genuinely subsampled at moderate probabilities
    std::vector<Edge> heavy;
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v) heavy.push_back({u, v, 30.0});

    SparsifierConfig cfg;
    cfg.n = 6;
    cfg.m_bound = 15;
    cfg.eps = 0.5;
    cfg.c = 4.0;
    cfg.seed = 0;

    bool sampled = false;
    double mean_total = 0.0;
    const int seeds = 400;
    for (int s = 0; s < seeds; ++s) {
        cfg.seed = derive_seed(9000, static_cast<std::uint64_t>(s));
        CutSparsifier sp(cfg);
        for (const auto& e : heavy) sp.process_edge(e);
        double total = 0.0;
        for (const auto& k : sp.kept()) {
            total += k.edge.w;
            if (k.sample_prob < 1.0) sampled = true;
        }
        mean_total += total;
    }
    REQUIRE(sampled);
    mean_total /= seeds;
    REQUIRE(mean_total == Catch::Approx(15 * 30.0).epsilon(0.05));
}

TEST_CASE("sparsifier replay is deterministic and coins are counter-indexed") {
    std::vector<Edge> heavy;
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v) heavy.push_back({u, v, 4000.0});
    SparsifierConfig cfg;
    cfg.n = 6;
    cfg.m_bound = 15;
    cfg.eps = 0.5;
    cfg.seed = 123;
    CutSparsifier a(cfg), b(cfg);
    for (const auto& e : heavy) {
        REQUIRE(a.process_edge(e) == b.process_edge(e));
    }
    REQUIRE(a.kept().size() == b.kept().size());
    for (std::size_t i = 0; i < a.kept().size(); ++i) {
        REQUIRE(a.kept()[i].edge.w == b.kept()[i].edge.w);
        REQUIRE(a.kept()[i].sample_prob == b.kept()[i].sample_prob);
    }
}

TEST_CASE("sparsifier rejects invalid input") {
    SparsifierConfig cfg;
    cfg.n = 4;
    cfg.m_bound = 2;
    cfg.eps = 0.5;
    CutSparsifier sp(cfg);
    REQUIRE_THROWS_AS(sp.process_edge({0, 0, 1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(sp.process_edge({0, 9, 1.0}), std::invalid_argument);
    sp.process_edge({0, 1, 1.0});
    sp.process_edge({1, 2, 1.0});
    REQUIRE_THROWS_AS(sp.process_edge({2, 3, 1.0}), std::invalid_argument);

    SparsifierConfig bad = cfg;
    bad.eps = 1.5;
    REQUIRE_THROWS_AS(CutSparsifier(bad), std::invalid_argument);
}

TEST_CASE("sparsifier_check flags a genuinely distorted graph") {
    std::vector<Edge> tri = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    std::vector<Edge> skew = {{0, 1, 5.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    auto rep = sparsifier_check(tri, skew, 3, 0.5);
    REQUIRE_FALSE(rep.ok);
    REQUIRE(rep.violations > 0);
    REQUIRE(rep.worst_ratio > 1.5);

    auto ok = sparsifier_check(tri, tri, 3, 0.1);
    REQUIRE(ok.ok);
    REQUIRE(ok.cuts_checked == 3);
}

TEST_CASE("sparsifier_check random mode covers large vertex sets") {
    std::vector<Edge> ring;
    int n = 25;
    for (int i = 0; i < n; ++i) ring.push_back({i, (i + 1) % n, 2.0});
    auto rep = sparsifier_check(ring, ring, n, 0.2, 500, 7);
    REQUIRE(rep.ok);
    REQUIRE(rep.cuts_checked >= 500);
    REQUIRE(rep.worst_ratio == Catch::Approx(1.0));
}
