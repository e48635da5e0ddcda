#include <catch2/catch_amalgamated.hpp>

#include "robuststream/coreset.hpp"
#include "robuststream/coreset_tree.hpp"

using namespace robuststream;

namespace {

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

std::vector<WeightedPoint> gaussian_blobs(int per_blob, const std::vector<Vector>& centers,
                                          std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<WeightedPoint> pts;
    for (const auto& c : centers)
        for (int i = 0; i < per_blob; ++i) {
            Vector p = c;
            for (Eigen::Index j = 0; j < p.size(); ++j) p(j) += rng.normal();
            pts.push_back({p, 1.0});
        }
    return pts;
}

double total_weight(const std::vector<WeightedPoint>& pts) {
    double w = 0.0;
    for (const auto& p : pts) w += p.weight;
    return w;
}

ClusteringConfig base_config(int k, int z, double eps, std::uint64_t seed) {
    ClusteringConfig cfg;
    cfg.k = k;
    cfg.z = z;
    cfg.eps = eps;
    cfg.seed = seed;
    return cfg;
}

std::vector<std::vector<Vector>> grid_center_triples(double lo, double hi, int steps) {
    std::vector<Vector> grid;
    for (int i = 0; i < steps; ++i)
        for (int j = 0; j < steps; ++j)
            grid.push_back(vec2(lo + (hi - lo) * i / (steps - 1), lo + (hi - lo) * j / (steps - 1)));
    std::vector<std::vector<Vector>> out;
    for (std::size_t a = 0; a < grid.size(); ++a)
        for (std::size_t b = a + 1; b < grid.size(); ++b)
            for (std::size_t c = b + 1; c < grid.size(); ++c)
                out.push_back({grid[a], grid[b], grid[c]});
    return out;
}

} // namespace

TEST_CASE("kz_cost") {
    std::vector<WeightedPoint> one = {{vec2(0, 0), 1.0}};
    REQUIRE(kz_cost(one, {vec2(0, 0)}, 2) == 0.0);

    std::vector<WeightedPoint> p34 = {{vec2(3, 4), 2.0}};
    REQUIRE(kz_cost(p34, {vec2(0, 0)}, 1) == Catch::Approx(10.0));
    REQUIRE(kz_cost(p34, {vec2(0, 0)}, 2) == Catch::Approx(50.0));
    REQUIRE_THROWS_AS(kz_cost(p34, {}, 2), std::invalid_argument);
}

TEST_CASE("sensitivity_sample arithmetic with uniform bounds") {
    // s(p) = 1/|P|, mu = 1, |P| = 100: S = 1, q = 0.01, weight 100/m each
    std::vector<WeightedPoint> pts;
    CounterRng gen(3);
    for (int i = 0; i < 100; ++i) pts.push_back({vec2(gen.normal(), gen.normal()), 1.0});
    std::vector<double> s(100, 0.01);
    CounterRng rng(17);
    const std::size_t m = 40;
    auto sample = sensitivity_sample(pts, s, m, rng);
    REQUIRE(sample.size() == m);
    for (const auto& p : sample) REQUIRE(p.weight == Catch::Approx(100.0 / m));
    REQUIRE(total_weight(sample) == Catch::Approx(100.0));
}

TEST_CASE("offline_coreset on identical points is exact") {
    std::vector<WeightedPoint> pts(50, {vec2(1, 2), 2.0});
    auto cfg = base_config(1, 2, 0.2, 5);
    cfg.policy = ReducePolicy::FixedSize;
    cfg.fixed_size = 10;
    CounterRng rng(9);
    auto cs = offline_coreset(pts, cfg, 0.2, rng);
    REQUIRE(total_weight(cs) == Catch::Approx(100.0));
    for (const auto& c : {vec2(0, 0), vec2(3, -1), vec2(1, 2)})
        REQUIRE(kz_cost(cs, {c}, 2) == Catch::Approx(kz_cost(pts, {c}, 2)));
}

TEST_CASE("offline_coreset formula path copies when the bound exceeds |P|") {
    std::vector<WeightedPoint> pts = gaussian_blobs(100, {vec2(0, 0)}, 2);
    auto cfg = base_config(1, 2, 0.2, 5);
    CounterRng rng(9);
    auto cs = offline_coreset(pts, cfg, 0.2, rng);  // theory m >> 100
    REQUIRE(cs.size() == pts.size());
    REQUIRE(total_weight(cs) == Catch::Approx(total_weight(pts)));
}

TEST_CASE("offline_coreset approximates cost on a center grid") {
    CounterRng gen(21);
    std::vector<WeightedPoint> pts;
    for (int i = 0; i < 200; ++i) pts.push_back({vec2(gen.uniform(), gen.uniform()), 1.0});
    auto cfg = base_config(1, 2, 0.2, 31);
    cfg.policy = ReducePolicy::FixedSize;
    cfg.fixed_size = 120;
    CounterRng rng(13);
    auto cs = offline_coreset(pts, cfg, 0.2, rng);
    for (int i = 0; i < 11; ++i) {
        for (int j = 0; j < 11; ++j) {
            Vector c = vec2(i / 10.0, j / 10.0);
            double full = kz_cost(pts, {c}, 2);
            double approx = kz_cost(cs, {c}, 2);
            REQUIRE(approx == Catch::Approx(full).epsilon(0.2));
        }
    }
}

TEST_CASE("sensitivity_bounds structure") {
    auto cfg = base_config(1, 2, 0.2, 7);

    std::vector<WeightedPoint> same(40, {vec2(3, 3), 1.0});
    auto s_same = sensitivity_bounds(same, cfg);
    for (double s : s_same) REQUIRE(s == Catch::Approx(s_same.front()));

    // two far clusters, k=2: within-cluster bounds agree up to seeding noise
    auto cfg2 = base_config(2, 2, 0.2, 7);
    auto clusters = gaussian_blobs(50, {vec2(0, 0), vec2(1000, 1000)}, 11);
    auto s_two = sensitivity_bounds(clusters, cfg2);
    double lo0 = *std::min_element(s_two.begin(), s_two.begin() + 50);
    double hi0 = *std::max_element(s_two.begin(), s_two.begin() + 50);
    REQUIRE(hi0 <= 20.0 * lo0);  // no cross-cluster blowup

    // single distant outlier dominates the bounds
    std::vector<WeightedPoint> outlier(99, {vec2(0, 0), 1.0});
    outlier.push_back({vec2(1e6, 1e6), 1.0});
    auto s_out = sensitivity_bounds(outlier, cfg);
    std::size_t argmax = std::max_element(s_out.begin(), s_out.end()) - s_out.begin();
    REQUIRE(argmax == 99);
    REQUIRE(s_out[99] >= cfg.c1 * 0.9);  // relative cost ~1 plus own-cluster term
}

TEST_CASE("merge-and-reduce binary counter discipline") {
    auto cfg = base_config(1, 2, 0.3, 3);
    cfg.policy = ReducePolicy::Passthrough;
    cfg.leaf_size = 1;
    cfg.n_bound = 8;
    CoresetTree tree(cfg);
    for (int i = 0; i < 4; ++i) tree.insert({vec2(i, 0), 1.0});
    auto occ = tree.occupancy();
    REQUIRE(occ.size() == 3);
    REQUIRE_FALSE(occ[0]);
    REQUIRE_FALSE(occ[1]);
    REQUIRE(occ[2]);  // all four points merged into the third level
    REQUIRE(tree.query().size() == 4);

    cfg.leaf_size = 2;
    CoresetTree tree2(cfg);
    for (int i = 0; i < 3; ++i) tree2.insert({vec2(i, 0), 1.0});
    auto occ2 = tree2.occupancy();
    REQUIRE(occ2.size() == 1);
    REQUIRE(occ2[0]);
    REQUIRE(tree2.query().size() == 3);  // level buffer of 2 + pending 1
}

TEST_CASE("binary counter law over a longer stream") {
    auto cfg = base_config(1, 2, 0.3, 3);
    cfg.policy = ReducePolicy::Passthrough;
    cfg.leaf_size = 4;
    cfg.n_bound = 256;
    CoresetTree tree(cfg);
    CounterRng gen(8);
    for (int n = 1; n <= 100; ++n) {
        tree.insert({vec2(gen.normal(), gen.normal()), 1.0});
        std::size_t counter = static_cast<std::size_t>(n) / 4;
        auto occ = tree.occupancy();
        for (std::size_t level = 0; level < occ.size(); ++level)
            REQUIRE(occ[level] == (((counter >> level) & 1) != 0));
    }
}

TEST_CASE("lossless passthrough reproduces the exact prefix") {
    auto cfg = base_config(2, 2, 0.3, 3);
    cfg.policy = ReducePolicy::Passthrough;
    cfg.leaf_size = 8;
    cfg.n_bound = 128;
    CoresetTree tree(cfg);
    auto pts = gaussian_blobs(60, {vec2(0, 0), vec2(5, 5)}, 77);
    for (const auto& p : pts) tree.insert(p);
    auto q = tree.query();
    REQUIRE(q.size() == pts.size());
    for (const auto& centers : {std::vector<Vector>{vec2(0, 0)}, {vec2(1, 2), vec2(4, 4)}})
        REQUIRE(kz_cost(q, centers, 2) == Catch::Approx(kz_cost(pts, centers, 2)));
}

TEST_CASE("peak storage stays within the level budget") {
    auto cfg = base_config(1, 2, 0.3, 3);
    cfg.policy = ReducePolicy::FixedSize;
    cfg.fixed_size = 64;
    cfg.leaf_size = 64;
    cfg.n_bound = 1024;
    CoresetTree tree(cfg);
    REQUIRE(tree.max_levels() == 4);
    CounterRng gen(12);
    std::size_t peak = 0;
    for (int i = 0; i < 1024; ++i) {
        tree.insert({vec2(gen.normal(), gen.normal()), 1.0});
        peak = std::max(peak, tree.stored_points());
    }
    REQUIRE(peak <= 64 * (tree.max_levels() + 1));
}

TEST_CASE("sampled tree approximates clustering cost on a center grid") {
    int pass = 0;
    auto triples = grid_center_triples(-2.0, 8.0, 4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto cfg = base_config(3, 2, 0.3, derive_seed(500, seed));
        cfg.policy = ReducePolicy::FixedSize;
        cfg.fixed_size = 192;
        cfg.leaf_size = 192;
        cfg.n_bound = 512;
        CoresetTree tree(cfg);
        auto pts = gaussian_blobs(171, {vec2(0, 0), vec2(6, 0), vec2(3, 6)}, derive_seed(600, seed));
        pts.resize(512);
        for (const auto& p : pts) tree.insert(p);
        auto q = tree.query();

        bool ok = true;
        for (const auto& centers : triples) {
            double full = kz_cost(pts, centers, 2);
            double approx = kz_cost(q, centers, 2);
            if (std::abs(approx - full) > 0.3 * full) { ok = false; break; }
        }
        if (ok) ++pass;
    }
    REQUIRE(pass >= 18);
}

TEST_CASE("adaptive farthest-point insertion does not break the guarantee") {
    // adversary picks the next point as a function of the current query output
    auto triples = grid_center_triples(-2.0, 8.0, 4);
    int pass = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto cfg = base_config(2, 2, 0.3, derive_seed(800, seed));
        cfg.policy = ReducePolicy::FixedSize;
        cfg.fixed_size = 160;
        cfg.leaf_size = 160;
        cfg.n_bound = 512;
        CoresetTree tree(cfg);
        CounterRng gen(derive_seed(900, seed));
        std::vector<WeightedPoint> all;
        std::vector<Vector> anchors = {vec2(0, 0), vec2(6, 0), vec2(3, 6), vec2(-1, 4)};
        for (int i = 0; i < 512; ++i) {
            Vector p;
            if (i % 4 == 3 && !tree.query().empty()) {
                // farthest anchor from the current coreset, jittered
                auto q = tree.query();
                double best = -1.0;
                Vector far = anchors[0];
                for (const auto& anchor : anchors) {
                    double dmin = std::numeric_limits<double>::infinity();
                    for (const auto& cp : q) dmin = std::min(dmin, (cp.coords - anchor).norm());
                    if (dmin > best) { best = dmin; far = anchor; }
                }
                p = far + vec2(0.3 * gen.normal(), 0.3 * gen.normal());
            } else {
                p = anchors[i % 4] + vec2(gen.normal(), gen.normal());
            }
            tree.insert({p, 1.0});
            all.push_back({p, 1.0});
        }
        auto q = tree.query();
        bool ok = true;
        for (const auto& centers : triples) {
            double full = kz_cost(all, centers, 2);
            double approx = kz_cost(q, centers, 2);
            if (std::abs(approx - full) > 0.3 * full) { ok = false; break; }
        }
        if (ok) ++pass;
    }
    REQUIRE(pass >= 9);
}

TEST_CASE("total weight is conserved in expectation") {
    auto pts = gaussian_blobs(100, {vec2(0, 0), vec2(4, 4)}, 15);
    auto cfg = base_config(2, 2, 0.3, 0);
    cfg.policy = ReducePolicy::FixedSize;
    cfg.fixed_size = 32;
    double mean = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        CounterRng rng(derive_seed(7000, static_cast<std::uint64_t>(s)));
        mean += total_weight(offline_coreset(pts, cfg, 0.3, rng));
    }
    mean /= seeds;
    REQUIRE(mean == Catch::Approx(total_weight(pts)).epsilon(0.05));
}

TEST_CASE("lloyd_refine closed forms") {
    // k=1, z=2: exact weighted centroid
    std::vector<WeightedPoint> pts = {{vec2(0, 0), 1.0}, {vec2(3, 0), 2.0}, {vec2(0, 3), 3.0}};
    auto res = lloyd_refine(pts, 1, 2, 5);
    Vector centroid = (1.0 * vec2(0, 0) + 2.0 * vec2(3, 0) + 3.0 * vec2(0, 3)) / 6.0;
    REQUIRE((res.centers[0] - centroid).norm() < 1e-9);

    // two far clusters, k=2: one center near each
    auto blobs = gaussian_blobs(40, {vec2(0, 0), vec2(100, 100)}, 9);
    auto res2 = lloyd_refine(blobs, 2, 2, 5);
    double d0 = std::min((res2.centers[0] - vec2(0, 0)).norm(), (res2.centers[1] - vec2(0, 0)).norm());
    double d1 = std::min((res2.centers[0] - vec2(100, 100)).norm(), (res2.centers[1] - vec2(100, 100)).norm());
    REQUIRE(d0 < 3.0);
    REQUIRE(d1 < 3.0);
}

TEST_CASE("lloyd_refine k-median beats every input point on colinear data") {
    std::vector<WeightedPoint> pts = {
        {vec2(0, 0), 1.0}, {vec2(1, 0), 5.0}, {vec2(2, 0), 1.0}, {vec2(7, 0), 2.0}};
    auto res = lloyd_refine(pts, 1, 1, 3);
    double median_cost = kz_cost(pts, res.centers, 1);
    for (const auto& p : pts)
        REQUIRE(median_cost <= kz_cost(pts, {p.coords}, 1) + 1e-9);
}

TEST_CASE("lloyd_refine flags duplicate centers when k exceeds distinct points") {
    std::vector<WeightedPoint> pts(10, {vec2(1, 1), 1.0});
    auto res = lloyd_refine(pts, 3, 2, 7);
    REQUIRE(res.duplicate_centers);
}
