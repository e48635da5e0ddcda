#pragma once
//
// Offline sensitivity-sampling coresets for (k,z)-clustering and the weighted
// clustering primitives built on them (cost evaluation, seeding, Lloyd
// refinement).
//

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "robuststream/rng.hpp"
#include "robuststream/row_buffer.hpp"

namespace robuststream {

struct WeightedPoint {
    Vector coords;
    double weight = 1.0;
};

enum class ReducePolicy {
    Formula,      // sample size from the sensitivity-sampling bound (copies P when it exceeds |P|)
    FixedSize,    // sample exactly fixed_size points
    Passthrough,  // lossless: return the input unchanged (test mode)
};

struct ClusteringConfig {
    int k = 1;
    int z = 2;                   // 1 = k-median, 2 = k-means
    double eps = 0.3;
    double delta = 0.05;
    std::size_t leaf_size = 256;
    std::uint64_t n_bound = 1024;   // stream bound fixing the tree depth
    double d_prime = 0.0;           // pseudo-dimension proxy; 0 = default d*k*(z+1)*ln(k+1)
    double c0 = 10.0;               // sample-size constant
    double c1 = 8.0;                // sensitivity-bound constant
    ReducePolicy policy = ReducePolicy::Formula;
    std::size_t fixed_size = 0;
    std::uint64_t seed = 0;

    void validate() const {
        if (k < 1) throw std::invalid_argument("ClusteringConfig: k >= 1");
        if (z != 1 && z != 2) throw std::invalid_argument("ClusteringConfig: z must be 1 or 2");
        if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("ClusteringConfig: eps in (0,1)");
        if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("ClusteringConfig: delta in (0,1)");
        if (leaf_size < 1) throw std::invalid_argument("ClusteringConfig: leaf_size >= 1");
        if (policy == ReducePolicy::FixedSize && fixed_size < 1)
            throw std::invalid_argument("ClusteringConfig: fixed_size >= 1");
    }

    double pseudo_dimension(Eigen::Index d) const {
        if (d_prime > 0.0) return d_prime;
        return static_cast<double>(d) * k * (z + 1) * std::log(static_cast<double>(k) + 1.0);
    }
};

inline double kz_cost(const std::vector<WeightedPoint>& points,
                      const std::vector<Vector>& centers, int z) {
    if (centers.empty()) throw std::invalid_argument("kz_cost: centers nonempty");
    double total = 0.0;
    for (const auto& p : points) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : centers) best = std::min(best, (p.coords - c).norm());
        total += p.weight * (z == 1 ? best : best * best);
    }
    return total;
}

namespace detail {

// Weighted k-means++ style seeding: first center by weight, subsequent ones
// proportional to weight * dist^z. Ties and the empty-cost corner fall back
// to the lowest index.
inline std::vector<Vector> seed_centers(const std::vector<WeightedPoint>& pts,
                                        int count, int z, CounterRng& rng) {
    std::vector<Vector> centers;
    std::vector<double> cum(pts.size());
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        total += pts[i].weight;
        cum[i] = total;
    }
    double pick = rng.uniform() * total;
    std::size_t first = std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin();
    centers.push_back(pts[std::min(first, pts.size() - 1)].coords);

    std::vector<double> d2(pts.size());
    while (static_cast<int>(centers.size()) < count) {
        double mass = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, (pts[i].coords - c).norm());
            d2[i] = pts[i].weight * (z == 1 ? best : best * best);
            mass += d2[i];
        }
        std::size_t chosen = 0;
        if (mass <= 0.0) {
            chosen = rng.index(pts.size());
        } else {
            double target = rng.uniform() * mass;
            double acc = 0.0;
            chosen = pts.size() - 1;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                acc += d2[i];
                if (acc >= target) { chosen = i; break; }
            }
        }
        centers.push_back(pts[chosen].coords);
    }
    return centers;
}

} // namespace detail

// Upper bounds on the (k,z) sensitivities via a bicriteria center set of size
// 2k: s(p) = c1 * ( dist(p,B)^z / total weighted cost + 1 / (weight mass of
// p's cluster) ).
inline std::vector<double> sensitivity_bounds(const std::vector<WeightedPoint>& pts,
                                              const ClusteringConfig& cfg) {
    if (pts.empty()) throw std::invalid_argument("sensitivity_bounds: empty input");
    CounterRng rng(derive_seed(cfg.seed, 0xb1c7));
    auto centers = detail::seed_centers(pts, 2 * cfg.k, cfg.z, rng);

    std::vector<std::size_t> assign(pts.size());
    std::vector<double> cost(pts.size());
    double total_cost = 0.0;
    std::vector<double> cluster_mass(centers.size(), 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < centers.size(); ++j) {
            double d = (pts[i].coords - centers[j]).norm();
            if (d < best - 1e-15) { best = d; arg = j; }  // ties to lowest index
        }
        assign[i] = arg;
        cost[i] = cfg.z == 1 ? best : best * best;
        total_cost += pts[i].weight * cost[i];
        cluster_mass[arg] += pts[i].weight;
    }

    std::vector<double> s(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double rel = total_cost > 0.0 ? cost[i] / total_cost : 0.0;
        s[i] = cfg.c1 * (rel + 1.0 / cluster_mass[assign[i]]);
    }
    return s;
}

// m i.i.d. draws with replacement, point p taken with q(p) = mu(p) s(p) / S
// and reweighted to mu(p) / (m q(p)). Duplicates stay separate points.
inline std::vector<WeightedPoint> sensitivity_sample(const std::vector<WeightedPoint>& pts,
                                                     const std::vector<double>& s,
                                                     std::size_t m, CounterRng& rng) {
    double big_s = 0.0;
    std::vector<double> cum(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        big_s += pts[i].weight * s[i];
        cum[i] = big_s;
    }
    if (big_s <= 0.0) throw std::invalid_argument("sensitivity_sample: zero sensitivity mass");
    std::vector<WeightedPoint> out;
    out.reserve(m);
    for (std::size_t draw = 0; draw < m; ++draw) {
        double target = rng.uniform() * big_s;
        std::size_t i = std::lower_bound(cum.begin(), cum.end(), target) - cum.begin();
        i = std::min(i, pts.size() - 1);
        double q = pts[i].weight * s[i] / big_s;
        out.push_back({pts[i].coords, pts[i].weight / (static_cast<double>(m) * q)});
    }
    return out;
}

// Sample size the sensitivity-sampling lemma asks for at budget eps_level.
inline std::size_t coreset_sample_size(double big_s, double eps_level,
                                       const ClusteringConfig& cfg, Eigen::Index d) {
    double m = cfg.c0 * big_s * big_s / (eps_level * eps_level) *
               (cfg.pseudo_dimension(d) + std::log(1.0 / cfg.delta));
    if (m > 1e12) return static_cast<std::size_t>(1e12);
    return static_cast<std::size_t>(std::ceil(std::max(m, 1.0)));
}

inline std::vector<WeightedPoint> offline_coreset(const std::vector<WeightedPoint>& pts,
                                                  const ClusteringConfig& cfg,
                                                  double eps_level,
                                                  CounterRng& rng) {
    if (pts.empty()) throw std::invalid_argument("offline_coreset: empty input");
    if (cfg.policy == ReducePolicy::Passthrough) return pts;

    auto s = sensitivity_bounds(pts, cfg);
    std::size_t m;
    if (cfg.policy == ReducePolicy::FixedSize) {
        m = cfg.fixed_size;
    } else {
        double big_s = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) big_s += pts[i].weight * s[i];
        m = coreset_sample_size(big_s, eps_level, cfg, pts.front().coords.size());
        // a sample larger than the input carries no information the input
        // does not; the verbatim copy is an exact coreset
        if (m >= pts.size()) return pts;
    }
    return sensitivity_sample(pts, s, m, rng);
}

struct LloydResult {
    std::vector<Vector> centers;
    double cost = 0.0;
    bool duplicate_centers = false;
};

// Weighted k-means++ seeding followed by weighted Lloyd (z=2) or Weiszfeld
// median (z=1) iterations to local convergence. Several seeded restarts;
// best local optimum wins.
inline LloydResult lloyd_refine(const std::vector<WeightedPoint>& pts, int k, int z,
                                std::uint64_t seed, int restarts = 3) {
    if (pts.empty()) throw std::invalid_argument("lloyd_refine: empty coreset");
    LloydResult best;
    best.cost = std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        CounterRng rng(derive_seed(seed, 0x11ccdd00 + static_cast<std::uint64_t>(r)));
        auto centers = detail::seed_centers(pts, k, z, rng);
        double prev_cost = std::numeric_limits<double>::infinity();
        for (int iter = 0; iter < 100; ++iter) {
            // assignment
            std::vector<std::size_t> assign(pts.size());
            for (std::size_t i = 0; i < pts.size(); ++i) {
                double bd = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < centers.size(); ++j) {
                    double d = (pts[i].coords - centers[j]).norm();
                    if (d < bd) { bd = d; assign[i] = j; }
                }
            }
            // update
            for (std::size_t j = 0; j < centers.size(); ++j) {
                std::vector<const WeightedPoint*> members;
                for (std::size_t i = 0; i < pts.size(); ++i)
                    if (assign[i] == j) members.push_back(&pts[i]);
                if (members.empty()) continue;
                if (z == 2) {
                    Vector sum = Vector::Zero(pts.front().coords.size());
                    double mass = 0.0;
                    for (auto* p : members) { sum += p->weight * p->coords; mass += p->weight; }
                    centers[j] = sum / mass;
                } else {
                    // Weiszfeld steps toward the weighted geometric median
                    Vector c = centers[j];
                    for (int w = 0; w < 50; ++w) {
                        Vector num = Vector::Zero(c.size());
                        double den = 0.0;
                        bool at_point = false;
                        for (auto* p : members) {
                            double d = (p->coords - c).norm();
                            if (d < 1e-12) { at_point = true; continue; }
                            num += p->weight / d * p->coords;
                            den += p->weight / d;
                        }
                        if (den <= 0.0) break;
                        Vector next = num / den;
                        if ((next - c).norm() < 1e-10 * (1.0 + c.norm()) && !at_point) { c = next; break; }
                        c = next;
                    }
                    centers[j] = c;
                }
            }
            double cost = kz_cost(pts, centers, z);
            if (prev_cost < std::numeric_limits<double>::infinity() &&
                std::abs(prev_cost - cost) < 1e-6 * std::max(prev_cost, 1e-12))
                { prev_cost = cost; break; }
            prev_cost = cost;
        }
        double cost = kz_cost(pts, centers, z);
        if (cost < best.cost) {
            best.cost = cost;
            best.centers = centers;
        }
    }

    for (std::size_t i = 0; i < best.centers.size() && !best.duplicate_centers; ++i)
        for (std::size_t j = i + 1; j < best.centers.size(); ++j)
            if ((best.centers[i] - best.centers[j]).norm() < 1e-12) {
                best.duplicate_centers = true;
                break;
            }
    return best;
}

} // namespace robuststream
