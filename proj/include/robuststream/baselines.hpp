#pragma once
//
// Non-robust streaming baselines: decay-weighted mini-batch k-means (the
// update rule of the big-data streaming k-means implementations) and
// per-sample normalized least-mean-squares regression.
//

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "robuststream/coreset.hpp"

namespace robuststream {

// Per batch: assign points to the nearest center, then
//   center <- (center * count * decay + batch_sum) / (count * decay + batch_count).
class DecayKMeans {
public:
    DecayKMeans(int k, double decay, std::uint64_t seed) : k_(k), decay_(decay), seed_(seed) {
        if (k < 1) throw std::invalid_argument("DecayKMeans: k >= 1");
        if (decay < 0.0 || decay > 1.0) throw std::invalid_argument("DecayKMeans: decay in [0,1]");
    }

    void update(const std::vector<Vector>& batch) {
        if (batch.empty()) return;
        if (centers_.empty()) {
            std::vector<WeightedPoint> pts;
            for (const auto& p : batch) pts.push_back({p, 1.0});
            auto res = lloyd_refine(pts, k_, 2, seed_);
            centers_ = res.centers;
            counts_.assign(centers_.size(), 0.0);
        }
        std::vector<Vector> sums(centers_.size(), Vector::Zero(batch.front().size()));
        std::vector<double> ns(centers_.size(), 0.0);
        for (const auto& p : batch) {
            std::size_t arg = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < centers_.size(); ++j) {
                double d = (p - centers_[j]).norm();
                if (d < best) { best = d; arg = j; }
            }
            sums[arg] += p;
            ns[arg] += 1.0;
        }
        for (std::size_t j = 0; j < centers_.size(); ++j) {
            double denom = counts_[j] * decay_ + ns[j];
            if (denom <= 0.0) continue;
            centers_[j] = (centers_[j] * counts_[j] * decay_ + sums[j]) / denom;
            counts_[j] = denom;
        }
    }

    const std::vector<Vector>& centers() const { return centers_; }

private:
    int k_;
    double decay_;
    std::uint64_t seed_;
    std::vector<Vector> centers_;
    std::vector<double> counts_;
};

// Normalized LMS: per sample (x, y), in arrival order,
//   w <- w + step * (y - <w,x>) * x / (1 + ||x||^2).
class SgdRegressor {
public:
    SgdRegressor(Eigen::Index dim, double step) : coeff_(Vector::Zero(dim)), step_(step) {
        if (!(step >= 0.0)) throw std::invalid_argument("SgdRegressor: step must be nonnegative");
    }

    // rows are augmented (features..., target)
    void update(const std::vector<Vector>& batch) {
        if (diverged_) return;
        for (const auto& row : batch) {
            Vector x = row.head(coeff_.size());
            double y = row(coeff_.size());
            double err = y - coeff_.dot(x);
            coeff_ += step_ * err * x / (1.0 + x.squaredNorm());
            if (coeff_.norm() > 1e12) { diverged_ = true; return; }
        }
    }

    const Vector& coefficients() const { return coeff_; }
    bool diverged() const { return diverged_; }

private:
    Vector coeff_;
    double step_;
    bool diverged_ = false;
};

} // namespace robuststream
