#pragma once
//
// Attack stream generators. All are pure functions of their seed; batches are
// returned eagerly so the same stream can be replayed against a robust
// algorithm and a baseline.
//

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "robuststream/rng.hpp"
#include "robuststream/row_buffer.hpp"
#include "robuststream/sketch.hpp"

namespace robuststream {

using Batch = std::vector<Vector>;

// batches-1 batches of 2-d standard normal points, then one batch sampled
// around the distant center (L, L).
inline std::vector<Batch> distant_cluster_stream(std::size_t batches, std::size_t batch_size,
                                                 double distance, std::uint64_t seed) {
    if (batches < 2) throw std::invalid_argument("distant_cluster_stream: batches >= 2");
    CounterRng rng(seed);
    std::vector<Batch> out(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        double cx = (b + 1 == batches) ? distance : 0.0;
        for (std::size_t i = 0; i < batch_size; ++i) {
            Vector p(2);
            p << cx + rng.normal(), cx + rng.normal();
            out[b].push_back(p);
        }
    }
    return out;
}

// Rows are augmented (x, y). Pre-attack batches cycle through the four-point
// constellation {(1,-1), (-1,1), (2,-2), (-2,2)} with N(0, 0.05^2) noise on y,
// whose population least-squares line is y = -x through the origin. The final
// batch sits tightly at (L, L), flipping the optimal slope to +1 once
// L exceeds sqrt(batches).
inline std::vector<Batch> regression_flip_stream(std::size_t batches, std::size_t batch_size,
                                                 double distance, std::uint64_t seed) {
    if (batches < 2) throw std::invalid_argument("regression_flip_stream: batches >= 2");
    static const double anchor_x[4] = {1.0, -1.0, 2.0, -2.0};
    CounterRng rng(seed);
    std::vector<Batch> out(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        for (std::size_t i = 0; i < batch_size; ++i) {
            Vector row(2);
            if (b + 1 == batches) {
                row << distance + 0.05 * rng.normal(), distance + 0.05 * rng.normal();
            } else {
                double x = anchor_x[i % 4];
                row << x, -x + 0.05 * rng.normal();
            }
            out[b].push_back(row);
        }
    }
    return out;
}

struct KernelAttackStream {
    std::vector<Batch> batches;   // augmented rows (features..., target)
    double sketch_residual = 0.0; // max |S D| / max |D|, asserted ~0 by construction
};

// Regression stream whose data matrix columns (zero-padded to the sketch's
// stream bound) lie in the null space of S: a benign Gaussian regression
// stream projected column-wise onto null(S). The sketch accumulates exactly
// zero over the full stream while the data still carries a clean linear
// signal for any row-sampling algorithm.
inline KernelAttackStream kernel_attack_stream(const SignSketch& sk, std::size_t batches,
                                               std::size_t batch_size, Eigen::Index d,
                                               std::uint64_t seed) {
    const Eigen::Index n = static_cast<Eigen::Index>(batches * batch_size);
    if (n > sk.matrix().cols())
        throw std::invalid_argument("kernel_attack_stream: stream exceeds sketch bound");
    if (sk.matrix().rows() >= sk.matrix().cols())
        throw std::invalid_argument("kernel_attack_stream: sketch has no null space");

    CounterRng rng(seed);
    Matrix data(n, d + 1);
    Vector w = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) data(i, j) = rng.normal();
        data(i, d) = data.row(i).head(d).dot(w) + 0.1 * rng.normal();
    }

    // project every column onto the null space of the first n sketch columns
    Matrix s = sk.matrix().leftCols(n);
    Matrix gram = s * s.transpose();
    Matrix sd = s * data;
    data -= s.transpose() * gram.ldlt().solve(sd);

    KernelAttackStream out;
    double residual = (s * data).cwiseAbs().maxCoeff();
    out.sketch_residual = residual / std::max(data.cwiseAbs().maxCoeff(), 1e-300);
    out.batches.resize(batches);
    for (std::size_t b = 0; b < batches; ++b)
        for (std::size_t i = 0; i < batch_size; ++i)
            out.batches[b].push_back(data.row(static_cast<Eigen::Index>(b * batch_size + i)).transpose());
    return out;
}

// Adversary that always submits a unit row orthogonal to the span of the
// algorithm's last reported embedding (Gram-Schmidt against the buffer rows),
// falling back to a seeded random unit row once the span is full.
class OrthogonalProbeAdversary {
public:
    OrthogonalProbeAdversary(Eigen::Index d, std::uint64_t seed) : d_(d), rng_(seed) {
        if (d < 1) throw std::invalid_argument("OrthogonalProbeAdversary: d >= 1");
    }

    Vector next(const WeightedRowBuffer* last_response) {
        Vector probe(d_);
        for (Eigen::Index i = 0; i < d_; ++i) probe(i) = rng_.normal();
        probe.normalize();
        if (last_response == nullptr || last_response->empty()) return probe;

        Vector candidate = probe;
        // orthonormalize the buffer's span, then strip it from the probe
        std::vector<Vector> basis;
        for (const auto& r : last_response->rows()) {
            Vector v = r.row;
            for (const auto& b : basis) v -= b.dot(v) * b;
            if (v.norm() > 1e-10) basis.push_back(v.normalized());
            if (static_cast<Eigen::Index>(basis.size()) == d_) break;
        }
        for (const auto& b : basis) candidate -= b.dot(candidate) * b;
        if (candidate.norm() < 1e-10) return probe;  // span full
        return candidate.normalized();
    }

private:
    Eigen::Index d_;
    CounterRng rng_;
};

} // namespace robuststream
