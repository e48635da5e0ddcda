#pragma once
//
// Dense +-1 sketch baseline. The sketch matrix is fixed at construction from
// the seed; the accumulated state is S * (rows so far, zero-padded to the
// stream bound). This is the oblivious baseline the null-space attack breaks.
//

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "robuststream/rng.hpp"
#include "robuststream/row_buffer.hpp"

namespace robuststream {

class SignSketch {
public:
    SignSketch(Eigen::Index sketch_rows, Eigen::Index n_bound, Eigen::Index row_dim,
               std::uint64_t seed)
        : s_(sketch_rows, n_bound), accumulated_(Matrix::Zero(sketch_rows, row_dim)) {
        for (Eigen::Index i = 0; i < sketch_rows; ++i)
            for (Eigen::Index t = 0; t < n_bound; ++t)
                s_(i, t) = (counter_bits(seed, static_cast<std::uint64_t>(i) * n_bound + t) & 1) ? 1.0 : -1.0;
    }

    void update(const Vector& row) {
        if (row.size() != accumulated_.cols())
            throw std::invalid_argument("SignSketch: row dimension mismatch");
        if (t_ >= s_.cols()) throw std::invalid_argument("SignSketch: stream bound exceeded");
        accumulated_ += s_.col(t_) * row.transpose();
        ++t_;
    }

    const Matrix& matrix() const { return s_; }
    const Matrix& accumulated() const { return accumulated_; }
    Eigen::Index rows_seen() const { return t_; }

private:
    Matrix s_;
    Matrix accumulated_;  // S * [A | b]
    Eigen::Index t_ = 0;
};

struct SketchRegressResult {
    Vector coefficients;
    bool regularized = false;
};

// Least squares on the sketched system (S A) x ~ S b; the last accumulated
// column is S b.
inline SketchRegressResult sketch_regress(const SignSketch& sk) {
    const Eigen::Index d = sk.accumulated().cols() - 1;
    if (d < 1) throw std::invalid_argument("sketch_regress: need a target column");
    Matrix sa = sk.accumulated().leftCols(d);
    Vector sb = sk.accumulated().col(d);
    Matrix g = sa.transpose() * sa;
    Vector rhs = sa.transpose() * sb;

    SketchRegressResult res;
    Eigen::LDLT<Matrix> solver(g);
    Vector x = solver.solve(rhs);
    double relres = (g * x - rhs).norm() / std::max(1.0, rhs.norm());
    if (solver.info() != Eigen::Success || !x.allFinite() || relres > 1e-8) {
        double tr = g.trace();
        Matrix reg = g + (1e-10 * (tr > 0.0 ? tr : 1.0)) * Matrix::Identity(d, d);
        x = Eigen::LDLT<Matrix>(reg).solve(rhs);
        if (!x.allFinite()) x = Vector::Zero(d);
        res.regularized = true;
    }
    res.coefficients = x;
    return res;
}

} // namespace robuststream
