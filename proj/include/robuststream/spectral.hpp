#pragma once
//
// Dense linear-algebra kernels shared by the samplers: incremental Gram
// maintenance, leverage / ridge-leverage scores, condition numbers, and the
// spectral-sandwich verification oracle.
//

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "robuststream/row_buffer.hpp"

namespace robuststream {

inline constexpr double kRankTolerance = 1e-10;  // relative to largest eigenvalue
inline constexpr double kSpanTolerance = 1e-8;   // relative residual norm

struct LeverageResult {
    bool in_span = false;
    double tau = 0.0;  // only meaningful when in_span; callers use 1 otherwise
};

// Maintains G = sum_i w_i^2 a_i a_i^T exactly; the eigendecomposition is
// recomputed lazily when a score is requested after an update. Rank-one
// inverse updates would drift over long streams, and d stays small here.
class SpectralSummary {
public:
    SpectralSummary() = default;
    explicit SpectralSummary(Eigen::Index dim) : gram_(Matrix::Zero(dim, dim)) {}

    Eigen::Index dim() const { return gram_.rows(); }
    const Matrix& gram() const { return gram_; }

    void update(const Vector& a, double w) {
        if (gram_.size() == 0) gram_ = Matrix::Zero(a.size(), a.size());
        if (a.size() != gram_.rows())
            throw std::invalid_argument("gram_update: dimension mismatch");
        if (!a.allFinite() || !std::isfinite(w))
            throw std::invalid_argument("gram_update: non-finite input");
        gram_.selfadjointView<Eigen::Lower>().rankUpdate(a, w * w);
        gram_ = gram_.selfadjointView<Eigen::Lower>();
        dirty_ = true;
    }

    // Eigenvalue threshold below which a direction does not count toward rank.
    double rank_cutoff() const {
        refresh();
        double top = eigenvalues_.size() ? eigenvalues_.maxCoeff() : 0.0;
        return kRankTolerance * (top > 0.0 ? top : 1.0);
    }

    int rank() const {
        refresh();
        double cut = rank_cutoff();
        int r = 0;
        for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i)
            if (eigenvalues_(i) >= cut) ++r;
        return r;
    }

    LeverageResult leverage(const Vector& a) const {
        if (a.size() != gram_.rows())
            throw std::invalid_argument("leverage_score: dimension mismatch");
        if (!a.allFinite())
            throw std::invalid_argument("leverage_score: non-finite input");
        refresh();
        const double anorm = a.norm();
        if (anorm == 0.0) return {true, 0.0};
        const double cut = rank_cutoff();

        // residual against the above-cutoff eigenspace decides span membership
        Vector coeffs = eigenvectors_.transpose() * a;
        double tau = 0.0;
        Vector reconstructed = Vector::Zero(a.size());
        for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
            if (eigenvalues_(i) >= cut) {
                tau += coeffs(i) * coeffs(i) / eigenvalues_(i);
                reconstructed += coeffs(i) * eigenvectors_.col(i);
            }
        }
        const double residual = (a - reconstructed).norm();
        if (residual > kSpanTolerance * anorm) return {false, 0.0};
        return {true, std::max(tau, 0.0)};
    }

    double ridge_leverage(const Vector& a, double lambda) const {
        if (lambda < 0.0)
            throw std::invalid_argument("ridge_leverage_score: lambda must be nonnegative");
        if (a.size() != gram_.rows())
            throw std::invalid_argument("ridge_leverage_score: dimension mismatch");
        if (lambda == 0.0) {
            auto lr = leverage(a);
            return lr.in_span ? lr.tau : 1.0;
        }
        refresh();
        Vector coeffs = eigenvectors_.transpose() * a;
        double tau = 0.0;
        for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
            double ev = std::max(eigenvalues_(i), 0.0);
            tau += coeffs(i) * coeffs(i) / (ev + lambda);
        }
        return std::max(tau, 0.0);
    }

    // sqrt of the ratio of extreme eigenvalues above the rank cutoff
    double condition_number() const {
        refresh();
        const double cut = rank_cutoff();
        double lo = 0.0, hi = 0.0;
        bool any = false;
        for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
            if (eigenvalues_(i) >= cut) {
                if (!any || eigenvalues_(i) < lo) lo = any ? std::min(lo, eigenvalues_(i)) : eigenvalues_(i);
                hi = std::max(hi, eigenvalues_(i));
                any = true;
            }
        }
        if (!any) throw std::domain_error("condition_number: all-zero gram");
        return std::sqrt(hi / lo);
    }

    // Eigenvalues in ascending order (Eigen's convention); refreshes the cache.
    const Vector& eigenvalues() const { refresh(); return eigenvalues_; }
    const Matrix& eigenvectors() const { refresh(); return eigenvectors_; }

private:
    void refresh() const {
        if (!dirty_ && eigenvalues_.size() > 0) return;
        Eigen::SelfAdjointEigenSolver<Matrix> es(gram_);
        eigenvalues_ = es.eigenvalues();
        eigenvectors_ = es.eigenvectors();
        dirty_ = false;
    }

    Matrix gram_;
    mutable bool dirty_ = true;
    mutable Vector eigenvalues_;
    mutable Matrix eigenvectors_;
};

// Free-function spellings used throughout the tests.
inline SpectralSummary gram_update(SpectralSummary s, const Vector& a, double w) {
    s.update(a, w);
    return s;
}

inline LeverageResult leverage_score(const SpectralSummary& s, const Vector& a) {
    return s.leverage(a);
}

inline double ridge_leverage_score(const SpectralSummary& s, const Vector& a, double lambda) {
    return s.ridge_leverage(a, lambda);
}

inline double condition_number(const SpectralSummary& s) {
    return s.condition_number();
}

// True iff (1-eps) A^T A <= M^T M <= (1+eps) A^T A on A's row space and M
// carries no mass outside that row space.
inline bool spectral_sandwich_check(const Matrix& a, const WeightedRowBuffer& m, double eps,
                                    double slack = 1e-9) {
    if (m.dim() != 0 && m.dim() != a.cols())
        throw std::invalid_argument("spectral_sandwich_check: dimension mismatch");
    Matrix ga = a.transpose() * a;
    Matrix wm = m.weighted_matrix();
    Matrix gm = m.dim() == 0 ? Matrix::Zero(a.cols(), a.cols())
                             : Matrix(wm.transpose() * wm);

    Eigen::SelfAdjointEigenSolver<Matrix> es(ga);
    const Vector& ev = es.eigenvalues();
    double top = ev.size() ? ev.maxCoeff() : 0.0;
    double cut = kRankTolerance * (top > 0.0 ? top : 1.0);

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) >= cut) keep.push_back(i);
    if (keep.empty()) return gm.norm() <= slack;  // A == 0: M must be too

    Matrix basis(a.cols(), static_cast<Eigen::Index>(keep.size()));
    Matrix whitened(a.cols(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        basis.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
        whitened.col(static_cast<Eigen::Index>(j)) =
            es.eigenvectors().col(keep[j]) / std::sqrt(ev(keep[j]));
    }

    // mass of M^T M outside A's row space violates the sandwich outright
    Matrix proj = basis * basis.transpose();
    Matrix off = gm - proj * gm * proj;
    if (off.norm() > 1e-7 * std::max(1.0, gm.norm())) return false;

    Matrix k = whitened.transpose() * gm * whitened;
    Eigen::SelfAdjointEigenSolver<Matrix> ek(k);
    double lo = ek.eigenvalues().minCoeff();
    double hi = ek.eigenvalues().maxCoeff();
    return lo >= 1.0 - eps - slack && hi <= 1.0 + eps + slack;
}

} // namespace robuststream
