#pragma once
//
// Online sensitivity sampling over a row stream. Each arriving row is kept
// with probability min(1, alpha * tau), where tau doubles the row's online
// L_p sensitivity measured against the sampled buffer M (or 1 when the row
// leaves M's span), and kept rows are reweighted by p_i^{-1/p}. The sampling
// coin at round t is a pure function of (seed, t), independent of the stream,
// which is what makes the embedding survive adaptive inputs.
//

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "robuststream/l1_sensitivity.hpp"
#include "robuststream/rng.hpp"
#include "robuststream/row_buffer.hpp"
#include "robuststream/spectral.hpp"

namespace robuststream {

enum class SamplerMode { Embedding, Ridge };

struct SamplerConfig {
    int p = 2;                    // in {1, 2}
    double eps = 0.5;
    double oversampling = 40.0;   // C; default 80 for p=1
    std::uint64_t n_bound = 1000; // a-priori stream length bound; alpha is fixed from it
    SamplerMode mode = SamplerMode::Embedding;
    int ridge_rank = 0;           // k, ridge mode only
    std::uint64_t seed = 0;

    static SamplerConfig embedding(int p, double eps, double c, std::uint64_t n_bound,
                                   std::uint64_t seed) {
        SamplerConfig cfg;
        cfg.p = p;
        cfg.eps = eps;
        cfg.oversampling = c;
        cfg.n_bound = n_bound;
        cfg.seed = seed;
        return cfg;
    }

    static SamplerConfig ridge(int k, double eps, double c, std::uint64_t n_bound,
                               std::uint64_t seed) {
        SamplerConfig cfg = embedding(2, eps, c, n_bound, seed);
        cfg.mode = SamplerMode::Ridge;
        cfg.ridge_rank = k;
        return cfg;
    }

    void validate() const {
        if (p != 1 && p != 2) throw std::invalid_argument("SamplerConfig: p must be 1 or 2");
        if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("SamplerConfig: eps in (0,1)");
        if (!(oversampling > 0.0)) throw std::invalid_argument("SamplerConfig: C must be positive");
        if (n_bound < 1) throw std::invalid_argument("SamplerConfig: n_bound >= 1");
        if (mode == SamplerMode::Ridge && ridge_rank < 1)
            throw std::invalid_argument("SamplerConfig: ridge mode needs k >= 1");
    }
};

struct SampleDecision {
    double tau = 0.0;
    double prob = 0.0;
    bool sampled = false;
    std::optional<double> weight_applied;
};

struct RegressionResult {
    Vector coefficients;  // dim d-1
    bool regularized = false;
};

struct LowRankResult {
    Matrix projection;    // d x d orthogonal projection
    int rank = 0;
    bool rank_deficient = false;  // buffer rank fell short of k
};

class RowSampler {
public:
    RowSampler(Eigen::Index dim, SamplerConfig cfg)
        : cfg_(cfg),
          dim_(dim),
          buffer_(dim),
          summary_(dim),
          prefix_summary_(dim) {
        cfg_.validate();
        alpha_ = cfg_.oversampling * static_cast<double>(dim) *
                 std::log(static_cast<double>(cfg_.n_bound)) / (cfg_.eps * cfg_.eps);
        if (alpha_ <= 0.0) alpha_ = cfg_.oversampling * static_cast<double>(dim) / (cfg_.eps * cfg_.eps);
    }

    SampleDecision process_row(const Vector& a) {
        if (a.size() != dim_) throw std::invalid_argument("process_row: dimension mismatch");
        if (!a.allFinite()) throw std::invalid_argument("process_row: non-finite row");
        if (rounds_seen_ >= cfg_.n_bound)
            throw std::invalid_argument("process_row: stream-length bound exceeded");

        const std::uint64_t round = rounds_seen_;
        SampleDecision dec;
        dec.tau = compute_tau(a);
        dec.prob = std::min(1.0, alpha_ * dec.tau);
        tau_sum_ += dec.tau;

        if (dec.prob >= 1.0) {
            dec.prob = 1.0;
            dec.sampled = true;  // deterministic keep, no coin drawn
        } else {
            double coin = counter_uniform(cfg_.seed, round);
            ++rng_draws_;
            dec.sampled = coin < dec.prob;
        }

        ++rounds_seen_;
        track_prefix(a);

        if (dec.sampled) {
            double w = std::pow(dec.prob, -1.0 / static_cast<double>(cfg_.p));
            dec.weight_applied = w;
            buffer_.append(a, w, round);
            summary_.update(a, w);
        }
        return dec;
    }

    const WeightedRowBuffer& current_embedding() const { return buffer_; }

    // Least squares over the sampled augmented buffer: rows were (a_i, b_i)
    // and the minimizer of ||M [y; -1]||_2 solves the reweighted normal
    // equations directly.
    RegressionResult regress() const {
        if (cfg_.p != 2) throw std::logic_error("regress: requires p=2");
        const Eigen::Index d = dim_ - 1;
        if (d < 1) throw std::logic_error("regress: need at least one feature column");
        Matrix g = summary_.gram();
        Matrix gaa = g.topLeftCorner(d, d);
        Vector gab = g.topRightCorner(d, 1);

        RegressionResult res;
        Eigen::LDLT<Matrix> solver(gaa);
        Vector y = solver.solve(gab);
        double relres = (gaa * y - gab).norm() / std::max(1.0, gab.norm());
        if (solver.info() != Eigen::Success || !y.allFinite() || relres > 1e-8) {
            Matrix reg = gaa + (1e-10 * gaa.trace()) * Matrix::Identity(d, d);
            y = Eigen::LDLT<Matrix>(reg).solve(gab);
            res.regularized = true;
        }
        res.coefficients = y;
        return res;
    }

    // Rank-k projection onto the top right-singular space of the buffer.
    LowRankResult low_rank() const {
        if (cfg_.mode != SamplerMode::Ridge)
            throw std::logic_error("low_rank: sampler not in ridge mode");
        const int k = cfg_.ridge_rank;
        LowRankResult res;
        Eigen::SelfAdjointEigenSolver<Matrix> es(summary_.gram());
        const Vector& ev = es.eigenvalues();  // ascending
        double top = std::max(ev.maxCoeff(), 0.0);
        double cut = kRankTolerance * (top > 0.0 ? top : 1.0);
        int rank = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev(i) >= cut) ++rank;
        res.rank = std::min(rank, k);
        res.rank_deficient = rank < k;
        res.projection = Matrix::Zero(dim_, dim_);
        for (int j = 0; j < res.rank; ++j) {
            Eigen::Index col = ev.size() - 1 - j;
            res.projection += es.eigenvectors().col(col) * es.eigenvectors().col(col).transpose();
        }
        return res;
    }

    const SamplerConfig& config() const { return cfg_; }
    double alpha() const { return alpha_; }
    std::uint64_t rounds_seen() const { return rounds_seen_; }
    std::uint64_t rng_draws() const { return rng_draws_; }
    double tau_sum() const { return tau_sum_; }
    const SpectralSummary& summary() const { return summary_; }

    // Condition number of the presented prefix (exact at desk scale).
    double kappa_running() const { return kappa_running_; }
    // Ratio of the largest singular value seen across prefixes to the smallest
    // nonzero one; this is the stream bound the sensitivity-sum lemma needs.
    double kappa_stream() const {
        if (sigma_min_seen_ <= 0.0) return 1.0;
        return sigma_max_seen_ / sigma_min_seen_;
    }
    // Rounds at which C < kappa_running^p held; the theory wants C above it.
    std::uint64_t oversampling_warnings() const { return warnings_; }

private:
    double compute_tau(const Vector& a) {
        if (buffer_.empty()) return 1.0;
        if (cfg_.mode == SamplerMode::Ridge) {
            double lambda = ridge_lambda();
            if (lambda > 0.0)
                return std::min(1.0, 2.0 * summary_.ridge_leverage(a, lambda));
            // buffer tail is zero: fall through to the plain span path
        }
        auto lr = summary_.leverage(a);
        if (!lr.in_span) return 1.0;
        if (cfg_.p == 2) return std::min(1.0, 2.0 * lr.tau);

        // p = 1: any candidate x lower-bounds the LP max; when the bound
        // already forces p_i = 1 the exact value is not needed.
        Vector candidate = pinv_apply(a);
        double lb = 2.0 * l1_ratio_at(buffer_, a, candidate);
        if (alpha_ * std::min(1.0, lb) >= 1.0) return std::min(1.0, lb);
        return std::min(1.0, 2.0 * l1_sensitivity(buffer_, a));
    }

    // G^+ a against the weighted buffer's gram
    Vector pinv_apply(const Vector& a) const {
        const Vector& ev = summary_.eigenvalues();
        const Matrix& vecs = summary_.eigenvectors();
        double cut = summary_.rank_cutoff();
        Vector out = Vector::Zero(dim_);
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev(i) >= cut) out += (vecs.col(i).dot(a) / ev(i)) * vecs.col(i);
        return out;
    }

    // lambda_t = (sum of gram eigenvalues beyond the top k) / k, the buffer
    // proxy for ||A_t - (A_t)_(k)||_F^2 / k
    double ridge_lambda() const {
        const Vector& ev = summary_.eigenvalues();  // ascending
        double tail = 0.0;
        for (Eigen::Index i = 0; i + cfg_.ridge_rank < ev.size(); ++i)
            tail += std::max(ev(i), 0.0);
        return tail / static_cast<double>(cfg_.ridge_rank);
    }

    void track_prefix(const Vector& a) {
        prefix_summary_.update(a, 1.0);
        const Vector& ev = prefix_summary_.eigenvalues();
        double cut = prefix_summary_.rank_cutoff();
        double lo = 0.0, hi = 0.0;
        bool any = false;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (ev(i) >= cut) {
                lo = any ? std::min(lo, ev(i)) : ev(i);
                hi = std::max(hi, ev(i));
                any = true;
            }
        }
        if (any) {
            kappa_running_ = std::sqrt(hi / lo);
            double smax = std::sqrt(hi), smin = std::sqrt(lo);
            sigma_max_seen_ = std::max(sigma_max_seen_, smax);
            sigma_min_seen_ = sigma_min_seen_ <= 0.0 ? smin : std::min(sigma_min_seen_, smin);
        }
        if (std::pow(kappa_running_, cfg_.p) > cfg_.oversampling) ++warnings_;
    }

    SamplerConfig cfg_;
    Eigen::Index dim_;
    double alpha_ = 0.0;
    WeightedRowBuffer buffer_;
    SpectralSummary summary_;         // of the weighted buffer
    SpectralSummary prefix_summary_;  // of every presented row, for kappa
    std::uint64_t rounds_seen_ = 0;
    std::uint64_t rng_draws_ = 0;
    double tau_sum_ = 0.0;
    double kappa_running_ = 1.0;
    double sigma_max_seen_ = 0.0;
    double sigma_min_seen_ = 0.0;
    std::uint64_t warnings_ = 0;
};

} // namespace robuststream
