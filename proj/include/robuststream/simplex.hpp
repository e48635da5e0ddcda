#pragma once
//
// Dense primal simplex for problems of the form
//     maximize c'x  subject to  Ax <= b, x >= 0,  with b >= 0,
// so the slack basis is immediately feasible. Dantzig pricing with a switch
// to Bland's rule after a pivot budget to break cycles on degenerate bases.
//

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace robuststream {

struct SimplexResult {
    double objective = 0.0;
    Eigen::VectorXd solution;  // primal x
};

inline SimplexResult simplex_maximize(const Eigen::MatrixXd& a,
                                      const Eigen::VectorXd& b,
                                      const Eigen::VectorXd& c,
                                      double tol = 1e-11) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    if (b.minCoeff() < 0.0)
        throw std::invalid_argument("simplex_maximize: rhs must be nonnegative");

    // tableau: [A | I | b], objective row underneath
    Eigen::MatrixXd t(m + 1, n + m + 1);
    t.setZero();
    t.block(0, 0, m, n) = a;
    t.block(0, n, m, m).setIdentity();
    t.col(n + m).head(m) = b;
    t.row(m).head(n) = -c.transpose();

    std::vector<Eigen::Index> basis(m);
    for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

    const long bland_after = 50L * static_cast<long>(m + n);
    const long max_iter = 2000L * static_cast<long>(m + n) + 10000;
    for (long iter = 0; iter < max_iter; ++iter) {
        // entering column
        Eigen::Index enter = -1;
        if (iter < bland_after) {
            double best = -tol;
            for (Eigen::Index j = 0; j < n + m; ++j)
                if (t(m, j) < best) { best = t(m, j); enter = j; }
        } else {
            for (Eigen::Index j = 0; j < n + m; ++j)
                if (t(m, j) < -tol) { enter = j; break; }
        }
        if (enter < 0) break;  // optimal

        // ratio test
        Eigen::Index leave = -1;
        double best_ratio = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (t(i, enter) > tol) {
                double ratio = t(i, n + m) / t(i, enter);
                if (leave < 0 || ratio < best_ratio - tol ||
                    (ratio < best_ratio + tol && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0)
            throw std::runtime_error("simplex_maximize: unbounded LP");

        t.row(leave) /= t(leave, enter);
        for (Eigen::Index i = 0; i <= m; ++i) {
            if (i == leave) continue;
            double f = t(i, enter);
            if (f != 0.0) t.row(i) -= f * t.row(leave);
        }
        basis[leave] = enter;
    }

    SimplexResult res;
    res.solution = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i)
        if (basis[i] < n) res.solution(basis[i]) = t(i, n + m);
    res.objective = c.dot(res.solution);
    return res;
}

} // namespace robuststream
