#pragma once
//
// Exact L1 sensitivity of a row against a weighted buffer:
//     max_x |<a,x>| / (||Mx||_1 + |<a,x>|).
// The ratio is scale invariant, so maximizing t = <a,x> subject to
// ||Mx||_1 + <a,x> <= 1 and <a,x> >= 0 attains the sensitivity as the LP
// optimum. Free x is split into x+ - x-, and each |<m_j,x>| is linearized
// with one auxiliary variable.
//

#include <Eigen/Dense>
#include <stdexcept>

#include "robuststream/row_buffer.hpp"
#include "robuststream/simplex.hpp"

namespace robuststream {

inline double l1_sensitivity(const WeightedRowBuffer& m, const Vector& a) {
    if (!a.allFinite())
        throw std::invalid_argument("l1_sensitivity: non-finite input");
    if (m.dim() != 0 && a.size() != m.dim())
        throw std::invalid_argument("l1_sensitivity: dimension mismatch");
    if (m.empty()) return 1.0;  // ||Mx||_1 = 0: ratio is 1 wherever <a,x> != 0

    const Eigen::Index d = a.size();
    const Eigen::Index rows = static_cast<Eigen::Index>(m.size());
    Matrix wm = m.weighted_matrix();

    // variables: [x+ (d) | x- (d) | u (rows)]
    const Eigen::Index nv = 2 * d + rows;
    const Eigen::Index nc = 2 * rows + 2;
    Matrix lhs = Matrix::Zero(nc, nv);
    Vector rhs = Vector::Zero(nc);
    Vector obj = Vector::Zero(nv);

    for (Eigen::Index j = 0; j < rows; ++j) {
        //  <m_j, x> - u_j <= 0   and   -<m_j, x> - u_j <= 0
        lhs.row(2 * j).segment(0, d) = wm.row(j);
        lhs.row(2 * j).segment(d, d) = -wm.row(j);
        lhs(2 * j, 2 * d + j) = -1.0;
        lhs.row(2 * j + 1).segment(0, d) = -wm.row(j);
        lhs.row(2 * j + 1).segment(d, d) = wm.row(j);
        lhs(2 * j + 1, 2 * d + j) = -1.0;
    }
    // sum_j u_j + <a,x> <= 1
    lhs.row(2 * rows).segment(0, d) = a.transpose();
    lhs.row(2 * rows).segment(d, d) = -a.transpose();
    lhs.row(2 * rows).segment(2 * d, rows).setOnes();
    rhs(2 * rows) = 1.0;
    // -<a,x> <= 0
    lhs.row(2 * rows + 1).segment(0, d) = -a.transpose();
    lhs.row(2 * rows + 1).segment(d, d) = a.transpose();

    obj.segment(0, d) = a;
    obj.segment(d, d) = -a;

    double value;
    try {
        value = simplex_maximize(lhs, rhs, obj).objective;
    } catch (const std::runtime_error&) {
        throw std::logic_error("l1_sensitivity: LP unbounded; input violated span precondition");
    }
    if (value > 1.0 + 1e-6)
        throw std::logic_error("l1_sensitivity: LP value exceeded 1");
    return std::min(std::max(value, 0.0), 1.0);
}

// The L1 sensitivity ratio evaluated at one explicit x; any x in the span
// lower-bounds the maximum, which lets callers skip the LP when the bound
// already saturates their sampling probability.
inline double l1_ratio_at(const WeightedRowBuffer& m, const Vector& a, const Vector& x) {
    double num = std::abs(a.dot(x));
    if (num == 0.0) return 0.0;
    double den = num;
    Matrix wm = m.weighted_matrix();
    for (Eigen::Index j = 0; j < wm.rows(); ++j)
        den += std::abs(wm.row(j).dot(x));
    return num / den;
}

} // namespace robuststream
