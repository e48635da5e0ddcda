#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace robuststream {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct WeightedRow {
    Vector row;
    double weight = 1.0;     // applied multiplicatively: stored row enters norms as weight*row
    std::uint64_t arrival = 0;
};

// Sampled rows with importance weights; the matrix M handed back to the
// adversary each round. Append-only.
class WeightedRowBuffer {
public:
    WeightedRowBuffer() = default;
    explicit WeightedRowBuffer(Eigen::Index dim) : dim_(dim) {}

    Eigen::Index dim() const { return dim_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    const std::vector<WeightedRow>& rows() const { return rows_; }

    void append(const Vector& r, double w, std::uint64_t arrival) {
        if (dim_ == 0) dim_ = r.size();
        if (r.size() != dim_) throw std::invalid_argument("WeightedRowBuffer: dimension mismatch");
        if (!(w > 0.0)) throw std::invalid_argument("WeightedRowBuffer: weight must be positive");
        if (!rows_.empty() && arrival <= rows_.back().arrival)
            throw std::invalid_argument("WeightedRowBuffer: arrival indices must increase");
        rows_.push_back({r, w, arrival});
    }

    // Dense weighted matrix (row i scaled by its weight).
    Matrix weighted_matrix() const {
        Matrix m(static_cast<Eigen::Index>(rows_.size()), dim_);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            m.row(static_cast<Eigen::Index>(i)) = rows_[i].weight * rows_[i].row.transpose();
        return m;
    }

private:
    Eigen::Index dim_ = 0;
    std::vector<WeightedRow> rows_;
};

} // namespace robuststream
