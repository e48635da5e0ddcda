#pragma once
//
// Merge-and-reduce tree over the offline coreset constructor. Leaves of
// leaf_size points are reduced at budget eps/(2*max_levels); whenever two
// buffers occupy one level they are concatenated and reduced into the next
// (the binary-counter discipline). Every reduce consumes a fresh counter
// stream, so draws are independent of everything the adversary has observed.
//

#include <cstdint>
#include <optional>
#include <vector>

#include "robuststream/coreset.hpp"
#include "robuststream/rng.hpp"

namespace robuststream {

class CoresetTree {
public:
    explicit CoresetTree(ClusteringConfig cfg) : cfg_(cfg) {
        cfg_.validate();
        double ratio = static_cast<double>(cfg_.n_bound) / static_cast<double>(cfg_.leaf_size);
        max_levels_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log2(std::max(ratio, 1.0)))));
    }

    void insert(const WeightedPoint& pt) {
        pending_.push_back(pt);
        ++points_seen_;
        if (pending_.size() >= cfg_.leaf_size) {
            auto buf = reduce(pending_);
            pending_.clear();
            carry(0, std::move(buf));
        }
    }

    // Union of all live level buffers plus the pending leaf; each level buffer
    // is a coreset of its dyadic block, so the union covers the full prefix.
    std::vector<WeightedPoint> query() const {
        std::vector<WeightedPoint> out;
        for (const auto& level : levels_)
            if (level) out.insert(out.end(), level->begin(), level->end());
        out.insert(out.end(), pending_.begin(), pending_.end());
        return out;
    }

    std::size_t points_seen() const { return points_seen_; }
    std::size_t max_levels() const { return max_levels_; }
    double level_eps() const { return cfg_.eps / (2.0 * static_cast<double>(max_levels_)); }
    const ClusteringConfig& config() const { return cfg_; }

    std::size_t stored_points() const {
        std::size_t n = pending_.size();
        for (const auto& level : levels_)
            if (level) n += level->size();
        return n;
    }

    // occupied levels, lowest first (level 0 = reduced leaves)
    std::vector<bool> occupancy() const {
        std::vector<bool> occ(levels_.size());
        for (std::size_t i = 0; i < levels_.size(); ++i) occ[i] = levels_[i].has_value();
        return occ;
    }

private:
    using Buffer = std::vector<WeightedPoint>;

    Buffer reduce(const Buffer& pts) {
        CounterRng rng(derive_seed(cfg_.seed, 0xc04e5e70000ULL + reduce_count_++));
        return offline_coreset(pts, cfg_, level_eps(), rng);
    }

    void carry(std::size_t level, Buffer buf) {
        while (true) {
            if (level >= levels_.size()) levels_.resize(level + 1);
            if (!levels_[level]) {
                levels_[level] = std::move(buf);
                return;
            }
            Buffer merged = std::move(*levels_[level]);
            levels_[level].reset();
            merged.insert(merged.end(), buf.begin(), buf.end());
            buf = reduce(merged);
            ++level;
        }
    }

    ClusteringConfig cfg_;
    std::size_t max_levels_ = 1;
    std::vector<std::optional<Buffer>> levels_;
    Buffer pending_;
    std::size_t points_seen_ = 0;
    std::uint64_t reduce_count_ = 0;
};

inline void mr_insert(CoresetTree& tree, const WeightedPoint& pt) { tree.insert(pt); }
inline std::vector<WeightedPoint> mr_query(const CoresetTree& tree) { return tree.query(); }

} // namespace robuststream
