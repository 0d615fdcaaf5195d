#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace treepca::detail {

/// Segment tree over per-leaf path scores with lazy range add, leaf
/// deactivation, and extremum queries that resolve ties toward a preferred
/// side. Dead leaves are excluded from every aggregate.
class ScoreTree {
public:
    ScoreTree() = default;

    ScoreTree(const std::vector<std::int64_t>& scores, const std::vector<char>& alive)
        : n_(static_cast<std::int32_t>(scores.size())) {
        nodes_.assign(4 * std::max(n_, 1), Node{});
        if (n_ > 0) build(1, 0, n_, scores, alive);
    }

    std::int32_t size() const { return n_; }

    void range_add(std::int32_t lo, std::int32_t hi, std::int64_t delta) {
        if (lo < hi) range_add(1, 0, n_, lo, hi, delta);
    }

    void point_add(std::int32_t i, std::int64_t delta) { range_add(i, i + 1, delta); }

    void deactivate(std::int32_t i) { deactivate(1, 0, n_, i); }

    std::int32_t alive_count() const { return n_ ? nodes_[1].alive : 0; }

    /// Position and score of the best alive leaf. `maximize` selects max vs
    /// min; on equal scores the leaf nearer the preferred side wins.
    std::pair<std::int32_t, std::int64_t> best(bool maximize, bool prefer_left) {
        if (alive_count() == 0) throw std::logic_error("score tree: no alive leaves");
        std::int64_t target = maximize ? nodes_[1].mx : nodes_[1].mn;
        std::int32_t v = 1, lo = 0, hi = n_;
        while (hi - lo > 1) {
            push(v);
            std::int32_t mid = lo + (hi - lo) / 2;
            const Node& l = nodes_[2 * v];
            const Node& r = nodes_[2 * v + 1];
            bool left_has = l.alive > 0 && (maximize ? l.mx : l.mn) == target;
            bool right_has = r.alive > 0 && (maximize ? r.mx : r.mn) == target;
            if (left_has && (prefer_left || !right_has)) {
                v = 2 * v;
                hi = mid;
            } else {
                v = 2 * v + 1;
                lo = mid;
            }
        }
        return {lo, target};
    }

    /// The unique alive leaf in [lo, hi); requires exactly one.
    std::int32_t sole_alive(std::int32_t lo, std::int32_t hi) {
        if (alive_in(1, 0, n_, lo, hi) != 1)
            throw std::logic_error("score tree: interval does not hold exactly one alive leaf");
        return find_alive(1, 0, n_, lo, hi);
    }

private:
    static constexpr std::int64_t kNegInf = INT64_MIN / 4;
    static constexpr std::int64_t kPosInf = INT64_MAX / 4;

    struct Node {
        std::int64_t mx = kNegInf;
        std::int64_t mn = kPosInf;
        std::int64_t lazy = 0;
        std::int32_t alive = 0;
    };

    std::int32_t n_ = 0;
    std::vector<Node> nodes_;

    void build(std::int32_t v, std::int32_t lo, std::int32_t hi,
               const std::vector<std::int64_t>& scores, const std::vector<char>& alive) {
        if (hi - lo == 1) {
            if (alive[lo]) nodes_[v] = Node{scores[lo], scores[lo], 0, 1};
            return;
        }
        std::int32_t mid = lo + (hi - lo) / 2;
        build(2 * v, lo, mid, scores, alive);
        build(2 * v + 1, mid, hi, scores, alive);
        pull(v);
    }

    void apply(std::int32_t v, std::int64_t delta) {
        if (nodes_[v].alive == 0) return;
        nodes_[v].mx += delta;
        nodes_[v].mn += delta;
        nodes_[v].lazy += delta;
    }

    void push(std::int32_t v) {
        if (nodes_[v].lazy != 0) {
            apply(2 * v, nodes_[v].lazy);
            apply(2 * v + 1, nodes_[v].lazy);
            nodes_[v].lazy = 0;
        }
    }

    void pull(std::int32_t v) {
        const Node& l = nodes_[2 * v];
        const Node& r = nodes_[2 * v + 1];
        nodes_[v].alive = l.alive + r.alive;
        nodes_[v].mx = std::max(l.mx, r.mx);
        nodes_[v].mn = std::min(l.mn, r.mn);
    }

    void range_add(std::int32_t v, std::int32_t lo, std::int32_t hi,
                   std::int32_t qlo, std::int32_t qhi, std::int64_t delta) {
        if (qhi <= lo || hi <= qlo || nodes_[v].alive == 0) return;
        if (qlo <= lo && hi <= qhi) {
            apply(v, delta);
            return;
        }
        push(v);
        std::int32_t mid = lo + (hi - lo) / 2;
        range_add(2 * v, lo, mid, qlo, qhi, delta);
        range_add(2 * v + 1, mid, hi, qlo, qhi, delta);
        pull(v);
    }

    void deactivate(std::int32_t v, std::int32_t lo, std::int32_t hi, std::int32_t i) {
        if (hi - lo == 1) {
            nodes_[v] = Node{};
            return;
        }
        push(v);
        std::int32_t mid = lo + (hi - lo) / 2;
        if (i < mid)
            deactivate(2 * v, lo, mid, i);
        else
            deactivate(2 * v + 1, mid, hi, i);
        pull(v);
    }

    std::int32_t alive_in(std::int32_t v, std::int32_t lo, std::int32_t hi,
                          std::int32_t qlo, std::int32_t qhi) const {
        if (qhi <= lo || hi <= qlo) return 0;
        if (qlo <= lo && hi <= qhi) return nodes_[v].alive;
        std::int32_t mid = lo + (hi - lo) / 2;
        return alive_in(2 * v, lo, mid, qlo, qhi) + alive_in(2 * v + 1, mid, hi, qlo, qhi);
    }

    std::int32_t find_alive(std::int32_t v, std::int32_t lo, std::int32_t hi,
                            std::int32_t qlo, std::int32_t qhi) const {
        if (hi - lo == 1) return lo;
        std::int32_t mid = lo + (hi - lo) / 2;
        if (alive_in(2 * v, lo, mid, qlo, qhi) > 0) return find_alive(2 * v, lo, mid, qlo, qhi);
        return find_alive(2 * v + 1, mid, hi, qlo, qhi);
    }
};

} // namespace treepca::detail
