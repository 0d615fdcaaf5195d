#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "detail/score_tree.hpp"
#include "detail/tree_index.hpp"
#include "tree_core.hpp"

namespace treepca {

/// Tree-line: the sequence of trees l_0, l_1, ..., l_k where l_i adds one
/// node v_i to l_{i-1}, each v_i a child of v_{i-1} and v_1 a child of a
/// node of l_0. Identified by its starting tree and the root path to v_k.
class TreeLine {
public:
    /// Builds the line with starting tree `l0` whose added chain is the part
    /// of `path` outside `l0`. The in-`l0` part of the path must be a prefix
    /// (automatic when `l0` is parent-closed) and at least one node must be
    /// added (tree-lines are non-trivial).
    static TreeLine from_path(LabeledTree l0, TreePath path) {
        const auto& nodes = path.nodes();
        std::size_t split = 0;
        while (split < nodes.size() && l0.contains(nodes[split])) ++split;
        for (std::size_t i = split; i < nodes.size(); ++i)
            if (l0.contains(nodes[i]))
                throw std::invalid_argument("path re-enters starting tree at " + nodes[i].str());
        if (split == nodes.size())
            throw std::invalid_argument("trivial tree-line: path ends inside starting tree");
        if (split == 0)
            throw std::invalid_argument("starting tree must contain the root");
        TreeLine line;
        line.l0_ = std::move(l0);
        line.path_ = std::move(path);
        line.added_.assign(line.path_.nodes().begin() + split, line.path_.nodes().end());
        return line;
    }

    const LabeledTree& start() const { return l0_; }
    const TreePath& path() const { return path_; }
    const std::vector<NodeId>& added() const { return added_; }

    /// Number of members beyond l_0 (the k in l_0..l_k).
    std::size_t length() const { return added_.size(); }

    /// Member l_i: the starting tree plus the first i added nodes.
    LabeledTree member(std::size_t i) const {
        if (i > added_.size()) throw std::out_of_range("tree-line member index");
        std::vector<NodeId> all = l0_.nodes();
        all.insert(all.end(), added_.begin(), added_.begin() + i);
        std::sort(all.begin(), all.end());
        return LabeledTree(std::move(all), LabeledTree::unchecked_tag{});
    }

private:
    LabeledTree l0_;
    std::vector<NodeId> added_;
    TreePath path_;
};

/// Node weights w_k(v) / w'_{n-k}(v): data-tree membership counts with the
/// algorithm-specific zeroing applied.
using WeightMap = std::map<NodeId, std::int64_t>;

enum class Direction { forward, backward };
enum class TieBreak { leftmost, rightmost };

inline TieBreak opposite(TieBreak t) {
    return t == TieBreak::leftmost ? TieBreak::rightmost : TieBreak::leftmost;
}

inline const char* to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }
inline const char* to_string(TieBreak t) { return t == TieBreak::leftmost ? "left" : "right"; }

/// One selected component: its position k, path, and the weight sum the
/// selecting step saw (forward: the maximized value, backward: the
/// minimized value).
struct Component {
    std::int64_t index = 0;
    TreePath path;
    std::int64_t weight_sum = 0;
};

/// Full decomposition into principal component tree-lines. Position k of
/// `components` holds the k-th component regardless of direction; a backward
/// run selects positions n, n-1, ..., 1 in that order.
struct Decomposition {
    Direction direction = Direction::forward;
    LabeledTree start;
    std::vector<Component> components;

    std::size_t n() const { return components.size(); }
};

/// Projection of `t` onto the tree-line `L`: the member of L closest to t,
/// which is l_0 together with the path nodes present in t.
inline LabeledTree project(const LabeledTree& t, const TreeLine& line) {
    std::vector<NodeId> nodes = line.start().nodes();
    for (const NodeId& v : line.path().nodes())
        if (t.contains(v)) nodes.push_back(v);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return LabeledTree(std::move(nodes), LabeledTree::unchecked_tag{});
}

/// Projection of `t` onto the union of tree-lines with a common starting
/// tree: the union of the per-line projections, i.e. l0 together with
/// every path node present in t.
inline LabeledTree project_union(const LabeledTree& t, const std::vector<TreeLine>& lines) {
    if (lines.empty()) throw std::invalid_argument("no tree-lines given");
    for (const TreeLine& line : lines)
        if (!(line.start() == lines.front().start()))
            throw std::invalid_argument("starting trees differ");
    std::vector<NodeId> nodes = lines.front().start().nodes();
    for (const TreeLine& line : lines)
        for (const NodeId& v : line.path().nodes())
            if (t.contains(v)) nodes.push_back(v);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return LabeledTree(std::move(nodes), LabeledTree::unchecked_tag{});
}

/// Sum over the data set of distances to the projection onto the given
/// tree-lines (the PCA objective). An empty list projects onto l0 itself,
/// which is why l0 is passed explicitly.
inline std::int64_t residual(const DataSet& ds, const LabeledTree& l0,
                             const std::vector<TreeLine>& lines) {
    if (ds.empty()) throw std::invalid_argument("empty dataset");
    for (const TreeLine& line : lines)
        if (!(line.start() == l0)) throw std::invalid_argument("starting trees differ");
    std::int64_t total = 0;
    for (const LabeledTree& t : ds.trees())
        total += distance(t, lines.empty() ? l0 : project_union(t, lines));
    return total;
}

namespace detail {

/// Number of data trees containing each support node, by arena index.
inline std::vector<std::int64_t> membership_counts(const TreeIndex& ix, const DataSet& ds) {
    std::vector<std::int64_t> w(ix.size(), 0);
    for (const LabeledTree& t : ds.trees())
        for (const NodeId& v : t.nodes()) {
            std::int32_t i = ix.find(v);
            if (i >= 0) ++w[i];
        }
    return w;
}

inline void require_start(const DataSet& ds, const LabeledTree& support_tree,
                          const LabeledTree& l0) {
    if (ds.empty()) throw std::invalid_argument("empty dataset");
    if (!l0.contained_in(support_tree))
        throw std::invalid_argument("starting tree not contained in support");
}

inline void require_paths_in_support(const LabeledTree& support_tree,
                                     const std::vector<TreePath>& paths) {
    for (const TreePath& p : paths)
        if (!support_tree.contains(p.leaf()))
            throw std::invalid_argument("path not contained in support: " + p.leaf().str());
}

} // namespace detail

/// k-th forward weight map over Supp(ds): zero on l0 and on previously
/// selected paths, data-tree membership count elsewhere.
inline WeightMap forward_weights(const DataSet& ds, const LabeledTree& l0,
                                 const std::vector<TreePath>& prev_paths) {
    LabeledTree supp = support(ds);
    detail::require_start(ds, supp, l0);
    detail::require_paths_in_support(supp, prev_paths);
    detail::TreeIndex ix = detail::TreeIndex::build(supp);
    std::vector<std::int64_t> counts = detail::membership_counts(ix, ds);
    WeightMap out;
    for (std::int32_t i = 0; i < ix.size(); ++i) {
        const NodeId& v = ix.nodes[i];
        bool zero = l0.contains(v);
        for (const TreePath& p : prev_paths) {
            if (zero) break;
            zero = p.contains(v);
        }
        out[v] = zero ? 0 : counts[i];
    }
    return out;
}

/// (n-k)-th backward weight map over Supp(B), the union of l0 and the
/// remaining paths: zero on l0 and on
/// nodes shared by two or more remaining paths, membership count elsewhere.
inline WeightMap backward_weights(const DataSet& ds, const LabeledTree& l0,
                                  const std::vector<TreePath>& remaining) {
    if (remaining.empty()) throw std::invalid_argument("empty path set");
    LabeledTree supp = support(ds);
    detail::require_start(ds, supp, l0);
    detail::require_paths_in_support(supp, remaining);
    detail::TreeIndex ix = detail::TreeIndex::build(supp);
    std::vector<std::int64_t> counts = detail::membership_counts(ix, ds);
    WeightMap out;
    for (const NodeId& v : l0.nodes()) out[v] = 0;
    std::map<NodeId, int> on_paths;
    for (const TreePath& p : remaining)
        for (const NodeId& v : p.nodes()) ++on_paths[v];
    for (const auto& [v, paths_through] : on_paths) {
        if (l0.contains(v) || paths_through >= 2)
            out[v] = 0;
        else
            out[v] = counts[ix.find(v)];
    }
    return out;
}

namespace detail {

inline std::pair<TreePath, std::int64_t>
argbest_path(const std::vector<TreePath>& candidates, const WeightMap& weights,
             bool maximize, TieBreak tie) {
    std::optional<std::size_t> best;
    std::int64_t best_sum = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        std::int64_t sum = 0;
        for (const NodeId& v : candidates[c].nodes()) {
            auto it = weights.find(v);
            if (it != weights.end()) sum += it->second;
        }
        bool better;
        if (!best) {
            better = true;
        } else if (sum != best_sum) {
            better = maximize ? sum > best_sum : sum < best_sum;
        } else {
            const NodeId& cur = candidates[c].leaf();
            const NodeId& inc = candidates[*best].leaf();
            better = tie == TieBreak::leftmost ? cur < inc : cur > inc;
        }
        if (better) {
            best = c;
            best_sum = sum;
        }
    }
    return {candidates[*best], best_sum};
}

} // namespace detail

/// One forward step: among the maximal paths not yet selected, the path with
/// maximum w_k sum, ties resolved toward `tie` (leftmost matches the worked
/// component orders; the backward pass must then use the opposite rule).
inline std::pair<TreePath, std::int64_t>
forward_step(const DataSet& ds, const LabeledTree& l0, const std::vector<TreePath>& prev_paths,
             TieBreak tie = TieBreak::leftmost) {
    LabeledTree supp = support(ds);
    detail::require_start(ds, supp, l0);
    std::vector<TreePath> all = enumerate_paths(supp, l0);
    std::vector<TreePath> candidates;
    for (const TreePath& p : all) {
        bool used = false;
        for (const TreePath& q : prev_paths) used = used || q.leaf() == p.leaf();
        if (!used) candidates.push_back(p);
    }
    if (candidates.empty()) throw std::invalid_argument("decomposition complete");
    WeightMap w = forward_weights(ds, l0, prev_paths);
    return detail::argbest_path(candidates, w, /*maximize=*/true, tie);
}

/// One backward step: the remaining path with minimum w' sum, ties resolved
/// toward `tie` (rightmost when the forward pass used leftmost).
inline std::pair<TreePath, std::int64_t>
backward_step(const DataSet& ds, const LabeledTree& l0, const std::vector<TreePath>& remaining,
              TieBreak tie = TieBreak::rightmost) {
    if (remaining.empty()) throw std::invalid_argument("empty path set");
    WeightMap w = backward_weights(ds, l0, remaining);
    return detail::argbest_path(remaining, w, /*maximize=*/false, tie);
}

/// Full decomposition into all n maximal non-trivial tree-lines.
/// `forward_rule` is the forward tie-break; a backward run automatically
/// uses the opposite rule, keeping the two passes consistent. Backward
/// selections are stored so that position k holds the k-th component.
///
/// Equivalent to iterating forward_step / backward_step, but incremental:
/// per-leaf path scores live in a segment tree, and each support node is
/// zeroed (forward) or handed to its last remaining path (backward) exactly
/// once.
inline Decomposition decompose(const DataSet& ds, const LabeledTree& l0, Direction direction,
                               TieBreak forward_rule = TieBreak::leftmost) {
    LabeledTree supp = support(ds);
    detail::require_start(ds, supp, l0);

    detail::TreeIndex ix = detail::TreeIndex::build(supp);
    const std::vector<std::int64_t> counts = detail::membership_counts(ix, ds);

    std::vector<char> in_l0(ix.size(), 0);
    for (const NodeId& v : l0.nodes()) in_l0[ix.find(v)] = 1;

    // candidate components = support leaves outside l0, in leaf order
    const std::int32_t leaf_total = ix.leaves.size();
    std::vector<char> alive(leaf_total, 0);
    std::int64_t n = 0;
    for (std::int32_t li = 0; li < leaf_total; ++li)
        if (!in_l0[ix.leaves[li]]) {
            alive[li] = 1;
            ++n;
        }

    Decomposition out;
    out.direction = direction;
    out.start = l0;
    if (n == 0) return out;
    out.components.resize(n);

    const bool forward = direction == Direction::forward;
    const TieBreak rule = forward ? forward_rule : opposite(forward_rule);
    const bool prefer_left = rule == TieBreak::leftmost;

    if (forward) {
        // covered = l0 plus selected paths; per-leaf score = sum of counts over
        // its uncovered path nodes. Covering a node subtracts its count from
        // every leaf below it.
        std::vector<char> covered = in_l0;
        std::vector<std::int64_t> prefix(ix.size(), 0);
        for (std::int32_t i = 0; i < ix.size(); ++i) {
            std::int64_t up = ix.parent[i] < 0 ? 0 : prefix[ix.parent[i]];
            prefix[i] = up + (covered[i] ? 0 : counts[i]);
        }
        std::vector<std::int64_t> scores(leaf_total, 0);
        for (std::int32_t li = 0; li < leaf_total; ++li) scores[li] = prefix[ix.leaves[li]];

        detail::ScoreTree seg(scores, alive);
        for (std::int64_t k = 1; k <= n; ++k) {
            auto [leaf_pos, sum] = seg.best(/*maximize=*/true, prefer_left);
            std::int32_t node = ix.leaves[leaf_pos];
            out.components[k - 1] = {k, ix.path_to(node), sum};
            seg.deactivate(leaf_pos);
            for (std::int32_t v = node; v >= 0 && !covered[v]; v = ix.parent[v]) {
                covered[v] = 1;
                auto [lo, hi] = ix.leaf_interval(v);
                seg.range_add(lo, hi, -counts[v]);
            }
        }
    } else {
        // remaining-path multiplicity of a node = alive candidate leaves in
        // its subtree. A node contributes its count to a leaf's score only
        // while it sits on exactly that one remaining path (and is outside
        // l0); when a removal drops a node's multiplicity to one, the count
        // is handed to the single remaining leaf below it.
        std::vector<std::int32_t> multiplicity(ix.size(), 0);
        for (std::int32_t li = 0; li < leaf_total; ++li)
            if (alive[li])
                for (std::int32_t v = ix.leaves[li]; v >= 0; v = ix.parent[v]) ++multiplicity[v];

        std::vector<std::int64_t> prefix(ix.size(), 0);
        for (std::int32_t i = 0; i < ix.size(); ++i) {
            std::int64_t up = ix.parent[i] < 0 ? 0 : prefix[ix.parent[i]];
            bool contributes = !in_l0[i] && multiplicity[i] == 1;
            prefix[i] = up + (contributes ? counts[i] : 0);
        }
        std::vector<std::int64_t> scores(leaf_total, 0);
        for (std::int32_t li = 0; li < leaf_total; ++li) scores[li] = prefix[ix.leaves[li]];

        detail::ScoreTree seg(scores, alive);
        for (std::int64_t k = n; k >= 1; --k) {
            auto [leaf_pos, sum] = seg.best(/*maximize=*/false, prefer_left);
            std::int32_t node = ix.leaves[leaf_pos];
            out.components[k - 1] = {k, ix.path_to(node), sum};
            seg.deactivate(leaf_pos);
            for (std::int32_t v = node; v >= 0; v = ix.parent[v]) {
                if (--multiplicity[v] == 1 && !in_l0[v]) {
                    auto [lo, hi] = ix.leaf_interval(v);
                    seg.point_add(seg.sole_alive(lo, hi), counts[v]);
                }
            }
        }
    }
    return out;
}

/// Position-wise mismatch between a forward and a backward run.
struct EquivalenceReport {
    bool ok = true;
    std::size_t position = 0; // 1-based position of the first mismatch
    TreePath forward_path;
    TreePath backward_path;

    std::string to_string() const {
        if (ok) return "ok";
        std::string out = "mismatch at component " + std::to_string(position) + ": forward ";
        out += forward_path.leaf().str();
        out += ", backward ";
        out += backward_path.leaf().str();
        return out;
    }
};

/// Executes both decompositions with opposite tie-break rules and compares
/// them position-wise. The two runs agree on every input; a mismatch report
/// indicates an implementation bug, not a data property.
inline EquivalenceReport verify_equivalence(const DataSet& ds, const LabeledTree& l0,
                                            TieBreak forward_rule = TieBreak::leftmost) {
    Decomposition fwd = decompose(ds, l0, Direction::forward, forward_rule);
    Decomposition bwd = decompose(ds, l0, Direction::backward, forward_rule);
    EquivalenceReport report;
    for (std::size_t k = 0; k < fwd.components.size(); ++k) {
        if (!(fwd.components[k].path == bwd.components[k].path)) {
            report.ok = false;
            report.position = k + 1;
            report.forward_path = fwd.components[k].path;
            report.backward_path = bwd.components[k].path;
            return report;
        }
    }
    return report;
}

} // namespace treepca
