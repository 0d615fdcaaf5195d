#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "../tree_core.hpp"

namespace treepca::detail {

/// Flat index over a tree's sorted node list. Sorted NodeId order is a
/// preorder walk, so every subtree occupies a contiguous index range; this
/// gives O(1) subtree ranges, descendant counts and leaf intervals.
struct TreeIndex {
    std::vector<NodeId> nodes;          // sorted; index i names node i
    std::vector<std::int32_t> parent;   // -1 for the root
    std::vector<std::int32_t> subtree_end; // exclusive end of the descendant range
    std::vector<std::int32_t> depth;
    std::vector<std::int32_t> leaf_rank; // size+1 entries: #leaves among [0, i)
    std::vector<std::int32_t> leaves;    // node indices of leaves, in order

    static TreeIndex build(const LabeledTree& t) {
        TreeIndex ix;
        ix.nodes = t.nodes();
        const std::size_t n = ix.nodes.size();
        ix.parent.assign(n, -1);
        ix.subtree_end.assign(n, 0);
        ix.depth.assign(n, 0);
        ix.leaf_rank.assign(n + 1, 0);

        std::vector<std::int32_t> stack; // chain of open ancestors
        for (std::size_t i = 0; i < n; ++i) {
            while (!stack.empty() && !ix.nodes[stack.back()].is_prefix_of(ix.nodes[i])) {
                ix.subtree_end[stack.back()] = static_cast<std::int32_t>(i);
                stack.pop_back();
            }
            ix.parent[i] = stack.empty() ? -1 : stack.back();
            ix.depth[i] = static_cast<std::int32_t>(ix.nodes[i].depth());
            stack.push_back(static_cast<std::int32_t>(i));
        }
        while (!stack.empty()) {
            ix.subtree_end[stack.back()] = static_cast<std::int32_t>(n);
            stack.pop_back();
        }
        for (std::size_t i = 0; i < n; ++i) {
            ix.leaf_rank[i + 1] = ix.leaf_rank[i];
            if (ix.is_leaf(static_cast<std::int32_t>(i))) {
                ix.leaf_rank[i + 1]++;
                ix.leaves.push_back(static_cast<std::int32_t>(i));
            }
        }
        return ix;
    }

    std::int32_t size() const { return static_cast<std::int32_t>(nodes.size()); }

    bool is_leaf(std::int32_t i) const { return subtree_end[i] == i + 1; }

    std::int32_t descendant_count(std::int32_t i) const { return subtree_end[i] - i - 1; }

    /// Index of the node, or -1 if absent.
    std::int32_t find(const NodeId& id) const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
        if (it == nodes.end() || *it != id) return -1;
        return static_cast<std::int32_t>(it - nodes.begin());
    }

    /// Leaf-ordinal interval [lo, hi) covered by the subtree of node i.
    std::pair<std::int32_t, std::int32_t> leaf_interval(std::int32_t i) const {
        return {leaf_rank[i], leaf_rank[subtree_end[i]]};
    }

    /// Children of node i in slot order.
    std::vector<std::int32_t> children(std::int32_t i) const {
        std::vector<std::int32_t> out;
        std::int32_t j = i + 1;
        while (j < subtree_end[i]) {
            out.push_back(j);
            j = subtree_end[j];
        }
        return out;
    }

    TreePath path_to(std::int32_t i) const { return TreePath::to_node(nodes[i]); }
};

} // namespace treepca::detail
