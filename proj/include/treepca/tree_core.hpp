#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "node_id.hpp"

namespace treepca {

/// Rooted labeled tree as a finite, parent-closed set of NodeIds that
/// contains the root. Stored sorted, which doubles as a preorder walk.
/// Immutable after construction; all operations on it are pure functions.
class LabeledTree {
public:
    struct Violation {
        enum class Kind { missing_root, missing_parent };
        Kind kind;
        NodeId node; // the offending node (for missing_parent: the child whose parent is absent)
        std::string to_string() const {
            if (kind == Kind::missing_root) return "root missing";
            return "parent " + node.parent().str() + " missing for " + node.str();
        }
    };

    LabeledTree() : nodes_{NodeId::root()} {}

    static LabeledTree root_only() { return LabeledTree{}; }

    /// Builds from an arbitrary collection of node ids (any order, duplicates
    /// collapsed). Throws std::invalid_argument naming the first violation.
    static LabeledTree from_nodes(std::vector<NodeId> nodes) {
        normalize(nodes);
        auto violations = check(nodes);
        if (!violations.empty())
            throw std::invalid_argument("invalid tree: " + violations.front().to_string());
        return LabeledTree(std::move(nodes), unchecked_tag{});
    }

    /// Diagnostic validation: reports every root/parent-closure violation
    /// instead of throwing.
    static std::vector<Violation> validate(std::vector<NodeId> nodes) {
        normalize(nodes);
        return check(nodes);
    }

    const std::vector<NodeId>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }

    bool contains(const NodeId& id) const {
        return std::binary_search(nodes_.begin(), nodes_.end(), id);
    }

    /// Subset test against another tree (or any sorted node set).
    bool contained_in(const LabeledTree& other) const {
        return std::includes(other.nodes_.begin(), other.nodes_.end(),
                             nodes_.begin(), nodes_.end());
    }

    bool is_leaf(const NodeId& id) const {
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), id);
        return it == nodes_.end() || !id.is_prefix_of(*it);
    }

    bool operator==(const LabeledTree& other) const = default;

    // Set algebra. Unions and intersections of parent-closed rooted sets are
    // again parent-closed rooted sets, so no re-validation is needed.
    friend LabeledTree tree_union(const LabeledTree& a, const LabeledTree& b) {
        std::vector<NodeId> out;
        out.reserve(a.size() + b.size());
        std::set_union(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(), b.nodes_.end(),
                       std::back_inserter(out));
        return LabeledTree(std::move(out), unchecked_tag{});
    }

    friend LabeledTree tree_intersection(const LabeledTree& a, const LabeledTree& b) {
        std::vector<NodeId> out;
        std::set_intersection(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(), b.nodes_.end(),
                              std::back_inserter(out));
        return LabeledTree(std::move(out), unchecked_tag{});
    }

    struct unchecked_tag {};
    LabeledTree(std::vector<NodeId> sorted_nodes, unchecked_tag) : nodes_(std::move(sorted_nodes)) {}

private:
    static void normalize(std::vector<NodeId>& nodes) {
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    }

    static std::vector<Violation> check(const std::vector<NodeId>& nodes) {
        std::vector<Violation> out;
        if (nodes.empty() || !nodes.front().is_root())
            out.push_back({Violation::Kind::missing_root, NodeId::root()});
        for (const NodeId& id : nodes) {
            if (id.is_root()) continue;
            if (!std::binary_search(nodes.begin(), nodes.end(), id.parent()))
                out.push_back({Violation::Kind::missing_parent, id});
        }
        return out;
    }

    std::vector<NodeId> nodes_; // sorted ascending, unique, preorder
};

/// Path from the root to some node, as the full node sequence. Produced by
/// enumerate_paths (where the last node is a leaf of the support tree) and
/// consumed by tree-lines and projections.
class TreePath {
public:
    TreePath() = default;

    /// Validates the chain: starts at the root, each element the parent of
    /// the next.
    static TreePath from_nodes(std::vector<NodeId> nodes) {
        if (nodes.empty() || !nodes.front().is_root())
            throw std::invalid_argument("path must start at the root");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (nodes[i].parent() != nodes[i - 1])
                throw std::invalid_argument("path is not a parent-child chain at " + nodes[i].str());
        return TreePath(std::move(nodes), unchecked_tag{});
    }

    /// The root-to-`leaf` chain, derived from the id itself.
    static TreePath to_node(const NodeId& leaf) {
        std::vector<NodeId> nodes;
        nodes.reserve(leaf.depth() + 1);
        std::vector<std::uint64_t> prefix;
        nodes.push_back(NodeId::root());
        for (std::uint64_t s : leaf.slots()) {
            prefix.push_back(s);
            nodes.push_back(NodeId(prefix));
        }
        return TreePath(std::move(nodes), unchecked_tag{});
    }

    const std::vector<NodeId>& nodes() const { return nodes_; }
    const NodeId& leaf() const { return nodes_.back(); }
    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }

    bool contains(const NodeId& id) const {
        // a root path contains exactly the prefixes of its leaf
        return id.depth() < nodes_.size() && nodes_[id.depth()] == id;
    }

    bool operator==(const TreePath& other) const = default;

    struct unchecked_tag {};
    TreePath(std::vector<NodeId> nodes, unchecked_tag) : nodes_(std::move(nodes)) {}

private:
    std::vector<NodeId> nodes_;
};

inline std::ostream& operator<<(std::ostream& os, const TreePath& p) {
    for (std::size_t i = 0; i < p.nodes().size(); ++i) {
        if (i) os << ';';
        os << p.nodes()[i];
    }
    return os;
}

/// Per-tree metadata carried alongside the structure.
struct TreeRecord {
    std::string id;
    std::map<std::string, double> covariates;
};

/// Indexed list of data trees with per-tree covariates. Ids are unique.
class DataSet {
public:
    DataSet() = default;

    static DataSet from_parts(std::vector<LabeledTree> trees, std::vector<TreeRecord> meta) {
        if (trees.size() != meta.size())
            throw std::invalid_argument("tree/metadata count mismatch");
        std::vector<std::string> ids;
        ids.reserve(meta.size());
        for (const auto& m : meta) ids.push_back(m.id);
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            throw std::invalid_argument("duplicate tree id '" +
                                        *std::adjacent_find(ids.begin(), ids.end()) + "'");
        DataSet ds;
        ds.trees_ = std::move(trees);
        ds.meta_ = std::move(meta);
        return ds;
    }

    /// Convenience for fixtures: ids t1, t2, ... and no covariates.
    static DataSet from_trees(std::vector<LabeledTree> trees) {
        std::vector<TreeRecord> meta(trees.size());
        for (std::size_t i = 0; i < meta.size(); ++i) meta[i].id = "t" + std::to_string(i + 1);
        return from_parts(std::move(trees), std::move(meta));
    }

    const std::vector<LabeledTree>& trees() const { return trees_; }
    const std::vector<TreeRecord>& meta() const { return meta_; }
    std::size_t size() const { return trees_.size(); }
    bool empty() const { return trees_.empty(); }

    /// Covariate column; throws if absent on any tree.
    std::vector<double> covariate_values(const std::string& name) const {
        std::vector<double> out;
        out.reserve(meta_.size());
        for (const auto& m : meta_) {
            auto it = m.covariates.find(name);
            if (it == m.covariates.end())
                throw std::invalid_argument("covariate '" + name + "' missing on tree '" + m.id + "'");
            out.push_back(it->second);
        }
        return out;
    }

private:
    std::vector<LabeledTree> trees_;
    std::vector<TreeRecord> meta_;
};

/// Symmetric-difference metric: |t1 \ t2| + |t2 \ t1|.
inline std::int64_t distance(const LabeledTree& t1, const LabeledTree& t2) {
    const auto& a = t1.nodes();
    const auto& b = t2.nodes();
    std::size_t i = 0, j = 0;
    std::int64_t diff = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++diff;
            ++i;
        } else {
            ++diff;
            ++j;
        }
    }
    return diff + static_cast<std::int64_t>(a.size() - i) + static_cast<std::int64_t>(b.size() - j);
}

/// Union of all member node sets.
inline LabeledTree support(const DataSet& ds) {
    if (ds.empty()) throw std::invalid_argument("empty dataset");
    LabeledTree acc = ds.trees().front();
    for (std::size_t i = 1; i < ds.size(); ++i) acc = tree_union(acc, ds.trees()[i]);
    return acc;
}

/// Intersection of all member node sets; always contains the root.
inline LabeledTree intersection(const DataSet& ds) {
    if (ds.empty()) throw std::invalid_argument("empty dataset");
    LabeledTree acc = ds.trees().front();
    for (std::size_t i = 1; i < ds.size(); ++i) acc = tree_intersection(acc, ds.trees()[i]);
    return acc;
}

/// All root-to-leaf paths of `supportTree` whose leaf is not in `l0`, sorted
/// by leaf order. The count is the number of maximal non-trivial tree-lines
/// with starting tree `l0`.
inline std::vector<TreePath> enumerate_paths(const LabeledTree& supportTree, const LabeledTree& l0) {
    if (!l0.contained_in(supportTree))
        throw std::invalid_argument("starting tree not contained in support");
    std::vector<TreePath> out;
    const auto& nodes = supportTree.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        bool leaf = (i + 1 == nodes.size()) || !nodes[i].is_prefix_of(nodes[i + 1]);
        if (leaf && !l0.contains(nodes[i])) out.push_back(TreePath::to_node(nodes[i]));
    }
    return out;
}

} // namespace treepca
