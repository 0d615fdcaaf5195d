#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tree_core.hpp"

namespace treepca {

/// Structural tree as ingested: children in arbitrary order, no labels.
/// Carries no correspondence semantics until a relabeling is applied.
struct RawTree {
    std::vector<RawTree> children;

    std::size_t node_count() const {
        std::size_t n = 1;
        for (const RawTree& c : children) n += c.node_count();
        return n;
    }
};

/// Balanced-parenthesis form: tree := "(" tree* ")". "(()())" is a root
/// with two leaf children.
inline RawTree parse_raw_tree(std::string_view text) {
    std::size_t pos = 0;
    auto parse = [&](auto&& self) -> RawTree {
        if (pos >= text.size() || text[pos] != '(')
            throw std::invalid_argument("raw tree parse error at offset " + std::to_string(pos) +
                                        ": expected '('");
        ++pos;
        RawTree node;
        while (pos < text.size() && text[pos] == '(') node.children.push_back(self(self));
        if (pos >= text.size() || text[pos] != ')')
            throw std::invalid_argument("raw tree parse error at offset " + std::to_string(pos) +
                                        ": expected ')'");
        ++pos;
        return node;
    };
    RawTree root = parse(parse);
    if (pos != text.size())
        throw std::invalid_argument("raw tree parse error at offset " + std::to_string(pos) +
                                    ": trailing input");
    return root;
}

inline void to_parens(const RawTree& t, std::string& out) {
    out += '(';
    for (const RawTree& c : t.children) to_parens(c, out);
    out += ')';
}

inline std::string to_parens(const RawTree& t) {
    std::string out;
    to_parens(t, out);
    return out;
}

/// Children of each node in slot order, rebuilt from a labeled tree.
inline RawTree raw_from_labeled(const LabeledTree& t) {
    RawTree root;
    std::vector<RawTree*> stack{&root};
    const auto& nodes = t.nodes();
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        stack.resize(nodes[i].depth()); // parent is the last retained entry
        stack.back()->children.emplace_back();
        stack.push_back(&stack.back()->children.back());
    }
    return root;
}

namespace detail {

struct CanonTree {
    std::size_t size = 1;   // nodes in the subtree
    std::size_t height = 0; // edge height
    std::string enc;        // parenthesis form of the canonical subtree
    std::vector<CanonTree> children;
};

/// Descendant correspondence, bottom-up: canonicalize each child, then order
/// siblings by descendant count descending. Equal counts fall back to the
/// canonical shape (taller first, then encoding), then to ingestion order,
/// so the result is deterministic without configuration.
inline CanonTree canonicalize(const RawTree& t) {
    CanonTree out;
    out.children.reserve(t.children.size());
    for (const RawTree& c : t.children) out.children.push_back(canonicalize(c));
    std::stable_sort(out.children.begin(), out.children.end(),
                     [](const CanonTree& a, const CanonTree& b) {
                         if (a.size != b.size) return a.size > b.size;
                         if (a.height != b.height) return a.height > b.height;
                         return a.enc < b.enc;
                     });
    out.enc = "(";
    for (const CanonTree& c : out.children) {
        out.size += c.size;
        out.height = std::max(out.height, c.height + 1);
        out.enc += c.enc;
    }
    out.enc += ')';
    return out;
}

inline void emit_ids(const CanonTree& t, const NodeId& id, std::vector<NodeId>& out) {
    out.push_back(id);
    for (std::uint64_t slot = 0; slot < t.children.size(); ++slot)
        emit_ids(t.children[slot], id.child(slot), out);
}

} // namespace detail

/// Labels a raw tree under descendant correspondence: at every node the
/// children are assigned slots 0, 1, 2, ... by descendant count, largest
/// first.
inline LabeledTree descendant_relabel(const RawTree& raw) {
    detail::CanonTree canon = detail::canonicalize(raw);
    std::vector<NodeId> ids;
    ids.reserve(canon.size);
    detail::emit_ids(canon, NodeId::root(), ids);
    return LabeledTree(std::move(ids), LabeledTree::unchecked_tag{});
}

/// Level-order index of a binary tree: root 1, slot-0 child of i is 2i,
/// slot-1 child is 2i+1.
inline std::map<NodeId, std::uint64_t> level_order_index(const LabeledTree& t) {
    std::map<NodeId, std::uint64_t> out;
    for (const NodeId& v : t.nodes()) {
        if (v.is_root()) {
            out[v] = 1;
            continue;
        }
        std::uint64_t slot = v.last_slot();
        if (slot > 1)
            throw std::invalid_argument("level-order indexing requires binary tree");
        std::uint64_t parent_index = out.at(v.parent());
        if (parent_index > (UINT64_MAX - slot) / 2)
            throw std::overflow_error("level-order index exceeds 64 bits");
        out[v] = 2 * parent_index + slot;
    }
    return out;
}

} // namespace treepca
