#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tree_core.hpp"
#include "treeline.hpp"

namespace treepca::oracle {

/// Exhaustive-search references used only for verification. Everything here
/// materializes the defining sets instead of using the closed-form results,
/// so the checks stay independent of the algorithms they validate. Cost is
/// exponential in instance size; the bounds below refuse anything larger
/// rather than truncating.

struct Bounds {
    std::size_t max_line_length = 32;          // members enumerated per line
    std::uint64_t max_union_product = 1000000; // Π (line length + 1)
};

/// Projection by materializing every member of the line and taking the
/// distance minimizer (first in line order on ties).
inline LabeledTree brute_force_projection(const LabeledTree& t, const TreeLine& line,
                                          const Bounds& bounds = {}) {
    if (line.length() > bounds.max_line_length) throw std::invalid_argument("oracle bound");
    LabeledTree best = line.member(0);
    std::int64_t best_d = distance(t, best);
    for (std::size_t i = 1; i <= line.length(); ++i) {
        LabeledTree candidate = line.member(i);
        std::int64_t d = distance(t, candidate);
        if (d < best_d) {
            best = std::move(candidate);
            best_d = d;
        }
    }
    return best;
}

/// Projection onto a union of lines by enumerating the full set of member
/// unions {l_{1,i_1} + ... + l_{q,i_q}} with an odometer over the truncation
/// indices, and taking the distance minimizer.
inline LabeledTree brute_force_projection_union(const LabeledTree& t,
                                                const std::vector<TreeLine>& lines,
                                                const Bounds& bounds = {}) {
    if (lines.empty()) throw std::invalid_argument("no tree-lines given");
    for (const TreeLine& line : lines)
        if (!(line.start() == lines.front().start()))
            throw std::invalid_argument("starting trees differ");
    std::uint64_t product = 1;
    for (const TreeLine& line : lines) {
        product *= line.length() + 1;
        if (product > bounds.max_union_product) throw std::invalid_argument("oracle bound");
    }

    std::vector<std::size_t> odo(lines.size(), 0);
    LabeledTree best;
    std::int64_t best_d = -1;
    while (true) {
        std::vector<NodeId> nodes = lines.front().start().nodes();
        for (std::size_t q = 0; q < lines.size(); ++q) {
            const auto& added = lines[q].added();
            nodes.insert(nodes.end(), added.begin(), added.begin() + odo[q]);
        }
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        LabeledTree candidate(std::move(nodes), LabeledTree::unchecked_tag{});
        std::int64_t d = distance(t, candidate);
        if (best_d < 0 || d < best_d) {
            best = std::move(candidate);
            best_d = d;
        }
        std::size_t q = 0;
        while (q < lines.size() && odo[q] == lines[q].length()) odo[q++] = 0;
        if (q == lines.size()) break;
        ++odo[q];
    }
    return best;
}

namespace detail {

inline std::int64_t objective(const DataSet& ds, const std::vector<TreeLine>& lines,
                              const Bounds& bounds) {
    std::int64_t total = 0;
    for (const LabeledTree& t : ds.trees())
        total += distance(t, brute_force_projection_union(t, lines, bounds));
    return total;
}

} // namespace detail

/// k-th forward component by evaluating the objective for every remaining
/// maximal path and keeping the minimizer.
inline TreeLine brute_force_pc(const DataSet& ds, const LabeledTree& l0,
                               const std::vector<TreeLine>& prev_lines,
                               TieBreak tie = TieBreak::leftmost, const Bounds& bounds = {}) {
    LabeledTree supp = support(ds);
    std::vector<TreePath> paths = enumerate_paths(supp, l0);
    std::vector<TreeLine> candidates;
    for (const TreePath& p : paths) {
        bool used = false;
        for (const TreeLine& line : prev_lines) used = used || line.path().leaf() == p.leaf();
        if (!used) candidates.push_back(TreeLine::from_path(l0, p));
    }
    if (candidates.empty()) throw std::invalid_argument("decomposition complete");

    const TreeLine* best = nullptr;
    std::int64_t best_obj = 0;
    for (const TreeLine& candidate : candidates) {
        std::vector<TreeLine> lines = prev_lines;
        lines.push_back(candidate);
        std::int64_t obj = detail::objective(ds, lines, bounds);
        bool better;
        if (!best) {
            better = true;
        } else if (obj != best_obj) {
            better = obj < best_obj;
        } else {
            const NodeId& cur = candidate.path().leaf();
            const NodeId& inc = best->path().leaf();
            better = tie == TieBreak::leftmost ? cur < inc : cur > inc;
        }
        if (better) {
            best = &candidate;
            best_obj = obj;
        }
    }
    return *best;
}

/// Next backward component: the line of B whose removal leaves the
/// best-fitting remaining subspace, evaluated exhaustively.
inline TreeLine brute_force_bpc(const DataSet& ds, const LabeledTree& l0,
                                const std::vector<TreeLine>& remaining,
                                TieBreak tie = TieBreak::rightmost, const Bounds& bounds = {}) {
    if (remaining.empty()) throw std::invalid_argument("empty path set");
    for (const TreeLine& line : remaining)
        if (!(line.start() == l0)) throw std::invalid_argument("starting trees differ");
    if (remaining.size() == 1) return remaining.front();

    const TreeLine* best = nullptr;
    std::int64_t best_obj = 0;
    for (std::size_t c = 0; c < remaining.size(); ++c) {
        std::vector<TreeLine> rest;
        for (std::size_t q = 0; q < remaining.size(); ++q)
            if (q != c) rest.push_back(remaining[q]);
        std::int64_t obj = detail::objective(ds, rest, bounds);
        bool better;
        if (!best) {
            better = true;
        } else if (obj != best_obj) {
            better = obj < best_obj;
        } else {
            const NodeId& cur = remaining[c].path().leaf();
            const NodeId& inc = best->path().leaf();
            better = tie == TieBreak::leftmost ? cur < inc : cur > inc;
        }
        if (better) {
            best = &remaining[c];
            best_obj = obj;
        }
    }
    return *best;
}

} // namespace treepca::oracle
