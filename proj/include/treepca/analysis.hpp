#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "detail/tree_index.hpp"
#include "stats.hpp"
#include "tree_core.hpp"
#include "treeline.hpp"

namespace treepca {

/// One point of a variation-vs-removed-components curve.
struct CurvePoint {
    std::int64_t removed = 0;   // components removed so far
    std::int64_t explained = 0; // data-tree nodes captured by the remaining subspace
};

struct ScaledCurvePoint {
    double removed = 0.0;
    double explained = 0.0;
};

/// Scatter point of a SET1/SET2 projection split.
struct SplitScatterPoint {
    std::string tree_id;
    double x = 0.0; // scaled projection size onto SET1 (the influential components)
    double y = 0.0; // scaled projection size onto SET2
};

struct SplitResult {
    std::vector<TreePath> set1;
    std::vector<TreePath> set2;
    std::vector<SplitScatterPoint> points;
};

/// Radial drawing coordinate: depth as radius, arc midpoint as angle.
struct LayoutPoint {
    NodeId node;
    double radius = 0.0;
    double angle_deg = 0.0;
};

namespace detail {

/// Arena over the covered node set: l0 plus every component path.
inline TreeIndex covered_arena(const LabeledTree& l0, const Decomposition& decomposition) {
    std::vector<NodeId> all = l0.nodes();
    for (const Component& c : decomposition.components)
        all.insert(all.end(), c.path.nodes().begin(), c.path.nodes().end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return TreeIndex::build(LabeledTree(std::move(all), LabeledTree::unchecked_tag{}));
}

/// Replays the removal of components in backward selection order (position n
/// first). `on_uncover(i, j)` fires once per arena node, at the 1-based
/// removal step j where its last covering path disappears; l0 nodes never
/// leave.
template <typename F>
void replay_removals(const TreeIndex& ix, const LabeledTree& l0,
                     const Decomposition& decomposition, F&& on_uncover) {
    constexpr int kPinned = std::numeric_limits<int>::max();
    std::vector<int> cover_count(ix.size(), 0);
    for (const NodeId& v : l0.nodes()) cover_count[ix.find(v)] = kPinned;
    for (const Component& c : decomposition.components)
        for (const NodeId& v : c.path.nodes()) {
            int& count = cover_count[ix.find(v)];
            if (count != kPinned) ++count;
        }
    const std::int64_t n = decomposition.components.size();
    for (std::int64_t j = 1; j <= n; ++j) {
        const Component& c = decomposition.components[n - j];
        for (const NodeId& v : c.path.nodes()) {
            std::int32_t i = ix.find(v);
            if (cover_count[i] != kPinned && --cover_count[i] == 0) on_uncover(i, j);
        }
    }
}

} // namespace detail

/// Nodes of the data trees explained by the remaining subspace after
/// removing 0, 1, ..., n backward components (least influential first):
/// explained(j) counts, over all data trees, the nodes that the remaining
/// covered set (l0 plus the surviving paths) still contains.
inline std::vector<CurvePoint> variation_curve(const DataSet& ds,
                                               const Decomposition& decomposition) {
    if (ds.empty()) throw std::invalid_argument("empty dataset");
    LabeledTree supp = support(ds);
    if (!decomposition.start.contained_in(supp))
        throw std::invalid_argument("decomposition does not match dataset");
    for (const Component& c : decomposition.components)
        if (!supp.contains(c.path.leaf()))
            throw std::invalid_argument("decomposition does not match dataset");

    detail::TreeIndex ix = detail::covered_arena(decomposition.start, decomposition);
    std::vector<std::int64_t> membership(ix.size(), 0);
    for (const LabeledTree& t : ds.trees())
        for (const NodeId& v : t.nodes()) {
            std::int32_t i = ix.find(v);
            if (i >= 0) ++membership[i];
        }

    const std::int64_t n = decomposition.components.size();
    std::vector<std::int64_t> loss(n + 1, 0);
    detail::replay_removals(ix, decomposition.start, decomposition,
                            [&](std::int32_t i, std::int64_t j) { loss[j] += membership[i]; });

    std::int64_t explained = 0;
    for (std::int32_t i = 0; i < ix.size(); ++i) explained += membership[i];

    std::vector<CurvePoint> out;
    out.reserve(n + 1);
    out.push_back({0, explained});
    for (std::int64_t j = 1; j <= n; ++j) {
        explained -= loss[j];
        out.push_back({j, explained});
    }
    return out;
}

/// Scales a curve so each axis tops out at 100 (a constant-zero axis maps to
/// 100 uniformly).
inline std::vector<ScaledCurvePoint> scale_curve(const std::vector<CurvePoint>& points) {
    if (points.empty()) throw std::invalid_argument("empty curve");
    std::int64_t max_x = 0, max_y = 0;
    for (const CurvePoint& p : points) {
        max_x = std::max(max_x, p.removed);
        max_y = std::max(max_y, p.explained);
    }
    std::vector<ScaledCurvePoint> out;
    out.reserve(points.size());
    for (const CurvePoint& p : points)
        out.push_back({max_x == 0 ? 100.0 : 100.0 * p.removed / max_x,
                       max_y == 0 ? 100.0 : 100.0 * p.explained / max_y});
    return out;
}

/// Slope p-values of projection size against a covariate, one value per
/// removal count. Follows the same backward removal order as
/// variation_curve; sizes are raw node counts. A removal step whose
/// regression cannot be computed yields NaN rather than aborting the curve.
inline std::vector<std::pair<std::int64_t, double>>
pvalue_curve(const DataSet& ds, const Decomposition& decomposition, const std::string& covariate) {
    std::vector<double> x = ds.covariate_values(covariate);
    if (ds.size() < 3) throw std::invalid_argument("regression needs at least 3 points");

    detail::TreeIndex ix = detail::covered_arena(decomposition.start, decomposition);
    std::vector<std::vector<std::size_t>> trees_at(ix.size());
    std::vector<double> sizes(ds.size(), 0.0);
    for (std::size_t t = 0; t < ds.size(); ++t) {
        std::int64_t captured = 0;
        for (const NodeId& v : ds.trees()[t].nodes()) {
            std::int32_t i = ix.find(v);
            if (i < 0) continue;
            trees_at[i].push_back(t);
            ++captured;
        }
        // |P(t)| counts l0 in full, plus the captured nodes outside l0
        sizes[t] = decomposition.start.size() + captured;
        for (const NodeId& v : decomposition.start.nodes())
            if (ds.trees()[t].contains(v)) sizes[t] -= 1;
    }

    const std::int64_t n = decomposition.components.size();
    std::vector<std::vector<std::int64_t>> loss(ds.size(), std::vector<std::int64_t>(n + 1, 0));
    detail::replay_removals(ix, decomposition.start, decomposition,
                            [&](std::int32_t i, std::int64_t j) {
                                for (std::size_t t : trees_at[i]) loss[t][j] += 1;
                            });

    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(n + 1);
    for (std::int64_t j = 0; j <= n; ++j) {
        if (j > 0)
            for (std::size_t t = 0; t < ds.size(); ++t) sizes[t] -= loss[t][j];
        double p;
        try {
            p = ols_slope_pvalue(x, sizes).p_value;
        } catch (const std::invalid_argument&) {
            p = std::numeric_limits<double>::quiet_NaN(); // flagged gap
        }
        out.push_back({j, p});
    }
    return out;
}

/// Splits the components into SET2 (the first ceil(fraction*n) in backward
/// removal order: the less common structure) and SET1 (the rest: the common
/// structure), and reports each tree's projection size onto both, scaled so
/// each axis maxes at 1.
inline SplitResult set_split(const DataSet& ds, const Decomposition& decomposition,
                             double fraction = 0.9) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("split fraction must lie strictly between 0 and 1");
    const std::int64_t n = decomposition.components.size();
    if (n < 2) throw std::invalid_argument("split needs at least 2 components");

    const std::int64_t set2_count = static_cast<std::int64_t>(std::ceil(fraction * n));
    const std::int64_t boundary = n - set2_count; // components 1..boundary form SET1

    SplitResult out;
    std::vector<TreeLine> lines1, lines2;
    for (std::int64_t k = 1; k <= n; ++k) {
        const TreePath& p = decomposition.components[k - 1].path;
        if (k <= boundary) {
            out.set1.push_back(p);
            lines1.push_back(TreeLine::from_path(decomposition.start, p));
        } else {
            out.set2.push_back(p);
            lines2.push_back(TreeLine::from_path(decomposition.start, p));
        }
    }

    std::vector<double> xs(ds.size()), ys(ds.size());
    for (std::size_t t = 0; t < ds.size(); ++t) {
        const LabeledTree& tree = ds.trees()[t];
        xs[t] = lines1.empty() ? decomposition.start.size() : project_union(tree, lines1).size();
        ys[t] = lines2.empty() ? decomposition.start.size() : project_union(tree, lines2).size();
    }
    // projection sizes are at least |l0| >= 1, so the maxima are positive
    double max_x = *std::max_element(xs.begin(), xs.end());
    double max_y = *std::max_element(ys.begin(), ys.end());
    for (std::size_t t = 0; t < ds.size(); ++t)
        out.points.push_back({ds.meta()[t].id, xs[t] / max_x, ys[t] / max_y});
    return out;
}

/// Radial drawing coordinates: a node at depth d sits on the circle of
/// radius d, at the midpoint of its arc. Each node's arc is divided among
/// its children proportionally to 1 + descendant count, in slot order from
/// the low end; the root owns [0, 360) and is drawn at angle 0.
inline std::vector<LayoutPoint> radial_layout(const LabeledTree& t) {
    detail::TreeIndex ix = detail::TreeIndex::build(t);
    std::vector<double> arc_lo(ix.size(), 0.0), arc_hi(ix.size(), 0.0);
    arc_hi[0] = 360.0;

    std::vector<LayoutPoint> out;
    out.reserve(ix.size());
    for (std::int32_t i = 0; i < ix.size(); ++i) {
        double angle = i == 0 ? 0.0 : (arc_lo[i] + arc_hi[i]) / 2.0;
        out.push_back({ix.nodes[i], static_cast<double>(ix.depth[i]), angle});

        double total = 0.0;
        for (std::int32_t c : ix.children(i)) total += 1.0 + ix.descendant_count(c);
        double at = arc_lo[i];
        double width = arc_hi[i] - arc_lo[i];
        for (std::int32_t c : ix.children(i)) {
            double share = width * (1.0 + ix.descendant_count(c)) / total;
            arc_lo[c] = at;
            arc_hi[c] = at + share;
            at += share;
        }
    }
    return out;
}

} // namespace treepca
