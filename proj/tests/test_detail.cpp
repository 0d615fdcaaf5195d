#include <algorithm>
#include <random>
#include <vector>

#include <catch_amalgamated.hpp>

#include "testutil.hpp"
#include "treepca/detail/score_tree.hpp"
#include "treepca/detail/tree_index.hpp"

using namespace treepca;
using detail::ScoreTree;
using detail::TreeIndex;

namespace {

/// Naive mirror of ScoreTree: plain arrays, linear scans.
struct Model {
    std::vector<std::int64_t> score;
    std::vector<char> alive;

    std::pair<int, std::int64_t> best(bool maximize, bool prefer_left) const {
        int at = -1;
        for (int i = 0; i < static_cast<int>(score.size()); ++i) {
            if (!alive[i]) continue;
            if (at < 0 || (maximize ? score[i] > score[at] : score[i] < score[at]) ||
                (score[i] == score[at] && !prefer_left))
                at = i;
        }
        return {at, score[at]};
    }
};

} // namespace

TEST_CASE("score tree matches a naive model under random operations") {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 200; ++rep) {
        int n = 1 + static_cast<int>(rng() % 60);
        Model model;
        model.score.resize(n);
        model.alive.assign(n, 1);
        for (auto& s : model.score) s = static_cast<std::int64_t>(rng() % 50);
        ScoreTree seg(model.score, model.alive);

        for (int op = 0; op < 120 && seg.alive_count() > 0; ++op) {
            switch (rng() % 5) {
                case 0: { // range add
                    int lo = static_cast<int>(rng() % n);
                    int hi = lo + static_cast<int>(rng() % (n - lo + 1));
                    std::int64_t delta = static_cast<std::int64_t>(rng() % 21) - 10;
                    seg.range_add(lo, hi, delta);
                    for (int i = lo; i < hi; ++i) model.score[i] += delta;
                    break;
                }
                case 1: { // point add
                    int i = static_cast<int>(rng() % n);
                    std::int64_t delta = static_cast<std::int64_t>(rng() % 9) - 4;
                    seg.point_add(i, delta);
                    model.score[i] += delta;
                    break;
                }
                case 2: { // deactivate a random alive leaf
                    std::vector<int> alive_ids;
                    for (int i = 0; i < n; ++i)
                        if (model.alive[i]) alive_ids.push_back(i);
                    int i = alive_ids[rng() % alive_ids.size()];
                    seg.deactivate(i);
                    model.alive[i] = 0;
                    break;
                }
                case 3: { // extremum queries, both tie sides
                    bool maximize = rng() % 2;
                    for (bool prefer_left : {true, false}) {
                        auto [got_i, got_v] = seg.best(maximize, prefer_left);
                        auto [want_i, want_v] = model.best(maximize, prefer_left);
                        REQUIRE(got_i == want_i);
                        REQUIRE(got_v == want_v);
                    }
                    break;
                }
                default: { // sole_alive on an interval holding exactly one
                    std::vector<int> alive_ids;
                    for (int i = 0; i < n; ++i)
                        if (model.alive[i]) alive_ids.push_back(i);
                    int pick = alive_ids[rng() % alive_ids.size()];
                    // widen around the pick while staying clear of neighbors
                    int lo = pick, hi = pick + 1;
                    while (lo > 0 && !model.alive[lo - 1] && rng() % 2) --lo;
                    while (hi < n && !model.alive[hi] && rng() % 2) ++hi;
                    REQUIRE(seg.sole_alive(lo, hi) == pick);
                    break;
                }
            }
        }
    }
}

TEST_CASE("tree index agrees with first-principles recomputation") {
    std::mt19937_64 rng(103);
    for (int rep = 0; rep < 100; ++rep) {
        LabeledTree t = testutil::random_tree(rng, 5, 3, 0.6);
        TreeIndex ix = TreeIndex::build(t);
        REQUIRE(ix.size() == static_cast<std::int32_t>(t.size()));

        for (std::int32_t i = 0; i < ix.size(); ++i) {
            const NodeId& v = ix.nodes[i];
            CHECK(ix.find(v) == i);
            CHECK(ix.depth[i] == static_cast<std::int32_t>(v.depth()));

            // parent by label
            if (v.is_root())
                CHECK(ix.parent[i] == -1);
            else
                CHECK(ix.nodes[ix.parent[i]] == v.parent());

            // descendant range by label prefix
            std::int32_t descendants = 0;
            for (const NodeId& u : t.nodes())
                if (v.is_prefix_of(u) && !(u == v)) ++descendants;
            CHECK(ix.descendant_count(i) == descendants);
            CHECK(ix.is_leaf(i) == t.is_leaf(v));

            // leaf interval counts exactly the subtree's leaves
            auto [lo, hi] = ix.leaf_interval(i);
            std::int32_t subtree_leaves = 0;
            for (const NodeId& u : t.nodes())
                if (v.is_prefix_of(u) && t.is_leaf(u)) ++subtree_leaves;
            CHECK(hi - lo == subtree_leaves);

            // children enumerate in slot order
            std::vector<NodeId> kids;
            for (std::int32_t c : ix.children(i)) kids.push_back(ix.nodes[c]);
            std::vector<NodeId> expect;
            for (const NodeId& u : t.nodes())
                if (!u.is_root() && u.parent() == v) expect.push_back(u);
            CHECK(kids == expect);
        }
        CHECK(ix.find(NodeId::parse("r.999")) == -1);
    }
}
