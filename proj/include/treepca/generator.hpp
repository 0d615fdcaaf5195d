#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tree_core.hpp"

namespace treepca {

/// Synthetic data sets: each tree is a pruning of a full template tree,
/// with per-node retention probability optionally decreasing in an "age"
/// covariate. Identical config produces byte-identical output; each tree
/// draws from its own substream, so changing tree_count never perturbs the
/// trees before it.
struct GeneratorConfig {
    std::uint64_t seed = 1;
    int tree_count = 10;
    int max_depth = 4;
    int max_arity = 2;
    double base_keep = 0.9;        // retention probability at the low end of the range
    double covariate_effect = 0.0; // how strongly the covariate suppresses retention
    double covariate_lo = 20.0;
    double covariate_hi = 70.0;
};

inline const char* generator_covariate_name() { return "age"; }

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the engine's full 64-bit output; avoids
/// std::uniform_real_distribution, whose stream is implementation-defined.
inline double unit_uniform(std::mt19937_64& rng) {
    return (rng() >> 11) * 0x1.0p-53;
}

} // namespace detail

inline DataSet generate(const GeneratorConfig& cfg) {
    if (cfg.tree_count < 1) throw std::invalid_argument("generator: tree_count must be positive");
    if (cfg.max_depth < 0) throw std::invalid_argument("generator: max_depth must be non-negative");
    if (cfg.max_arity < 1) throw std::invalid_argument("generator: max_arity must be positive");
    if (!(cfg.base_keep > 0.0 && cfg.base_keep <= 1.0))
        throw std::invalid_argument("generator: base_keep must lie in (0, 1]");
    if (!(cfg.covariate_lo <= cfg.covariate_hi))
        throw std::invalid_argument("generator: covariate range is reversed");

    int id_width = 1;
    for (int x = cfg.tree_count - 1; x >= 10; x /= 10) ++id_width;

    std::vector<LabeledTree> trees;
    std::vector<TreeRecord> meta;
    trees.reserve(cfg.tree_count);
    meta.reserve(cfg.tree_count);

    for (int i = 0; i < cfg.tree_count; ++i) {
        std::mt19937_64 rng(detail::splitmix64(cfg.seed + static_cast<std::uint64_t>(i) + 1));
        double covariate =
            cfg.covariate_lo + detail::unit_uniform(rng) * (cfg.covariate_hi - cfg.covariate_lo);
        double normalized = cfg.covariate_hi == cfg.covariate_lo
                                ? 0.0
                                : (covariate - cfg.covariate_lo) / (cfg.covariate_hi - cfg.covariate_lo);
        double keep = cfg.base_keep - cfg.covariate_effect * normalized;
        keep = std::min(1.0, std::max(0.01, keep));

        // preorder walk over the template; pruned subtrees are never entered,
        // so the root is always retained and the result is parent-closed
        std::vector<NodeId> nodes;
        std::vector<NodeId> frontier{NodeId::root()};
        while (!frontier.empty()) {
            NodeId v = frontier.back();
            frontier.pop_back();
            nodes.push_back(v);
            if (static_cast<int>(v.depth()) == cfg.max_depth) continue;
            for (int slot = cfg.max_arity - 1; slot >= 0; --slot) {
                // children visited in slot order; the stack reverses them
                if (detail::unit_uniform(rng) < keep) frontier.push_back(v.child(slot));
            }
        }
        trees.push_back(LabeledTree::from_nodes(std::move(nodes)));

        std::string id = std::to_string(i);
        id.insert(0, id_width - id.size(), '0');
        meta.push_back({"t" + id, {{generator_covariate_name(), covariate}}});
    }
    return DataSet::from_parts(std::move(trees), std::move(meta));
}

} // namespace treepca
