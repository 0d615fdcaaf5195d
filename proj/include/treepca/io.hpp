#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "tree_core.hpp"
#include "treeline.hpp"

namespace treepca {

/// Dataset files are JSON Lines: one record per line, e.g.
///   {"covariates":{"age":34.5},"id":"t01","nodes":["r","r.0","r.0.1"]}
/// Writing is canonical (records in id order, nodes in NodeId order, keys
/// alphabetical), so equal data sets serialize to identical bytes.

inline DataSet dataset_from_string(std::string_view text) {
    std::vector<LabeledTree> trees;
    std::vector<TreeRecord> meta;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        const std::string where = "line " + std::to_string(line_no);
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument(where + ", column " + std::to_string(e.byte) + ": " +
                                        e.what());
        }
        if (!record.is_object() || !record.contains("id") || !record["id"].is_string())
            throw std::invalid_argument(where + ": record needs a string 'id'");
        if (!record.contains("nodes") || !record["nodes"].is_array())
            throw std::invalid_argument(where + ": record needs a 'nodes' array");

        TreeRecord rec;
        rec.id = record["id"].get<std::string>();
        if (record.contains("covariates")) {
            if (!record["covariates"].is_object())
                throw std::invalid_argument(where + ": 'covariates' must be an object");
            for (const auto& [name, value] : record["covariates"].items()) {
                if (!value.is_number())
                    throw std::invalid_argument(where + ": covariate '" + name +
                                                "' is not a number");
                rec.covariates[name] = value.get<double>();
            }
        }
        std::vector<NodeId> nodes;
        for (const auto& entry : record["nodes"]) {
            if (!entry.is_string())
                throw std::invalid_argument(where + ": node ids must be strings");
            try {
                nodes.push_back(NodeId::parse(entry.get<std::string>()));
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(where + " (id '" + rec.id + "'): " + e.what());
            }
        }
        auto violations = LabeledTree::validate(nodes);
        if (!violations.empty())
            throw std::invalid_argument(where + " (id '" + rec.id + "'): " +
                                        violations.front().to_string());
        trees.push_back(LabeledTree::from_nodes(std::move(nodes)));
        meta.push_back(std::move(rec));
    }
    return DataSet::from_parts(std::move(trees), std::move(meta));
}

inline std::string dataset_to_string(const DataSet& ds) {
    std::vector<std::size_t> order(ds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ds.meta()[a].id < ds.meta()[b].id;
    });
    std::string out;
    for (std::size_t i : order) {
        nlohmann::json record;
        record["id"] = ds.meta()[i].id;
        record["covariates"] = nlohmann::json::object();
        for (const auto& [name, value] : ds.meta()[i].covariates)
            record["covariates"][name] = value;
        nlohmann::json nodes = nlohmann::json::array();
        for (const NodeId& v : ds.trees()[i].nodes()) nodes.push_back(v.str());
        record["nodes"] = std::move(nodes);
        out += record.dump();
        out += '\n';
    }
    return out;
}

inline DataSet read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return dataset_from_string(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

inline void write_dataset(const DataSet& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << dataset_to_string(ds);
    if (!out) throw std::runtime_error("write failed: '" + path + "'");
}

/// Plain tree files (one NodeId per line) carry support/intersection output
/// and user-supplied starting trees.
inline LabeledTree tree_from_string(std::string_view text) {
    std::vector<NodeId> nodes;
    std::size_t pos = 0, line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        if (line.empty()) continue;
        try {
            nodes.push_back(NodeId::parse(line));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return LabeledTree::from_nodes(std::move(nodes));
}

inline std::string tree_to_string(const LabeledTree& t) {
    std::string out;
    for (const NodeId& v : t.nodes()) {
        out += v.str();
        out += '\n';
    }
    return out;
}

inline LabeledTree read_tree_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return tree_from_string(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

} // namespace detail

/// CSV emissions. Schemas are fixed: decomposition rows are
/// index,leaf,weight_sum,path with the path semicolon-joined.

inline std::string decomposition_to_csv(const Decomposition& d) {
    std::string out = "index,leaf,weight_sum,path\n";
    for (const Component& c : d.components) {
        out += std::to_string(c.index);
        out += ',';
        out += c.path.leaf().str();
        out += ',';
        out += std::to_string(c.weight_sum);
        out += ',';
        for (std::size_t i = 0; i < c.path.nodes().size(); ++i) {
            if (i) out += ';';
            out += c.path.nodes()[i].str();
        }
        out += '\n';
    }
    return out;
}

/// Sidecar carrying the decomposition context that the CSV rows do not.
inline std::string decomposition_sidecar_json(const Decomposition& d) {
    nlohmann::json out;
    out["direction"] = to_string(d.direction);
    nlohmann::json l0 = nlohmann::json::array();
    for (const NodeId& v : d.start.nodes()) l0.push_back(v.str());
    out["l0"] = std::move(l0);
    out["n"] = d.components.size();
    return out.dump(2) + "\n";
}

inline std::string curve_to_csv(const std::vector<CurvePoint>& points) {
    std::string out = "removed,explained\n";
    for (const CurvePoint& p : points)
        out += std::to_string(p.removed) + "," + std::to_string(p.explained) + "\n";
    return out;
}

inline std::string scaled_curve_to_csv(const std::vector<ScaledCurvePoint>& points) {
    std::string out = "removed,explained\n";
    for (const ScaledCurvePoint& p : points)
        out += detail::format_double(p.removed) + "," + detail::format_double(p.explained) + "\n";
    return out;
}

inline std::string pvalue_curve_to_csv(const std::vector<std::pair<std::int64_t, double>>& points) {
    std::string out = "removed,p_value\n";
    for (const auto& [removed, p] : points) {
        out += std::to_string(removed);
        out += ',';
        out += std::isnan(p) ? "nan" : detail::format_double(p);
        out += '\n';
    }
    return out;
}

inline std::string split_to_csv(const std::vector<SplitScatterPoint>& points) {
    std::string out = "tree_id,x,y\n";
    for (const SplitScatterPoint& p : points)
        out += p.tree_id + "," + detail::format_double(p.x) + "," + detail::format_double(p.y) +
               "\n";
    return out;
}

inline std::string split_sidecar_json(const SplitResult& split) {
    nlohmann::json out;
    nlohmann::json set1 = nlohmann::json::array(), set2 = nlohmann::json::array();
    for (const TreePath& p : split.set1) set1.push_back(p.leaf().str());
    for (const TreePath& p : split.set2) set2.push_back(p.leaf().str());
    out["set1_leaves"] = std::move(set1);
    out["set2_leaves"] = std::move(set2);
    return out.dump(2) + "\n";
}

inline std::string layout_to_csv(const std::vector<LayoutPoint>& points) {
    std::string out = "node,radius,angle_deg\n";
    for (const LayoutPoint& p : points)
        out += p.node.str() + "," + detail::format_double(p.radius) + "," +
               detail::format_double(p.angle_deg) + "\n";
    return out;
}

/// Minimal SVG of a radial layout: one ring per depth, one dot per node.
inline std::string layout_to_svg(const std::vector<LayoutPoint>& points) {
    constexpr double scale = 40.0;
    constexpr double pi = 3.14159265358979323846;
    double max_radius = 0.0;
    for (const LayoutPoint& p : points) max_radius = std::max(max_radius, p.radius);
    double extent = (max_radius + 1.0) * scale;
    double size = 2.0 * extent;

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      detail::format_double(size) + "\" height=\"" + detail::format_double(size) +
                      "\" viewBox=\"0 0 " + detail::format_double(size) + " " +
                      detail::format_double(size) + "\">\n";
    for (int r = 1; r <= static_cast<int>(max_radius); ++r)
        out += "  <circle cx=\"" + detail::format_double(extent) + "\" cy=\"" +
               detail::format_double(extent) + "\" r=\"" + detail::format_double(r * scale) +
               "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    for (const LayoutPoint& p : points) {
        double theta = p.angle_deg * pi / 180.0;
        double cx = extent + p.radius * scale * std::cos(theta);
        double cy = extent - p.radius * scale * std::sin(theta);
        out += "  <circle cx=\"" + detail::format_double(cx) + "\" cy=\"" +
               detail::format_double(cy) + "\" r=\"2.5\" fill=\"#1f3b73\"><title>" + p.node.str() +
               "</title></circle>\n";
    }
    out += "</svg>\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed: '" + path + "'");
}

} // namespace treepca
