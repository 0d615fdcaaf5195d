#include <algorithm>
#include <random>
#include <vector>

#include <catch_amalgamated.hpp>

#include "treepca/node_id.hpp"

using treepca::NodeId;

TEST_CASE("node id text form round-trips") {
    for (const char* text : {"r", "r.0", "r.0.1", "r.12.0.7", "r.5000000000",
                             "r.18446744073709551615"}) {
        CHECK(NodeId::parse(text).str() == text);
    }
}

TEST_CASE("node id grammar rejects malformed input") {
    for (const char* text : {"", "x", "r.", "r..0", "r.01", "r.00", "r.-1", "r.1a", " r", "r.1 ",
                             "R", "r.18446744073709551616"}) {
        CHECK_THROWS_AS(NodeId::parse(text), std::invalid_argument);
    }
}

TEST_CASE("parent drops the last slot; the root has none") {
    CHECK(NodeId::parse("r.0.1").parent() == NodeId::parse("r.0"));
    CHECK(NodeId::parse("r.5").parent() == NodeId::root());
    CHECK_THROWS(NodeId::root().parent());
}

TEST_CASE("order is lexicographic with prefixes first") {
    CHECK(NodeId::parse("r") < NodeId::parse("r.0"));
    CHECK(NodeId::parse("r.0") < NodeId::parse("r.0.0"));
    CHECK(NodeId::parse("r.0.9") < NodeId::parse("r.1"));
    CHECK(NodeId::parse("r.2") < NodeId::parse("r.10")); // numeric slots, not strings
}

TEST_CASE("random ids: parse/str identity and order consistency") {
    std::mt19937_64 rng(7);
    std::vector<NodeId> ids;
    for (int i = 0; i < 300; ++i) {
        std::vector<std::uint64_t> slots(rng() % 6);
        for (auto& s : slots) s = rng() % 12;
        ids.emplace_back(std::move(slots));
    }
    for (const NodeId& a : ids) {
        CHECK(NodeId::parse(a.str()) == a);
        if (!a.is_root()) {
            CHECK(a.parent().is_prefix_of(a));
            CHECK(a.parent() < a);
        }
    }
    // prefix implies order
    for (const NodeId& a : ids)
        for (const NodeId& b : ids)
            if (a.is_prefix_of(b) && !(a == b)) CHECK(a < b);
}
