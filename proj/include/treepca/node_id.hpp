#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treepca {

/// Canonical label of a tree node: the sequence of child-slot indices on the
/// way down from the root. The root is the empty sequence. Textual form is
/// "r", "r.0", "r.0.1", ... (grammar: id := "r" ( "." uint )*, decimal uints
/// without leading zeros).
///
/// Ordering is lexicographic on the slot sequence with a proper prefix
/// sorting before any of its extensions, so sorted order is exactly a
/// preorder walk of any tree the ids belong to. This order is also the
/// "leftmost-first" order used for tie-breaking.
class NodeId {
public:
    NodeId() = default; // root

    explicit NodeId(std::vector<std::uint64_t> slots) : slots_(std::move(slots)) {}

    static NodeId root() { return NodeId{}; }

    /// Parses the textual form. Throws std::invalid_argument on anything
    /// outside the grammar (missing "r", empty component, leading zeros,
    /// non-digit characters, slot overflow).
    static NodeId parse(std::string_view text) {
        if (text.empty() || text.front() != 'r')
            throw std::invalid_argument("invalid node id '" + std::string(text) + "': must start with 'r'");
        std::vector<std::uint64_t> slots;
        std::size_t i = 1;
        while (i < text.size()) {
            if (text[i] != '.')
                throw std::invalid_argument("invalid node id '" + std::string(text) + "': expected '.'");
            ++i;
            std::size_t start = i;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
            if (i == start)
                throw std::invalid_argument("invalid node id '" + std::string(text) + "': empty slot");
            if (text[start] == '0' && i - start > 1)
                throw std::invalid_argument("invalid node id '" + std::string(text) + "': leading zero");
            std::uint64_t value = 0;
            for (std::size_t j = start; j < i; ++j) {
                std::uint64_t digit = static_cast<std::uint64_t>(text[j] - '0');
                if (value > (UINT64_MAX - digit) / 10)
                    throw std::invalid_argument("invalid node id '" + std::string(text) + "': slot too large");
                value = value * 10 + digit;
            }
            slots.push_back(value);
        }
        return NodeId(std::move(slots));
    }

    std::string str() const {
        std::string out = "r";
        for (std::uint64_t s : slots_) {
            out += '.';
            out += std::to_string(s);
        }
        return out;
    }

    bool is_root() const { return slots_.empty(); }

    std::size_t depth() const { return slots_.size(); }

    /// Id with the last slot removed. The root has no parent.
    NodeId parent() const {
        if (slots_.empty()) throw std::logic_error("root has no parent");
        return NodeId(std::vector<std::uint64_t>(slots_.begin(), slots_.end() - 1));
    }

    NodeId child(std::uint64_t slot) const {
        std::vector<std::uint64_t> s = slots_;
        s.push_back(slot);
        return NodeId(std::move(s));
    }

    std::uint64_t last_slot() const {
        if (slots_.empty()) throw std::logic_error("root has no slot");
        return slots_.back();
    }

    const std::vector<std::uint64_t>& slots() const { return slots_; }

    /// True when this id is an ancestor of `other` or equal to it.
    bool is_prefix_of(const NodeId& other) const {
        if (slots_.size() > other.slots_.size()) return false;
        for (std::size_t i = 0; i < slots_.size(); ++i)
            if (slots_[i] != other.slots_[i]) return false;
        return true;
    }

    bool operator==(const NodeId& other) const = default;
    auto operator<=>(const NodeId& other) const = default;

private:
    std::vector<std::uint64_t> slots_;
};

inline std::ostream& operator<<(std::ostream& os, const NodeId& id) { return os << id.str(); }

} // namespace treepca

template <>
struct std::hash<treepca::NodeId> {
    std::size_t operator()(const treepca::NodeId& id) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::uint64_t s : id.slots()) {
            h ^= s;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};
