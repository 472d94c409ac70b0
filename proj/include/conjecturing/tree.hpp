#pragma once

// Structure shared by real-valued and boolean expression trees: a flat
// post-order node array where every subtree occupies a contiguous range.

#include <algorithm>
#include <concepts>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace conjecturing {

enum class NodeKind : std::uint8_t { Leaf, Unary, Binary };

struct Node {
    NodeKind kind = NodeKind::Leaf;
    // Column index for leaves, operator index into the registry otherwise.
    std::uint32_t id = 0;
    // Node count of the subtree rooted here.
    std::uint32_t size = 1;
    // Post-order positions of the children, -1 when absent.
    std::int32_t left = -1;
    std::int32_t right = -1;

    friend bool operator==(const Node&, const Node&) = default;
};

// Total order on single labels used by the commutative tie-break. Binary
// labels sort below unary, unary below leaves; among leaves the column that
// comes first in the dataset ranks highest.
constexpr std::uint64_t label_key(NodeKind kind, std::uint32_t id) noexcept {
    switch (kind) {
    case NodeKind::Binary: return id;
    case NodeKind::Unary: return (std::uint64_t{1} << 32) | id;
    case NodeKind::Leaf: break;
    }
    return (std::uint64_t{2} << 32) | (0xFFFFFFFFu - id);
}

constexpr std::uint64_t label_key(const Node& n) noexcept { return label_key(n.kind, n.id); }

// Lexicographic comparison of two suffix-ordered label ranges.
inline std::strong_ordering compare_labels(std::span<const Node> a, std::span<const Node> b) {
    const auto n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto ka = label_key(a[i]);
        const auto kb = label_key(b[i]);
        if (ka != kb) return ka <=> kb;
    }
    return a.size() <=> b.size();
}

template <class Tag>
class BasicTree {
public:
    BasicTree() = default;

    static BasicTree leaf(std::uint32_t column) {
        BasicTree t;
        t.nodes_.push_back(Node{NodeKind::Leaf, column, 1, -1, -1});
        return t;
    }

    static BasicTree unary(std::uint32_t op, const BasicTree& child) {
        BasicTree t = child;
        const auto c = static_cast<std::int32_t>(t.nodes_.size()) - 1;
        t.nodes_.push_back(Node{NodeKind::Unary, op, child.complexity() + 1, c, -1});
        return t;
    }

    static BasicTree binary(std::uint32_t op, const BasicTree& lhs, const BasicTree& rhs) {
        BasicTree t;
        t.nodes_.reserve(lhs.nodes_.size() + rhs.nodes_.size() + 1);
        t.nodes_ = lhs.nodes_;
        const auto offset = static_cast<std::int32_t>(lhs.nodes_.size());
        for (Node n : rhs.nodes_) {
            if (n.left >= 0) n.left += offset;
            if (n.right >= 0) n.right += offset;
            t.nodes_.push_back(n);
        }
        t.nodes_.push_back(Node{NodeKind::Binary, op, lhs.complexity() + rhs.complexity() + 1,
                                offset - 1, static_cast<std::int32_t>(t.nodes_.size()) - 1});
        return t;
    }

    // Adopts a post-order array, checking that sizes and child links agree.
    static BasicTree from_postorder(std::vector<Node> nodes) {
        if (nodes.empty()) throw StructuralError("empty expression tree");
        for (std::size_t p = 0; p < nodes.size(); ++p) {
            const Node& n = nodes[p];
            const auto pos = static_cast<std::int32_t>(p);
            std::uint32_t expected = 1;
            switch (n.kind) {
            case NodeKind::Leaf:
                if (n.left != -1 || n.right != -1) throw StructuralError("leaf with children");
                break;
            case NodeKind::Unary:
                if (n.left != pos - 1 || n.right != -1) throw StructuralError("malformed unary node");
                expected += nodes[p - 1].size;
                break;
            case NodeKind::Binary:
                if (n.right != pos - 1 || n.left < 0 ||
                    n.left != pos - 1 - static_cast<std::int32_t>(nodes[p - 1].size))
                    throw StructuralError("malformed binary node");
                expected += nodes[p - 1].size + nodes[static_cast<std::size_t>(n.left)].size;
                break;
            }
            if (n.size != expected) throw StructuralError("subtree size mismatch");
        }
        if (nodes.back().size != nodes.size()) throw StructuralError("tree is a forest");
        BasicTree t;
        t.nodes_ = std::move(nodes);
        return t;
    }

    std::span<const Node> nodes() const noexcept { return nodes_; }
    const Node& root() const { return nodes_.back(); }
    std::size_t root_pos() const noexcept { return nodes_.size() - 1; }

    std::uint32_t complexity() const noexcept { return static_cast<std::uint32_t>(nodes_.size()); }

    std::size_t count(NodeKind kind) const {
        return static_cast<std::size_t>(
            std::count_if(nodes_.begin(), nodes_.end(), [kind](const Node& n) { return n.kind == kind; }));
    }

    std::vector<std::uint32_t> leaves() const {
        std::vector<std::uint32_t> out;
        for (const Node& n : nodes_)
            if (n.kind == NodeKind::Leaf) out.push_back(n.id);
        return out;
    }

    // Labels of the subtree rooted at `pos`, in suffix order.
    std::span<const Node> subtree_span(std::size_t pos) const {
        const Node& n = nodes_.at(pos);
        return std::span<const Node>(nodes_).subspan(pos + 1 - n.size, n.size);
    }

    BasicTree subtree(std::size_t pos) const {
        const auto span = subtree_span(pos);
        const auto offset = static_cast<std::int32_t>(pos + 1 - span.size());
        std::vector<Node> out(span.begin(), span.end());
        for (Node& n : out) {
            if (n.left >= 0) n.left -= offset;
            if (n.right >= 0) n.right -= offset;
        }
        BasicTree t;
        t.nodes_ = std::move(out);
        return t;
    }

    friend bool operator==(const BasicTree&, const BasicTree&) = default;

private:
    std::vector<Node> nodes_;
};

// Suffix-ordered label string. Fixed-width tokens make plain string
// comparison agree with compare_labels().
inline std::string label_string(std::span<const Node> labels) {
    std::string out;
    out.reserve(labels.size() * 12);
    char buf[16];
    for (const Node& n : labels) {
        const auto key = label_key(n);
        const char kind = n.kind == NodeKind::Binary ? 'b' : n.kind == NodeKind::Unary ? 'u' : 'v';
        std::snprintf(buf, sizeof buf, "%c%08x", kind, static_cast<unsigned>(key & 0xFFFFFFFFu));
        out += buf;
    }
    return out;
}

template <class Tag>
std::string canonical_label_string(const BasicTree<Tag>& tree) {
    return label_string(tree.nodes());
}

// Commutative-child rule: the left subtree must have more nodes, or as many
// nodes and a larger label string. `commutative(op)` reports whether a binary
// operator index is commutative.
template <class Tag, class CommutativeFn>
    requires std::predicate<CommutativeFn&, std::uint32_t>
bool is_canonical(const BasicTree<Tag>& tree, CommutativeFn&& commutative) {
    const auto nodes = tree.nodes();
    for (std::size_t p = 0; p < nodes.size(); ++p) {
        const Node& n = nodes[p];
        if (n.kind != NodeKind::Binary || !commutative(n.id)) continue;
        const auto l = static_cast<std::size_t>(n.left);
        const auto r = static_cast<std::size_t>(n.right);
        if (nodes[l].size > nodes[r].size) continue;
        if (nodes[l].size < nodes[r].size) return false;
        if (compare_labels(tree.subtree_span(l), tree.subtree_span(r)) != std::strong_ordering::greater)
            return false;
    }
    return true;
}

// True when no column appears on two leaves.
template <class Tag>
bool has_distinct_leaves(const BasicTree<Tag>& tree) {
    auto ids = tree.leaves();
    std::sort(ids.begin(), ids.end());
    return std::adjacent_find(ids.begin(), ids.end()) == ids.end();
}

} // namespace conjecturing
