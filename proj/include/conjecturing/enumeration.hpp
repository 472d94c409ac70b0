#pragma once

// Enumeration of unlabeled tree shapes by (unary, binary) budget and of their
// canonical labelings.
//
// Order of the candidate stream, which the engines rely on for determinism:
//   1. budgets by complexity, then by binary-node count descending;
//   2. within a budget, shapes by preorder arity string (B < L < U);
//   3. within a shape, labelings lexicographically by the suffix-ordered
//      sequence of choices (leaf choices in the given invariant order,
//      operators in registry order).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expr.hpp"
#include "tree.hpp"

namespace conjecturing {

struct ShapeBudget {
    std::uint32_t unary = 0;
    std::uint32_t binary = 0;

    std::uint32_t complexity() const noexcept { return unary + 2 * binary + 1; }
    std::uint32_t leaves() const noexcept { return binary + 1; }
    friend bool operator==(const ShapeBudget&, const ShapeBudget&) = default;
};

inline std::vector<ShapeBudget> shape_schedule(std::uint32_t max_complexity) {
    std::vector<ShapeBudget> out;
    for (std::uint32_t c = 1; c <= max_complexity; ++c) {
        for (std::uint32_t b = (c - 1) / 2 + 1; b-- > 0;) out.push_back({c - 1 - 2 * b, b});
    }
    return out;
}

struct ShapeTag {};
// A tree whose labels are irrelevant; only arities and links matter.
using UnlabeledShape = BasicTree<ShapeTag>;

inline std::string preorder_arity_string(std::span<const Node> nodes, std::size_t pos) {
    const Node& n = nodes[pos];
    switch (n.kind) {
    case NodeKind::Leaf: return "L";
    case NodeKind::Unary: return "U" + preorder_arity_string(nodes, static_cast<std::size_t>(n.left));
    case NodeKind::Binary:
        return "B" + preorder_arity_string(nodes, static_cast<std::size_t>(n.left)) +
               preorder_arity_string(nodes, static_cast<std::size_t>(n.right));
    }
    return {};
}

template <class Tag>
std::string preorder_arity_string(const BasicTree<Tag>& t) {
    return preorder_arity_string(t.nodes(), t.root_pos());
}

namespace detail {

inline std::vector<UnlabeledShape> build_shapes(std::uint32_t u, std::uint32_t b) {
    std::vector<UnlabeledShape> out;
    if (u == 0 && b == 0) {
        out.push_back(UnlabeledShape::leaf(0));
        return out;
    }
    if (u > 0)
        for (const auto& child : build_shapes(u - 1, b)) out.push_back(UnlabeledShape::unary(0, child));
    if (b > 0) {
        for (std::uint32_t bl = 0; bl < b; ++bl)
            for (std::uint32_t ul = 0; ul <= u; ++ul) {
                const auto lefts = build_shapes(ul, bl);
                const auto rights = build_shapes(u - ul, b - 1 - bl);
                for (const auto& l : lefts)
                    for (const auto& r : rights) out.push_back(UnlabeledShape::binary(0, l, r));
            }
    }
    return out;
}

} // namespace detail

// Every plane tree with exactly `budget.unary` unary and `budget.binary`
// binary internal nodes, once each, in preorder-string order.
inline std::vector<UnlabeledShape> generate_shapes(ShapeBudget budget) {
    auto shapes = detail::build_shapes(budget.unary, budget.binary);
    std::vector<std::pair<std::string, std::size_t>> keyed;
    keyed.reserve(shapes.size());
    for (std::size_t i = 0; i < shapes.size(); ++i) keyed.emplace_back(preorder_arity_string(shapes[i]), i);
    std::sort(keyed.begin(), keyed.end());
    std::vector<UnlabeledShape> out;
    out.reserve(shapes.size());
    for (const auto& [key, i] : keyed) out.push_back(std::move(shapes[i]));
    return out;
}

// Walks all canonical labelings of one shape, computing node values bottom-up
// as labels are assigned so that each candidate costs one node evaluation.
//
// Algebra requirements:
//   Slot                                   per-node value storage
//   size_t leaf_count() const              number of labelable leaves
//   uint32_t leaf_column(size_t ord) const column index of leaf choice `ord`
//   size_t unary_count() const, binary_count() const
//   bool commutative(uint32_t op) const
//   Slot make_slot() const
//   bool load_leaf(Slot&, size_t ord) const
//   bool apply_unary(Slot&, uint32_t op, const Slot&) const
//   bool apply_binary(Slot&, uint32_t op, const Slot&, const Slot&) const
// The load/apply calls return false to prune the whole subtree of labelings
// below that node (an undefined value poisons every enclosing expression).
template <class Algebra>
class Labeler {
public:
    using Slot = typename Algebra::Slot;
    // Receives the labeled post-order nodes and the root's slot; return false to stop.
    using Visitor = std::function<bool(std::span<const Node>, const Slot&)>;

    explicit Labeler(const Algebra& algebra) : alg_(algebra) {}

    // Labels `shape`; when `first_leaf` is set only that choice is tried for
    // the first suffix-order position (always a leaf). Returns false if the
    // visitor asked to stop.
    bool run(const UnlabeledShape& shape, const Visitor& visit, std::optional<std::size_t> first_leaf = std::nullopt) {
        const auto nodes = shape.nodes();
        labels_.assign(nodes.begin(), nodes.end());
        if (shape.count(NodeKind::Leaf) > alg_.leaf_count()) return true;
        while (slots_.size() < labels_.size()) slots_.push_back(alg_.make_slot());
        used_.assign(alg_.leaf_count(), 0);
        visit_ = &visit;
        first_leaf_ = first_leaf;
        stopped_ = false;
        descend(0);
        return !stopped_;
    }

private:
    void descend(std::size_t pos) {
        if (pos == labels_.size()) {
            if (!(*visit_)(labels_, slots_[pos - 1])) stopped_ = true;
            return;
        }
        Node& node = labels_[pos];
        Slot& slot = slots_[pos];
        switch (node.kind) {
        case NodeKind::Leaf: {
            std::size_t lo = 0, hi = alg_.leaf_count();
            if (pos == 0 && first_leaf_) {
                lo = *first_leaf_;
                hi = lo + 1;
            }
            for (std::size_t ord = lo; ord < hi && !stopped_; ++ord) {
                if (used_[ord]) continue;
                node.id = alg_.leaf_column(ord);
                if (!alg_.load_leaf(slot, ord)) continue;
                used_[ord] = 1;
                descend(pos + 1);
                used_[ord] = 0;
            }
            break;
        }
        case NodeKind::Unary: {
            const Slot& child = slots_[static_cast<std::size_t>(node.left)];
            const auto n = static_cast<std::uint32_t>(alg_.unary_count());
            for (std::uint32_t op = 0; op < n && !stopped_; ++op) {
                node.id = op;
                if (alg_.apply_unary(slot, op, child)) descend(pos + 1);
            }
            break;
        }
        case NodeKind::Binary: {
            const auto l = static_cast<std::size_t>(node.left);
            const auto r = static_cast<std::size_t>(node.right);
            bool left_larger = labels_[l].size > labels_[r].size;
            if (labels_[l].size == labels_[r].size) {
                const std::span<const Node> all(labels_);
                left_larger = compare_labels(all.subspan(l + 1 - labels_[l].size, labels_[l].size),
                                             all.subspan(r + 1 - labels_[r].size, labels_[r].size)) ==
                              std::strong_ordering::greater;
            }
            const auto n = static_cast<std::uint32_t>(alg_.binary_count());
            for (std::uint32_t op = 0; op < n && !stopped_; ++op) {
                if (alg_.commutative(op) && !left_larger) continue;
                node.id = op;
                if (alg_.apply_binary(slot, op, slots_[l], slots_[r])) descend(pos + 1);
            }
            break;
        }
        }
    }

    const Algebra& alg_;
    std::vector<Node> labels_;
    std::vector<Slot> slots_;
    std::vector<std::uint8_t> used_;
    const Visitor* visit_ = nullptr;
    std::optional<std::size_t> first_leaf_;
    bool stopped_ = false;
};

// Label-only algebra: enumerates structure without evaluating anything.
class StructuralAlgebra {
public:
    struct Slot {};

    StructuralAlgebra(std::vector<std::uint32_t> columns, std::size_t unary, std::vector<bool> commutative)
        : columns_(std::move(columns)), unary_(unary), commutative_(std::move(commutative)) {}

    std::size_t leaf_count() const noexcept { return columns_.size(); }
    std::uint32_t leaf_column(std::size_t ord) const { return columns_[ord]; }
    std::size_t unary_count() const noexcept { return unary_; }
    std::size_t binary_count() const noexcept { return commutative_.size(); }
    bool commutative(std::uint32_t op) const { return commutative_[op]; }
    Slot make_slot() const { return {}; }
    bool load_leaf(Slot&, std::size_t) const { return true; }
    bool apply_unary(Slot&, std::uint32_t, const Slot&) const { return true; }
    bool apply_binary(Slot&, std::uint32_t, const Slot&, const Slot&) const { return true; }

private:
    std::vector<std::uint32_t> columns_;
    std::size_t unary_;
    std::vector<bool> commutative_;
};

// All canonical labelings of `shape` with distinct invariants from
// `invariants` on the leaves, in the stream order described above.
inline std::vector<ExpressionTree> label_shapes(const UnlabeledShape& shape, const OperatorRegistry& registry,
                                                const std::vector<std::uint32_t>& invariants) {
    std::vector<bool> comm;
    for (const auto& op : registry.binary()) comm.push_back(op.commutative);
    StructuralAlgebra alg(invariants, registry.unary().size(), std::move(comm));
    Labeler<StructuralAlgebra> labeler(alg);
    std::vector<ExpressionTree> out;
    labeler.run(shape, [&out](std::span<const Node> labels, const StructuralAlgebra::Slot&) {
        out.push_back(ExpressionTree::from_postorder({labels.begin(), labels.end()}));
        return true;
    });
    return out;
}

} // namespace conjecturing
