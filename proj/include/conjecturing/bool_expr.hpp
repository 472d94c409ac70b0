#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "tree.hpp"

namespace conjecturing {

struct BoolTag {};
using BoolExpressionTree = BasicTree<BoolTag>;

enum class BoolOpKind : std::uint8_t { Not, And, Or, Xor, Implies };

struct BoolOp {
    BoolOpKind kind;
    std::string id;
    std::string symbol;
    bool commutative;
};

class BoolRegistry {
public:
    BoolRegistry() : BoolRegistry(std::vector<std::string>{"not", "and", "or", "xor", "implies"}) {}

    explicit BoolRegistry(const std::vector<std::string>& names) {
        for (const auto& name : names) {
            if (name == "not" || name == "~" || name == "!") {
                unary_.push_back({BoolOpKind::Not, "not", "~", false});
            } else if (name == "and" || name == "&") {
                binary_.push_back({BoolOpKind::And, "and", "&", true});
            } else if (name == "or" || name == "|") {
                binary_.push_back({BoolOpKind::Or, "or", "|", true});
            } else if (name == "xor" || name == "^") {
                binary_.push_back({BoolOpKind::Xor, "xor", "^", true});
            } else if (name == "implies" || name == "->") {
                binary_.push_back({BoolOpKind::Implies, "implies", "->", false});
            } else {
                throw ConfigError("unknown property operator '" + name + "'; valid names: not,and,or,xor,implies");
            }
        }
        std::vector<std::string> seen;
        for (const auto& op : unary_) seen.push_back(op.id);
        for (const auto& op : binary_) seen.push_back(op.id);
        for (std::size_t i = 0; i < seen.size(); ++i)
            for (std::size_t j = i + 1; j < seen.size(); ++j)
                if (seen[i] == seen[j]) throw ConfigError("duplicate operator id: " + seen[i]);
    }

    const std::vector<BoolOp>& unary() const noexcept { return unary_; }
    const std::vector<BoolOp>& binary() const noexcept { return binary_; }
    bool commutative(std::uint32_t op) const { return binary_.at(op).commutative; }

    std::optional<std::uint32_t> find(BoolOpKind kind) const {
        const auto& v = kind == BoolOpKind::Not ? unary_ : binary_;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i].kind == kind) return static_cast<std::uint32_t>(i);
        return std::nullopt;
    }

private:
    std::vector<BoolOp> unary_;
    std::vector<BoolOp> binary_;
};

inline bool apply_bool(BoolOpKind kind, bool a, bool b) noexcept {
    switch (kind) {
    case BoolOpKind::Not: return !a;
    case BoolOpKind::And: return a && b;
    case BoolOpKind::Or: return a || b;
    case BoolOpKind::Xor: return a != b;
    case BoolOpKind::Implies: return !a || b;
    }
    return false;
}

// Two-valued evaluation; a missing input (-1) anywhere makes the result
// missing (std::nullopt).
inline std::optional<bool> eval_bool(const BoolExpressionTree& expr, const BoolRegistry& ops,
                                     std::span<const std::int8_t> row) {
    const auto nodes = expr.nodes();
    std::vector<std::uint8_t> vals(nodes.size());
    bool missing = false;
    for (std::size_t p = 0; p < nodes.size(); ++p) {
        const Node& n = nodes[p];
        switch (n.kind) {
        case NodeKind::Leaf:
            if (n.id >= row.size()) throw StructuralError("property index out of range: " + std::to_string(n.id));
            if (row[n.id] < 0) missing = true;
            vals[p] = row[n.id] > 0;
            break;
        case NodeKind::Unary:
            vals[p] = apply_bool(ops.unary().at(n.id).kind, vals[static_cast<std::size_t>(n.left)], false);
            break;
        case NodeKind::Binary:
            vals[p] = apply_bool(ops.binary().at(n.id).kind, vals[static_cast<std::size_t>(n.left)],
                                 vals[static_cast<std::size_t>(n.right)]);
            break;
        }
    }
    if (missing) return std::nullopt;
    return vals.back() != 0;
}

inline bool is_canonical(const BoolExpressionTree& expr, const BoolRegistry& ops) {
    return is_canonical(expr, [&ops](std::uint32_t op) { return ops.commutative(op); });
}

namespace detail {

struct BoolRendered {
    std::string text;
    bool atom;
};

inline BoolRendered render_bool(const BoolExpressionTree& expr, const BoolRegistry& ops,
                                std::span<const std::string> names, std::size_t pos) {
    const Node& n = expr.nodes()[pos];
    auto wrap = [](const BoolRendered& r) { return r.atom ? r.text : "(" + r.text + ")"; };
    switch (n.kind) {
    case NodeKind::Leaf:
        if (n.id >= names.size()) throw StructuralError("property index out of range: " + std::to_string(n.id));
        return {names[n.id], true};
    case NodeKind::Unary:
        return {"~" + wrap(render_bool(expr, ops, names, static_cast<std::size_t>(n.left))), true};
    case NodeKind::Binary: {
        const auto l = render_bool(expr, ops, names, static_cast<std::size_t>(n.left));
        const auto r = render_bool(expr, ops, names, static_cast<std::size_t>(n.right));
        return {wrap(l) + ops.binary().at(n.id).symbol + wrap(r), false};
    }
    }
    throw StructuralError("corrupt node kind");
}

} // namespace detail

// `~e`, `a&b`, `a|b`, `a^b` (xor), `a->b`; compound operands parenthesized.
inline std::string to_canonical_string(const BoolExpressionTree& expr, const BoolRegistry& ops,
                                       std::span<const std::string> names) {
    return detail::render_bool(expr, ops, names, expr.root_pos()).text;
}

} // namespace conjecturing
