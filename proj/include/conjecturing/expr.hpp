#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "tree.hpp"

namespace conjecturing {

struct RealTag {};
using ExpressionTree = BasicTree<RealTag>;

// Marker used for absent cells in numeric rows and columns.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) noexcept { return std::isnan(v); }

// How a unary operator is written in canonical text.
enum class UnaryForm : std::uint8_t {
    Function,  // name(e)
    PlusOne,   // (e+1)
    MinusOne,  // (e-1)
    TimesTwo,  // (2*e)
    HalfOf,    // (e/2)
    Square,    // e^2
};

enum class BinaryForm : std::uint8_t { Infix, Function };

struct UnaryOp {
    std::string id;
    double (*eval)(double) = nullptr;
    UnaryForm form = UnaryForm::Function;
    std::string symbol;  // function name for UnaryForm::Function
};

struct BinaryOp {
    std::string id;
    double (*eval)(double, double) = nullptr;
    bool commutative = false;
    BinaryForm form = BinaryForm::Infix;
    std::string symbol;
};

class OperatorRegistry {
public:
    OperatorRegistry() = default;

    OperatorRegistry(std::vector<UnaryOp> unary, std::vector<BinaryOp> binary)
        : unary_(std::move(unary)), binary_(std::move(binary)) {
        std::unordered_set<std::string> seen;
        for (const auto& op : unary_)
            if (!seen.insert(op.id).second) throw ConfigError("duplicate operator id: " + op.id);
        for (const auto& op : binary_)
            if (!seen.insert(op.id).second) throw ConfigError("duplicate operator id: " + op.id);
    }

    const std::vector<UnaryOp>& unary() const noexcept { return unary_; }
    const std::vector<BinaryOp>& binary() const noexcept { return binary_; }

    std::optional<std::uint32_t> find_unary(std::string_view id) const {
        for (std::size_t i = 0; i < unary_.size(); ++i)
            if (unary_[i].id == id) return static_cast<std::uint32_t>(i);
        return std::nullopt;
    }

    std::optional<std::uint32_t> find_binary(std::string_view id) const {
        for (std::size_t i = 0; i < binary_.size(); ++i)
            if (binary_[i].id == id) return static_cast<std::uint32_t>(i);
        return std::nullopt;
    }

    bool commutative(std::uint32_t op) const { return binary_.at(op).commutative; }

private:
    std::vector<UnaryOp> unary_;
    std::vector<BinaryOp> binary_;
};

enum class EvalStatus : std::uint8_t { Value, Undefined, Missing };

struct EvalResult {
    EvalStatus status = EvalStatus::Value;
    double value = 0.0;

    bool defined() const noexcept { return status == EvalStatus::Value; }
    friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

// Evaluates `expr` on one row. Missing cells propagate as Missing; any
// non-finite intermediate turns the whole result Undefined.
inline EvalResult evaluate(const ExpressionTree& expr, const OperatorRegistry& ops, std::span<const double> row) {
    const auto nodes = expr.nodes();
    std::vector<double> vals(nodes.size());
    bool missing = false;
    bool undefined = false;
    for (std::size_t p = 0; p < nodes.size(); ++p) {
        const Node& n = nodes[p];
        double v = 0.0;
        switch (n.kind) {
        case NodeKind::Leaf:
            if (n.id >= row.size()) throw StructuralError("leaf index out of range: " + std::to_string(n.id));
            v = row[n.id];
            if (is_missing(v)) missing = true;
            break;
        case NodeKind::Unary:
            if (n.id >= ops.unary().size()) throw StructuralError("unknown unary operator index");
            v = ops.unary()[n.id].eval(vals[static_cast<std::size_t>(n.left)]);
            break;
        case NodeKind::Binary:
            if (n.id >= ops.binary().size()) throw StructuralError("unknown binary operator index");
            v = ops.binary()[n.id].eval(vals[static_cast<std::size_t>(n.left)], vals[static_cast<std::size_t>(n.right)]);
            break;
        }
        if (n.kind != NodeKind::Leaf && !missing && !std::isfinite(v)) undefined = true;
        vals[p] = v;
    }
    if (missing) return {EvalStatus::Missing, kMissing};
    if (undefined || !std::isfinite(vals.back())) return {EvalStatus::Undefined, kMissing};
    return {EvalStatus::Value, vals.back()};
}

inline bool is_canonical(const ExpressionTree& expr, const OperatorRegistry& ops) {
    return is_canonical(expr, [&ops](std::uint32_t op) { return ops.commutative(op); });
}

namespace detail {

struct Rendered {
    std::string text;
    bool atom = true;  // safe to embed without extra parentheses
};

inline std::string wrap(const Rendered& r) { return r.atom ? r.text : "(" + r.text + ")"; }

inline Rendered render(const ExpressionTree& expr, const OperatorRegistry& ops,
                       std::span<const std::string> names, std::size_t pos) {
    const Node& n = expr.nodes()[pos];
    switch (n.kind) {
    case NodeKind::Leaf:
        if (n.id >= names.size()) throw StructuralError("leaf index out of range: " + std::to_string(n.id));
        return {names[n.id], true};
    case NodeKind::Unary: {
        const auto& op = ops.unary().at(n.id);
        const Rendered c = render(expr, ops, names, static_cast<std::size_t>(n.left));
        switch (op.form) {
        case UnaryForm::Function: return {op.symbol + "(" + c.text + ")", true};
        case UnaryForm::PlusOne: return {"(" + wrap(c) + "+1)", true};
        case UnaryForm::MinusOne: return {"(" + wrap(c) + "-1)", true};
        case UnaryForm::TimesTwo: return {"(2*" + wrap(c) + ")", true};
        case UnaryForm::HalfOf: return {"(" + wrap(c) + "/2)", true};
        case UnaryForm::Square: return {wrap(c) + "^2", false};
        }
        break;
    }
    case NodeKind::Binary: {
        const auto& op = ops.binary().at(n.id);
        const Rendered l = render(expr, ops, names, static_cast<std::size_t>(n.left));
        const Rendered r = render(expr, ops, names, static_cast<std::size_t>(n.right));
        if (op.form == BinaryForm::Function) return {op.symbol + "(" + l.text + "," + r.text + ")", true};
        return {wrap(l) + op.symbol + wrap(r), false};
    }
    }
    throw StructuralError("corrupt node kind");
}

} // namespace detail

// Infix text. Compound infix operands are always parenthesized; leaves,
// function calls and the bracketed +1/-1/*2//2 forms are not.
inline std::string to_canonical_string(const ExpressionTree& expr, const OperatorRegistry& ops,
                                       std::span<const std::string> names) {
    return detail::render(expr, ops, names, expr.root_pos()).text;
}

} // namespace conjecturing
