#pragma once

// Parser for the canonical infix grammar, used to check that rendering
// round-trips. Numeric literals only occur inside the special unary forms
// (e+1) (e-1) (2*e) (e/2) and e^2; they are folded back into those
// operators after parsing.

#include <cctype>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "conjecturing/expr.hpp"

namespace testsupport {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ExprParser {
public:
    ExprParser(const conjecturing::OperatorRegistry& ops, std::vector<std::string> names)
        : ops_(ops), names_(std::move(names)) {}

    conjecturing::ExpressionTree parse(const std::string& text) {
        src_ = text;
        pos_ = 0;
        auto ast = expr(0);
        skip();
        if (pos_ != src_.size()) throw ParseError("trailing input at " + std::to_string(pos_));
        return build(*ast);
    }

private:
    struct Ast {
        char kind;  // 'n' number, 'v' variable, 'c' call, 'o' infix
        std::string text;
        double number = 0.0;
        std::vector<std::unique_ptr<Ast>> args;
    };
    using Ptr = std::unique_ptr<Ast>;

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    void expect(char c) {
        if (peek() != c) throw ParseError(std::string("expected '") + c + "' at " + std::to_string(pos_));
        ++pos_;
    }

    static int precedence(char op) {
        switch (op) {
        case '+':
        case '-': return 1;
        case '*':
        case '/': return 2;
        case '^': return 3;
        default: return -1;
        }
    }

    Ptr expr(int min_prec) {
        Ptr lhs = primary();
        while (true) {
            const char op = peek();
            const int p = precedence(op);
            if (p < 0 || p < min_prec) break;
            ++pos_;
            Ptr rhs = expr(op == '^' ? p : p + 1);
            auto node = std::make_unique<Ast>();
            node->kind = 'o';
            node->text = std::string(1, op);
            node->args.push_back(std::move(lhs));
            node->args.push_back(std::move(rhs));
            lhs = std::move(node);
        }
        return lhs;
    }

    Ptr primary() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Ptr inner = expr(0);
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t used = 0;
            const double v = std::stod(src_.substr(pos_), &used);
            pos_ += used;
            auto node = std::make_unique<Ast>();
            node->kind = 'n';
            node->number = v;
            return node;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                id += src_[pos_++];
            auto node = std::make_unique<Ast>();
            node->text = id;
            if (peek() == '(') {
                ++pos_;
                node->kind = 'c';
                node->args.push_back(expr(0));
                while (peek() == ',') {
                    ++pos_;
                    node->args.push_back(expr(0));
                }
                expect(')');
            } else {
                node->kind = 'v';
            }
            return node;
        }
        throw ParseError("unexpected input at " + std::to_string(pos_));
    }

    static bool is_num(const Ast& a, double v) { return a.kind == 'n' && a.number == v; }

    std::uint32_t unary_by_form(conjecturing::UnaryForm form) const {
        for (std::size_t i = 0; i < ops_.unary().size(); ++i)
            if (ops_.unary()[i].form == form) return static_cast<std::uint32_t>(i);
        throw ParseError("registry lacks the operator for a special form");
    }

    conjecturing::ExpressionTree build(const Ast& a) const {
        using conjecturing::ExpressionTree;
        using conjecturing::UnaryForm;
        switch (a.kind) {
        case 'n': throw ParseError("stray numeric literal");
        case 'v':
            for (std::size_t i = 0; i < names_.size(); ++i)
                if (names_[i] == a.text) return ExpressionTree::leaf(static_cast<std::uint32_t>(i));
            throw ParseError("unknown name " + a.text);
        case 'c': {
            if (a.args.size() == 1) {
                for (std::size_t i = 0; i < ops_.unary().size(); ++i) {
                    const auto& op = ops_.unary()[i];
                    if (op.form == UnaryForm::Function && op.symbol == a.text)
                        return ExpressionTree::unary(static_cast<std::uint32_t>(i), build(*a.args[0]));
                }
            } else if (a.args.size() == 2) {
                for (std::size_t i = 0; i < ops_.binary().size(); ++i) {
                    const auto& op = ops_.binary()[i];
                    if (op.form == conjecturing::BinaryForm::Function && op.symbol == a.text)
                        return ExpressionTree::binary(static_cast<std::uint32_t>(i), build(*a.args[0]),
                                                      build(*a.args[1]));
                }
            }
            throw ParseError("unknown function " + a.text);
        }
        default: break;
        }
        const Ast& l = *a.args[0];
        const Ast& r = *a.args[1];
        const char op = a.text[0];
        if (op == '+' && is_num(r, 1)) return ExpressionTree::unary(unary_by_form(UnaryForm::PlusOne), build(l));
        if (op == '-' && is_num(r, 1)) return ExpressionTree::unary(unary_by_form(UnaryForm::MinusOne), build(l));
        if (op == '*' && is_num(l, 2)) return ExpressionTree::unary(unary_by_form(UnaryForm::TimesTwo), build(r));
        if (op == '/' && is_num(r, 2)) return ExpressionTree::unary(unary_by_form(UnaryForm::HalfOf), build(l));
        if (op == '^' && is_num(r, 2)) return ExpressionTree::unary(unary_by_form(UnaryForm::Square), build(l));
        for (std::size_t i = 0; i < ops_.binary().size(); ++i) {
            const auto& b = ops_.binary()[i];
            if (b.form == conjecturing::BinaryForm::Infix && b.symbol == a.text)
                return ExpressionTree::binary(static_cast<std::uint32_t>(i), build(l), build(r));
        }
        throw ParseError("registry lacks infix operator " + a.text);
    }

    const conjecturing::OperatorRegistry& ops_;
    std::vector<std::string> names_;
    std::string src_;
    std::size_t pos_ = 0;
};

} // namespace testsupport
