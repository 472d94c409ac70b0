#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"

namespace conjecturing {

namespace ops {

inline std::vector<UnaryOp> all_unary() {
    return {
        {"plus1", [](double x) { return x + 1.0; }, UnaryForm::PlusOne, ""},
        {"minus1", [](double x) { return x - 1.0; }, UnaryForm::MinusOne, ""},
        {"times2", [](double x) { return 2.0 * x; }, UnaryForm::TimesTwo, ""},
        {"half", [](double x) { return x / 2.0; }, UnaryForm::HalfOf, ""},
        {"square", [](double x) { return x * x; }, UnaryForm::Square, ""},
        {"sqrt", [](double x) { return std::sqrt(x); }, UnaryForm::Function, "sqrt"},
        {"floor", [](double x) { return std::floor(x); }, UnaryForm::Function, "floor"},
        {"ceil", [](double x) { return std::ceil(x); }, UnaryForm::Function, "ceil"},
        {"abs", [](double x) { return std::fabs(x); }, UnaryForm::Function, "abs"},
        {"log", [](double x) { return std::log(x); }, UnaryForm::Function, "log"},
        {"log10", [](double x) { return std::log10(x); }, UnaryForm::Function, "log10"},
        {"exp", [](double x) { return std::exp(x); }, UnaryForm::Function, "exp"},
        {"pow10", [](double x) { return std::pow(10.0, x); }, UnaryForm::Function, "pow10"},
        {"recip", [](double x) { return 1.0 / x; }, UnaryForm::Function, "recip"},
        {"neg", [](double x) { return -x; }, UnaryForm::Function, "neg"},
        {"sin", [](double x) { return std::sin(x); }, UnaryForm::Function, "sin"},
        {"cos", [](double x) { return std::cos(x); }, UnaryForm::Function, "cos"},
        {"asin", [](double x) { return std::asin(x); }, UnaryForm::Function, "asin"},
        {"atan", [](double x) { return std::atan(x); }, UnaryForm::Function, "atan"},
    };
}

inline std::vector<BinaryOp> all_binary() {
    return {
        {"add", [](double a, double b) { return a + b; }, true, BinaryForm::Infix, "+"},
        {"sub", [](double a, double b) { return a - b; }, false, BinaryForm::Infix, "-"},
        {"mult", [](double a, double b) { return a * b; }, true, BinaryForm::Infix, "*"},
        {"div", [](double a, double b) { return a / b; }, false, BinaryForm::Infix, "/"},
        {"pow", [](double a, double b) { return std::pow(a, b); }, false, BinaryForm::Infix, "^"},
        {"max", [](double a, double b) { return std::fmax(a, b); }, true, BinaryForm::Function, "max"},
        {"min", [](double a, double b) { return std::fmin(a, b); }, true, BinaryForm::Function, "min"},
    };
}

// Alternative spellings accepted on the command line.
inline const std::map<std::string, std::string, std::less<>>& aliases() {
    static const std::map<std::string, std::string, std::less<>> table{
        {"+", "add"},      {"plus", "add"},   {"-", "sub"},       {"minus", "sub"},
        {"*", "mult"},     {"mul", "mult"},   {"times", "mult"},  {"/", "div"},
        {"^", "pow"},      {"+1", "plus1"},   {"-1", "minus1"},   {"*2", "times2"},
        {"/2", "half"},    {"sq", "square"},  {"ln", "log"},      {"reciprocal", "recip"},
        {"negate", "neg"}, {"inv", "recip"},
    };
    return table;
}

} // namespace ops

inline std::string valid_operator_names() {
    std::string out;
    for (const auto& op : ops::all_unary()) out += (out.empty() ? "" : ",") + op.id;
    for (const auto& op : ops::all_binary()) out += "," + op.id;
    return out;
}

// Builds a registry from operator ids, keeping the order given.
inline OperatorRegistry make_registry(const std::vector<std::string>& names) {
    const auto unary = ops::all_unary();
    const auto binary = ops::all_binary();
    std::vector<UnaryOp> u;
    std::vector<BinaryOp> b;
    for (const auto& raw : names) {
        std::string name = raw;
        if (auto it = ops::aliases().find(name); it != ops::aliases().end()) name = it->second;
        bool found = false;
        for (const auto& op : unary)
            if (op.id == name) { u.push_back(op); found = true; }
        for (const auto& op : binary)
            if (op.id == name) { b.push_back(op); found = true; }
        if (!found) throw ConfigError("unknown operator '" + raw + "'; valid names: " + valid_operator_names());
    }
    return OperatorRegistry(std::move(u), std::move(b));
}

inline OperatorRegistry default_registry() { return OperatorRegistry(ops::all_unary(), ops::all_binary()); }

inline std::vector<std::string> split_list(std::string_view text, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in{std::string(text)};
    while (std::getline(in, cur, sep)) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

// Named operator sets. basic/trig/full are the three nested subsets used for
// equation-recovery runs; nguyen is {sin, cos, log, exp, +, -, *, /}.
inline OperatorRegistry preset_registry(std::string_view name) {
    if (name == "default") return default_registry();
    if (name == "basic") return make_registry({"add", "sub", "mult", "div", "plus1", "minus1", "square", "sqrt"});
    if (name == "trig")
        return make_registry({"add", "sub", "mult", "div", "plus1", "minus1", "square", "sqrt", "sin", "cos", "log",
                              "recip", "exp"});
    if (name == "full")
        return make_registry({"add", "sub", "mult", "div", "plus1", "minus1", "square", "sqrt", "sin", "cos", "log",
                              "recip", "exp", "abs", "asin", "atan"});
    if (name == "nguyen") return make_registry({"sin", "cos", "log", "exp", "add", "sub", "mult", "div"});
    if (name == "gravity") return make_registry({"mult", "div", "square"});
    throw ConfigError("unknown operator preset '" + std::string(name) + "'; valid: default,basic,trig,full,nguyen,gravity");
}

} // namespace conjecturing
