#pragma once

// Seeded tiny instances for the oracle comparisons and store properties.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "conjecturing/dataset.hpp"
#include "conjecturing/invariant_engine.hpp"
#include "conjecturing/operators.hpp"
#include "oracle.hpp"

namespace testsupport {

struct TinyInstance {
    conjecturing::Dataset data;
    std::size_t target = 0;
    std::vector<std::string> unary, binary;
    std::uint32_t max_complexity = 4;
    conjecturing::BoundDirection direction = conjecturing::BoundDirection::Upper;

    conjecturing::OperatorRegistry registry() const {
        std::vector<std::string> ids = unary;
        ids.insert(ids.end(), binary.begin(), binary.end());
        return conjecturing::make_registry(ids);
    }

    oracle::Config oracle_config() const {
        oracle::Config c;
        c.names = data.names();
        for (std::size_t i = 0; i < data.cols(); ++i)
            if (i != target) c.invariants.push_back(static_cast<int>(i));
        c.unary = unary;
        c.binary = binary;
        c.max_complexity = static_cast<int>(max_complexity);
        return c;
    }
};

template <class T>
std::vector<T> pick(std::mt19937_64& rng, const std::vector<T>& pool, std::size_t lo, std::size_t hi) {
    std::vector<T> copy = pool;
    std::shuffle(copy.begin(), copy.end(), rng);
    const auto n = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    copy.resize(n);
    return copy;
}

// Up to 3 invariants plus a target, 2..6 rows, at most 2+2 operators and
// complexity at most 5. Most targets are tied to the invariants so stores are
// rarely empty and the tightness stop gets exercised.
inline TinyInstance random_tiny(std::uint64_t seed, bool allow_missing = true) {
    using namespace conjecturing;
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    const std::size_t rows = static_cast<std::size_t>(uni(2, 6));
    const std::size_t invariants = static_cast<std::size_t>(uni(1, 3));
    const char* names[] = {"a", "b", "c"};

    std::vector<std::vector<double>> cols(invariants, std::vector<double>(rows));
    for (auto& col : cols)
        for (auto& v : col) {
            v = uni(-3, 9);
            if (uni(0, 3) == 0) v += 0.5;
            if (allow_missing && uni(0, 11) == 0) v = kMissing;
        }

    // Targets: an exact sum, the first invariant shifted down or up (so it
    // is a valid bound), or plain noise.
    std::vector<double> target(rows);
    const int mode = uni(0, 3);
    for (std::size_t r = 0; r < rows; ++r) {
        double t = uni(-2, 12);
        bool complete = true;
        double s = 0.0;
        for (const auto& col : cols) {
            if (std::isnan(col[r])) complete = false;
            s += col[r];
        }
        if (mode == 0 && complete) t = s;
        if (mode == 1 && !std::isnan(cols[0][r])) t = cols[0][r] - uni(0, 3);
        if (mode == 2 && !std::isnan(cols[0][r])) t = cols[0][r] + uni(0, 3);
        target[r] = t;
    }

    TinyInstance inst;
    std::vector<Column> columns;
    const auto target_pos = static_cast<std::size_t>(uni(0, static_cast<int>(invariants)));
    std::size_t next = 0;
    for (std::size_t c = 0; c <= invariants; ++c) {
        if (c == target_pos) {
            columns.push_back(Column::make_numeric("t", target));
        } else {
            columns.push_back(Column::make_numeric(names[next], cols[next]));
            ++next;
        }
    }
    inst.data = Dataset(std::move(columns));
    inst.target = target_pos;

    inst.unary = pick<std::string>(rng, {"plus1", "minus1", "times2", "half", "square", "sqrt", "log", "exp", "recip",
                                         "neg", "abs"},
                                   0, 2);
    inst.binary = pick<std::string>(rng, {"add", "sub", "mult", "div", "max", "min"}, 0, 2);
    if (inst.unary.empty() && inst.binary.empty()) inst.binary.push_back("add");
    inst.max_complexity = static_cast<std::uint32_t>(uni(1, 5));
    if (uni(0, 2) != 0) inst.max_complexity = std::max<std::uint32_t>(inst.max_complexity, 4);
    inst.direction = uni(0, 1) == 0 ? BoundDirection::Upper : BoundDirection::Lower;
    return inst;
}

struct TinyBoolInstance {
    conjecturing::Dataset data;
    std::size_t target = 0;
    std::vector<std::string> binary;
    bool with_not = false;
    std::uint32_t max_complexity = 3;
};

// Up to 3 properties plus a target, 2..6 rows; the target is true and false
// at least once each.
inline TinyBoolInstance random_tiny_bool(std::uint64_t seed) {
    using namespace conjecturing;
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const std::size_t rows = static_cast<std::size_t>(uni(2, 6));
    const std::size_t props = static_cast<std::size_t>(uni(1, 3));
    const char* names[] = {"p", "q", "s"};

    std::vector<Column> columns;
    for (std::size_t c = 0; c < props; ++c) {
        std::vector<std::int8_t> v(rows);
        for (auto& x : v) x = uni(0, 9) == 0 ? kBoolMissing : static_cast<std::int8_t>(uni(0, 1));
        columns.push_back(Column::make_boolean(names[c], std::move(v)));
    }
    std::vector<std::int8_t> t(rows);
    for (auto& x : t) x = static_cast<std::int8_t>(uni(0, 1));
    t[0] = 1;
    t[1] = 0;
    std::shuffle(t.begin(), t.end(), rng);
    columns.push_back(Column::make_boolean("pi", std::move(t)));

    TinyBoolInstance inst;
    inst.data = Dataset(std::move(columns));
    inst.target = props;
    inst.binary = pick<std::string>(rng, {"and", "or", "xor", "implies"}, 0, 2);
    inst.with_not = uni(0, 1) == 1;
    if (inst.binary.empty() && !inst.with_not) inst.binary.push_back("or");
    inst.max_complexity = static_cast<std::uint32_t>(uni(1, 4));
    return inst;
}

} // namespace testsupport
