#pragma once

// Mixed numeric/boolean conjecturing: per-class bound discovery, conversion
// of bounds into boolean properties, and per-class condition discovery over
// the pooled properties.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "errors.hpp"
#include "invariant_engine.hpp"
#include "property_engine.hpp"

namespace conjecturing {

// A mined bound `feature <= expr` (upper) or `feature >= expr` (lower) used
// as a predicate on rows.
struct DerivedProperty {
    std::size_t feature = 0;  // column in the source dataset
    BoundDirection direction = BoundDirection::Upper;
    ExpressionTree expr;
    std::string level;  // class level the bound was first mined on
    std::string name;   // "[feature <= expr]"
};

inline std::string derived_property_name(const std::string& feature, BoundDirection dir, const std::string& expr) {
    return "[" + feature + (dir == BoundDirection::Upper ? " <= " : " >= ") + expr + "]";
}

// True/false per row; missing when the feature is missing or the bound is
// missing or undefined on the row.
inline std::int8_t eval_derived(const DerivedProperty& p, const OperatorRegistry& ops, const Dataset& data,
                                std::size_t row) {
    const double f = data.number(row, p.feature);
    if (is_missing(f)) return kBoolMissing;
    const auto res = evaluate(p.expr, ops, data.numeric_row(row));
    if (!res.defined()) return kBoolMissing;
    const bool holds = p.direction == BoundDirection::Upper ? f <= res.value : f >= res.value;
    return holds ? 1 : 0;
}

struct MixedConfig {
    InvConfig bounds;     // direction is set per sub-run
    PropConfig conditions;  // direction is set per sub-run
    // Overall wall-clock budget split evenly over bound sub-runs; ignored
    // when per_subrun_seconds is set.
    std::optional<double> total_seconds;
    std::optional<double> per_subrun_seconds;
};

struct LevelResult {
    std::string level;
    std::size_t rows = 0;
    std::size_t bounds_mined = 0;
    std::size_t indicator = 0;  // column of the level indicator in `pooled`
    std::optional<PropResult> sufficient;
    std::optional<PropResult> necessary;
};

struct MixedResult {
    Dataset pooled;  // native booleans, derived properties, level indicators
    std::vector<std::string> feature_names;  // column space of derived-property expressions
    std::vector<DerivedProperty> derived;
    std::vector<LevelResult> levels;
    std::size_t native_properties = 0;
    std::size_t duplicate_bounds = 0;
    std::size_t bound_subruns = 0;
    std::optional<double> subrun_seconds;
    std::vector<std::string> warnings;
};

inline MixedResult run_mixed(const Dataset& input, const std::string& class_column, const OperatorRegistry& ops,
                             const BoolRegistry& bool_ops, const MixedConfig& cfg) {
    const auto cls = input.index_of(class_column);
    const Column& ccol = input.column(cls);

    // Level indicators of the class feature.
    std::vector<std::string> level_names;
    std::vector<std::vector<std::int8_t>> indicators;
    if (ccol.kind == ColumnKind::Categorical) {
        for (std::size_t l = 0; l < ccol.levels.size(); ++l) {
            level_names.push_back(ccol.levels[l]);
            std::vector<std::int8_t> v(input.rows());
            for (std::size_t r = 0; r < input.rows(); ++r)
                v[r] = ccol.codes[r] == kLevelMissing ? kBoolMissing
                                                      : static_cast<std::int8_t>(ccol.codes[r] == static_cast<std::int32_t>(l));
            indicators.push_back(std::move(v));
        }
    } else if (ccol.kind == ColumnKind::Boolean) {
        for (const bool value : {true, false}) {
            level_names.push_back(value ? "true" : "false");
            std::vector<std::int8_t> v(input.rows());
            for (std::size_t r = 0; r < input.rows(); ++r)
                v[r] = ccol.boolean[r] < 0 ? kBoolMissing : static_cast<std::int8_t>((ccol.boolean[r] == 1) == value);
            indicators.push_back(std::move(v));
        }
    } else {
        throw ConfigError("class column '" + class_column + "' must be categorical or boolean");
    }
    if (level_names.size() < 2) throw ConfigError("class column '" + class_column + "' needs at least two levels");

    // Other categorical features become booleans.
    Dataset data = input;
    for (const auto& col : input.columns())
        if (col.kind == ColumnKind::Categorical && col.name != class_column) data = one_hot(data, col.name);
    const auto class_idx = data.index_of(class_column);

    std::vector<std::size_t> numeric;
    for (std::size_t c = 0; c < data.cols(); ++c)
        if (data.column(c).kind == ColumnKind::Numeric) numeric.push_back(c);
    if (numeric.empty()) throw ConfigError("mixed conjecturing needs at least one numeric feature");

    MixedResult result;
    result.bound_subruns = numeric.size() * 2 * level_names.size();
    if (cfg.per_subrun_seconds) {
        result.subrun_seconds = cfg.per_subrun_seconds;
    } else if (cfg.total_seconds) {
        result.subrun_seconds = *cfg.total_seconds / static_cast<double>(result.bound_subruns);
    }

    // Bound phase, one class at a time.
    std::set<std::string> seen;
    const auto names = data.names();
    result.feature_names = names;
    std::vector<std::size_t> mined_per_level(level_names.size(), 0);
    for (std::size_t l = 0; l < level_names.size(); ++l) {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < data.rows(); ++r)
            if (indicators[l][r] == 1) rows.push_back(r);
        if (rows.empty()) {
            result.warnings.push_back("level '" + level_names[l] + "' has no examples; skipped");
            continue;
        }
        for (const auto feature : numeric) {
            std::vector<std::size_t> usable;
            for (const auto r : rows)
                if (!is_missing(data.number(r, feature))) usable.push_back(r);
            if (usable.empty()) {
                result.warnings.push_back("feature '" + names[feature] + "' is missing on every '" + level_names[l] +
                                          "' row; skipped");
                continue;
            }
            const Dataset subset = data.select_rows(usable);
            for (const auto dir : {BoundDirection::Upper, BoundDirection::Lower}) {
                InvConfig sub = cfg.bounds;
                sub.direction = dir;
                if (result.subrun_seconds) sub.limits.time_limit_seconds = result.subrun_seconds;
                InvResult run;
                try {
                    run = run_inv(subset, feature, ops, sub);
                } catch (const ConfigError& e) {
                    result.warnings.push_back(std::string("bound run skipped: ") + e.what());
                    continue;
                }
                for (const auto& c : run.conjectures) {
                    ++mined_per_level[l];
                    const std::string text = to_canonical_string(c.expr, ops, names);
                    const std::string name = derived_property_name(names[feature], dir, text);
                    if (!seen.insert(name).second) {
                        ++result.duplicate_bounds;
                        continue;
                    }
                    result.derived.push_back({feature, dir, c.expr, level_names[l], name});
                }
            }
        }
    }

    // Pool native booleans, derived properties and the level indicators.
    std::vector<Column> pooled;
    for (std::size_t c = 0; c < data.cols(); ++c)
        if (c != class_idx && data.column(c).kind == ColumnKind::Boolean) pooled.push_back(data.column(c));
    result.native_properties = pooled.size();
    for (const auto& p : result.derived) {
        std::vector<std::int8_t> v(data.rows());
        for (std::size_t r = 0; r < data.rows(); ++r) v[r] = eval_derived(p, ops, data, r);
        pooled.push_back(Column::make_boolean(p.name, std::move(v)));
    }
    std::vector<std::uint32_t> indicator_cols;
    for (std::size_t l = 0; l < level_names.size(); ++l) {
        std::string name = class_column + "__" + level_names[l];
        while (std::any_of(pooled.begin(), pooled.end(), [&](const Column& c) { return c.name == name; })) name += "_";
        indicator_cols.push_back(static_cast<std::uint32_t>(pooled.size()));
        pooled.push_back(Column::make_boolean(name, indicators[l]));
    }
    result.pooled = Dataset(std::move(pooled));

    // Condition phase over all examples.
    for (std::size_t l = 0; l < level_names.size(); ++l) {
        LevelResult lr;
        lr.level = level_names[l];
        lr.indicator = indicator_cols[l];
        lr.bounds_mined = mined_per_level[l];
        for (const auto v : indicators[l]) lr.rows += v == 1 ? 1 : 0;
        for (const auto dir : {ConditionDirection::Sufficient, ConditionDirection::Necessary}) {
            PropConfig pc = cfg.conditions;
            pc.direction = dir;
            if (result.subrun_seconds && !pc.limits.time_limit_seconds) pc.limits.time_limit_seconds = result.subrun_seconds;
            try {
                auto run = run_prop(result.pooled, lr.indicator, bool_ops, pc, indicator_cols);
                (dir == ConditionDirection::Sufficient ? lr.sufficient : lr.necessary) = std::move(run);
            } catch (const ConfigError& e) {
                result.warnings.push_back("level '" + lr.level + "' " + to_string(dir) + " run skipped: " + e.what());
            }
        }
        result.levels.push_back(std::move(lr));
    }
    return result;
}

} // namespace conjecturing
