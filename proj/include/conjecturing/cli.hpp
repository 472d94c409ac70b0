#pragma once

// Command-line front end. run_cli() takes argv-style arguments and returns
// the process exit code: 0 ok, 2 configuration error, 3 input error,
// 4 internal error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "benchgen.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "invariant_engine.hpp"
#include "metrics.hpp"
#include "mixed.hpp"
#include "operators.hpp"
#include "property_engine.hpp"

namespace conjecturing::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kConfig = 2, kInput = 3, kInternal = 4 };

struct Options {
    std::string command;
    std::string data;
    std::string test;
    std::string format = "csv";
    std::string target;
    std::string cls;
    std::string direction;
    std::string operators;
    std::string preset;
    double skips = 1.0;
    std::optional<double> time_limit;
    std::uint32_t max_complexity = 5;
    std::optional<std::uint32_t> property_complexity;
    std::string property_operators;
    double truth_slack = 0.0;
    std::string augment;
    std::vector<std::string> constants;
    std::vector<std::string> schema;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out = ".";
    // bench
    std::string name;
    int instance = 1;
    bool augmented = false;
    std::size_t noise = 0;
    std::optional<std::size_t> n_train;
    std::optional<std::size_t> n_test;
    bool rounding_noise = false;
};

inline std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// NAME=numeric | NAME=categorical | NAME=boolean[:TRUE/FALSE]
inline SchemaHints parse_schema(const std::vector<std::string>& items) {
    SchemaHints hints;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--schema expects NAME=KIND, got '" + item + "'");
        const std::string name = item.substr(0, eq);
        std::string kind = item.substr(eq + 1);
        ColumnHint hint;
        std::string tokens;
        if (const auto colon = kind.find(':'); colon != std::string::npos) {
            tokens = kind.substr(colon + 1);
            kind.resize(colon);
        }
        if (kind == "numeric") {
            hint.kind = ColumnKind::Numeric;
        } else if (kind == "categorical") {
            hint.kind = ColumnKind::Categorical;
        } else if (kind == "boolean") {
            hint.kind = ColumnKind::Boolean;
            if (!tokens.empty()) {
                const auto slash = tokens.find('/');
                if (slash == std::string::npos) throw ConfigError("--schema boolean tokens must be TRUE/FALSE");
                hint.true_token = tokens.substr(0, slash);
                hint.false_token = tokens.substr(slash + 1);
            }
        } else {
            throw ConfigError("--schema kind must be numeric, boolean or categorical, got '" + kind + "'");
        }
        hints[name] = hint;
    }
    return hints;
}

// {"derived": [{"name", "source", "fn"}], "constants": [{"name", "value"}]}
inline AugmentationSpec load_augmentation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open augmentation spec " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("augmentation spec " + path + ": " + e.what());
    }
    AugmentationSpec spec;
    try {
        if (j.contains("derived"))
            for (const auto& d : j.at("derived")) {
                const auto fn_name = d.at("fn").get<std::string>();
                const auto fn = derived_fn_from_string(fn_name);
                if (!fn) throw ConfigError("unknown derived function '" + fn_name + "' in " + path);
                spec.derived.push_back({d.at("name").get<std::string>(), d.at("source").get<std::string>(), *fn});
            }
        if (j.contains("constants"))
            for (const auto& c : j.at("constants"))
                spec.constants.push_back({c.at("name").get<std::string>(), c.at("value").get<double>()});
    } catch (const json::exception& e) {
        throw ConfigError("augmentation spec " + path + ": " + e.what());
    }
    return spec;
}

inline ConstantColumn parse_constant(const std::string& item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--constant expects NAME=VALUE, got '" + item + "'");
    const auto v = detail::parse_number(item.substr(eq + 1));
    if (!v) throw ConfigError("--constant value is not a number: '" + item + "'");
    return {item.substr(0, eq), *v};
}

inline Dataset load_table(const std::string& path, const Options& o) {
    const auto hints = parse_schema(o.schema);
    if (o.format == "csv") return load_csv(path, hints);
    if (o.format == "whitespace") return load_whitespace(path);
    throw ConfigError("--format must be csv or whitespace");
}

inline Dataset prepare(const Dataset& raw, const Options& o) {
    AugmentationSpec spec;
    if (!o.augment.empty()) spec = load_augmentation(o.augment);
    for (const auto& c : o.constants) spec.constants.push_back(parse_constant(c));
    return inject(raw, spec);
}

// Numeric view of `data` in the column order `names`; absent or
// non-numeric columns read as missing.
inline Dataset align_numeric(const Dataset& data, const std::vector<std::string>& names) {
    std::vector<Column> cols;
    for (const auto& n : names) {
        const auto idx = data.find(n);
        if (idx && data.column(*idx).kind == ColumnKind::Numeric) {
            cols.push_back(data.column(*idx));
        } else {
            cols.push_back(Column::make_numeric(n, std::vector<double>(data.rows(), kMissing)));
        }
    }
    return Dataset(std::move(cols));
}

inline std::vector<std::optional<bool>> eval_condition(const BoolExpressionTree& expr, const BoolRegistry& ops,
                                                       const Dataset& booleans) {
    std::vector<std::optional<bool>> out(booleans.rows());
    std::vector<std::int8_t> row(booleans.cols());
    for (std::size_t r = 0; r < booleans.rows(); ++r) {
        for (std::size_t c = 0; c < booleans.cols(); ++c) {
            const Column& col = booleans.column(c);
            row[c] = col.kind == ColumnKind::Boolean ? col.boolean[r] : kBoolMissing;
        }
        out[r] = eval_bool(expr, ops, row);
    }
    return out;
}

inline std::vector<std::optional<bool>> bool_values(const Column& col, bool negate) {
    std::vector<std::optional<bool>> out(col.size());
    for (std::size_t r = 0; r < col.size(); ++r)
        if (col.kind == ColumnKind::Boolean && col.boolean[r] >= 0) out[r] = (col.boolean[r] == 1) != negate;
    return out;
}

inline json metrics_json(const ConditionEval& e) {
    json j;
    j["support"] = e.support;
    j["hits"] = e.hits;
    j["counted"] = e.counted;
    j["precision"] = e.precision ? json(*e.precision) : json(nullptr);
    j["base_rate"] = number_or_null(e.base_rate());
    j["lift"] = e.lift ? json(*e.lift) : json(nullptr);
    return j;
}

inline json limits_json(const SearchLimits& l) {
    json j;
    j["max_complexity"] = l.max_complexity;
    j["time_limit_seconds"] = l.time_limit_seconds ? json(*l.time_limit_seconds) : json(nullptr);
    j["threads"] = l.threads;
    return j;
}

inline json stats_json(const SearchStats& s) {
    json j;
    j["stop_reason"] = to_string(s.stop);
    j["reached_complexity"] = s.reached_complexity;
    // `committed` depends on the thread count, so it stays out of reports.
    j["candidates"] = s.candidates;
    return j;
}

inline OperatorRegistry resolve_operators(const Options& o) {
    if (!o.operators.empty()) return make_registry(split_list(o.operators));
    if (!o.preset.empty()) return preset_registry(o.preset);
    return default_registry();
}

inline std::vector<std::string> operator_ids(const OperatorRegistry& ops) {
    std::vector<std::string> out;
    for (const auto& u : ops.unary()) out.push_back(u.id);
    for (const auto& b : ops.binary()) out.push_back(b.id);
    return out;
}

inline BoolRegistry resolve_bool_operators(const std::string& list) {
    if (list.empty()) return BoolRegistry();
    return BoolRegistry(split_list(list));
}

inline std::vector<std::string> operator_ids(const BoolRegistry& ops) {
    std::vector<std::string> out;
    for (const auto& u : ops.unary()) out.push_back(u.id);
    for (const auto& b : ops.binary()) out.push_back(b.id);
    return out;
}

inline SearchLimits make_limits(const Options& o, std::uint32_t complexity) {
    SearchLimits l;
    l.max_complexity = complexity;
    l.time_limit_seconds = o.time_limit;
    l.threads = std::max(1u, o.threads);
    return l;
}

struct RunOutput {
    json report;
    json engine;
    std::string conjectures;
    std::optional<std::string> envelope;
    std::optional<std::string> stop_reason;
    std::vector<std::string> inputs;
};

inline RunOutput cmd_conjecture_inv(const Options& o) {
    if (o.direction != "upper" && o.direction != "lower")
        throw ConfigError("--direction must be upper or lower for conjecture-inv");
    const auto ops = resolve_operators(o);
    const Dataset train = prepare(load_table(o.data, o), o);
    const auto target = train.index_of(o.target);

    InvConfig cfg;
    cfg.direction = o.direction == "upper" ? BoundDirection::Upper : BoundDirection::Lower;
    cfg.limits = make_limits(o, o.max_complexity);
    cfg.skips = o.skips;
    cfg.truth_slack = o.truth_slack;
    const InvResult res = run_inv(train, target, ops, cfg);
    const auto names = train.names();
    const std::span<const double> tvals(train.column(target).numeric);

    std::optional<Dataset> test;
    if (!o.test.empty()) test = align_numeric(prepare(load_table(o.test, o), o), names);

    RunOutput out;
    out.inputs.push_back(o.data);
    if (!o.test.empty()) out.inputs.push_back(o.test);
    const std::string rel = cfg.direction == BoundDirection::Upper ? " <= " : " >= ";

    json list = json::array();
    for (const auto& c : res.conjectures) {
        const auto text = to_canonical_string(c.expr, ops, names);
        out.conjectures += o.target + rel + text + "\n";
        json j;
        j["expression"] = text;
        j["direction"] = o.direction;
        j["statement"] = o.target + rel + text;
        j["complexity"] = c.expr.complexity();
        j["train_mae"] = number_or_null(mean_absolute_error(c.values, tvals));
        if (test) {
            try {
                const auto s = score_bound(c.expr, ops, *test, target);
                j["test_nrmse"] = number_or_null(s.nrmse);
                j["test_rows_used"] = s.used;
            } catch (const InputError&) {
                j["test_nrmse"] = nullptr;
                j["test_rows_used"] = 0;
            }
        }
        list.push_back(std::move(j));
    }

    json& r = out.report;
    r["command"] = "conjecture-inv";
    r["target"] = o.target;
    r["direction"] = o.direction;
    r["operators"] = operator_ids(ops);
    r["max_complexity"] = o.max_complexity;
    r["skips"] = o.skips;
    r["truth_slack"] = o.truth_slack;
    r["examples"] = train.rows();
    json inv = json::array();
    for (const auto c : res.eligible) inv.push_back(names[c]);
    r["invariants"] = std::move(inv);
    r["search"] = stats_json(res.stats);
    r["conjectures"] = list;
    if (!res.conjectures.empty()) {
        const auto best = select_best(res.conjectures, tvals);
        json b;
        b["index"] = best;
        b["expression"] = list[best]["expression"];
        b["train_mae"] = list[best]["train_mae"];
        if (test) b["test_nrmse"] = list[best]["test_nrmse"];
        r["best"] = std::move(b);

        std::ostringstream env;
        env << "row,target,envelope,gap,attaining\n";
        const auto rows = envelope_report(res.conjectures, tvals, cfg.direction);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            env << i << ',' << format_double(rows[i].target) << ',' << format_double(rows[i].envelope) << ','
                << format_double(rows[i].gap) << ',';
            if (rows[i].attaining < res.conjectures.size()) env << rows[i].attaining;
            env << '\n';
        }
        out.envelope = env.str();
    } else {
        r["best"] = nullptr;
    }

    out.engine["direction"] = o.direction;
    out.engine["limits"] = limits_json(cfg.limits);
    out.engine["skips"] = cfg.skips;
    out.engine["truth_slack"] = cfg.truth_slack;
    out.engine["tight_tolerance"] = cfg.tight_tolerance;
    out.stop_reason = to_string(res.stats.stop);
    return out;
}

inline RunOutput cmd_conjecture_prop(const Options& o) {
    if (o.direction != "sufficient" && o.direction != "necessary")
        throw ConfigError("--direction must be sufficient or necessary for conjecture-prop");
    const auto ops = resolve_bool_operators(o.operators);
    const Dataset train = prepare(load_table(o.data, o), o);
    const auto target = train.index_of(o.target);

    PropConfig cfg;
    cfg.direction = o.direction == "sufficient" ? ConditionDirection::Sufficient : ConditionDirection::Necessary;
    cfg.limits = make_limits(o, o.property_complexity.value_or(o.max_complexity));
    const PropResult res = run_prop(train, target, ops, cfg);
    const auto names = train.names();
    const bool necessary = cfg.direction == ConditionDirection::Necessary;

    std::optional<Dataset> test;
    if (!o.test.empty()) {
        const Dataset t = prepare(load_table(o.test, o), o);
        std::vector<Column> cols;
        for (const auto& n : names) {
            const auto idx = t.find(n);
            cols.push_back(idx ? t.column(*idx)
                               : Column::make_boolean(n, std::vector<std::int8_t>(t.rows(), kBoolMissing)));
        }
        test = Dataset(std::move(cols));
    }

    RunOutput out;
    out.inputs.push_back(o.data);
    if (!o.test.empty()) out.inputs.push_back(o.test);
    json list = json::array();
    for (const auto& c : res.conjectures) {
        const auto stmt = condition_statement(c, cfg.direction, ops, names, o.target);
        out.conjectures += stmt + "\n";
        json j;
        j["expression"] = to_canonical_string(c.expr, ops, names);
        j["consequent"] = necessary ? "~" + o.target : o.target;
        j["statement"] = stmt;
        j["complexity"] = c.expr.complexity();
        j["covers"] = c.truth.count();
        j["train"] = metrics_json(condition_metrics(eval_condition(c.expr, ops, train),
                                                    bool_values(train.column(target), necessary)));
        if (test)
            j["test"] = metrics_json(condition_metrics(eval_condition(c.expr, ops, *test),
                                                       bool_values(test->column(target), necessary)));
        list.push_back(std::move(j));
    }

    json& r = out.report;
    r["command"] = "conjecture-prop";
    r["target"] = o.target;
    r["direction"] = o.direction;
    // Necessary conditions are sufficient conditions for the negated target.
    r["searched_for"] = necessary ? "sufficient conditions for ~" + o.target : "sufficient conditions for " + o.target;
    r["operators"] = operator_ids(ops);
    r["max_complexity"] = cfg.limits.max_complexity;
    r["examples"] = train.rows();
    r["positives"] = res.positives.count();
    json props = json::array();
    for (const auto c : res.properties) props.push_back(names[c]);
    r["properties"] = std::move(props);
    r["search"] = stats_json(res.stats);
    r["conjectures"] = std::move(list);

    out.engine["direction"] = o.direction;
    out.engine["transformation"] = necessary ? "target negated; conditions reported as target -> ~c" : "none";
    out.engine["limits"] = limits_json(cfg.limits);
    out.stop_reason = to_string(res.stats.stop);
    return out;
}

inline RunOutput cmd_mixed(const Options& o) {
    const auto ops = resolve_operators(o);
    const auto bool_ops = resolve_bool_operators(o.property_operators);
    const Dataset train = prepare(load_table(o.data, o), o);
    const auto cls = train.index_of(o.cls);
    const auto ckind = train.column(cls).kind;
    if (ckind != ColumnKind::Categorical && ckind != ColumnKind::Boolean)
        throw ConfigError("class column '" + o.cls + "' must be categorical or boolean");

    MixedConfig cfg;
    cfg.bounds.limits = make_limits(o, o.max_complexity);
    cfg.bounds.limits.time_limit_seconds.reset();
    cfg.bounds.skips = o.skips;
    cfg.bounds.truth_slack = o.truth_slack;
    cfg.conditions.limits = make_limits(o, o.property_complexity.value_or(o.max_complexity));
    cfg.conditions.limits.time_limit_seconds.reset();
    cfg.total_seconds = o.time_limit;
    const MixedResult res = run_mixed(train, o.cls, ops, bool_ops, cfg);
    const auto pooled_names = res.pooled.names();

    // Pooled properties evaluated on the test rows.
    std::optional<Dataset> test_pool;
    if (!o.test.empty()) {
        Dataset t = prepare(load_table(o.test, o), o);
        for (const auto& col : t.columns())
            if (col.kind == ColumnKind::Categorical && col.name != o.cls) t = one_hot(t, col.name);
        const Dataset numeric = align_numeric(t, res.feature_names);
        const auto tcls = t.find(o.cls);
        std::vector<Column> cols;
        std::size_t d = 0;
        for (std::size_t c = 0; c < res.pooled.cols(); ++c) {
            const auto& name = pooled_names[c];
            std::vector<std::int8_t> v(t.rows(), kBoolMissing);
            if (c < res.native_properties) {
                if (const auto idx = t.find(name); idx && t.column(*idx).kind == ColumnKind::Boolean)
                    v = t.column(*idx).boolean;
            } else if (d < res.derived.size()) {
                for (std::size_t r = 0; r < t.rows(); ++r) v[r] = eval_derived(res.derived[d], ops, numeric, r);
                ++d;
            } else if (tcls) {
                // Level indicator.
                const auto level = c - res.native_properties - res.derived.size();
                const std::string& want = res.levels.at(level).level;
                const Column& tc = t.column(*tcls);
                for (std::size_t r = 0; r < t.rows(); ++r) {
                    if (tc.kind == ColumnKind::Categorical) {
                        if (tc.codes[r] != kLevelMissing) v[r] = tc.levels[static_cast<std::size_t>(tc.codes[r])] == want;
                    } else if (tc.kind == ColumnKind::Boolean) {
                        if (tc.boolean[r] >= 0) v[r] = (tc.boolean[r] == 1) == (want == "true");
                    }
                }
            }
            cols.push_back(Column::make_boolean(name, std::move(v)));
        }
        test_pool = Dataset(std::move(cols));
    }

    RunOutput out;
    out.inputs.push_back(o.data);
    if (!o.test.empty()) out.inputs.push_back(o.test);

    json& r = out.report;
    r["command"] = "mixed";
    r["class"] = o.cls;
    r["operators"] = operator_ids(ops);
    r["property_operators"] = operator_ids(bool_ops);
    r["max_complexity"] = o.max_complexity;
    r["property_complexity"] = cfg.conditions.limits.max_complexity;
    r["examples"] = train.rows();
    r["native_properties"] = res.native_properties;
    r["derived_properties"] = res.derived.size();
    r["duplicate_bounds"] = res.duplicate_bounds;
    r["bound_subruns"] = res.bound_subruns;
    json derived = json::array();
    for (const auto& p : res.derived) {
        json j;
        j["name"] = p.name;
        j["feature"] = res.feature_names[p.feature];
        j["direction"] = to_string(p.direction);
        j["expression"] = to_canonical_string(p.expr, ops, res.feature_names);
        j["level"] = p.level;
        derived.push_back(std::move(j));
    }
    r["derived"] = std::move(derived);

    json levels = json::array();
    for (const auto& lr : res.levels) {
        json lj;
        lj["level"] = lr.level;
        lj["rows"] = lr.rows;
        lj["bounds_mined"] = lr.bounds_mined;
        const std::string& target = pooled_names[lr.indicator];
        for (const auto& [key, run] : {std::pair{"sufficient", &lr.sufficient}, std::pair{"necessary", &lr.necessary}}) {
            if (!*run) {
                lj[key] = nullptr;
                continue;
            }
            const bool necessary = (*run)->direction == ConditionDirection::Necessary;
            json list = json::array();
            for (const auto& c : (*run)->conjectures) {
                const auto stmt = condition_statement(c, (*run)->direction, bool_ops, pooled_names, target);
                out.conjectures += stmt + "\n";
                json j;
                j["expression"] = to_canonical_string(c.expr, bool_ops, pooled_names);
                j["consequent"] = necessary ? "~" + target : target;
                j["statement"] = stmt;
                j["train"] = metrics_json(condition_metrics(eval_condition(c.expr, bool_ops, res.pooled),
                                                            bool_values(res.pooled.column(lr.indicator), necessary)));
                if (test_pool)
                    j["test"] = metrics_json(condition_metrics(eval_condition(c.expr, bool_ops, *test_pool),
                                                               bool_values(test_pool->column(lr.indicator), necessary)));
                list.push_back(std::move(j));
            }
            json block;
            block["search"] = stats_json((*run)->stats);
            block["conjectures"] = std::move(list);
            lj[key] = std::move(block);
        }
        levels.push_back(std::move(lj));
    }
    r["levels"] = std::move(levels);
    r["warnings"] = res.warnings;

    out.engine["bounds"] = limits_json(cfg.bounds.limits);
    out.engine["conditions"] = limits_json(cfg.conditions.limits);
    out.engine["total_seconds"] = o.time_limit ? json(*o.time_limit) : json(nullptr);
    out.engine["subrun_seconds"] = res.subrun_seconds ? json(*res.subrun_seconds) : json(nullptr);
    out.engine["bound_subruns"] = res.bound_subruns;
    return out;
}

inline RunOutput cmd_bench(const Options& o) {
    Benchmark b;
    std::string prefix = o.name;
    if (o.name == "gravity") {
        b = gen_gravity(o.seed, o.n_train.value_or(1000), o.n_test.value_or(1000));
    } else if (o.name == "nguyen") {
        b = gen_nguyen(o.instance, o.seed, o.augmented, o.n_train.value_or(20), o.n_test.value_or(20));
        prefix += std::to_string(o.instance);
    } else if (o.name == "interaction") {
        b = gen_interaction(o.seed, o.n_train.value_or(1000), o.n_test.value_or(1000), o.rounding_noise);
    } else {
        throw ConfigError("unknown benchmark '" + o.name + "'; valid: gravity, nguyen, interaction");
    }
    if (o.noise > 0) {
        // Distinct streams for the two splits.
        b.train = gen_noise_columns(b.train, o.noise, o.seed ^ 0x6e6f697365ull);
        b.test = gen_noise_columns(b.test, o.noise, (o.seed ^ 0x6e6f697365ull) + 1);
        b.spec.params["noise_columns"] = o.noise;
    }
    std::filesystem::create_directories(o.out);
    const auto dir = std::filesystem::path(o.out);
    save_csv((dir / (prefix + "_train.csv")).string(), b.train);
    save_csv((dir / (prefix + "_test.csv")).string(), b.test);
    write_text(dir / (prefix + "_spec.json"), b.spec.to_json().dump(2) + "\n");
    RunOutput out;
    out.report = b.spec.to_json();
    return out;
}

inline void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--data", o.data, "training data file")->required();
    sub->add_option("--test", o.test, "held-out data file");
    sub->add_option("--format", o.format, "csv or whitespace")->check(CLI::IsMember({"csv", "whitespace"}));
    sub->add_option("--schema", o.schema, "column type hint NAME=numeric|boolean[:T/F]|categorical");
    sub->add_option("--skips", o.skips, "max missing fraction for an invariant")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--time-limit", o.time_limit, "wall-clock budget in seconds");
    sub->add_option("--max-complexity", o.max_complexity, "largest expression size")->check(CLI::Range(1, 64));
    sub->add_option("--augment", o.augment, "JSON file of derived and constant columns");
    sub->add_option("--constant", o.constants, "add a constant column NAME=VALUE");
    sub->add_option("--seed", o.seed, "random seed (recorded)");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1, 1024));
    sub->add_option("--out", o.out, "output directory");
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Options o;
    CLI::App app{"Conjecture bounds and conditions from tabular data"};
    app.name("conjecture");
    app.require_subcommand(1);

    auto* inv = app.add_subcommand("conjecture-inv", "bounds on a numeric target");
    add_common(inv, o);
    inv->add_option("--target", o.target, "numeric column to bound")->required();
    inv->add_option("--direction", o.direction, "upper or lower")->check(CLI::IsMember({"upper", "lower"}));
    inv->add_option("--operators", o.operators, "comma-separated operator names");
    inv->add_option("--operator-preset", o.preset, "basic, trig, full, nguyen, gravity or default");
    inv->add_option("--truth-slack", o.truth_slack, "allowed violation in the truth test")->check(CLI::NonNegativeNumber);

    auto* prop = app.add_subcommand("conjecture-prop", "conditions for a boolean target");
    add_common(prop, o);
    prop->add_option("--target", o.target, "boolean column")->required();
    prop->add_option("--direction", o.direction, "sufficient or necessary")
        ->check(CLI::IsMember({"sufficient", "necessary"}));
    prop->add_option("--operators", o.operators, "comma-separated: not,and,or,xor,implies");

    auto* mixed = app.add_subcommand("mixed", "class-wise bounds turned into conditions");
    add_common(mixed, o);
    mixed->add_option("--class", o.cls, "categorical or boolean class column")->required();
    mixed->add_option("--operators", o.operators, "comma-separated operator names for bounds");
    mixed->add_option("--operator-preset", o.preset, "operator preset for bounds");
    mixed->add_option("--property-operators", o.property_operators, "comma-separated: not,and,or,xor,implies");
    mixed->add_option("--property-complexity", o.property_complexity, "largest condition size");
    mixed->add_option("--truth-slack", o.truth_slack, "allowed violation in the bound truth test")
        ->check(CLI::NonNegativeNumber);

    auto* bench = app.add_subcommand("bench", "write benchmark datasets");
    bench->add_option("--name", o.name, "gravity, nguyen or interaction")->required();
    bench->add_option("--seed", o.seed, "random seed");
    bench->add_option("--instance", o.instance, "nguyen instance 1..12");
    bench->add_flag("--augmented", o.augmented, "append the extra nguyen invariants");
    bench->add_option("--noise", o.noise, "append this many standard-normal columns");
    bench->add_option("--n-train", o.n_train, "training rows");
    bench->add_option("--n-test", o.n_test, "test rows");
    bench->add_flag("--rounding-noise", o.rounding_noise, "perturb the interaction price");
    bench->add_option("--out", o.out, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kConfig;
    }

    const auto start = std::chrono::steady_clock::now();
    RunOutput result;
    try {
        if (inv->parsed()) {
            o.command = "conjecture-inv";
            if (o.direction.empty()) o.direction = "upper";
            if (!o.operators.empty() && !o.preset.empty())
                throw ConfigError("--operators and --operator-preset are mutually exclusive");
            result = cmd_conjecture_inv(o);
        } else if (prop->parsed()) {
            o.command = "conjecture-prop";
            if (o.direction.empty()) o.direction = "sufficient";
            result = cmd_conjecture_prop(o);
        } else if (mixed->parsed()) {
            o.command = "mixed";
            if (!o.operators.empty() && !o.preset.empty())
                throw ConfigError("--operators and --operator-preset are mutually exclusive");
            result = cmd_mixed(o);
        } else {
            o.command = "bench";
            result = cmd_bench(o);
            out << result.report.dump(2) << "\n";
            return kOk;
        }

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::filesystem::create_directories(o.out);
        const auto dir = std::filesystem::path(o.out);
        write_text(dir / "conjectures.txt", result.conjectures);
        write_text(dir / "report.json", result.report.dump(2) + "\n");
        if (result.envelope) write_text(dir / "envelope.csv", *result.envelope);

        json m;
        m["tool"] = "conjecture";
        m["version"] = kVersion;
        m["command"] = o.command;
        json opts;
        opts["data"] = o.data;
        opts["test"] = o.test.empty() ? json(nullptr) : json(o.test);
        opts["format"] = o.format;
        opts["target"] = o.target.empty() ? json(nullptr) : json(o.target);
        opts["class"] = o.cls.empty() ? json(nullptr) : json(o.cls);
        opts["direction"] = o.direction.empty() ? json(nullptr) : json(o.direction);
        opts["operators"] = o.operators.empty() ? json(nullptr) : json(o.operators);
        opts["operator_preset"] = o.preset.empty() ? json(nullptr) : json(o.preset);
        opts["property_operators"] = o.property_operators.empty() ? json(nullptr) : json(o.property_operators);
        opts["skips"] = o.skips;
        opts["time_limit"] = o.time_limit ? json(*o.time_limit) : json(nullptr);
        opts["max_complexity"] = o.max_complexity;
        opts["property_complexity"] = o.property_complexity ? json(*o.property_complexity) : json(nullptr);
        opts["truth_slack"] = o.truth_slack;
        opts["augment"] = o.augment.empty() ? json(nullptr) : json(o.augment);
        opts["constants"] = o.constants;
        opts["schema"] = o.schema;
        opts["seed"] = o.seed;
        opts["threads"] = o.threads;
        opts["out"] = o.out;
        m["options"] = std::move(opts);
        json inputs = json::array();
        for (const auto& path : result.inputs) {
            json j;
            j["path"] = path;
            j["fnv1a64"] = fnv1a64_file(path);
            if (!o.augment.empty()) j["augment_fnv1a64"] = fnv1a64_file(o.augment);
            inputs.push_back(std::move(j));
        }
        m["inputs"] = std::move(inputs);
        m["engine"] = result.engine;
        m["stop_reason"] = result.stop_reason ? json(*result.stop_reason) : json(nullptr);
        m["wall_time_seconds"] = wall;
        write_text(dir / "manifest.json", m.dump(2) + "\n");
        out << result.conjectures;
        return kOk;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfig;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

} // namespace conjecturing::cli
