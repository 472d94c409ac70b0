#pragma once

// Checks behind the acceptance report. Each returns a verdict plus a short
// detail line; the acceptance binary prints them and the unit suite reuses
// the pieces that are cheap.

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conjecturing/benchgen.hpp"
#include "conjecturing/cli.hpp"
#include "conjecturing/metrics.hpp"
#include "conjecturing/mixed.hpp"
#include "json.hpp"
#include "oracle.hpp"
#include "poly.hpp"
#include "random_data.hpp"

namespace testsupport {

struct Verdict {
    bool pass = false;
    std::string detail;
};

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("conj_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& leaf) const { return (path_ / leaf).string(); }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline int cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
    std::ostringstream o, e;
    const int rc = conjecturing::cli::run_cli(args, o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return rc;
}

inline const std::string kGravityBound = "(m1*m2)/(r^2)";

// Writes the 10-row gravity benchmark (optionally with noise columns) and
// runs the upper-bound search on it. Returns the exit code.
inline int gravity_run(const TempDir& dir, std::size_t noise, unsigned threads, const std::string& out_leaf) {
    const std::string data_dir = dir.str("data_" + std::to_string(noise));
    if (!std::filesystem::exists(data_dir + "/gravity_train.csv")) {
        std::vector<std::string> gen{"bench", "--name", "gravity", "--seed", "1", "--n-train", "10", "--n-test", "10",
                                     "--out", data_dir};
        if (noise > 0) {
            gen.push_back("--noise");
            gen.push_back(std::to_string(noise));
        }
        if (const int rc = cli(gen); rc != 0) return rc;
    }
    return cli({"conjecture-inv", "--data", data_dir + "/gravity_train.csv", "--test", data_dir + "/gravity_test.csv",
                "--target", "F", "--direction", "upper", "--operator-preset", "gravity", "--max-complexity", "6",
                "--threads", std::to_string(threads), "--out", dir.str(out_leaf)});
}

inline std::vector<std::string> report_expressions(const std::string& report_path) {
    std::vector<std::string> out;
    const auto j = nlohmann::json::parse(slurp(report_path));
    for (const auto& c : j.at("conjectures")) out.push_back(c.at("expression").get<std::string>());
    return out;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
    return s;
}

inline Verdict criterion_gravity() {
    TempDir dir("c1");
    const auto t0 = std::chrono::steady_clock::now();
    const int rc = gravity_run(dir, 0, 1, "run");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (rc != 0) return {false, "cli exit code " + std::to_string(rc)};
    const auto exprs = report_expressions(dir.str("run/report.json"));
    const bool found = std::find(exprs.begin(), exprs.end(), kGravityBound) != exprs.end();
    std::ostringstream d;
    d << (found ? "found " : "missing ") << kGravityBound << " among " << exprs.size() << " bounds [" << join(exprs)
      << "] in " << secs << " s";
    return {found && secs < 10.0, d.str()};
}

inline Verdict criterion_noise(std::size_t k_max = 3) {
    TempDir dir("c2");
    bool all = true;
    std::ostringstream d;
    for (std::size_t k = 0; k <= k_max; ++k) {
        const int rc = gravity_run(dir, k, 1, "run" + std::to_string(k));
        bool found = false;
        if (rc == 0) {
            const auto exprs = report_expressions(dir.str("run" + std::to_string(k) + "/report.json"));
            found = std::find(exprs.begin(), exprs.end(), kGravityBound) != exprs.end();
        }
        all = all && found;
        d << "k=" << k << (found ? " found" : " missing") << (k < k_max ? "; " : "");
    }
    return {all, d.str()};
}

struct NguyenOutcome {
    bool ok = false;
    std::string best;
    double nrmse = 0.0;
};

inline NguyenOutcome nguyen_run(int instance, bool augmented, unsigned complexity, std::uint64_t seed = 1) {
    TempDir dir("ng");
    std::vector<std::string> gen{"bench", "--name", "nguyen", "--instance", std::to_string(instance), "--seed",
                                 std::to_string(seed), "--out", dir.str("data")};
    if (augmented) gen.push_back("--augmented");
    if (cli(gen) != 0) return {};
    const std::string stem = dir.str("data") + "/nguyen" + std::to_string(instance);
    if (cli({"conjecture-inv", "--data", stem + "_train.csv", "--test", stem + "_test.csv", "--target", "f",
             "--direction", "upper", "--operator-preset", "nguyen", "--truth-slack", "1e-9", "--max-complexity",
             std::to_string(complexity), "--out", dir.str("run")}) != 0)
        return {};
    const auto j = nlohmann::json::parse(slurp(dir.str("run/report.json")));
    const auto& best = j.at("best");
    if (best.is_null() || best.at("test_nrmse").is_null()) return {};
    NguyenOutcome o;
    o.best = best.at("expression").get<std::string>();
    o.nrmse = best.at("test_nrmse").get<double>();
    o.ok = o.nrmse <= 1e-9;
    return o;
}

inline Verdict criterion_nguyen() {
    bool all = true;
    std::ostringstream d;
    for (const int inst : {1, 5, 8, 9, 10, 11}) {
        const auto o = nguyen_run(inst, true, 7);
        all = all && o.ok;
        d << inst << ":" << (o.ok ? "ok " : "FAIL ") << o.best << " (" << o.nrmse << "); ";
    }
    const auto plain = nguyen_run(11, false, 7);
    // Either orientation of the commutative product is the same tree.
    const bool form = plain.best == "exp(log(x)*y)" || plain.best == "exp(y*log(x))";
    all = all && plain.ok && form;
    d << "11 without extra invariants: " << plain.best << " (" << plain.nrmse << ")";
    return {all, d.str()};
}

// Store invariants of one finished bound run; empty string when they hold.
inline std::string store_violation(const conjecturing::InvResult& res, const conjecturing::Dataset& data,
                                   conjecturing::BoundDirection dir) {
    using namespace conjecturing;
    const auto& cs = res.conjectures;
    const std::span<const double> target(data.column(res.target).numeric);
    if (cs.size() > data.rows()) return "more conjectures than examples";
    ConjectureStore store(dir, data.rows());
    for (const auto& c : cs) {
        if (!truth_test(c, target)) return "stored conjecture fails the truth test";
        store.insert_and_prune(c);
    }
    if (store.size() != cs.size()) return "replaying the store pruned something";
    for (std::size_t k = 0; k < cs.size(); ++k) {
        bool strict = false;
        for (std::size_t i = 0; i < data.rows() && !strict; ++i) {
            const double v = cs[k].values[i];
            if (!std::isfinite(v)) continue;
            bool best = true;
            for (std::size_t j = 0; j < cs.size(); ++j) {
                if (j == k || !std::isfinite(cs[j].values[i])) continue;
                if (dir == BoundDirection::Upper ? !(v < cs[j].values[i]) : !(v > cs[j].values[i])) best = false;
            }
            strict = best;
        }
        if (!strict) return "a conjecture is not strictly best anywhere";
        if (nondominance_test(cs[k], store)) return "re-inserting a stored conjecture passes non-dominance";
    }
    if (!cs.empty())
        for (const auto& row : envelope_report(cs, target, dir))
            if (std::isfinite(row.envelope) && row.gap < 0.0) return "negative envelope gap";
    return {};
}

inline Verdict criterion_store(std::size_t trials = 200) {
    using namespace conjecturing;
    std::size_t nonempty = 0;
    for (std::size_t s = 0; s < trials; ++s) {
        const auto inst = random_tiny(1000 + s);
        const auto ops = inst.registry();
        InvConfig cfg;
        cfg.direction = inst.direction;
        cfg.limits.max_complexity = inst.max_complexity;
        InvResult res;
        try {
            res = run_inv(inst.data, inst.target, ops, cfg);
        } catch (const ConfigError&) {
            continue;
        }
        if (!res.conjectures.empty()) ++nonempty;
        if (auto v = store_violation(res, inst.data, inst.direction); !v.empty())
            return {false, "seed " + std::to_string(1000 + s) + ": " + v};
    }
    return {nonempty >= 100, std::to_string(trials) + " datasets, " + std::to_string(nonempty) +
                                 " with a nonempty store; all invariants hold"};
}

inline std::vector<std::string> engine_strings(const TinyInstance& inst) {
    using namespace conjecturing;
    const auto ops = inst.registry();
    InvConfig cfg;
    cfg.direction = inst.direction;
    cfg.limits.max_complexity = inst.max_complexity;
    const auto res = run_inv(inst.data, inst.target, ops, cfg);
    std::vector<std::string> out;
    const auto names = inst.data.names();
    for (const auto& c : res.conjectures) out.push_back(to_canonical_string(c.expr, ops, names));
    return out;
}

inline std::vector<std::string> oracle_strings(const TinyInstance& inst) {
    const auto cfg = inst.oracle_config();
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < inst.data.rows(); ++r) rows.push_back(inst.data.numeric_row(r));
    return oracle::oracle_dalmatian(oracle::oracle_enumerate(cfg), cfg, rows, inst.data.column(inst.target).numeric,
                                    inst.direction == conjecturing::BoundDirection::Upper);
}

inline Verdict criterion_oracle(std::size_t trials = 150) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t s = 0; s < trials; ++s) {
        const auto inst = random_tiny(5000 + s);
        const auto a = engine_strings(inst);
        const auto b = oracle_strings(inst);
        if (a != b)
            return {false, "seed " + std::to_string(5000 + s) + ": engine [" + join(a) + "] vs oracle [" + join(b) + "]"};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream d;
    d << trials << " configurations agree in " << secs << " s";
    return {secs < 60.0, d.str()};
}

inline Verdict criterion_mixed() {
    using namespace conjecturing;
    const auto bench = gen_interaction(1, 1000, 1000, false);
    const auto ops = default_registry();
    MixedConfig cfg;
    cfg.bounds.limits.max_complexity = 3;
    cfg.conditions.limits.max_complexity = 3;
    const auto res = run_mixed(bench.train, "priceClass", ops, BoolRegistry(), cfg);

    const auto& fn = res.feature_names;
    auto col = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(fn.begin(), fn.end(), name) - fn.begin());
    };
    const std::size_t sqft = col("squareFootage"), ppsf = col("pricePerSquareFoot"), k = col("300K");
    // Expressions live in the one-hot expanded column space.
    std::vector<Column> cols;
    for (const auto& name : fn) {
        const auto idx = bench.train.find(name);
        cols.push_back(idx && bench.train.column(*idx).kind == ColumnKind::Numeric
                           ? bench.train.column(*idx)
                           : Column::make_numeric(name, std::vector<double>(bench.train.rows(), 1.0)));
    }
    const Dataset numeric(std::move(cols));

    const auto pooled_names = res.pooled.names();
    bool all = true;
    std::ostringstream d;
    for (const auto& lr : res.levels) {
        if (!lr.sufficient) {
            all = false;
            d << lr.level << ": no sufficient run; ";
            continue;
        }
        const bool want_at_least = lr.level == "isAbove";
        std::string hit;
        std::size_t false_pos = 0;
        for (const auto& c : lr.sufficient->conjectures) {
            const auto& truth = c.truth;
            for (const auto i : truth.members())
                if (res.pooled.column(lr.indicator).boolean[i] != 1) ++false_pos;
            if (c.expr.complexity() != 1) continue;
            const auto leaf = c.expr.root().id;
            if (leaf < res.native_properties || leaf >= res.native_properties + res.derived.size()) continue;
            const auto& p = res.derived[leaf - res.native_properties];
            const auto chk = check_threshold(p.feature, p.direction == BoundDirection::Upper, p.expr, ops, numeric,
                                             sqft, ppsf, k, want_at_least);
            if (chk.ok && hit.empty()) hit = pooled_names[leaf];
        }
        const bool ok = !hit.empty() && false_pos == 0;
        all = all && ok;
        d << lr.level << ": " << (hit.empty() ? "no threshold condition" : hit) << ", false positives " << false_pos
          << "; ";
    }
    return {all, d.str()};
}

inline Verdict criterion_metrics() {
    using namespace conjecturing;
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> coin(0, 2);
    double worst_identity = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(trial % 40);
        std::vector<std::optional<bool>> a(n), c(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int x = coin(rng), y = coin(rng);
            a[i] = x == 2 ? std::optional<bool>() : std::optional<bool>(x == 1);
            c[i] = y == 2 ? std::optional<bool>() : std::optional<bool>(y == 1);
        }
        const auto e = condition_metrics(a, c);
        if (e.lift) worst_identity = std::max(worst_identity, std::fabs(*e.lift * e.base_rate() - *e.precision));
    }

    std::normal_distribution<double> normal(3.0, 2.0);
    double worst_mean = 0.0, worst_exact = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> t(20);
        for (auto& v : t) v = normal(rng);
        double mean = 0.0;
        for (const double v : t) mean += v;
        mean /= static_cast<double>(t.size());
        const std::vector<double> m(t.size(), mean);
        worst_mean = std::max(worst_mean, std::fabs(nrmse(m, t) - 1.0));
        worst_exact = std::max(worst_exact, nrmse(t, t));
    }
    const double lift = lift_of(0.3091, 5468.0 / 73497.0);
    const bool pass = worst_identity <= 1e-12 && worst_mean <= 1e-12 && worst_exact == 0.0 && std::fabs(lift - 4.15) <= 0.01;
    std::ostringstream d;
    d << "lift*base-precision max " << worst_identity << ", mean predictor |nrmse-1| max " << worst_mean
      << ", exact nrmse max " << worst_exact << ", lift " << lift;
    return {pass, d.str()};
}

inline Verdict criterion_determinism() {
    TempDir dir("c8");
    if (gravity_run(dir, 0, 1, "a") != 0 || gravity_run(dir, 0, 1, "b") != 0 || gravity_run(dir, 0, 4, "c") != 0)
        return {false, "cli failure"};
    const auto a = slurp(dir.str("a/report.json"));
    const auto b = slurp(dir.str("b/report.json"));
    const auto c = slurp(dir.str("c/report.json"));
    const bool same = !a.empty() && a == b && a == c;
    return {same, same ? "report.json identical across repeated and 1 vs 4 thread runs ("
                             + std::to_string(a.size()) + " bytes)"
                       : "report.json differs"};
}

} // namespace testsupport
