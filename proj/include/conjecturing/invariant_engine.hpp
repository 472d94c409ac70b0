#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "search.hpp"

namespace conjecturing {

enum class BoundDirection : std::uint8_t { Upper, Lower };

inline std::string to_string(BoundDirection d) { return d == BoundDirection::Upper ? "upper" : "lower"; }

// Cached per-example bound values use three encodings: a finite number is a
// defined value, NaN means an input was missing, and an infinity marks a
// domain violation (undefined).
inline constexpr double kUndefined = std::numeric_limits<double>::infinity();

inline bool is_undefined_value(double v) noexcept { return std::isinf(v); }

struct BoundConjecture {
    ExpressionTree expr;
    BoundDirection direction = BoundDirection::Upper;
    std::vector<double> values;
};

// Evaluates a tree on every row of `data` in the cached-value encoding.
inline std::vector<double> evaluate_column(const ExpressionTree& expr, const OperatorRegistry& ops, const Dataset& data) {
    std::vector<double> out(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const auto res = evaluate(expr, ops, data.numeric_row(r));
        out[r] = res.status == EvalStatus::Value ? res.value : res.status == EvalStatus::Missing ? kMissing : kUndefined;
    }
    return out;
}

namespace detail {

inline bool better(BoundDirection d, double a, double b) noexcept {
    return d == BoundDirection::Upper ? a < b : a > b;
}

inline double worst(BoundDirection d) noexcept {
    return d == BoundDirection::Upper ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
}

} // namespace detail

// Dalmatian truth test. Missing examples are skipped; any undefined example
// rejects; at least one example must be defined.
inline bool truth_test(std::span<const double> values, std::span<const double> target, BoundDirection dir,
                       double slack = 0.0) {
    bool any = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (std::isnan(v)) continue;
        if (std::isinf(v)) return false;
        any = true;
        if (dir == BoundDirection::Upper ? !(target[i] <= v + slack) : !(target[i] >= v - slack)) return false;
    }
    return any;
}

inline bool truth_test(const BoundConjecture& c, std::span<const double> target, double slack = 0.0) {
    return truth_test(c.values, target, c.direction, slack);
}

// Set of non-dominated bounds on one target, with the pointwise envelope.
class ConjectureStore {
public:
    ConjectureStore(BoundDirection direction, std::size_t examples)
        : direction_(direction), envelope_(examples, detail::worst(direction)) {}

    BoundDirection direction() const noexcept { return direction_; }
    const std::vector<BoundConjecture>& conjectures() const noexcept { return conjectures_; }
    const std::vector<double>& envelope() const noexcept { return envelope_; }
    std::size_t size() const noexcept { return conjectures_.size(); }
    bool empty() const noexcept { return conjectures_.empty(); }

    // Strict improvement on some defined example over the current envelope.
    bool improves(std::span<const double> values) const {
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double v = values[i];
            if (std::isfinite(v) && detail::better(direction_, v, envelope_[i])) return true;
        }
        return false;
    }

    // Appends and then removes, oldest first, every conjecture that is no
    // longer strictly best on any example, until none remain.
    void insert_and_prune(BoundConjecture c) {
        conjectures_.push_back(std::move(c));
        while (true) {
            const auto idx = first_dominated();
            if (idx == conjectures_.size()) break;
            conjectures_.erase(conjectures_.begin() + static_cast<std::ptrdiff_t>(idx));
        }
        rebuild_envelope();
    }

    // Index of the stored conjecture that attains the envelope at `example`
    // (earliest on ties), or size() if none is defined there.
    std::size_t attaining(std::size_t example) const {
        for (std::size_t k = 0; k < conjectures_.size(); ++k) {
            const double v = conjectures_[k].values[example];
            if (std::isfinite(v) && v == envelope_[example]) return k;
        }
        return conjectures_.size();
    }

    bool strictly_best_somewhere(std::size_t k) const {
        const auto& vals = conjectures_.at(k).values;
        for (std::size_t i = 0; i < envelope_.size(); ++i) {
            if (!std::isfinite(vals[i])) continue;
            bool best = true;
            for (std::size_t j = 0; j < conjectures_.size() && best; ++j) {
                if (j == k) continue;
                const double o = conjectures_[j].values[i];
                if (std::isfinite(o) && !detail::better(direction_, vals[i], o)) best = false;
            }
            if (best) return true;
        }
        return false;
    }

    bool tight(std::span<const double> target, double tol) const {
        for (std::size_t i = 0; i < envelope_.size(); ++i)
            if (!std::isfinite(envelope_[i]) || !(std::fabs(envelope_[i] - target[i]) <= tol)) return false;
        return true;
    }

private:
    std::size_t first_dominated() const {
        const std::size_t n = envelope_.size();
        std::vector<double> best(n, detail::worst(direction_));
        std::vector<std::uint32_t> hits(n, 0);
        for (const auto& c : conjectures_) {
            for (std::size_t i = 0; i < n; ++i) {
                const double v = c.values[i];
                if (!std::isfinite(v)) continue;
                if (detail::better(direction_, v, best[i])) {
                    best[i] = v;
                    hits[i] = 1;
                } else if (v == best[i]) {
                    ++hits[i];
                }
            }
        }
        for (std::size_t k = 0; k < conjectures_.size(); ++k) {
            const auto& vals = conjectures_[k].values;
            bool strict = false;
            for (std::size_t i = 0; i < n && !strict; ++i)
                strict = std::isfinite(vals[i]) && vals[i] == best[i] && hits[i] == 1;
            if (!strict) return k;
        }
        return conjectures_.size();
    }

    void rebuild_envelope() {
        std::fill(envelope_.begin(), envelope_.end(), detail::worst(direction_));
        for (const auto& c : conjectures_)
            for (std::size_t i = 0; i < envelope_.size(); ++i)
                if (std::isfinite(c.values[i]) && detail::better(direction_, c.values[i], envelope_[i]))
                    envelope_[i] = c.values[i];
    }

    BoundDirection direction_;
    std::vector<BoundConjecture> conjectures_;
    std::vector<double> envelope_;
};

inline bool nondominance_test(const BoundConjecture& candidate, const ConjectureStore& store) {
    return store.improves(candidate.values);
}

inline void insert_and_prune(BoundConjecture candidate, ConjectureStore& store) {
    store.insert_and_prune(std::move(candidate));
}

// ---------------------------------------------------------------------------
// Vectorized evaluation over the training examples

class RealAlgebra {
public:
    struct Slot {
        std::vector<double> buf;
        std::vector<std::uint8_t> mbuf;
        const double* v = nullptr;
        const std::uint8_t* miss = nullptr;  // null when nothing below is missing
    };
    struct View {
        const double* v = nullptr;
        const std::uint8_t* miss = nullptr;
        std::size_t n = 0;
    };
    struct Owned {
        std::vector<double> v;
        std::vector<std::uint8_t> miss;
    };

    RealAlgebra(const Dataset& data, const std::vector<std::uint32_t>& columns, const OperatorRegistry& ops)
        : ops_(ops), columns_(columns), n_(data.rows()), maybe_missing_(data.rows(), 0) {
        for (const auto c : columns_) {
            const Column& col = data.column(c);
            if (col.kind != ColumnKind::Numeric) throw ConfigError("column '" + col.name + "' is not numeric");
            Leaf leaf;
            leaf.values = col.numeric;
            bool any_missing = false;
            leaf.mask.assign(n_, 0);
            for (std::size_t i = 0; i < n_; ++i) {
                if (is_missing(leaf.values[i])) {
                    leaf.mask[i] = 1;
                    leaf.values[i] = 0.0;
                    maybe_missing_[i] = 1;
                    any_missing = true;
                } else if (!std::isfinite(leaf.values[i])) {
                    leaf.poisoned = true;
                }
            }
            if (!any_missing) leaf.mask.clear();
            leaves_.push_back(std::move(leaf));
        }
    }

    std::size_t examples() const noexcept { return n_; }
    std::size_t leaf_count() const noexcept { return columns_.size(); }
    std::uint32_t leaf_column(std::size_t ord) const { return columns_[ord]; }
    std::size_t unary_count() const noexcept { return ops_.unary().size(); }
    std::size_t binary_count() const noexcept { return ops_.binary().size(); }
    bool commutative(std::uint32_t op) const { return ops_.binary()[op].commutative; }

    Slot make_slot() const {
        Slot s;
        s.buf.resize(n_);
        return s;
    }

    bool load_leaf(Slot& s, std::size_t ord) const {
        const Leaf& leaf = leaves_[ord];
        if (leaf.poisoned) return false;
        s.v = leaf.values.data();
        s.miss = leaf.mask.empty() ? nullptr : leaf.mask.data();
        return true;
    }

    bool apply_unary(Slot& s, std::uint32_t op, const Slot& in) const {
        const auto f = ops_.unary()[op].eval;
        double* out = s.buf.data();
        for (std::size_t i = 0; i < n_; ++i) {
            const double x = f(in.v[i]);
            out[i] = std::isfinite(x) && !std::isnan(in.v[i]) ? x : kUndefinedRow;
        }
        s.v = out;
        s.miss = in.miss;
        return viable(out);
    }

    bool apply_binary(Slot& s, std::uint32_t op, const Slot& l, const Slot& r) const {
        const auto f = ops_.binary()[op].eval;
        double* out = s.buf.data();
        for (std::size_t i = 0; i < n_; ++i) {
            const double x = f(l.v[i], r.v[i]);
            out[i] = std::isfinite(x) && !std::isnan(l.v[i] + r.v[i]) ? x : kUndefinedRow;
        }
        s.v = out;
        if (!l.miss || !r.miss) {
            s.miss = l.miss ? l.miss : r.miss;
        } else {
            s.mbuf.resize(n_);
            for (std::size_t i = 0; i < n_; ++i) s.mbuf[i] = l.miss[i] | r.miss[i];
            s.miss = s.mbuf.data();
        }
        return viable(out);
    }

    View view(const Slot& s) const { return {s.v, s.miss, n_}; }
    View view(const Owned& o) const { return {o.v.data(), o.miss.empty() ? nullptr : o.miss.data(), n_}; }
    Owned own(const View& v) const {
        Owned o;
        o.v.assign(v.v, v.v + n_);
        if (v.miss) o.miss.assign(v.miss, v.miss + n_);
        return o;
    }

    // Cached-value encoding of a view: NaN where missing, infinity where
    // undefined.
    std::vector<double> cached(const View& v) const {
        std::vector<double> out(v.v, v.v + n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (v.miss && v.miss[i]) {
                out[i] = kMissing;
            } else if (std::isnan(out[i])) {
                out[i] = kUndefined;
            }
        }
        return out;
    }

private:
    struct Leaf {
        std::vector<double> values;
        std::vector<std::uint8_t> mask;
        bool poisoned = false;
    };

    // Undefined rows are carried as NaN. A subtree is dead once it is
    // undefined on a row that no leaf can turn into a missing row.
    static constexpr double kUndefinedRow = std::numeric_limits<double>::quiet_NaN();

    bool viable(const double* v) const {
        for (std::size_t i = 0; i < n_; ++i)
            if (std::isnan(v[i]) && !maybe_missing_[i]) return false;
        return true;
    }

    const OperatorRegistry& ops_;
    std::vector<std::uint32_t> columns_;
    std::size_t n_;
    std::vector<Leaf> leaves_;
    std::vector<std::uint8_t> maybe_missing_;
};

// ---------------------------------------------------------------------------

struct InvConfig {
    BoundDirection direction = BoundDirection::Upper;
    SearchLimits limits;
    double skips = 1.0;             // max missing fraction for a labeling invariant
    double truth_slack = 0.0;       // allowed violation in the truth test
    double tight_tolerance = 1e-9;  // envelope-vs-target tolerance for stopping
};

struct InvResult {
    std::vector<BoundConjecture> conjectures;
    std::vector<std::uint32_t> eligible;
    std::size_t target = 0;
    SearchStats stats;
};

inline InvResult run_inv(const Dataset& data, std::size_t target_col, const OperatorRegistry& ops,
                         const InvConfig& cfg) {
    const Column& tcol = data.column(target_col);
    if (tcol.kind != ColumnKind::Numeric) throw InputError("target '" + tcol.name + "' is not numeric");
    for (std::size_t r = 0; r < data.rows(); ++r)
        if (is_missing(tcol.numeric[r]))
            throw InputError("target '" + tcol.name + "' has a missing value on row " + std::to_string(r + 1));
    if (data.rows() == 0) throw InputError("no training examples");

    std::vector<std::uint32_t> eligible;
    for (const auto c : data.eligible_numeric(cfg.skips))
        if (c != target_col) eligible.push_back(c);
    if (eligible.empty()) throw ConfigError("no eligible invariants besides the target '" + tcol.name + "'");

    const std::span<const double> target(tcol.numeric);
    RealAlgebra alg(data, eligible, ops);
    ConjectureStore store(cfg.direction, data.rows());

    auto prefilter = [&](const RealAlgebra::View& v) {
        bool any = false;
        for (std::size_t i = 0; i < v.n; ++i) {
            if (v.miss && v.miss[i]) continue;
            any = true;
            const double x = v.v[i];
            if (std::isnan(x)) return false;
            if (cfg.direction == BoundDirection::Upper ? !(target[i] <= x + cfg.truth_slack)
                                                       : !(target[i] >= x - cfg.truth_slack))
                return false;
        }
        if (!any) return false;
        const auto& env = store.envelope();
        for (std::size_t i = 0; i < v.n; ++i) {
            if (v.miss && v.miss[i]) continue;
            if (detail::better(cfg.direction, v.v[i], env[i])) return true;
        }
        return false;
    };
    auto commit = [&](std::span<const Node> labels, const RealAlgebra::View& v) {
        BoundConjecture c{ExpressionTree::from_postorder({labels.begin(), labels.end()}), cfg.direction, alg.cached(v)};
        if (!nondominance_test(c, store)) return false;
        store.insert_and_prune(std::move(c));
        if (store.size() > data.rows()) throw InvariantViolation("more conjectures than examples");
        return store.tight(target, cfg.tight_tolerance);
    };

    InvResult result;
    result.stats = run_search(alg, cfg.limits, prefilter, commit);
    result.conjectures = store.conjectures();
    result.eligible = std::move(eligible);
    result.target = target_col;
    return result;
}

} // namespace conjecturing
