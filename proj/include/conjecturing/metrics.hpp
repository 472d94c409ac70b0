#pragma once

// Post-hoc evaluation of conjectures on training or held-out data.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "errors.hpp"
#include "invariant_engine.hpp"

namespace conjecturing {

// RMSE of `predictions` divided by the population standard deviation of
// `targets`.
inline double nrmse(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) throw InputError("nrmse: length mismatch");
    const std::size_t n = targets.size();
    if (n < 2) throw InputError("nrmse needs at least two rows");
    double mean = 0.0;
    for (const double t : targets) mean += t;
    mean /= static_cast<double>(n);
    double var = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        var += (targets[i] - mean) * (targets[i] - mean);
        sq += (predictions[i] - targets[i]) * (predictions[i] - targets[i]);
    }
    const double sigma = std::sqrt(var / static_cast<double>(n));
    if (!(sigma > 0.0)) throw InputError("nrmse: target has zero variance");
    return std::sqrt(sq / static_cast<double>(n)) / sigma;
}

struct BoundScore {
    double nrmse = std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    std::size_t excluded = 0;  // rows where the bound was missing or undefined
};

// NRMSE of a bound used as a predictor on `data`, skipping rows where it
// cannot be evaluated.
inline BoundScore score_bound(const ExpressionTree& expr, const OperatorRegistry& ops, const Dataset& data,
                              std::size_t target_col) {
    const auto values = evaluate_column(expr, ops, data);
    std::vector<double> pred, tgt;
    BoundScore s;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const double t = data.number(r, target_col);
        if (!std::isfinite(values[r]) || is_missing(t)) {
            ++s.excluded;
            continue;
        }
        pred.push_back(values[r]);
        tgt.push_back(t);
    }
    s.used = pred.size();
    s.nrmse = nrmse(pred, tgt);
    return s;
}

// Mean absolute error over the defined entries of a cached-value vector;
// infinity when nothing is defined.
inline double mean_absolute_error(std::span<const double> values, std::span<const double> target) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) continue;
        sum += std::fabs(values[i] - target[i]);
        ++n;
    }
    return n == 0 ? std::numeric_limits<double>::infinity() : sum / static_cast<double>(n);
}

// Index of the lowest-MAE conjecture; the earliest wins ties.
inline std::size_t select_best(const std::vector<BoundConjecture>& conjectures, std::span<const double> target) {
    if (conjectures.empty()) throw InputError("select_best: no conjectures");
    std::size_t best = 0;
    double best_mae = mean_absolute_error(conjectures[0].values, target);
    for (std::size_t k = 1; k < conjectures.size(); ++k) {
        const double mae = mean_absolute_error(conjectures[k].values, target);
        if (mae < best_mae) {
            best_mae = mae;
            best = k;
        }
    }
    return best;
}

struct ConditionEval {
    std::size_t support = 0;  // rows where the antecedent holds
    std::size_t hits = 0;     // rows where antecedent and consequent hold
    std::size_t counted = 0;  // rows where both sides are defined
    std::size_t consequent = 0;
    std::optional<double> precision;  // absent when support is zero
    std::optional<double> lift;

    double base_rate() const {
        return counted == 0 ? std::numeric_limits<double>::quiet_NaN()
                            : static_cast<double>(consequent) / static_cast<double>(counted);
    }
};

inline ConditionEval condition_metrics(std::span<const std::optional<bool>> antecedent,
                                       std::span<const std::optional<bool>> consequent) {
    if (antecedent.size() != consequent.size()) throw InputError("condition_metrics: length mismatch");
    ConditionEval e;
    for (std::size_t i = 0; i < antecedent.size(); ++i) {
        if (!antecedent[i] || !consequent[i]) continue;
        ++e.counted;
        if (*consequent[i]) ++e.consequent;
        if (*antecedent[i]) {
            ++e.support;
            if (*consequent[i]) ++e.hits;
        }
    }
    if (e.support > 0) {
        e.precision = static_cast<double>(e.hits) / static_cast<double>(e.support);
        if (e.consequent > 0) e.lift = *e.precision / e.base_rate();
    }
    return e;
}

// Lift from a precision and the consequent's base rate.
inline double lift_of(double precision, double base_rate) { return precision / base_rate; }

struct EnvelopeRow {
    double target = 0.0;
    double envelope = 0.0;  // NaN when no conjecture is defined on the row
    double gap = 0.0;
    std::size_t attaining = 0;  // index of the first conjecture attaining the envelope
};

// Per-example envelope of cached bound values: min for upper, max for lower.
inline std::vector<EnvelopeRow> envelope_report(const std::vector<BoundConjecture>& conjectures,
                                                std::span<const double> target, BoundDirection dir) {
    if (conjectures.empty()) throw InputError("envelope_report: empty store");
    std::vector<EnvelopeRow> out(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
        EnvelopeRow row;
        row.target = target[i];
        row.envelope = std::numeric_limits<double>::quiet_NaN();
        row.attaining = conjectures.size();
        for (std::size_t k = 0; k < conjectures.size(); ++k) {
            const double v = conjectures[k].values.at(i);
            if (!std::isfinite(v)) continue;
            if (row.attaining == conjectures.size() ||
                (dir == BoundDirection::Upper ? v < row.envelope : v > row.envelope)) {
                row.envelope = v;
                row.attaining = k;
            }
        }
        row.gap = dir == BoundDirection::Upper ? row.envelope - row.target : row.target - row.envelope;
        out[i] = row;
    }
    return out;
}

} // namespace conjecturing
