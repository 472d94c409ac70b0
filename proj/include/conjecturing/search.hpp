#pragma once

// Drives a Labeler over the whole shape schedule and feeds candidates, in
// stream order, to an engine's commit step. With more than one thread the
// labelings of a budget are split into work units (shape, first leaf) that
// are evaluated concurrently; survivors of the thread-safe prefilter are then
// committed strictly in unit order, so the result matches the serial run.
//
// Correctness of the parallel path relies on the prefilter being monotone: a
// candidate rejected against an older store must also be rejected against any
// later one. Both engines' stores have this property.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "enumeration.hpp"

namespace conjecturing {

enum class StopReason : std::uint8_t { Criterion, TimeLimit, MaxComplexity, CandidateLimit };

inline std::string to_string(StopReason r) {
    switch (r) {
    case StopReason::Criterion: return "criterion";
    case StopReason::TimeLimit: return "time-limit";
    case StopReason::MaxComplexity: return "max-complexity";
    case StopReason::CandidateLimit: return "candidate-limit";
    }
    return "unknown";
}

struct SearchLimits {
    std::uint32_t max_complexity = 7;
    std::optional<double> time_limit_seconds;
    std::optional<std::uint64_t> max_candidates;
    unsigned threads = 1;
};

struct SearchStats {
    std::uint64_t candidates = 0;  // labeled expressions that evaluated without pruning
    std::uint64_t committed = 0;   // candidates that reached the commit step
    std::uint32_t reached_complexity = 0;
    StopReason stop = StopReason::MaxComplexity;
};

namespace detail {

class Deadline {
public:
    explicit Deadline(std::optional<double> seconds) {
        if (seconds) {
            const auto d = std::chrono::duration<double>(*seconds);
            end_ = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(d);
        }
    }
    bool passed() const { return end_ && std::chrono::steady_clock::now() >= *end_; }

private:
    std::optional<std::chrono::steady_clock::time_point> end_;
};

} // namespace detail

// Algebra must additionally provide
//   View view(const Slot&) const, Owned own(const View&) const, View view(const Owned&) const.
// prefilter(View) -> bool must be safe to call concurrently.
// commit(span<const Node> labels, View) -> bool returns true when the stopping
// criterion is met.
template <class Algebra, class Prefilter, class Commit>
SearchStats run_search(const Algebra& alg, const SearchLimits& limits, Prefilter&& prefilter, Commit&& commit) {
    using Slot = typename Algebra::Slot;
    SearchStats stats;
    detail::Deadline deadline(limits.time_limit_seconds);
    const unsigned threads = limits.threads == 0 ? 1u : limits.threads;

    for (const ShapeBudget budget : shape_schedule(limits.max_complexity)) {
        if (budget.leaves() > alg.leaf_count()) continue;
        const auto shapes = generate_shapes(budget);
        stats.reached_complexity = budget.complexity();

        if (threads == 1) {
            Labeler<Algebra> labeler(alg);
            bool stop = false;
            auto visit = [&](std::span<const Node> labels, const Slot& root) {
                if (limits.max_candidates && stats.candidates >= *limits.max_candidates) {
                    stats.stop = StopReason::CandidateLimit;
                    return !(stop = true);
                }
                ++stats.candidates;
                if ((stats.candidates & 0xFFF) == 0 && deadline.passed()) {
                    stats.stop = StopReason::TimeLimit;
                    return !(stop = true);
                }
                const auto v = alg.view(root);
                if (!prefilter(v)) return true;
                ++stats.committed;
                if (commit(labels, v)) {
                    stats.stop = StopReason::Criterion;
                    return !(stop = true);
                }
                return true;
            };
            for (const auto& shape : shapes) {
                labeler.run(shape, visit);
                if (stop) return stats;
            }
            if (deadline.passed()) {
                stats.stop = StopReason::TimeLimit;
                return stats;
            }
            continue;
        }

        struct Survivor {
            std::uint64_t seq;
            std::vector<Node> labels;
            typename Algebra::Owned values;
        };
        struct Unit {
            std::size_t shape;
            std::size_t first_leaf;
            std::uint64_t count = 0;
            std::vector<Survivor> survivors;
        };
        std::vector<Unit> units;
        for (std::size_t s = 0; s < shapes.size(); ++s)
            for (std::size_t leaf = 0; leaf < alg.leaf_count(); ++leaf) units.push_back({s, leaf, 0, {}});

        const std::size_t batch = static_cast<std::size_t>(threads) * 8;
        std::atomic<bool> timed_out{false};
        for (std::size_t begin = 0; begin < units.size(); begin += batch) {
            const std::size_t end = std::min(units.size(), begin + batch);
            std::atomic<std::size_t> next{begin};
            auto worker = [&]() {
                Labeler<Algebra> labeler(alg);
                for (std::size_t i = next++; i < end; i = next++) {
                    Unit& unit = units[i];
                    labeler.run(
                        shapes[unit.shape],
                        [&](std::span<const Node> labels, const Slot& root) {
                            const std::uint64_t seq = unit.count++;
                            if ((seq & 0xFFF) == 0xFFF && deadline.passed()) timed_out = true;
                            if (timed_out) return false;
                            const auto v = alg.view(root);
                            if (prefilter(v))
                                unit.survivors.push_back({seq, {labels.begin(), labels.end()}, alg.own(v)});
                            return true;
                        },
                        unit.first_leaf);
                }
            };
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();

            for (std::size_t i = begin; i < end; ++i) {
                Unit& unit = units[i];
                for (const Survivor& s : unit.survivors) {
                    if (limits.max_candidates && stats.candidates + s.seq >= *limits.max_candidates) {
                        stats.candidates = *limits.max_candidates;
                        stats.stop = StopReason::CandidateLimit;
                        return stats;
                    }
                    ++stats.committed;
                    if (commit(std::span<const Node>(s.labels), alg.view(s.values))) {
                        stats.candidates += s.seq + 1;
                        stats.stop = StopReason::Criterion;
                        return stats;
                    }
                }
                stats.candidates += unit.count;
                if (limits.max_candidates && stats.candidates >= *limits.max_candidates) {
                    stats.candidates = *limits.max_candidates;
                    stats.stop = StopReason::CandidateLimit;
                    return stats;
                }
                unit.survivors.clear();
                unit.survivors.shrink_to_fit();
            }
            if (timed_out || deadline.passed()) {
                stats.stop = StopReason::TimeLimit;
                return stats;
            }
        }
    }
    stats.stop = StopReason::MaxComplexity;
    return stats;
}

} // namespace conjecturing
