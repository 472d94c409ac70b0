#pragma once

#include <algorithm>
#include <bit>
#include <initializer_list>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bool_expr.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "search.hpp"

namespace conjecturing {

// Fixed-size set of example indices.
class TruthSet {
public:
    TruthSet() = default;
    explicit TruthSet(std::size_t n) : words_((n + 63) / 64, 0), n_(n) {}

    TruthSet(std::size_t n, std::initializer_list<std::size_t> members) : TruthSet(n) {
        for (auto m : members) insert(m);
    }

    static TruthSet from_words(std::vector<std::uint64_t> words, std::size_t n) {
        TruthSet s;
        s.words_ = std::move(words);
        s.n_ = n;
        return s;
    }

    std::size_t universe() const noexcept { return n_; }
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    void insert(std::size_t i) { words_.at(i / 64) |= std::uint64_t{1} << (i % 64); }
    bool contains(std::size_t i) const { return (words_.at(i / 64) >> (i % 64)) & 1u; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool subset_of(const TruthSet& o) const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~o.words_[k]) return false;
        return true;
    }
    TruthSet& operator|=(const TruthSet& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }
    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n_; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    friend bool operator==(const TruthSet&, const TruthSet&) = default;

private:
    std::vector<std::uint64_t> words_;
    std::size_t n_ = 0;
};

enum class ConditionDirection : std::uint8_t { Sufficient, Necessary };

inline std::string to_string(ConditionDirection d) { return d == ConditionDirection::Sufficient ? "sufficient" : "necessary"; }

// A boolean expression with the examples on which it is true (missing
// counts as not true). For the necessary direction `expr` is a sufficient
// condition for the negated target and the reported statement is
// target -> ~expr.
struct ConditionConjecture {
    BoolExpressionTree expr;
    TruthSet truth;
};

inline bool suff_truth_test(const TruthSet& truth, const TruthSet& positives) {
    return !truth.empty() && truth.subset_of(positives);
}

// Passes when the candidate's truth set is not contained in any single
// stored conjecture's truth set.
inline bool suff_nondominance_test(const TruthSet& truth, const std::vector<ConditionConjecture>& store) {
    for (const auto& c : store)
        if (truth.subset_of(c.truth)) return false;
    return true;
}

class ConditionStore {
public:
    ConditionStore(TruthSet positives) : positives_(std::move(positives)), covered_(positives_.universe()) {}

    const std::vector<ConditionConjecture>& conjectures() const noexcept { return conjectures_; }
    const TruthSet& positives() const noexcept { return positives_; }
    std::size_t capacity() const noexcept { return positives_.count(); }

    // Inserts a candidate that passed both tests, dropping stored conjectures
    // whose truth sets it contains. Rejected (returns false) if the store is
    // already at capacity after pruning.
    bool insert_and_prune(ConditionConjecture c) {
        std::vector<ConditionConjecture> kept;
        for (const auto& old : conjectures_)
            if (!old.truth.subset_of(c.truth)) kept.push_back(old);
        if (kept.size() >= capacity()) return false;
        kept.push_back(std::move(c));
        conjectures_ = std::move(kept);
        covered_ = TruthSet(positives_.universe());
        for (const auto& k : conjectures_) covered_ |= k.truth;
        return true;
    }

    bool covers_positives() const { return positives_.subset_of(covered_); }

private:
    TruthSet positives_;
    TruthSet covered_;
    std::vector<ConditionConjecture> conjectures_;
};

// ---------------------------------------------------------------------------

class BoolAlgebra {
public:
    struct Slot {
        std::vector<std::uint64_t> tbuf, mbuf;
        const std::uint64_t* t = nullptr;
        const std::uint64_t* m = nullptr;  // null when nothing below is missing
    };
    struct View {
        const std::uint64_t* t = nullptr;
        const std::uint64_t* m = nullptr;
    };
    using Owned = TruthSet;

    BoolAlgebra(const Dataset& data, const std::vector<std::uint32_t>& columns, const BoolRegistry& ops)
        : ops_(ops), columns_(columns), n_(data.rows()), words_((n_ + 63) / 64) {
        for (const auto c : columns_) {
            const Column& col = data.column(c);
            if (col.kind != ColumnKind::Boolean) throw ConfigError("column '" + col.name + "' is not boolean");
            Leaf leaf;
            leaf.t.assign(words_, 0);
            leaf.m.assign(words_, 0);
            bool any_missing = false;
            for (std::size_t i = 0; i < n_; ++i) {
                if (col.boolean[i] < 0) {
                    leaf.m[i / 64] |= std::uint64_t{1} << (i % 64);
                    any_missing = true;
                } else if (col.boolean[i] > 0) {
                    leaf.t[i / 64] |= std::uint64_t{1} << (i % 64);
                }
            }
            if (!any_missing) leaf.m.clear();
            leaves_.push_back(std::move(leaf));
        }
    }

    std::size_t leaf_count() const noexcept { return columns_.size(); }
    std::uint32_t leaf_column(std::size_t ord) const { return columns_[ord]; }
    std::size_t unary_count() const noexcept { return ops_.unary().size(); }
    std::size_t binary_count() const noexcept { return ops_.binary().size(); }
    bool commutative(std::uint32_t op) const { return ops_.binary()[op].commutative; }

    Slot make_slot() const {
        Slot s;
        s.tbuf.resize(words_);
        return s;
    }

    bool load_leaf(Slot& s, std::size_t ord) const {
        s.t = leaves_[ord].t.data();
        s.m = leaves_[ord].m.empty() ? nullptr : leaves_[ord].m.data();
        return true;
    }

    bool apply_unary(Slot& s, std::uint32_t, const Slot& in) const {
        for (std::size_t k = 0; k < words_; ++k) s.tbuf[k] = ~in.t[k];
        s.t = s.tbuf.data();
        s.m = in.m;
        return true;
    }

    bool apply_binary(Slot& s, std::uint32_t op, const Slot& l, const Slot& r) const {
        const auto kind = ops_.binary()[op].kind;
        for (std::size_t k = 0; k < words_; ++k) {
            const auto a = l.t[k], b = r.t[k];
            switch (kind) {
            case BoolOpKind::And: s.tbuf[k] = a & b; break;
            case BoolOpKind::Or: s.tbuf[k] = a | b; break;
            case BoolOpKind::Xor: s.tbuf[k] = a ^ b; break;
            case BoolOpKind::Implies: s.tbuf[k] = ~a | b; break;
            case BoolOpKind::Not: s.tbuf[k] = ~a; break;
            }
        }
        s.t = s.tbuf.data();
        if (!l.m || !r.m) {
            s.m = l.m ? l.m : r.m;
        } else {
            s.mbuf.resize(words_);
            for (std::size_t k = 0; k < words_; ++k) s.mbuf[k] = l.m[k] | r.m[k];
            s.m = s.mbuf.data();
        }
        return true;
    }

    View view(const Slot& s) const { return {s.t, s.m}; }
    View view(const Owned& o) const { return {o.words().data(), nullptr}; }
    Owned own(const View& v) const { return truth_set(v); }

    // Examples where the expression is true and nothing is missing.
    TruthSet truth_set(const View& v) const {
        std::vector<std::uint64_t> w(words_);
        for (std::size_t k = 0; k < words_; ++k) w[k] = v.t[k] & (v.m ? ~v.m[k] : ~std::uint64_t{0});
        if (n_ % 64) w.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
        return TruthSet::from_words(std::move(w), n_);
    }

private:
    struct Leaf {
        std::vector<std::uint64_t> t, m;
    };

    const BoolRegistry& ops_;
    std::vector<std::uint32_t> columns_;
    std::size_t n_;
    std::size_t words_;
    std::vector<Leaf> leaves_;
};

struct PropConfig {
    ConditionDirection direction = ConditionDirection::Sufficient;
    SearchLimits limits;
};

struct PropResult {
    std::vector<ConditionConjecture> conjectures;
    std::vector<std::uint32_t> properties;  // labelable columns
    std::size_t target = 0;
    ConditionDirection direction = ConditionDirection::Sufficient;
    TruthSet positives;  // examples the conditions must cover
    SearchStats stats;
};

// Examples where the target column holds `value` (missing excluded).
inline TruthSet examples_with(const Column& col, bool value) {
    TruthSet s(col.boolean.size());
    for (std::size_t i = 0; i < col.boolean.size(); ++i)
        if (col.boolean[i] == (value ? 1 : 0)) s.insert(i);
    return s;
}

// Conjecturing over boolean columns. `exclude` lists columns never used as
// leaves besides the target itself.
inline PropResult run_prop(const Dataset& data, std::size_t target_col, const BoolRegistry& ops, const PropConfig& cfg,
                           const std::vector<std::uint32_t>& exclude = {}) {
    const Column& tcol = data.column(target_col);
    if (tcol.kind != ColumnKind::Boolean) throw InputError("property of interest '" + tcol.name + "' is not boolean");
    const TruthSet trues = examples_with(tcol, true);
    const TruthSet falses = examples_with(tcol, false);
    if (trues.empty() || falses.empty())
        throw ConfigError("property of interest '" + tcol.name + "' must be true on some and false on some examples");

    std::vector<std::uint32_t> leaves;
    for (std::size_t c = 0; c < data.cols(); ++c) {
        if (c == target_col || data.column(c).kind != ColumnKind::Boolean) continue;
        if (std::find(exclude.begin(), exclude.end(), static_cast<std::uint32_t>(c)) != exclude.end()) continue;
        leaves.push_back(static_cast<std::uint32_t>(c));
    }
    if (leaves.empty()) throw ConfigError("no properties available besides the property of interest");

    const TruthSet positives = cfg.direction == ConditionDirection::Sufficient ? trues : falses;
    BoolAlgebra alg(data, leaves, ops);
    ConditionStore store(positives);

    auto prefilter = [&](const BoolAlgebra::View& v) {
        const auto pw = positives.words();
        const std::size_t words = pw.size();
        std::uint64_t any = 0;
        for (std::size_t k = 0; k < words; ++k) {
            std::uint64_t t = v.t[k] & (v.m ? ~v.m[k] : ~std::uint64_t{0});
            if (k + 1 == words && data.rows() % 64) t &= (std::uint64_t{1} << (data.rows() % 64)) - 1;
            if (t & ~pw[k]) return false;
            any |= t;
        }
        if (!any) return false;
        for (const auto& c : store.conjectures()) {
            const auto cw = c.truth.words();
            bool subset = true;
            for (std::size_t k = 0; k < words && subset; ++k) {
                std::uint64_t t = v.t[k] & (v.m ? ~v.m[k] : ~std::uint64_t{0});
                if (k + 1 == words && data.rows() % 64) t &= (std::uint64_t{1} << (data.rows() % 64)) - 1;
                subset = (t & ~cw[k]) == 0;
            }
            if (subset) return false;
        }
        return true;
    };
    auto commit = [&](std::span<const Node> labels, const BoolAlgebra::View& v) {
        TruthSet truth = alg.truth_set(v);
        if (!suff_truth_test(truth, positives) || !suff_nondominance_test(truth, store.conjectures())) return false;
        store.insert_and_prune({BoolExpressionTree::from_postorder({labels.begin(), labels.end()}), std::move(truth)});
        return store.covers_positives();
    };

    PropResult result;
    result.stats = run_search(alg, cfg.limits, prefilter, commit);
    result.conjectures = store.conjectures();
    result.properties = std::move(leaves);
    result.target = target_col;
    result.direction = cfg.direction;
    result.positives = positives;
    return result;
}

// Text of the reported statement: `c -> target` for sufficient conditions,
// `target -> ~c` for necessary ones.
inline std::string condition_statement(const ConditionConjecture& c, ConditionDirection dir, const BoolRegistry& ops,
                                       std::span<const std::string> names, const std::string& target) {
    const std::string body = to_canonical_string(c.expr, ops, names);
    const bool atom = c.expr.root().kind != NodeKind::Binary;
    if (dir == ConditionDirection::Sufficient) return (atom ? body : "(" + body + ")") + " -> " + target;
    return target + " -> ~" + (atom ? body : "(" + body + ")");
}

} // namespace conjecturing
