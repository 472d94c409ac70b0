#pragma once

// Deterministic benchmark generators.
//
// Random stream: splitmix64. state += 0x9E3779B97F4A7C15, then the usual
// xor-shift-multiply finalizer. uniform() takes the top 53 bits of a draw
// times 2^-53, so it lies in [0, 1). normal() is Box-Muller on two uniforms,
// cosine branch only: sqrt(-2 ln(1 - u1)) * cos(2 pi u2).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dataset.hpp"
#include "errors.hpp"

namespace conjecturing {

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(uniform() * static_cast<double>(span)));
    }

    double normal() noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

struct BenchmarkSpec {
    std::string name;
    std::uint64_t seed = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["seed"] = seed;
        j["n_train"] = n_train;
        j["n_test"] = n_test;
        for (const auto& [k, v] : params.items()) j[k] = v;
        return j;
    }
};

struct Benchmark {
    BenchmarkSpec spec;
    Dataset train;
    Dataset test;
};

namespace detail {

// Splits column-wise data into the first n_train rows and the rest.
inline Benchmark split_bench(BenchmarkSpec spec, std::vector<Column> all) {
    Dataset full(std::move(all));
    std::vector<std::size_t> a, b;
    for (std::size_t r = 0; r < full.rows(); ++r) (r < spec.n_train ? a : b).push_back(r);
    Benchmark out{std::move(spec), full.select_rows(a), full.select_rows(b)};
    return out;
}

inline void check_sizes(std::size_t n_train, std::size_t n_test) {
    if (n_train < 1 || n_test < 1) throw ConfigError("benchmark sizes must be at least 1");
}

} // namespace detail

inline constexpr double kGravityConstant = 0.057098;

// F = k m1 m2 / r^2 with m1, m2, r ~ U(1, 100000).
inline Benchmark gen_gravity(std::uint64_t seed, std::size_t n_train = 1000, std::size_t n_test = 1000,
                             double k = kGravityConstant) {
    detail::check_sizes(n_train, n_test);
    if (!(k > 0.0)) throw ConfigError("gravity constant must be positive");
    SplitMix64 rng(seed);
    const std::size_t n = n_train + n_test;
    std::vector<double> m1(n), m2(n), r(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
        m1[i] = rng.uniform(1.0, 100000.0);
        m2[i] = rng.uniform(1.0, 100000.0);
        r[i] = rng.uniform(1.0, 100000.0);
        f[i] = k * m1[i] * m2[i] / (r[i] * r[i]);
    }
    BenchmarkSpec spec{"gravity", seed, n_train, n_test, {}};
    spec.params["k"] = k;
    spec.params["range"] = {1.0, 100000.0};
    spec.params["target"] = "F = k*m1*m2/r^2";
    std::vector<Column> cols;
    cols.push_back(Column::make_numeric("m1", std::move(m1)));
    cols.push_back(Column::make_numeric("m2", std::move(m2)));
    cols.push_back(Column::make_numeric("r", std::move(r)));
    cols.push_back(Column::make_numeric("F", std::move(f)));
    return detail::split_bench(std::move(spec), std::move(cols));
}

inline bool nguyen_bivariate(int instance) { return instance >= 9; }

inline std::pair<double, double> nguyen_range(int instance) {
    if (instance <= 6) return {-1.0, 1.0};
    if (instance == 7) return {0.0, 2.0};
    if (instance == 8) return {0.0, 4.0};
    return {0.0, 1.0};
}

inline const char* nguyen_formula(int instance) {
    static const char* const table[] = {
        "x^3+x^2+x",
        "x^4+x^3+x^2+x",
        "x^5+x^4+x^3+x^2+x",
        "x^6+x^5+x^4+x^3+x^2+x",
        "sin(x^2)*cos(x)-1",
        "sin(x)+sin(x+x^2)",
        "log(x+1)+log(x^2+1)",
        "sqrt(x)",
        "sin(x)+sin(y^2)",
        "2*sin(x)*cos(y)",
        "x^y",
        "x^4-x^3+y^2/2-y",
    };
    return table[instance - 1];
}

inline double nguyen_target(int instance, double x, double y) {
    const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x, x6 = x5 * x;
    switch (instance) {
    case 1: return x3 + x2 + x;
    case 2: return x4 + x3 + x2 + x;
    case 3: return x5 + x4 + x3 + x2 + x;
    case 4: return x6 + x5 + x4 + x3 + x2 + x;
    case 5: return std::sin(x2) * std::cos(x) - 1.0;
    case 6: return std::sin(x) + std::sin(x + x2);
    case 7: return std::log(x + 1.0) + std::log(x2 + 1.0);
    case 8: return std::sqrt(x);
    case 9: return std::sin(x) + std::sin(y * y);
    case 10: return 2.0 * std::sin(x) * std::cos(y);
    case 11: return std::pow(x, y);
    case 12: return x4 - x3 + 0.5 * y * y - y;
    }
    throw ConfigError("nguyen instance must be in 1..12");
}

// Columns x^2..x^6, sin(x), cos(x), sqrt(x), y^2 for bivariate instances,
// then the constants one, one_b and two.
inline AugmentationSpec nguyen_augmentation(int instance) {
    AugmentationSpec spec;
    spec.derived = {{"x2", "x", DerivedFn::Square}, {"x3", "x", DerivedFn::Cube},  {"x4", "x", DerivedFn::Pow4},
                    {"x5", "x", DerivedFn::Pow5},   {"x6", "x", DerivedFn::Pow6},  {"sinx", "x", DerivedFn::Sin},
                    {"cosx", "x", DerivedFn::Cos},  {"sqrtx", "x", DerivedFn::Sqrt}};
    if (nguyen_bivariate(instance)) spec.derived.push_back({"y2", "y", DerivedFn::Square});
    spec.constants = {{"one", 1.0}, {"one_b", 1.0}, {"two", 2.0}};
    return spec;
}

// Target column `f`, preceded by x (and y for instances 9-12). Augmented
// columns follow the target.
inline Benchmark gen_nguyen(int instance, std::uint64_t seed, bool augmented = false, std::size_t n_train = 20,
                            std::size_t n_test = 20) {
    if (instance < 1 || instance > 12) throw ConfigError("nguyen instance must be in 1..12");
    detail::check_sizes(n_train, n_test);
    SplitMix64 rng(seed);
    const auto [lo, hi] = nguyen_range(instance);
    const bool two = nguyen_bivariate(instance);
    const std::size_t n = n_train + n_test;
    std::vector<double> x(n), y(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.uniform(lo, hi);
        if (two) y[i] = rng.uniform(lo, hi);
        f[i] = nguyen_target(instance, x[i], y[i]);
    }
    BenchmarkSpec spec{"nguyen", seed, n_train, n_test, {}};
    spec.params["instance"] = instance;
    spec.params["range"] = {lo, hi};
    spec.params["target"] = nguyen_formula(instance);
    spec.params["augmented"] = augmented;
    std::vector<Column> cols;
    cols.push_back(Column::make_numeric("x", std::move(x)));
    if (two) cols.push_back(Column::make_numeric("y", std::move(y)));
    cols.push_back(Column::make_numeric("f", std::move(f)));
    auto bench = detail::split_bench(std::move(spec), std::move(cols));
    if (augmented) {
        const auto aug = nguyen_augmentation(instance);
        bench.train = inject(bench.train, aug);
        bench.test = inject(bench.test, aug);
    }
    return bench;
}

// Appends standard-normal columns noise_1..noise_k.
inline Dataset gen_noise_columns(const Dataset& data, std::size_t k, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Dataset out = data;
    for (std::size_t j = 1; j <= k; ++j) {
        std::vector<double> v(data.rows());
        for (auto& x : v) x = rng.normal();
        out = out.with_column(Column::make_numeric("noise_" + std::to_string(j), std::move(v)));
    }
    return out;
}

inline const std::vector<std::string>& property_types() {
    static const std::vector<std::string> t{"singleFamily", "condo",       "townhouse", "multiFamily",
                                            "mobileHome",   "manufactured", "other"};
    return t;
}

inline constexpr double kPriceThreshold = 300000.0;

// Synthetic listings. The class label priceClass is isAbove when
// squareFootage * pricePerSquareFoot (plus rounding noise, if enabled)
// reaches 300000, else isBelow. Rounding noise is uniform within one unit of
// pricePerSquareFoot.
inline Benchmark gen_interaction(std::uint64_t seed, std::size_t n_train = 1000, std::size_t n_test = 1000,
                                 bool rounding_noise = false) {
    detail::check_sizes(n_train, n_test);
    SplitMix64 rng(seed);
    const std::size_t n = n_train + n_test;
    std::vector<double> beds(n), baths(n), sqft(n), ppsf(n), days(n), k300(n, kPriceThreshold);
    std::vector<std::int32_t> type(n), cls(n);
    for (std::size_t i = 0; i < n; ++i) {
        beds[i] = static_cast<double>(rng.integer(1, 6));
        baths[i] = static_cast<double>(rng.integer(1, 4));
        sqft[i] = static_cast<double>(rng.integer(500, 4000));
        ppsf[i] = static_cast<double>(rng.integer(60, 400));
        days[i] = static_cast<double>(rng.integer(0, 180));
        type[i] = static_cast<std::int32_t>(rng.integer(0, static_cast<std::int64_t>(property_types().size()) - 1));
        double price = sqft[i] * ppsf[i];
        if (rounding_noise) price += rng.uniform(-ppsf[i], ppsf[i]);
        cls[i] = price >= kPriceThreshold ? 1 : 0;
    }
    BenchmarkSpec spec{"interaction", seed, n_train, n_test, {}};
    spec.params["threshold"] = kPriceThreshold;
    spec.params["rounding_noise"] = rounding_noise;
    spec.params["target"] = "priceClass = isAbove iff squareFootage*pricePerSquareFoot >= 300000";
    std::vector<Column> cols;
    cols.push_back(Column::make_numeric("bedrooms", std::move(beds)));
    cols.push_back(Column::make_numeric("bathrooms", std::move(baths)));
    cols.push_back(Column::make_numeric("squareFootage", std::move(sqft)));
    cols.push_back(Column::make_numeric("pricePerSquareFoot", std::move(ppsf)));
    cols.push_back(Column::make_numeric("daysOnMarket", std::move(days)));
    cols.push_back(Column::make_categorical("propertyType", std::move(type), property_types()));
    cols.push_back(Column::make_numeric("300K", std::move(k300)));
    cols.push_back(Column::make_categorical("priceClass", std::move(cls), {"isBelow", "isAbove"}));
    return detail::split_bench(std::move(spec), std::move(cols));
}

} // namespace conjecturing
