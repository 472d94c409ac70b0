#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "conjecturing/dataset.hpp"

using namespace conjecturing;

namespace {

Dataset csv(const std::string& text, const SchemaHints& hints = {}) {
    std::istringstream in(text);
    return read_csv(in, hints);
}

} // namespace

TEST(ReadCsv, NumericColumnsAreInferred) {
    const auto d = csv("m1,m2,r\n1,2,3\n4.5,5e3,-6\n");
    ASSERT_EQ(d.cols(), 3u);
    ASSERT_EQ(d.rows(), 2u);
    EXPECT_EQ(d.names(), (std::vector<std::string>{"m1", "m2", "r"}));
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(d.column(c).kind, ColumnKind::Numeric);
    EXPECT_EQ(d.number(1, 1), 5000.0);
}

TEST(ReadCsv, BooleanAndCategoricalInference) {
    const auto d = csv("a,b,c\ntrue,0,red\nFALSE,1,blue\n,1,red\n");
    EXPECT_EQ(d.column(0).kind, ColumnKind::Boolean);
    // 0/1 parse as numbers first.
    EXPECT_EQ(d.column(1).kind, ColumnKind::Numeric);
    EXPECT_EQ(d.column(2).kind, ColumnKind::Categorical);
    EXPECT_EQ(d.column(2).levels, (std::vector<std::string>{"red", "blue"}));
    EXPECT_TRUE(d.column(0).missing(2));
}

TEST(ReadCsv, YesNoHintGivesBoolean) {
    SchemaHints hints;
    hints["flag"] = ColumnHint{ColumnKind::Boolean, "yes", "no"};
    const auto d = csv("flag\nyes\nno\nyes\n", hints);
    ASSERT_EQ(d.column(0).kind, ColumnKind::Boolean);
    EXPECT_EQ(d.column(0).boolean, (std::vector<std::int8_t>{1, 0, 1}));
    EXPECT_EQ(csv("flag\nyes\nno\n").column(0).kind, ColumnKind::Categorical);
}

TEST(ReadCsv, HintMismatchIsInputError) {
    SchemaHints hints;
    hints["x"] = ColumnHint{ColumnKind::Numeric, std::nullopt, std::nullopt};
    EXPECT_THROW(csv("x\nabc\n", hints), InputError);
}

TEST(ReadCsv, RaggedRowNamesTheRow) {
    try {
        csv("a,b,c\n1,2,3\n4,5\n");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
    }
}

TEST(ReadCsv, DuplicateHeaderRejected) { EXPECT_THROW(csv("a,b,a\n1,2,3\n"), InputError); }

TEST(ReadCsv, EmptyAndNaNCellsAreMissing) {
    const auto d = csv("x,y\n,1\nNaN,2\n3,\n");
    EXPECT_TRUE(std::isnan(d.number(0, 0)));
    EXPECT_TRUE(std::isnan(d.number(1, 0)));
    EXPECT_EQ(d.number(2, 0), 3.0);
    EXPECT_DOUBLE_EQ(d.missing_fraction(0), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(d.missing_fraction(1), 1.0 / 3.0);
}

TEST(ReadCsv, QuotedFieldsAndCrLf) {
    const auto d = csv("name,v\r\n\"a, b\",1\r\n\"say \"\"hi\"\"\",2\r\n");
    EXPECT_EQ(d.column(0).levels, (std::vector<std::string>{"a, b", "say \"hi\""}));
    EXPECT_EQ(d.number(1, 1), 2.0);
}

TEST(ReadCsv, EmptyInputIsError) { EXPECT_THROW(csv(""), InputError); }

TEST(OneHot, TwoLevels) {
    const auto d = one_hot(csv("t,v\ncondo,1\ntownhouse,2\ncondo,3\n"), "t");
    EXPECT_EQ(d.names(), (std::vector<std::string>{"t__condo", "t__townhouse", "v"}));
    EXPECT_EQ(d.column(0).boolean, (std::vector<std::int8_t>{1, 0, 1}));
    EXPECT_EQ(d.column(1).boolean, (std::vector<std::int8_t>{0, 1, 0}));
}

TEST(OneHot, SingleLevelIsAllTrue) {
    const auto d = one_hot(csv("t\nx\nx\n"), "t");
    ASSERT_EQ(d.cols(), 1u);
    EXPECT_EQ(d.column(0).boolean, (std::vector<std::int8_t>{1, 1}));
}

TEST(OneHot, SevenLevels) {
    std::string text = "t\n";
    for (const char* l : {"a", "b", "c", "d", "e", "f", "g", "a"}) text += std::string(l) + "\n";
    EXPECT_EQ(one_hot(csv(text), "t").cols(), 7u);
}

TEST(OneHot, MissingSourceIsMissingEverywhere) {
    const auto d = one_hot(csv("t,v\ncondo,1\n,2\nloft,3\n"), "t");
    EXPECT_EQ(d.column(0).boolean[1], kBoolMissing);
    EXPECT_EQ(d.column(1).boolean[1], kBoolMissing);
}

TEST(OneHot, NumericColumnRejected) { EXPECT_THROW(one_hot(csv("x\n1\n"), "x"), ConfigError); }

TEST(Inject, ConstantColumn) {
    AugmentationSpec spec;
    spec.constants.push_back({"300K", 300000.0});
    const auto d = inject(csv("x\n1\n2\n3\n"), spec);
    const auto c = d.index_of("300K");
    for (std::size_t r = 0; r < d.rows(); ++r) EXPECT_EQ(d.number(r, c), 300000.0);
}

TEST(Inject, SqrtColumnAndDomainViolation) {
    AugmentationSpec spec;
    spec.derived.push_back({"sqrtx", "x", DerivedFn::Sqrt});
    const auto d = inject(csv("x\n4\n-1\n"), spec);
    const auto c = d.index_of("sqrtx");
    EXPECT_EQ(d.number(0, c), 2.0);
    EXPECT_TRUE(std::isnan(d.number(1, c)));
}

TEST(Inject, DerivedPowersAreDeterministic) {
    AugmentationSpec spec;
    for (auto [n, f] : {std::pair{"x2", DerivedFn::Square}, {"x3", DerivedFn::Cube}, {"x6", DerivedFn::Pow6}})
        spec.derived.push_back({n, "x", f});
    const auto src = csv("x\n1.5\n-2\n");
    const auto a = inject(src, spec), b = inject(src, spec);
    EXPECT_EQ(a.number(1, a.index_of("x3")), -8.0);
    EXPECT_EQ(a.number(1, a.index_of("x6")), 64.0);
    for (std::size_t c = 0; c < a.cols(); ++c)
        for (std::size_t r = 0; r < a.rows(); ++r) EXPECT_EQ(a.number(r, c), b.number(r, c));
}

TEST(Inject, UnknownSourceRejected) {
    AugmentationSpec spec;
    spec.derived.push_back({"z2", "z", DerivedFn::Square});
    EXPECT_THROW(inject(csv("x\n1\n"), spec), ConfigError);
}

TEST(RoundTrip, NumericValuesAreBitExact) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    std::vector<double> a(50), b(50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = u(rng) / 3.0;
        b[i] = i % 7 == 0 ? kMissing : std::ldexp(u(rng), -300);
    }
    const Dataset d({Column::make_numeric("a", a), Column::make_numeric("b", b),
                     Column::make_boolean("p", std::vector<std::int8_t>(50, 1)),
                     Column::make_categorical("k", std::vector<std::int32_t>(50, 0), {"one, two"})});
    std::stringstream s;
    write_csv(s, d);
    const auto back = read_csv(s);
    ASSERT_EQ(back.cols(), d.cols());
    for (std::size_t r = 0; r < d.rows(); ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            const double x = d.number(r, c), y = back.number(r, c);
            if (std::isnan(x)) {
                EXPECT_TRUE(std::isnan(y));
            } else {
                EXPECT_EQ(std::memcmp(&x, &y, sizeof x), 0);
            }
        }
    EXPECT_EQ(back.column(2).kind, ColumnKind::Boolean);
    EXPECT_EQ(back.column(3).levels, d.column(3).levels);
}

TEST(Skips, ExcludesExactlyColumnsAboveThreshold) {
    // Missing fractions 0, 0.25, 0.5, 0.75.
    const auto d = csv("a,b,c,d\n1,,,\n1,1,,\n1,1,1,\n1,1,1,1\n");
    EXPECT_EQ(d.eligible_numeric(0.5), (std::vector<std::uint32_t>{0, 1, 2}));
    EXPECT_EQ(d.eligible_numeric(0.0), (std::vector<std::uint32_t>{0}));
    EXPECT_EQ(d.eligible_numeric(0.9), (std::vector<std::uint32_t>{0, 1, 2, 3}));
}

TEST(Skips, MissingFractionMatchesCount) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng() % 30;
        std::vector<double> v(n);
        std::size_t missing = 0;
        for (auto& x : v) {
            x = rng() % 3 == 0 ? kMissing : 1.0;
            missing += std::isnan(x) ? 1 : 0;
        }
        const Dataset d({Column::make_numeric("v", v)});
        EXPECT_DOUBLE_EQ(d.missing_fraction(0), static_cast<double>(missing) / static_cast<double>(n));
    }
}

TEST(Whitespace, TargetLastWithoutHeader) {
    std::istringstream in("1 2 3\n4 5 6\n\n");
    const auto d = read_whitespace(in);
    EXPECT_EQ(d.names(), (std::vector<std::string>{"x1", "x2", "target"}));
    EXPECT_EQ(d.rows(), 2u);
    EXPECT_EQ(d.number(1, 2), 6.0);
}

TEST(Whitespace, HeaderAndArityCheck) {
    std::istringstream ok("x y f\n1 2 3\n");
    EXPECT_EQ(read_whitespace(ok).names(), (std::vector<std::string>{"x", "y", "f"}));
    std::istringstream bad("1 2 3\n4 5\n");
    EXPECT_THROW(read_whitespace(bad), InputError);
}

TEST(Dataset, SelectRowsAndDuplicateColumns) {
    const auto d = csv("a,b\n1,2\n3,4\n5,6\n");
    const auto s = d.select_rows({2, 0});
    EXPECT_EQ(s.number(0, 0), 5.0);
    EXPECT_EQ(s.number(1, 1), 2.0);
    EXPECT_THROW(d.with_column(Column::make_numeric("a", {0, 0, 0})), InputError);
    EXPECT_THROW(d.index_of("zzz"), ConfigError);
}
