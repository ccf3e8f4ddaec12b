#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mvsel/metrics.hpp"
#include "mvsel/rng.hpp"

using namespace mvsel;

namespace {

Mask from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    const std::size_t r = rows.size(), c = rows.begin()->size();
    Mask m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (int v : row) m.set(i, j++, v != 0);
        ++i;
    }
    return m;
}

Mask random_mask(std::size_t r, std::size_t c, SeededRng& rng) {
    Mask m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, rng.uniform() < 0.4);
    return m;
}

}  // namespace

TEST_CASE("confusion counts, hand enumeration") {
    const Mask truth = from_rows({{1, 0, 1}, {0, 1, 0}, {1, 0, 0}});
    const Mask est = from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(confusion_counts(est, truth) == ConfusionCounts{2, 3, 2, 2});
    // strictly upper: (0,1) (0,2) (1,2)
    CHECK(confusion_counts(est, truth, Scope::upper) == ConfusionCounts{0, 1, 1, 1});
    CHECK_THROWS_AS(confusion_counts(est, Mask(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(confusion_counts(Mask(2, 3), Mask(2, 3), Scope::upper), std::invalid_argument);
}

TEST_CASE("matthews correlation") {
    CHECK(mcc({3, 4, 1, 2}) == doctest::Approx(10.0 / std::sqrt(600.0)).epsilon(1e-15));
    CHECK(mcc({3, 4, 1, 2}) == doctest::Approx(0.408248).epsilon(1e-6));
    CHECK(mcc({5, 7, 0, 0}) == 1.0);
    CHECK(mcc({0, 0, 5, 7}) == -1.0);
    CHECK(mcc({0, 0, 4, 6}) == -1.0);
    CHECK(mcc({4, 0, 6, 0}) == 0.0);
    CHECK(mcc({0, 0, 0, 0}) == 0.0);
}

TEST_CASE("sensitivity and specificity") {
    CHECK(sensitivity({3, 4, 1, 2}) == doctest::Approx(0.6));
    CHECK(specificity({3, 4, 1, 2}) == doctest::Approx(0.8));
    CHECK(sensitivity({0, 5, 2, 0}) == 1.0);
    CHECK(specificity({5, 0, 0, 2}) == 1.0);
}

TEST_CASE("metric properties on random masks") {
    SeededRng rng(1);
    for (int rep = 0; rep < 300; ++rep) {
        const Mask a = random_mask(5, 6, rng);
        const Mask b = random_mask(5, 6, rng);
        const ConfusionCounts c = confusion_counts(a, b);
        CHECK(c.tp + c.tn + c.fp + c.fn == 30);
        const double m = mcc(c);
        CHECK(m >= -1.0);
        CHECK(m <= 1.0);
        CHECK(mcc({c.tn, c.tp, c.fn, c.fp}) == doctest::Approx(m).epsilon(1e-14));
        CHECK(sensitivity(c) >= 0.0);
        CHECK(sensitivity(c) <= 1.0);
        CHECK(specificity(c) >= 0.0);
        CHECK(specificity(c) <= 1.0);
        const ConfusionCounts self = confusion_counts(a, a);
        CHECK(self.fp == 0);
        CHECK(self.fn == 0);
        Mask neg(5, 6);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 6; ++j) neg.set(i, j, !b(i, j));
        const ConfusionCounts inv = confusion_counts(neg, b);
        CHECK(inv.tp == 0);
        CHECK(inv.tn == 0);
    }
}

TEST_CASE("relative error") {
    const Matrix t{{1.0, -2.0}, {0.0, 3.0}};
    CHECK(relative_error(t, t) == 0.0);
    Matrix twice = t;
    for (double& v : twice.values()) v *= 2.0;
    CHECK(relative_error(twice, t) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(relative_error(Matrix(2, 2), t) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(relative_error(t, Matrix(2, 2)), std::invalid_argument);
    CHECK_THROWS_AS(relative_error(Matrix(1, 2), t), std::invalid_argument);
}

TEST_CASE("coverage") {
    const Matrix truth{{2.0, 0.0}, {-1.0, 5.0}};
    IntervalMatrix ci(2, 2);
    ci(0, 0) = Interval{2.0, 2.0};
    ci(1, 0) = Interval{-3.0, -1.0};
    ci(1, 1) = Interval{0.0, 4.0};
    const auto entries = nonzero_entries(truth);
    REQUIRE(entries.size() == 3);
    const CoverageResult r = coverage(ci, truth, entries);
    CHECK(r.evaluated == 3);
    CHECK(r.skipped == 0);
    CHECK(r.fraction == doctest::Approx(2.0 / 3.0));

    IntervalMatrix miss(2, 2);
    miss(0, 0) = Interval{3.0, 4.0};
    miss(1, 0) = Interval{0.0, 1.0};
    const CoverageResult m = coverage(miss, truth, entries);
    CHECK(m.fraction == 0.0);
    CHECK(m.evaluated == 2);
    CHECK(m.skipped == 1);

    const CoverageResult none = coverage(IntervalMatrix(2, 2), truth, entries);
    CHECK(std::isnan(none.fraction));
    CHECK(none.skipped == 3);

    const Matrix sym{{1.0, 0.3, 0.0}, {0.3, 1.0, 0.2}, {0.0, 0.2, 1.0}};
    CHECK(nonzero_entries(sym, true).size() == 2);
    CHECK(nonzero_entries(sym).size() == 7);
}
