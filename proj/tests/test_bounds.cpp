#include "fjq/bounds.hpp"
#include "fjq/errors.hpp"

#include <doctest.h>

using namespace fjq;

namespace {

QueueSpec purging(int n, int k, const Rational& lambda, const Rational& mu = 1) {
    QueueSpec s;
    s.n = n;
    s.k = k;
    s.lambda = lambda;
    s.mu = mu;
    s.variant = Variant::purging;
    return s;
}

Rational h(int n) {
    Rational s = 0;
    for (int j = 1; j <= n; ++j) s += Rational(1, j);
    return s;
}

Rational h2(int n) {
    Rational s = 0;
    for (int j = 1; j <= n; ++j) s += Rational(1, j * j);
    return s;
}

}  // namespace

TEST_CASE("exponential order statistic moments") {
    // Min of n exponentials is exponential(n mu): mean 1/(n mu), second moment 2/(n mu)^2.
    for (int n = 1; n <= 10; ++n) {
        const auto m = exp_order_moments(n, 1, 2);
        CHECK(m.mean == Rational(1, 2 * n));
        CHECK(m.second_moment == Rational(2, 4 * n * n));
    }
    const auto m = exp_order_moments(4, 4, 1);
    CHECK(m.mean == h(4));
    CHECK(m.second_moment == h2(4) + h(4) * h(4));
    CHECK_THROWS_AS(exp_order_moments(3, 4, 1), DomainError);
}

TEST_CASE("k = 1 collapse: every bound is the n mu M/M/1 value") {
    for (int n : {1, 3, 10, 25}) {
        for (const char* l : {"0", "0.5", "0.7"}) {
            const auto s = purging(n, 1, parse_rational(l));
            const Rational exact = 1 / (n * s.mu - s.lambda);
            const auto b = bound_set(s, w_table(n));
            REQUIRE(b.split_merge_upper);
            CHECK(*b.split_merge_upper == exact);
            CHECK(b.refined_upper == exact);
            CHECK(b.split_merge_lower == exact);
            CHECK(b.staging_lower == exact);
        }
    }
}

TEST_CASE("trivial queue: all bounds equal 1") {
    const auto b = bound_set(purging(1, 1, 0), w_table(1));
    CHECK(b.naive_upper == 1);
    CHECK(*b.split_merge_upper == 1);
    CHECK(b.refined_upper == 1);
    CHECK(b.split_merge_lower == 1);
    CHECK(b.staging_lower == 1);
}

TEST_CASE("split-merge upper inapplicability threshold") {
    for (int n : {5, 25}) {
        for (int k = 1; k <= n; ++k) {
            for (const char* l : {"0.1", "0.3", "0.5", "0.7", "0.9"}) {
                const auto s = purging(n, k, parse_rational(l));
                const bool inapplicable = s.rho() * (h(n) - h(n - k)) >= 1;
                CHECK(split_merge_upper(s).has_value() == !inapplicable);
            }
        }
    }
    CHECK_FALSE(split_merge_upper(purging(25, 25, parse_rational("0.7"))));
    // Exactly at the threshold: rho = 1/(H_2 - H_0) = 2/3 for (2,2).
    CHECK_FALSE(split_merge_upper(purging(2, 2, Rational(2, 3))));
    CHECK(split_merge_upper(purging(2, 2, Rational(2, 3) - Rational(1, 1000))));
}

TEST_CASE("refined upper branches") {
    const auto table = w_table(25);
    // Small k, light load: split-merge is tighter.
    const auto small = purging(25, 2, parse_rational("0.1"));
    CHECK(refined_upper(small, table) == *split_merge_upper(small));
    CHECK(refined_upper(small, table) < naive_upper(small, table));
    // k = n: split-merge explodes or is absent; naive wins.
    for (const char* l : {"0.1", "0.3", "0.7"}) {
        const auto full = purging(25, 25, parse_rational(l));
        CHECK(refined_upper(full, table) == naive_upper(full, table));
    }
}

TEST_CASE("ordering on a grid for k >= 2") {
    for (int n = 2; n <= 30; ++n) {
        const auto table = w_table(n);
        for (int k = 2; k <= n; ++k) {
            for (int r = 1; r <= 9; ++r) {
                const auto b = bound_set(purging(n, k, Rational(r, 10)), table);
                INFO("n=" << n << " k=" << k << " rho=" << r << "/10");
                CHECK(b.split_merge_lower <= b.staging_lower);
                CHECK(b.staging_lower <= b.refined_upper);
                CHECK(b.refined_upper <= b.naive_upper);
                if (b.split_merge_upper) CHECK(b.refined_upper <= *b.split_merge_upper);
            }
        }
    }
}

TEST_CASE("lower bounds by formula") {
    const auto s = purging(6, 3, parse_rational("0.4"), 2);
    const auto kth = exp_order_moments(6, 3, 2);
    const auto first = exp_order_moments(6, 1, 2);
    CHECK(split_merge_lower(s) == kth.mean + s.lambda * first.second_moment / (2 * (1 - s.lambda * first.mean)));
    const Rational rho = s.rho();
    Rational hs6 = 0, hs3 = 0;
    for (int i = 1; i <= 6; ++i) hs6 += 1 / (Rational(i) * (i - rho));
    for (int i = 1; i <= 3; ++i) hs3 += 1 / (Rational(i) * (i - rho));
    CHECK(staging_lower(s) == (h(6) - h(3)) / 2 + rho * (hs6 - hs3) / 2);
}

TEST_CASE("general-distribution overloads") {
    const auto m = exp_order_moments(5, 3, 1);
    const OrderMoments kth{to_double(m.mean), to_double(m.second_moment)};
    const auto s = purging(5, 3, parse_rational("0.3"));
    CHECK(*split_merge_upper(0.3, kth) == doctest::Approx(to_double(*split_merge_upper(s))));
    CHECK_FALSE(split_merge_upper(10.0, kth));
    const auto f = exp_order_moments(5, 1, 1);
    CHECK(split_merge_lower(0.3, kth.mean, {to_double(f.mean), to_double(f.second_moment)}) ==
          doctest::Approx(to_double(split_merge_lower(s))));
}

TEST_CASE("errors and notes") {
    auto s = purging(5, 2, 1);
    CHECK_THROWS_AS(bound_set(s, w_table(5)), InstabilityError);
    s = purging(5, 2, parse_rational("0.5"));
    s.service = ServiceKind::deterministic;
    CHECK_THROWS_AS(staging_lower(s), InapplicableError);
    CHECK_THROWS_AS(split_merge_upper(s), InapplicableError);
    const auto b = bound_set(purging(25, 25, parse_rational("0.7")), w_table(25));
    CHECK_FALSE(b.notes.empty());
    CHECK(b.spec.variant == Variant::purging);
}
