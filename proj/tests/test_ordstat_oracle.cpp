#include "fjq/coeffs.hpp"
#include "fjq/errors.hpp"
#include "fjq/ordstat_oracle.hpp"

#include <doctest.h>

using namespace fjq;
using namespace fjq::oracle;

namespace {

std::vector<Rational> ints(std::initializer_list<int> xs) {
    std::vector<Rational> out;
    for (int x : xs) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("iid order statistic cdf matches the binomial tail") {
    // Bernoulli(1/3) marginal: X_(n,k) <= 0 iff at least k zeros.
    const int n = 5;
    const auto d = DiscreteJointDistribution::iid(n, ints({0, 1}), {Rational(2, 3), Rational(1, 3)});
    for (int k = 1; k <= n; ++k) {
        Rational tail = 0;
        for (int j = k; j <= n; ++j) {
            Rational term = Rational(binomial(n, j));
            for (int a = 0; a < j; ++a) term *= Rational(2, 3);
            for (int a = j; a < n; ++a) term *= Rational(1, 3);
            tail += term;
        }
        CHECK(order_statistic_cdf(d, k, 0) == tail);
        CHECK(order_statistic_cdf(d, k, 1) == 1);
        CHECK(order_statistic_cdf(d, k, -1) == 0);
    }
    Rational all_zero = 1;
    for (int a = 0; a < 3; ++a) all_zero *= Rational(2, 3);
    CHECK(maxima_cdf(d, 3, 0) == all_zero);
    CHECK(maxima_mean(d, 1) == Rational(1, 3));
}

TEST_CASE("constructor rejects bad laws") {
    // Not normalised.
    CHECK_THROWS_AS(DiscreteJointDistribution(2, ints({0, 1}), {{{0, 0}, Rational(1, 2)}}), DomainError);
    // Not exchangeable: (0,1) without (1,0).
    CHECK_THROWS_AS(DiscreteJointDistribution(2, ints({0, 1}), {{{0, 1}, Rational(1, 2)}, {{1, 1}, Rational(1, 2)}}),
                    DomainError);
    // Unequal permutation weights.
    CHECK_THROWS_AS(DiscreteJointDistribution(2, ints({0, 1}), {{{0, 1}, Rational(1, 3)}, {{1, 0}, Rational(2, 3)}}),
                    DomainError);
    // Index outside the support.
    CHECK_THROWS_AS(DiscreteJointDistribution(1, ints({0, 1}), {{{2}, Rational(1)}}), DomainError);
}

TEST_CASE("standard suite passes with zero residual") {
    const auto suite = standard_suite();
    CHECK(suite.size() >= 5);
    int dependent = 0;
    for (const auto& entry : suite) {
        INFO(entry.name);
        const auto report = verify_lt_identity(entry.distribution, w_table(entry.distribution.n()), entry.name);
        CHECK(report.passed());
        CHECK(report.failures() == 0);
        CHECK_FALSE(report.checks.empty());
        for (const auto& c : report.checks) CHECK(c.residual() == 0);
        if (!entry.independent) ++dependent;
    }
    CHECK(dependent >= 1);
}

TEST_CASE("a tampered table is caught") {
    const auto d = DiscreteJointDistribution::iid(4, ints({0, 1, 2}), {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
    auto table = w_table(4);
    table.set(2, 3, table.at(2, 3) + 1);
    const auto report = verify_lt_identity(d, table);
    CHECK_FALSE(report.passed());
    CHECK(report.failures() > 0);
    CHECK_THROWS_AS(verify_lt_identity(d, w_table(5)), DomainError);
}

TEST_CASE("dependent law: all components equal") {
    const DiscreteJointDistribution d(3, ints({2, 5}), {{{0, 0, 0}, Rational(1, 4)}, {{1, 1, 1}, Rational(3, 4)}});
    for (int k = 1; k <= 3; ++k) CHECK(order_statistic_mean(d, k) == Rational(17, 4));
    for (int i = 1; i <= 3; ++i) CHECK(maxima_mean(d, i) == Rational(17, 4));
}

TEST_CASE("mixture and symmetrised constructors") {
    const auto a = DiscreteJointDistribution::iid(2, ints({0, 1}), {Rational(1), Rational(0)});
    const auto b = DiscreteJointDistribution::iid(2, ints({0, 1}), {Rational(0), Rational(1)});
    const auto m = DiscreteJointDistribution::mixture({{Rational(1, 2), a}, {Rational(1, 2), b}});
    CHECK(maxima_mean(m, 2) == Rational(1, 2));
    CHECK(order_statistic_mean(m, 1) == Rational(1, 2));

    const auto s = DiscreteJointDistribution::symmetrised(2, ints({0, 1}), {{{0, 1}, Rational(1)}});
    CHECK(s.pmf().size() == 2);
    CHECK(order_statistic_mean(s, 1) == 0);
    CHECK(order_statistic_mean(s, 2) == 1);
    CHECK(verify_lt_identity(s, w_table(2)).passed());
}
