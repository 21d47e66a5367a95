#include "fjq/analytic.hpp"
#include "fjq/errors.hpp"
#include "fjq/harmonic.hpp"

#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

using namespace fjq;

namespace {

QueueSpec spec_of(int n, int k, const std::string& lambda, const std::string& mu = "1") {
    QueueSpec s;
    s.n = n;
    s.k = k;
    s.lambda = parse_rational(lambda);
    s.mu = parse_rational(mu);
    return s;
}

Rational h(int n) {
    Rational s = 0;
    for (int j = 1; j <= n; ++j) s += Rational(1, j);
    return s;
}

// Direct double sum for V_i with nothing shared with the library.
Rational v_direct(int i) {
    Rational total = 0;
    for (int r = 1; r <= i; ++r) {
        Rational inner = 0;
        BigInt fact = 1;  // (m-1)!
        BigInt rpow = r;  // r^{m+1}, starts at r^1
        rpow *= r;
        for (int m = 1; m <= r; ++m) {
            inner += Rational(binomial(r, m) * fact, rpow);
            fact *= m;
            rpow *= r;
        }
        const Rational term = Rational(binomial(i, r)) * inner;
        total += (r % 2 == 1) ? term : Rational(-term);
    }
    return total;
}

}  // namespace

TEST_CASE("harmonic cache") {
    const HarmonicCache c(30);
    CHECK(c.h(1) == 1);
    CHECK(c.h(5) == Rational(137, 60));
    CHECK(c.h2(2) == Rational(5, 4));
    for (int i = 2; i <= 30; ++i) {
        CHECK(c.h(i) > c.h(i - 1));
        CHECK(c.h2(i) > c.h2(i - 1));
        CHECK(c.h(i) == h(i));
    }
    CHECK(c.v(1) == 1);
    CHECK(c.v(2) == Rational(11, 8));
    for (int i = 1; i <= 12; ++i) CHECK(c.v(i) == v_direct(i));
    CHECK(shifted_harmonic(0, Rational(1, 2)) == 0);
    CHECK(shifted_harmonic(2, Rational(1, 2)) == Rational(2) + Rational(1, 3));
    CHECK(HarmonicCache::shared(7)->max_n() >= 7);
}

TEST_CASE("nelson basic") {
    CHECK(nelson_basic(1, parse_rational("0.5"), 1).value == 2.0);
    CHECK(nelson_basic_exact(2, 0, 1) == Rational(3, 2));
    CHECK(nelson_basic_exact(5, 0, 1) == Rational(137, 60));
    // T_2 = (12 - rho)/8 T_1 at rho = 1/2.
    CHECK(nelson_basic_exact(2, Rational(1, 2), 1) == Rational(23, 16) * 2);
    const auto f = nelson_basic(7, parse_rational("0.3"), 2, Evaluation::floating);
    CHECK(f.value == doctest::Approx(to_double(nelson_basic_exact(7, parse_rational("0.3"), 2))).epsilon(1e-14));
    CHECK_FALSE(f.exact);
    CHECK_THROWS_AS(nelson_basic(3, 1, 1), InstabilityError);
    CHECK_THROWS_AS(nelson_basic(0, 0, 1), DomainError);
}

TEST_CASE("varma basic") {
    CHECK(varma_basic(1, parse_rational("0.5"), 1).value == 2.0);
    CHECK(varma_basic_exact(3, 0, 1) == Rational(11, 6));
    for (const char* l : {"0", "0.1", "0.45", "0.9"}) {
        const Rational lambda = parse_rational(l);
        CHECK(varma_basic_exact(1, lambda, 1) == 1 / (1 - lambda));
        CHECK(nelson_basic_exact(1, lambda, 1) == 1 / (1 - lambda));
        // V_2 = 11/8 makes Varma's T_2 coincide with Nelson's exact two-queue value.
        CHECK(varma_basic_exact(2, lambda, 1) == nelson_basic_exact(2, lambda, 1));
    }
    CHECK(varma_basic_exact(4, 0, 2) == h(4) / 2);
    CHECK_THROWS_AS(varma_basic(2, 2, 1), InstabilityError);
}

TEST_CASE("reported value agrees with the exact rational for large fan-out") {
    const Rational lambda = parse_rational("0.7");
    for (int i : {25, 40}) {
        const auto n = nelson_basic(i, lambda, 1);
        const auto v = varma_basic(i, lambda, 1);
        CHECK(n.value == to_double(*n.exact));
        CHECK(v.value == to_double(*v.exact));
        CHECK(v.value == to_double(varma_basic_exact(i, lambda, 1)));
    }
    const auto table = w_table(40);
    const auto s = spec_of(40, 30, "0.7");
    const auto a = varma_lt(s, table);
    CHECK(a.raw == to_double(*a.exact));
}

TEST_CASE("LT approximations at k = n equal the basic formulas") {
    for (int n : {1, 3, 8}) {
        const auto table = w_table(n);
        const auto s = spec_of(n, n, "0.5");
        CHECK(*nelson_lt(s, table).exact == nelson_basic_exact(n, s.lambda, s.mu));
        CHECK(*varma_lt(s, table).exact == varma_basic_exact(n, s.lambda, s.mu));
    }
}

TEST_CASE("light-traffic anchor: LT values are the exponential order statistic mean") {
    CHECK(*varma_lt(spec_of(3, 2, "0"), w_table(3)).exact == Rational(5, 6));
    CHECK(*nelson_lt(spec_of(3, 2, "0"), w_table(3)).exact == Rational(5, 6));
    for (int n = 1; n <= 20; ++n) {
        const auto table = w_table(n);
        for (int k = 1; k <= n; ++k) {
            const auto s = spec_of(n, k, "0", "3");
            const Rational expected = (h(n) - h(n - k)) / 3;
            CHECK(*nelson_lt(s, table).exact == expected);
            CHECK(*varma_lt(s, table).exact == expected);
        }
    }
}

TEST_CASE("exact evaluation agrees with 256-bit floating to 20 digits") {
    using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;
    for (int n = 2; n <= 20; ++n) {
        const auto table = w_table(n);
        for (const char* r : {"0.1", "0.5", "0.9"}) {
            const Rational rho_q = parse_rational(r);
            const Big rho_b = Big(numerator(rho_q)) / Big(denominator(rho_q));
            std::vector<Big> hb(n + 1, Big(0));
            for (int i = 1; i <= n; ++i) hb[i] = hb[i - 1] + Big(1) / i;
            const Big t1 = Big(1) / (1 - rho_b);
            const Big t2 = (12 - rho_b) / 8 * t1;
            for (int k = 1; k <= n; ++k) {
                Big sum = 0;
                for (int i = k; i <= n; ++i) {
                    Big t = i == 1 ? t1 : (hb[i] / hb[2] + Big(4) / 11 * (1 - hb[i] / hb[2]) * rho_b) * t2;
                    sum += Big(table.at(k, i)) * t;
                }
                const Rational exact = *nelson_lt(spec_of(n, k, r), table).exact;
                const Big exact_b = Big(numerator(exact)) / Big(denominator(exact));
                const Big scale = abs(exact_b) > 1e-30 ? abs(exact_b) : Big(1);
                INFO("n=" << n << " k=" << k << " rho=" << r);
                CHECK(static_cast<double>(abs(sum - exact_b) / scale) < 1e-20);
            }
        }
    }
}

TEST_CASE("documented floating-point failure at (50, 34)") {
    const auto table = w_table(50);
    const auto s = spec_of(50, 34, "0.2");
    const auto f = nelson_lt(s, table, Evaluation::floating);
    CHECK(std::abs(f.raw + 317.7265625) <= 0.5);
    CHECK(f.clipped);
    CHECK(f.value == 0.0);
    CHECK(f.evaluation == Evaluation::floating);

    // The outcome is pure rounding noise: nearest-double coefficients land elsewhere.
    const auto f17 = nelson_lt(s, table, Evaluation::floating, FloatOptions{17});
    CHECK(std::abs(f17.raw - f.raw) > 10);

    // Exact evaluation of the same formula is small and positive.
    const auto e = nelson_lt(s, table);
    CHECK_FALSE(e.clipped);
    CHECK(e.value > 0);
    CHECK(e.value < 10);
}

TEST_CASE("clipping keeps the raw value and is limited to LT methods") {
    const auto table = w_table(25);
    const auto a = nelson_lt(spec_of(25, 1, "0.7"), table);
    CHECK(a.raw < 0);
    CHECK(a.clipped);
    CHECK(a.value == 0.0);
    CHECK(*a.exact < 0);
    for (int i = 1; i <= 10; ++i) CHECK_FALSE(nelson_basic(i, parse_rational("0.7"), 1).clipped);
}

TEST_CASE("raw LT estimates are non-decreasing in k where every term is positive") {
    for (int n = 2; n <= 10; ++n) {
        const auto table = w_table(n);
        for (const char* r : {"0.1", "0.5", "0.9"}) {
            for (int k = 1; k < n; ++k) {
                const auto a = nelson_lt(spec_of(n, k, r), table);
                const auto b = nelson_lt(spec_of(n, k + 1, r), table);
                if (a.raw > 0 && b.raw > 0) {
                    INFO("nelson n=" << n << " k=" << k << " rho=" << r);
                    CHECK(*a.exact <= *b.exact);
                }
                const auto va = varma_lt(spec_of(n, k, r), table);
                const auto vb = varma_lt(spec_of(n, k + 1, r), table);
                if (va.raw > 0 && vb.raw > 0) {
                    INFO("varma n=" << n << " k=" << k << " rho=" << r);
                    CHECK(*va.exact <= *vb.exact);
                }
            }
        }
    }
}

TEST_CASE("lt_combine with exact means reproduces the formulas") {
    const int n = 6;
    const auto table = w_table(n);
    const Rational lambda = parse_rational("0.4");
    std::vector<Rational> exact;
    std::vector<double> approx;
    for (int i = 1; i <= n; ++i) {
        exact.push_back(varma_basic_exact(i, lambda, 1));
        approx.push_back(to_double(exact.back()));
    }
    for (int k = 1; k <= n; ++k) {
        const auto s = spec_of(n, k, "0.4");
        CHECK(lt_combine_exact(table, k, exact) == *varma_lt(s, table).exact);
        CHECK(lt_combine(table, k, approx) == doctest::Approx(varma_lt(s, table).raw).epsilon(1e-9));
    }
    CHECK_THROWS_AS(lt_combine(table, 1, std::span<const double>(approx).first(3)), DomainError);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(nelson_lt(spec_of(4, 2, "1"), w_table(4)), InstabilityError);
    CHECK_THROWS_AS(varma_lt(spec_of(4, 2, "1.5"), w_table(4)), InstabilityError);
    CHECK_THROWS_AS(nelson_lt(spec_of(4, 2, "0.5"), w_table(5)), DomainError);
    CHECK(parse_method("varma-lt") == Method::varma_lt);
    CHECK_THROWS_AS(parse_method("nelson"), DomainError);
}
