#include "fjq/analytic.hpp"

#include "fjq/errors.hpp"
#include "fjq/harmonic.hpp"

#include <vector>

namespace fjq {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::nelson_basic: return "nelson-basic";
        case Method::varma_basic: return "varma-basic";
        case Method::nelson_lt: return "nelson-lt";
        case Method::varma_lt: return "varma-lt";
    }
    return "?";
}

std::string_view to_string(Evaluation e) {
    return e == Evaluation::exact_rational ? "exact-rational" : "floating";
}

Method parse_method(std::string_view text) {
    for (auto m : {Method::nelson_basic, Method::varma_basic, Method::nelson_lt, Method::varma_lt}) {
        if (text == to_string(m)) return m;
    }
    throw DomainError("unknown approximation method '" + std::string(text) + "'");
}

namespace {

QueueSpec basic_spec(int i, const Rational& lambda, const Rational& mu) {
    QueueSpec spec;
    spec.n = i;
    spec.k = i;
    spec.lambda = lambda;
    spec.mu = mu;
    spec.variant = Variant::basic;
    return spec;
}

void check_table(const QueueSpec& spec, const WTable& table) {
    if (table.n() != spec.n) {
        throw DomainError("coefficient table is for n=" + std::to_string(table.n()) + ", queue has n=" +
                          std::to_string(spec.n));
    }
}

ApproxValue finish(Method method, Evaluation evaluation, double raw, std::optional<Rational> exact) {
    ApproxValue out;
    out.method = method;
    out.evaluation = evaluation;
    out.raw = raw;
    out.exact = std::move(exact);
    const bool may_clip = method == Method::nelson_lt || method == Method::varma_lt;
    out.clipped = may_clip && raw < 0.0;
    out.value = out.clipped ? 0.0 : raw;
    return out;
}

// Harmonic numbers summed left to right in double.
std::vector<double> float_harmonics(int n) {
    std::vector<double> h(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        double s = 0.0;
        for (int j = 1; j <= i; ++j) s += 1.0 / j;
        h[i] = s;
    }
    return h;
}

// Nelson's T_i in double, written as c * B_i with
// c = (12 - rho) / (88 mu (1 - rho)), B_i = (11 H_i + 4 rho (H_2 - H_i)) / H_2.
std::vector<double> nelson_terms_float(int n, double rho, double mu) {
    const auto h = float_harmonics(std::max(n, 2));
    const double c = (12 - rho) / (88 * mu * (1 - rho));
    std::vector<double> t(n + 1, 0.0);
    if (n >= 1) t[1] = 1 / (mu * (1 - rho));
    for (int i = 2; i <= n; ++i) t[i] = c * ((11 * h[i] + 4 * rho * (h[2] - h[i])) / h[2]);
    return t;
}

std::vector<double> varma_terms_float(int n, const Rational& lambda, const Rational& mu) {
    const auto cache = HarmonicCache::shared(n);
    const auto h = float_harmonics(n);
    const double l = to_double(lambda);
    const double m = to_double(mu);
    const double rho = to_double(Rational(lambda / mu));
    std::vector<double> t(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) t[i] = (h[i] + (to_double(cache->v(i)) - h[i]) * rho) / (m - l);
    return t;
}

double float_lt_sum(const WTable& table, int k, const std::vector<double>& terms, FloatOptions options) {
    double sum = 0.0;
    for (int i = k; i <= table.n(); ++i) {
        const double w = round_significant(to_double(table.at(k, i)), options.coefficient_digits);
        sum += w * terms[i];
    }
    return sum;
}

}  // namespace

Rational nelson_basic_exact(int i, const Rational& lambda, const Rational& mu) {
    if (i < 1) throw DomainError("fan-out must be >= 1");
    require_stable(basic_spec(i, lambda, mu));
    const Rational rho = lambda / mu;
    const Rational t1 = 1 / (mu * (1 - rho));
    if (i == 1) return t1;
    const Rational t2 = (12 - rho) / 8 * t1;
    const auto cache = HarmonicCache::shared(i);
    const Rational ratio = cache->h(i) / cache->h(2);
    return (ratio + Rational(4, 11) * (1 - ratio) * rho) * t2;
}

ApproxValue nelson_basic(int i, const Rational& lambda, const Rational& mu, Evaluation evaluation) {
    if (evaluation == Evaluation::exact_rational) {
        Rational exact = nelson_basic_exact(i, lambda, mu);
        const double raw = to_double(exact);
        return finish(Method::nelson_basic, evaluation, raw, std::move(exact));
    }
    require_stable(basic_spec(i, lambda, mu));
    const auto terms = nelson_terms_float(i, to_double(Rational(lambda / mu)), to_double(mu));
    return finish(Method::nelson_basic, evaluation, terms[i], std::nullopt);
}

Rational varma_basic_exact(int i, const Rational& lambda, const Rational& mu) {
    if (i < 1) throw DomainError("fan-out must be >= 1");
    require_stable(basic_spec(i, lambda, mu));
    const auto cache = HarmonicCache::shared(i);
    const Rational rho = lambda / mu;
    return (cache->h(i) + (cache->v(i) - cache->h(i)) * rho) / (mu - lambda);
}

ApproxValue varma_basic(int i, const Rational& lambda, const Rational& mu, Evaluation evaluation) {
    if (evaluation == Evaluation::exact_rational) {
        Rational exact = varma_basic_exact(i, lambda, mu);
        const double raw = to_double(exact);
        return finish(Method::varma_basic, evaluation, raw, std::move(exact));
    }
    require_stable(basic_spec(i, lambda, mu));
    const auto terms = varma_terms_float(i, lambda, mu);
    return finish(Method::varma_basic, evaluation, terms[i], std::nullopt);
}

ApproxValue nelson_lt(const QueueSpec& spec, const WTable& table, Evaluation evaluation, FloatOptions options) {
    require_stable(spec);
    check_table(spec, table);
    if (evaluation == Evaluation::exact_rational) {
        std::vector<Rational> terms;
        terms.reserve(spec.n);
        for (int i = 1; i <= spec.n; ++i) {
            terms.push_back(i < spec.k ? Rational(0) : nelson_basic_exact(i, spec.lambda, spec.mu));
        }
        Rational exact = lt_combine_exact(table, spec.k, terms);
        const double raw = to_double(exact);
        return finish(Method::nelson_lt, evaluation, raw, std::move(exact));
    }
    const auto terms = nelson_terms_float(spec.n, spec.rho_value(), spec.mu_value());
    return finish(Method::nelson_lt, evaluation, float_lt_sum(table, spec.k, terms, options), std::nullopt);
}

ApproxValue varma_lt(const QueueSpec& spec, const WTable& table, Evaluation evaluation, FloatOptions options) {
    require_stable(spec);
    check_table(spec, table);
    if (evaluation == Evaluation::exact_rational) {
        std::vector<Rational> terms;
        terms.reserve(spec.n);
        for (int i = 1; i <= spec.n; ++i) {
            terms.push_back(i < spec.k ? Rational(0) : varma_basic_exact(i, spec.lambda, spec.mu));
        }
        Rational exact = lt_combine_exact(table, spec.k, terms);
        const double raw = to_double(exact);
        return finish(Method::varma_lt, evaluation, raw, std::move(exact));
    }
    const auto terms = varma_terms_float(spec.n, spec.lambda, spec.mu);
    return finish(Method::varma_lt, evaluation, float_lt_sum(table, spec.k, terms, options), std::nullopt);
}

double lt_combine(const WTable& table, int k, std::span<const double> basic_means) {
    if (basic_means.size() != static_cast<std::size_t>(table.n())) {
        throw DomainError("lt_combine: need exactly n basic-queue means");
    }
    double sum = 0.0;
    for (int i = k; i <= table.n(); ++i) sum += to_double(table.at(k, i)) * basic_means[i - 1];
    return sum;
}

Rational lt_combine_exact(const WTable& table, int k, std::span<const Rational> basic_means) {
    if (basic_means.size() != static_cast<std::size_t>(table.n())) {
        throw DomainError("lt_combine: need exactly n basic-queue means");
    }
    Rational sum = 0;
    for (int i = k; i <= table.n(); ++i) sum += table.at(k, i) * basic_means[i - 1];
    return sum;
}

}  // namespace fjq
