#include "fjq/bounds.hpp"

#include "fjq/analytic.hpp"
#include "fjq/errors.hpp"
#include "fjq/harmonic.hpp"

#include <algorithm>

namespace fjq {

namespace {

void require_exponential(const QueueSpec& spec, const char* bound) {
    if (spec.service != ServiceKind::exponential) {
        throw InapplicableError(std::string(bound) + " needs exponential service (got " +
                                std::string(to_string(spec.service)) + ")");
    }
}

}  // namespace

ExpOrderMoments exp_order_moments(int n, int k, const Rational& mu) {
    if (n < 1 || k < 1 || k > n) throw DomainError("exp_order_moments: require 1 <= k <= n");
    if (mu <= 0) throw DomainError("exp_order_moments: mu must be positive");
    const auto h = HarmonicCache::shared(n);
    const Rational d = h->h(n) - h->h(n - k);
    const Rational d2 = h->h2(n) - h->h2(n - k);
    return {n, k, d / mu, (d2 + d * d) / (mu * mu)};
}

Rational naive_upper(const QueueSpec& spec, const WTable& table) {
    const auto approx = nelson_lt(spec, table, Evaluation::exact_rational);
    return approx.clipped ? Rational(0) : *approx.exact;
}

std::optional<Rational> split_merge_upper(const QueueSpec& spec) {
    require_stable(spec);
    require_exponential(spec, "closed-form split-merge upper bound");
    const auto m = exp_order_moments(spec.n, spec.k, spec.mu);
    const Rational load = spec.lambda * m.mean;
    if (load >= 1) return std::nullopt;
    return m.mean + spec.lambda * m.second_moment / (2 * (1 - load));
}

std::optional<double> split_merge_upper(double lambda, const OrderMoments& kth) {
    const double load = lambda * kth.mean;
    if (load >= 1.0) return std::nullopt;
    return kth.mean + lambda * kth.second_moment / (2.0 * (1.0 - load));
}

Rational refined_upper(const QueueSpec& spec, const WTable& table) {
    const Rational naive = naive_upper(spec, table);
    const auto sm = split_merge_upper(spec);
    if (!sm) return naive;
    if (spec.k == 1) return *sm;  // exact for k = 1
    return std::min(naive, *sm);
}

Rational split_merge_lower(const QueueSpec& spec) {
    require_stable(spec);
    require_exponential(spec, "closed-form split-merge lower bound");
    const auto kth = exp_order_moments(spec.n, spec.k, spec.mu);
    const auto first = exp_order_moments(spec.n, 1, spec.mu);
    return kth.mean + spec.lambda * first.second_moment / (2 * (1 - spec.lambda * first.mean));
}

double split_merge_lower(double lambda, double kth_mean, const OrderMoments& first) {
    if (lambda * first.mean >= 1.0) {
        throw InstabilityError("split-merge lower bound needs lambda E[X_(n,1)] < 1");
    }
    return kth_mean + lambda * first.second_moment / (2.0 * (1.0 - lambda * first.mean));
}

Rational staging_lower(const QueueSpec& spec) {
    require_stable(spec);
    require_exponential(spec, "staging lower bound");
    const auto h = HarmonicCache::shared(spec.n);
    const Rational rho = spec.rho();
    const Rational base = (h->h(spec.n) - h->h(spec.n - spec.k)) / spec.mu;
    const Rational queueing = rho * (shifted_harmonic(spec.n, rho) - shifted_harmonic(spec.n - spec.k, rho)) / spec.mu;
    return base + queueing;
}

BoundSet bound_set(const QueueSpec& spec, const WTable& table) {
    BoundSet set;
    set.spec = spec;
    set.spec.variant = Variant::purging;
    set.naive_upper = naive_upper(spec, table);
    set.split_merge_upper = split_merge_upper(spec);
    set.refined_upper = refined_upper(spec, table);
    set.split_merge_lower = split_merge_lower(spec);
    set.staging_lower = staging_lower(spec);

    if (!set.split_merge_upper) {
        set.notes.push_back("split-merge upper inapplicable: rho (H_n - H_{n-k}) >= 1");
    }
    if (spec.k == 1) set.notes.push_back("k = 1: split-merge bounds are exact");
    if (spec.k == spec.n) set.notes.push_back("k = n: purging queue equals the basic queue");
    if (nelson_lt(spec, table).clipped) set.notes.push_back("naive upper clipped at 0 (Nelson-LT sum negative)");
    return set;
}

}  // namespace fjq
