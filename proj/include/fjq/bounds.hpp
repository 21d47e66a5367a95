#pragma once

#include "fjq/coeffs.hpp"
#include "fjq/numeric.hpp"
#include "fjq/queue_spec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fjq {

/// First two moments of the k-th order statistic of n i.i.d. service times.
struct OrderMoments {
    double mean = 0.0;
    double second_moment = 0.0;
};

/// Exponential(mu) closed forms:
///   mean          = (H_n - H_{n-k}) / mu
///   second_moment = [(H2_n - H2_{n-k}) + (H_n - H_{n-k})^2] / mu^2
struct ExpOrderMoments {
    int n = 1;
    int k = 1;
    Rational mean;
    Rational second_moment;
};

ExpOrderMoments exp_order_moments(int n, int k, const Rational& mu);

// Bounds on the mean sojourn time of the purging (n,k) queue with the
// spec's (n, k, lambda, mu). All require rho < 1.

/// Mean sojourn time of the equivalent non-purging queue (Nelson-LT).
Rational naive_upper(const QueueSpec& spec, const WTable& table);

/// Mean sojourn time of the (n,k) split-merge queue; nullopt once
/// lambda E[X_(n,k)] >= 1. Exponential service only.
std::optional<Rational> split_merge_upper(const QueueSpec& spec);

/// Same bound from caller-supplied moments (any service distribution).
std::optional<double> split_merge_upper(double lambda, const OrderMoments& kth);

/// naive_upper when split_merge_upper is inapplicable, otherwise the smaller.
Rational refined_upper(const QueueSpec& spec, const WTable& table);

/// E[X_(n,k)] + lambda E[X_(n,1)^2] / (2 (1 - lambda E[X_(n,1)])).
Rational split_merge_lower(const QueueSpec& spec);
double split_merge_lower(double lambda, double kth_mean, const OrderMoments& first);

/// (H_n - H_{n-k})/mu + rho (Hs_n - Hs_{n-k}) / mu with Hs_m = sum_{i<=m} 1/(i(i - rho)).
/// Needs memory-less service; InapplicableError otherwise.
Rational staging_lower(const QueueSpec& spec);

struct BoundSet {
    QueueSpec spec;
    Rational naive_upper;
    std::optional<Rational> split_merge_upper;
    Rational refined_upper;
    Rational split_merge_lower;
    Rational staging_lower;
    std::vector<std::string> notes;
};

BoundSet bound_set(const QueueSpec& spec, const WTable& table);

}  // namespace fjq
