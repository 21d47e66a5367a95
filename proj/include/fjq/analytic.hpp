#pragma once

#include "fjq/coeffs.hpp"
#include "fjq/numeric.hpp"
#include "fjq/queue_spec.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string_view>

namespace fjq {

enum class Method { nelson_basic, varma_basic, nelson_lt, varma_lt };
enum class Evaluation { exact_rational, floating };

std::string_view to_string(Method m);
std::string_view to_string(Evaluation e);
Method parse_method(std::string_view text);

/// An expected sojourn time estimate and how it was obtained.
struct ApproxValue {
    double value = 0.0;  // reported estimate, never negative
    double raw = 0.0;    // before the negative clip
    Method method = Method::nelson_basic;
    Evaluation evaluation = Evaluation::exact_rational;
    bool clipped = false;
    std::optional<Rational> exact;  // raw value, exact-rational evaluation only
};

/// Floating evaluation carries each W coefficient at a fixed number of
/// significant decimal digits before multiplying. The default is the
/// precision at which coefficient tables are usually exchanged as text
/// (DBL_DIG); 17 keeps the nearest double.
struct FloatOptions {
    int coefficient_digits = std::numeric_limits<double>::digits10;
};

/// Nelson's approximation of the basic (i,i) fork-join mean sojourn time
/// (exact M/M/1 for i = 1, exact for i = 2).
Rational nelson_basic_exact(int i, const Rational& lambda, const Rational& mu);
ApproxValue nelson_basic(int i, const Rational& lambda, const Rational& mu,
                         Evaluation evaluation = Evaluation::exact_rational);

/// Varma's light-traffic interpolation for the basic (i,i) queue,
/// [H_i + (V_i - H_i) rho] / (mu - lambda).
Rational varma_basic_exact(int i, const Rational& lambda, const Rational& mu);
ApproxValue varma_basic(int i, const Rational& lambda, const Rational& mu,
                        Evaluation evaluation = Evaluation::exact_rational);

/// Non-purging (n,k) mean sojourn time as sum_{i=k..n} W_i^{n,k} T_i with
/// Nelson's (resp. Varma's) T_i. Negative sums are reported as 0 with
/// `clipped` set and the raw value kept.
ApproxValue nelson_lt(const QueueSpec& spec, const WTable& table,
                      Evaluation evaluation = Evaluation::exact_rational, FloatOptions options = {});
ApproxValue varma_lt(const QueueSpec& spec, const WTable& table,
                     Evaluation evaluation = Evaluation::exact_rational, FloatOptions options = {});

/// sum_{i=k..n} W_i^{n,k} basic_means[i-1] for arbitrary basic-queue means
/// (simulated, or from another approximation). basic_means holds T_1..T_n.
double lt_combine(const WTable& table, int k, std::span<const double> basic_means);
Rational lt_combine_exact(const WTable& table, int k, std::span<const Rational> basic_means);

}  // namespace fjq
