#pragma once

#include "fjq/coeffs.hpp"
#include "fjq/numeric.hpp"

#include <map>
#include <string>
#include <vector>

namespace fjq::oracle {

/// Finite joint distribution of n exchangeable variables. Outcomes are
/// tuples of indices into `support` (sorted ascending); probabilities are
/// exact. Construction checks normalisation and exchangeability.
class DiscreteJointDistribution {
  public:
    using Outcome = std::vector<int>;

    DiscreteJointDistribution(int n, std::vector<Rational> support, std::map<Outcome, Rational> pmf);

    /// n i.i.d. copies of one marginal.
    static DiscreteJointDistribution iid(int n, std::vector<Rational> support, const std::vector<Rational>& marginal);

    /// Symmetrise: every permutation of each listed outcome receives an equal
    /// share of that outcome's weight.
    static DiscreteJointDistribution symmetrised(int n, std::vector<Rational> support,
                                                 const std::map<Outcome, Rational>& weights);

    /// Mixture sum_j w_j D_j over distributions with the same n and support.
    static DiscreteJointDistribution mixture(const std::vector<std::pair<Rational, DiscreteJointDistribution>>& parts);

    int n() const noexcept { return n_; }
    const std::vector<Rational>& support() const noexcept { return support_; }
    const std::map<Outcome, Rational>& pmf() const noexcept { return pmf_; }

  private:
    int n_;
    std::vector<Rational> support_;
    std::map<Outcome, Rational> pmf_;
};

/// P(X_1 <= t, ..., X_i <= t).
Rational maxima_cdf(const DiscreteJointDistribution& d, int i, const Rational& t);

/// P(X_(n,k) <= t) where X_(n,k) is the k-th smallest, by enumeration.
Rational order_statistic_cdf(const DiscreteJointDistribution& d, int k, const Rational& t);

/// E[max(X_1..X_i)] and E[X_(n,k)].
Rational maxima_mean(const DiscreteJointDistribution& d, int i);
Rational order_statistic_mean(const DiscreteJointDistribution& d, int k);

struct IdentityCheck {
    int k = 0;
    bool is_expectation = false;  // false: cdf at `t`
    Rational t;
    Rational direct;       // enumerated left-hand side
    Rational transformed;  // sum_i W_i^{n,k} * (maxima term)
    Rational residual() const { return direct - transformed; }
    bool passed() const { return direct == transformed; }
};

struct IdentityReport {
    std::string name;
    int n = 0;
    std::vector<IdentityCheck> checks;
    bool passed() const;
    std::size_t failures() const;
};

/// Checks F_{n,k}(t) = sum_i W_i^{n,k} P_i(t) at every support point and
/// E_{n,k} = sum_i W_i^{n,k} E_i, for every k, exactly.
IdentityReport verify_lt_identity(const DiscreteJointDistribution& d, const WTable& table, std::string name = {});

struct NamedDistribution {
    std::string name;
    bool independent = false;
    DiscreteJointDistribution distribution;
};

/// The built-in family used by `fjq verify` and the tests: i.i.d. and
/// dependent exchangeable laws for n = 1..6 with supports of at most 4 values.
std::vector<NamedDistribution> standard_suite();

}  // namespace fjq::oracle
