#pragma once

#include "fjq/numeric.hpp"

#include <memory>
#include <vector>

namespace fjq {

/// Exact harmonic-type sums up to some n, read-only after construction:
///   h(i)  = sum_{j<=i} 1/j
///   h2(i) = sum_{j<=i} 1/j^2
///   v(i)  = Varma's light-traffic constant
///           sum_{r=1..i} C(i,r) (-1)^{r-1} sum_{m=1..r} C(r,m) (m-1)! / r^{m+1}
/// Index 0 holds 0 for all three.
class HarmonicCache {
  public:
    explicit HarmonicCache(int max_n);

    int max_n() const noexcept { return static_cast<int>(h_.size()) - 1; }
    const Rational& h(int i) const;
    const Rational& h2(int i) const;
    const Rational& v(int i) const;

    /// Process-wide cache covering at least max_n; safe to call concurrently.
    static std::shared_ptr<const HarmonicCache> shared(int max_n);

  private:
    std::vector<Rational> h_;
    std::vector<Rational> h2_;
    std::vector<Rational> v_;
};

/// sum_{i=1..n} 1 / (i (i - rho)); zero for n = 0.
Rational shifted_harmonic(int n, const Rational& rho);

}  // namespace fjq
