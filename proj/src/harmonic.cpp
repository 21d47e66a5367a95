#include "fjq/harmonic.hpp"

#include "fjq/errors.hpp"

#include <mutex>

namespace fjq {

HarmonicCache::HarmonicCache(int max_n) {
    if (max_n < 0) throw DomainError("HarmonicCache: negative size");
    h_.assign(max_n + 1, Rational(0));
    h2_.assign(max_n + 1, Rational(0));
    v_.assign(max_n + 1, Rational(0));

    // inner[r] = sum_{m=1..r} C(r,m) (m-1)! / r^{m+1}
    std::vector<Rational> inner(max_n + 1, Rational(0));
    for (int r = 1; r <= max_n; ++r) {
        BigInt factorial = 1;  // (m-1)!
        BigInt power = BigInt(r) * r;  // r^{m+1}
        Rational sum = 0;
        for (int m = 1; m <= r; ++m) {
            if (m > 1) factorial *= m - 1;
            sum += Rational(binomial(r, m) * factorial, power);
            power *= r;
        }
        inner[r] = sum;
    }

    for (int i = 1; i <= max_n; ++i) {
        h_[i] = h_[i - 1] + Rational(1, i);
        h2_[i] = h2_[i - 1] + Rational(1, BigInt(i) * i);
        Rational sum = 0;
        for (int r = 1; r <= i; ++r) {
            const Rational term = Rational(binomial(i, r)) * inner[r];
            if (r % 2 == 1) {
                sum += term;
            } else {
                sum -= term;
            }
        }
        v_[i] = sum;
    }
}

namespace {
void check_range(int i, int max_n) {
    if (i < 0 || i > max_n) {
        throw DomainError("harmonic index " + std::to_string(i) + " outside cache range [0, " + std::to_string(max_n) +
                          "]");
    }
}
}  // namespace

const Rational& HarmonicCache::h(int i) const {
    check_range(i, max_n());
    return h_[i];
}

const Rational& HarmonicCache::h2(int i) const {
    check_range(i, max_n());
    return h2_[i];
}

const Rational& HarmonicCache::v(int i) const {
    check_range(i, max_n());
    return v_[i];
}

std::shared_ptr<const HarmonicCache> HarmonicCache::shared(int max_n) {
    static std::mutex mutex;
    static std::shared_ptr<const HarmonicCache> cache;
    std::lock_guard lock(mutex);
    if (!cache || cache->max_n() < max_n) {
        // Round up so a sweep over n does not rebuild at every step.
        const int size = (max_n + 15) / 16 * 16;
        cache = std::make_shared<const HarmonicCache>(size);
    }
    return cache;
}

Rational shifted_harmonic(int n, const Rational& rho) {
    Rational sum = 0;
    for (int i = 1; i <= n; ++i) sum += 1 / (Rational(i) * (i - rho));
    return sum;
}

}  // namespace fjq
