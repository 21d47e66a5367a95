#include "fjq/ordstat_oracle.hpp"

#include "fjq/errors.hpp"

#include <algorithm>
#include <functional>

namespace fjq::oracle {

namespace {

std::size_t distinct_permutations(DiscreteJointDistribution::Outcome sorted) {
    std::size_t count = 0;
    do {
        ++count;
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    return count;
}

void for_each_tuple(int n, int base, const std::function<void(const DiscreteJointDistribution::Outcome&)>& fn) {
    DiscreteJointDistribution::Outcome tuple(n, 0);
    while (true) {
        fn(tuple);
        int pos = n - 1;
        while (pos >= 0 && ++tuple[pos] == base) tuple[pos--] = 0;
        if (pos < 0) return;
    }
}

}  // namespace

DiscreteJointDistribution::DiscreteJointDistribution(int n, std::vector<Rational> support,
                                                     std::map<Outcome, Rational> pmf)
    : n_(n), support_(std::move(support)), pmf_(std::move(pmf)) {
    if (n_ < 1) throw DomainError("joint distribution needs n >= 1");
    if (support_.empty()) throw DomainError("joint distribution needs a non-empty support");
    if (!std::is_sorted(support_.begin(), support_.end()) ||
        std::adjacent_find(support_.begin(), support_.end()) != support_.end()) {
        throw DomainError("support must be strictly increasing");
    }

    Rational total = 0;
    for (const auto& [outcome, p] : pmf_) {
        if (static_cast<int>(outcome.size()) != n_) throw DomainError("outcome length differs from n");
        for (int index : outcome) {
            if (index < 0 || index >= static_cast<int>(support_.size())) {
                throw DomainError("outcome refers outside the support");
            }
        }
        if (p < 0) throw DomainError("negative probability");
        total += p;
    }
    if (total != 1) throw DomainError("probabilities sum to " + to_string(total) + ", not 1");

    // Exchangeability: within each sorted-tuple class, every distinct
    // permutation carries the same probability.
    std::map<Outcome, std::vector<Rational>> classes;
    for (const auto& [outcome, p] : pmf_) {
        if (p == 0) continue;
        Outcome key = outcome;
        std::sort(key.begin(), key.end());
        classes[key].push_back(p);
    }
    for (const auto& [key, probs] : classes) {
        const bool all_equal = std::all_of(probs.begin(), probs.end(), [&](const Rational& p) { return p == probs.front(); });
        if (!all_equal || probs.size() != distinct_permutations(key)) {
            throw DomainError("distribution is not exchangeable");
        }
    }
}

DiscreteJointDistribution DiscreteJointDistribution::iid(int n, std::vector<Rational> support,
                                                         const std::vector<Rational>& marginal) {
    if (marginal.size() != support.size()) throw DomainError("marginal and support sizes differ");
    std::map<Outcome, Rational> pmf;
    for_each_tuple(n, static_cast<int>(support.size()), [&](const Outcome& tuple) {
        Rational p = 1;
        for (int index : tuple) p *= marginal[index];
        if (p != 0) pmf.emplace(tuple, p);
    });
    return DiscreteJointDistribution(n, std::move(support), std::move(pmf));
}

DiscreteJointDistribution DiscreteJointDistribution::symmetrised(int n, std::vector<Rational> support,
                                                                 const std::map<Outcome, Rational>& weights) {
    std::map<Outcome, Rational> pmf;
    for (const auto& [outcome, w] : weights) {
        Outcome sorted = outcome;
        std::sort(sorted.begin(), sorted.end());
        const Rational share = w / static_cast<long long>(distinct_permutations(sorted));
        do {
            pmf[sorted] += share;
        } while (std::next_permutation(sorted.begin(), sorted.end()));
    }
    return DiscreteJointDistribution(n, std::move(support), std::move(pmf));
}

DiscreteJointDistribution DiscreteJointDistribution::mixture(
    const std::vector<std::pair<Rational, DiscreteJointDistribution>>& parts) {
    if (parts.empty()) throw DomainError("empty mixture");
    const auto& first = parts.front().second;
    std::map<Outcome, Rational> pmf;
    for (const auto& [w, d] : parts) {
        if (d.n() != first.n() || d.support() != first.support()) {
            throw DomainError("mixture components must share n and support");
        }
        for (const auto& [outcome, p] : d.pmf()) pmf[outcome] += w * p;
    }
    return DiscreteJointDistribution(first.n(), first.support(), std::move(pmf));
}

Rational maxima_cdf(const DiscreteJointDistribution& d, int i, const Rational& t) {
    if (i < 1 || i > d.n()) throw DomainError("maxima_cdf: require 1 <= i <= n");
    Rational sum = 0;
    for (const auto& [outcome, p] : d.pmf()) {
        bool all_below = true;
        for (int j = 0; j < i && all_below; ++j) all_below = d.support()[outcome[j]] <= t;
        if (all_below) sum += p;
    }
    return sum;
}

Rational order_statistic_cdf(const DiscreteJointDistribution& d, int k, const Rational& t) {
    if (k < 1 || k > d.n()) throw DomainError("order_statistic_cdf: require 1 <= k <= n");
    Rational sum = 0;
    for (const auto& [outcome, p] : d.pmf()) {
        auto sorted = outcome;
        std::sort(sorted.begin(), sorted.end());
        if (d.support()[sorted[k - 1]] <= t) sum += p;
    }
    return sum;
}

Rational maxima_mean(const DiscreteJointDistribution& d, int i) {
    if (i < 1 || i > d.n()) throw DomainError("maxima_mean: require 1 <= i <= n");
    Rational sum = 0;
    for (const auto& [outcome, p] : d.pmf()) {
        sum += p * d.support()[*std::max_element(outcome.begin(), outcome.begin() + i)];
    }
    return sum;
}

Rational order_statistic_mean(const DiscreteJointDistribution& d, int k) {
    if (k < 1 || k > d.n()) throw DomainError("order_statistic_mean: require 1 <= k <= n");
    Rational sum = 0;
    for (const auto& [outcome, p] : d.pmf()) {
        auto sorted = outcome;
        std::sort(sorted.begin(), sorted.end());
        sum += p * d.support()[sorted[k - 1]];
    }
    return sum;
}

bool IdentityReport::passed() const { return failures() == 0; }

std::size_t IdentityReport::failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed(); }));
}

IdentityReport verify_lt_identity(const DiscreteJointDistribution& d, const WTable& table, std::string name) {
    if (d.n() != table.n()) {
        throw DomainError("dimension mismatch: distribution has n=" + std::to_string(d.n()) + ", table has n=" +
                          std::to_string(table.n()));
    }
    const int n = d.n();
    IdentityReport report;
    report.name = std::move(name);
    report.n = n;

    std::vector<Rational> points{d.support().front() - 1};
    points.insert(points.end(), d.support().begin(), d.support().end());

    std::vector<Rational> max_means(n + 1);
    for (int i = 1; i <= n; ++i) max_means[i] = maxima_mean(d, i);

    for (const auto& t : points) {
        std::vector<Rational> p(n + 1);
        for (int i = 1; i <= n; ++i) p[i] = maxima_cdf(d, i, t);
        for (int k = 1; k <= n; ++k) {
            IdentityCheck check;
            check.k = k;
            check.t = t;
            check.direct = order_statistic_cdf(d, k, t);
            for (int i = k; i <= n; ++i) check.transformed += table.at(k, i) * p[i];
            report.checks.push_back(std::move(check));
        }
    }
    for (int k = 1; k <= n; ++k) {
        IdentityCheck check;
        check.k = k;
        check.is_expectation = true;
        check.direct = order_statistic_mean(d, k);
        for (int i = k; i <= n; ++i) check.transformed += table.at(k, i) * max_means[i];
        report.checks.push_back(std::move(check));
    }
    return report;
}

namespace {

std::vector<Rational> ints(std::initializer_list<int> values) {
    std::vector<Rational> out;
    for (int v : values) out.emplace_back(v);
    return out;
}

std::vector<Rational> uniform(std::size_t size) { return std::vector<Rational>(size, Rational(1, static_cast<long long>(size))); }

// Ordered draws without replacement from an urn; exchangeable, not independent.
DiscreteJointDistribution urn_without_replacement(int n, std::vector<Rational> support, const std::vector<int>& balls) {
    std::map<DiscreteJointDistribution::Outcome, Rational> pmf;
    const int m = static_cast<int>(balls.size());
    std::vector<int> chosen;
    std::vector<bool> used(m, false);
    Rational p_path = 1;
    std::function<void(Rational)> draw = [&](Rational p) {
        if (static_cast<int>(chosen.size()) == n) {
            DiscreteJointDistribution::Outcome outcome;
            for (int ball : chosen) outcome.push_back(balls[ball]);
            pmf[outcome] += p;
            return;
        }
        const int remaining = m - static_cast<int>(chosen.size());
        for (int b = 0; b < m; ++b) {
            if (used[b]) continue;
            used[b] = true;
            chosen.push_back(b);
            draw(p / remaining);
            chosen.pop_back();
            used[b] = false;
        }
    };
    draw(p_path);
    return DiscreteJointDistribution(n, std::move(support), std::move(pmf));
}

// Two-colour Polya urn, one ball of each colour initially, reinforcement 1.
DiscreteJointDistribution polya_urn(int n, std::vector<Rational> support) {
    std::map<DiscreteJointDistribution::Outcome, Rational> pmf;
    for_each_tuple(n, 2, [&](const DiscreteJointDistribution::Outcome& tuple) {
        Rational p = 1;
        int counts[2] = {1, 1};
        for (int colour : tuple) {
            p *= Rational(counts[colour], counts[0] + counts[1]);
            ++counts[colour];
        }
        pmf.emplace(tuple, p);
    });
    return DiscreteJointDistribution(n, std::move(support), std::move(pmf));
}

}  // namespace

std::vector<NamedDistribution> standard_suite() {
    using D = DiscreteJointDistribution;
    std::vector<NamedDistribution> suite;

    suite.push_back({"iid-uniform-{0,1,2} n=1", true, D::iid(1, ints({0, 1, 2}), uniform(3))});
    suite.push_back({"iid-uniform-{0,1} n=2", true, D::iid(2, ints({0, 1}), uniform(2))});
    suite.push_back({"iid-uniform-{0,1,2} n=4", true, D::iid(4, ints({0, 1, 2}), uniform(3))});
    suite.push_back({"iid-skewed-{0,1,3,7} n=5", true,
                     D::iid(5, ints({0, 1, 3, 7}), {Rational(1, 10), Rational(2, 10), Rational(3, 10), Rational(4, 10)})});
    suite.push_back({"iid-uniform-{0,1,2,3} n=6", true, D::iid(6, ints({0, 1, 2, 3}), uniform(4))});

    suite.push_back({"all-equal-coin n=3", false, D(3, ints({0, 1}), {{{0, 0, 0}, Rational(1, 2)}, {{1, 1, 1}, Rational(1, 2)}})});
    suite.push_back({"urn-without-replacement n=4", false, urn_without_replacement(4, ints({0, 1, 2, 3}), {0, 0, 1, 2, 2, 3})});
    suite.push_back({"polya-urn n=6", false, polya_urn(6, ints({1, 4}))});
    suite.push_back({"mixture-of-iid n=6", false,
                     D::mixture({{Rational(1, 3), D::iid(6, ints({1, 4}), {Rational(3, 4), Rational(1, 4)})},
                                 {Rational(2, 3), D::iid(6, ints({1, 4}), {Rational(1, 4), Rational(3, 4)})}})});
    suite.push_back({"symmetrised-weights n=3", false,
                     D::symmetrised(3, ints({0, 1, 2, 3}),
                                    {{{0, 1, 3}, Rational(1, 2)}, {{2, 2, 2}, Rational(1, 4)}, {{0, 0, 3}, Rational(1, 4)}})});
    return suite;
}

}  // namespace fjq::oracle
