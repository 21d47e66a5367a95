#pragma once

#include "fjq/coeffs.hpp"
#include "fjq/csv.hpp"
#include "fjq/numeric.hpp"
#include "fjq/queue_spec.hpp"
#include "fjq/simulator.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fjq::experiment {

struct GridPoint {
    int n = 1;
    int k = 1;
    Rational rho;
};

/// A batch of evaluations over (n, k, rho) points, read from a plain
/// `key = value` text file:
///
///     name    = fig-nelson-lt
///     n       = 10                  # list
///     k       = n-2..n              # list, range, `all`, or n-relative
///     rho     = 0.3, 0.5, 0.8
///     point   = 20, 18, 0.3         # extra explicit points (repeatable)
///     methods = nelson-lt, simulate:non-purging
///     mu = 1   seed = 42   samples = 10000   sample_rate = 0.01
///     output  = fig-nelson-lt.csv
///
/// Methods: nelson-lt, varma-lt, naive-upper, sm-upper, refined-upper,
/// sm-lower, staging-lower, simulate:<variant>.
struct ExperimentRecipe {
    std::string name;
    std::vector<GridPoint> grid;
    std::vector<std::string> methods;
    Rational mu = 1;
    std::uint64_t seed = 42;
    double sample_rate = 0.01;
    std::int64_t target_samples = 10000;
    std::optional<std::int64_t> warmup_jobs;
    ServiceKind service = ServiceKind::exponential;
    double weibull_shape = 1.0;
    sim::ArrivalKind arrival = sim::ArrivalKind::poisson;
    std::string output;

    /// 1 <= k <= n and rho >= 0 at every point, known methods, non-empty grid.
    void validate() const;
};

ExperimentRecipe parse_recipe(std::istream& in);
ExperimentRecipe load_recipe(const std::string& path);

/// Evaluates every method at every grid point. Rows come out in grid order
/// whatever the worker count. Analytic cells are left empty where the
/// formula does not apply (unstable load, inapplicable bound).
csv::Table run_experiment(const ExperimentRecipe& recipe, CoefficientStore& store, unsigned workers = 0);

}  // namespace fjq::experiment
