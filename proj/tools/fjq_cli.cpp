// fjq: command-line front end for coefficients, approximations, bounds,
// simulation runs and experiment recipes.

#include "fjq/analytic.hpp"
#include "fjq/bounds.hpp"
#include "fjq/coeffs.hpp"
#include "fjq/csv.hpp"
#include "fjq/errors.hpp"
#include "fjq/experiment.hpp"
#include "fjq/harmonic.hpp"
#include "fjq/ordstat_oracle.hpp"
#include "fjq/simulator.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace fjq;

enum Exit { ok = 0, other = 1, usage = 2, unstable = 3, nonconvergent = 4 };

struct CoeffArgs {
    int n = 0;
    std::optional<int> k;
    std::optional<int> i;
    std::string cache;
};

struct RateArgs {
    int n = 0;
    int k = 0;
    std::string lambda;
    std::string mu;
};

QueueSpec make_spec(const RateArgs& a) {
    QueueSpec spec;
    spec.n = a.n;
    spec.k = a.k;
    spec.lambda = parse_rational(a.lambda);
    spec.mu = parse_rational(a.mu);
    spec.variant = Variant::purging;
    spec.validate();
    return spec;
}

std::string exact_or_number(const std::optional<Rational>& r) { return r ? csv::number(to_double(*r)) : std::string(); }

int cmd_coeff(const CoeffArgs& a) {
    CoefficientStore store = a.cache.empty() ? CoefficientStore() : CoefficientStore(a.cache);
    if (a.n < 1) throw DomainError("n must be >= 1 (usage: coeff n [k] [i])");
    const auto table = store.table(a.n);
    if (!a.k) {
        save_table(*table, std::cout);
        return ok;
    }
    if (*a.k < 1 || *a.k > a.n) throw DomainError("k must satisfy 1 <= k <= n (usage: coeff n [k] [i])");
    if (!a.i) {
        for (int i = *a.k; i <= a.n; ++i) std::cout << a.n << ' ' << *a.k << ' ' << i << ' ' << table->at(*a.k, i) << '\n';
        return ok;
    }
    if (*a.i < *a.k || *a.i > a.n) throw DomainError("i must satisfy k <= i <= n (usage: coeff n [k] [i])");
    std::cout << table->at(*a.k, *a.i) << '\n';
    return ok;
}

int cmd_approx(const RateArgs& a, const std::string& method_name, bool use_float, int digits) {
    auto spec = make_spec(a);
    spec.variant = Variant::non_purging;
    const Method method = parse_method(method_name);
    const Evaluation evaluation = use_float ? Evaluation::floating : Evaluation::exact_rational;
    ApproxValue v;
    switch (method) {
        case Method::nelson_basic:
        case Method::varma_basic:
            if (spec.k != spec.n) throw DomainError("basic methods need k == n");
            v = method == Method::nelson_basic ? nelson_basic(spec.n, spec.lambda, spec.mu, evaluation)
                                               : varma_basic(spec.n, spec.lambda, spec.mu, evaluation);
            break;
        case Method::nelson_lt:
        case Method::varma_lt: {
            const auto table = CoefficientStore::shared().table(spec.n);
            FloatOptions options;
            options.coefficient_digits = digits;
            v = method == Method::nelson_lt ? nelson_lt(spec, *table, evaluation, options)
                                            : varma_lt(spec, *table, evaluation, options);
            break;
        }
    }
    csv::Table out;
    out.header = {"schema", "method", "evaluation", "n", "k", "lambda", "mu", "rho", "value", "raw", "clipped", "exact"};
    out.rows.push_back({std::string(csv::schema_version), std::string(to_string(v.method)),
                        std::string(to_string(v.evaluation)), std::to_string(spec.n), std::to_string(spec.k),
                        csv::number(spec.lambda_value()), csv::number(spec.mu_value()), csv::number(spec.rho_value()),
                        csv::number(v.value), csv::number(v.raw), v.clipped ? "true" : "false",
                        v.exact ? to_string(*v.exact) : std::string()});
    csv::write(out, std::cout);
    return ok;
}

int cmd_bounds(const RateArgs& a) {
    const auto spec = make_spec(a);
    const auto table = CoefficientStore::shared().table(spec.n);
    const auto b = bound_set(spec, *table);
    csv::Table out;
    out.header = {"schema", "n", "k", "lambda", "mu", "rho", "naive_upper", "sm_upper", "refined_upper", "sm_lower",
                  "staging_lower"};
    out.rows.push_back({std::string(csv::schema_version), std::to_string(spec.n), std::to_string(spec.k),
                        csv::number(spec.lambda_value()), csv::number(spec.mu_value()), csv::number(spec.rho_value()),
                        csv::number(to_double(b.naive_upper)), exact_or_number(b.split_merge_upper),
                        csv::number(to_double(b.refined_upper)), csv::number(to_double(b.split_merge_lower)),
                        csv::number(to_double(b.staging_lower))});
    csv::write(out, std::cout);
    for (const auto& note : b.notes) std::cerr << "note: " << note << '\n';
    return ok;
}

struct SimArgs {
    std::string variant = "non-purging";
    int n = 1;
    std::optional<int> k;
    std::optional<std::string> rho;
    std::optional<std::string> lambda;
    std::string mu = "1";
    std::uint64_t seed = 42;
    std::int64_t samples = 10000;
    double sample_rate = 0.01;
    std::optional<std::int64_t> warmup;
    std::optional<std::int64_t> budget;
    std::string service = "exponential";
    double weibull_shape = 1.0;
    std::string arrival = "poisson";
};

int cmd_simulate(const SimArgs& a) {
    sim::SimConfig config;
    config.spec.n = a.n;
    config.spec.variant = parse_variant(a.variant);
    config.spec.k = a.k.value_or(config.spec.variant == Variant::basic ? a.n : 1);
    config.spec.mu = parse_rational(a.mu);
    if (a.rho && a.lambda) throw DomainError("give either --rho or --lambda, not both");
    if (a.rho) config.spec.lambda = parse_rational(*a.rho) * config.spec.mu;
    if (a.lambda) config.spec.lambda = parse_rational(*a.lambda);
    config.spec.service = parse_service_kind(a.service);
    config.weibull_shape = a.weibull_shape;
    config.arrival = sim::parse_arrival_kind(a.arrival);
    config.seed = a.seed;
    config.target_samples = a.samples;
    config.sample_rate = a.sample_rate;
    config.warmup_jobs = a.warmup;
    config.job_budget = a.budget;
    const auto r = sim::run(config);

    csv::Table out;
    out.header = {"schema", "variant", "n", "k", "lambda", "mu", "rho", "seed", "mean_sojourn", "half_width_95",
                  "samples", "jobs", "warmup_jobs", "converged"};
    out.rows.push_back({std::string(csv::schema_version), std::string(to_string(config.spec.variant)),
                        std::to_string(config.spec.n), std::to_string(config.spec.k),
                        csv::number(config.spec.lambda_value()), csv::number(config.spec.mu_value()),
                        csv::number(config.spec.rho_value()), std::to_string(r.seed), csv::number(r.mean_sojourn),
                        csv::number(r.half_width_95), std::to_string(r.sample_count), std::to_string(r.job_count_total),
                        std::to_string(r.warmup_jobs), r.converged ? "true" : "false"});
    csv::write(out, std::cout);
    if (!r.converged) {
        std::cerr << "simulation did not converge (budget exhausted or too many jobs in system)\n";
        return nonconvergent;
    }
    return ok;
}

int cmd_experiment(const std::string& path, const std::string& output_override, unsigned workers) {
    const auto recipe = experiment::load_recipe(path);
    const auto table = experiment::run_experiment(recipe, CoefficientStore::shared(), workers);
    const std::string output = output_override.empty() ? recipe.output : output_override;
    if (output.empty() || output == "-") {
        csv::write(table, std::cout);
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw Error("cannot write " + output);
        csv::write(table, out);
        std::cerr << recipe.name << ": " << table.rows.size() << " rows -> " << output << '\n';
    }
    return ok;
}

int cmd_verify(int max_n) {
    bool all_passed = true;
    for (const auto& entry : oracle::standard_suite()) {
        const auto table = CoefficientStore::shared().table(entry.distribution.n());
        const auto report = oracle::verify_lt_identity(entry.distribution, *table, entry.name);
        std::cout << (report.passed() ? "PASS " : "FAIL ") << report.name << " checks="
                  << report.checks.size() << " failures=" << report.failures() << '\n';
        all_passed = all_passed && report.passed();
    }
    // Exponential order statistics: sum_i W_i^{n,k} H_i = H_n - H_{n-k}.
    const auto harmonic = HarmonicCache::shared(max_n);
    std::size_t failures = 0, checks = 0;
    for (int n = 1; n <= max_n; ++n) {
        const auto table = CoefficientStore::shared().table(n);
        for (int k = 1; k <= n; ++k) {
            Rational sum = 0;
            for (int i = k; i <= n; ++i) sum += Rational(table->at(k, i)) * harmonic->h(i);
            ++checks;
            if (sum != harmonic->h(n) - harmonic->h(n - k)) ++failures;
        }
    }
    std::cout << (failures == 0 ? "PASS " : "FAIL ") << "exponential-harmonic n<=" << max_n << " checks=" << checks
              << " failures=" << failures << '\n';
    return all_passed && failures == 0 ? ok : other;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fork-join queue coefficients, approximations, bounds and simulation"};
    app.require_subcommand(1);

    CoeffArgs coeff;
    auto* c_coeff = app.add_subcommand("coeff", "Print W coefficients (full table in cache format when k is omitted)");
    c_coeff->add_option("n", coeff.n, "fan-out")->required();
    c_coeff->add_option("k", coeff.k, "rank");
    c_coeff->add_option("i", coeff.i, "index, k <= i <= n");
    c_coeff->add_option("--cache", coeff.cache, "coefficient cache directory");

    RateArgs approx;
    std::string method = "nelson-lt";
    bool use_float = false;
    bool use_exact = false;
    int digits = FloatOptions{}.coefficient_digits;
    auto* c_approx = app.add_subcommand("approx", "Approximate mean sojourn time of a non-purging (n,k) queue");
    c_approx->add_option("n", approx.n)->required();
    c_approx->add_option("k", approx.k)->required();
    c_approx->add_option("lambda", approx.lambda, "arrival rate (decimal or a/b)")->required();
    c_approx->add_option("mu", approx.mu, "service rate per sub-queue")->required();
    c_approx->add_option("--method", method, "nelson-basic, varma-basic, nelson-lt or varma-lt");
    auto* exact_flag = c_approx->add_flag("--exact", use_exact, "exact rational evaluation (default)");
    c_approx->add_flag("--float", use_float, "double evaluation")->excludes(exact_flag);
    c_approx->add_option("--coefficient-digits", digits, "significant digits kept per W coefficient with --float")
        ->check(CLI::Range(1, 17));

    RateArgs bounds;
    auto* c_bounds = app.add_subcommand("bounds", "Bounds on the mean sojourn time of a purging (n,k) queue");
    c_bounds->add_option("n", bounds.n)->required();
    c_bounds->add_option("k", bounds.k)->required();
    c_bounds->add_option("lambda", bounds.lambda)->required();
    c_bounds->add_option("mu", bounds.mu)->required();

    SimArgs sim_args;
    auto* c_sim = app.add_subcommand("simulate", "Discrete-event simulation of one queue variant");
    c_sim->add_option("--variant", sim_args.variant, "basic, non-purging, purging or split-merge");
    c_sim->add_option("-n", sim_args.n)->required();
    c_sim->add_option("-k", sim_args.k);
    c_sim->add_option("--rho", sim_args.rho, "load lambda/mu");
    c_sim->add_option("--lambda", sim_args.lambda);
    c_sim->add_option("--mu", sim_args.mu);
    c_sim->add_option("--seed", sim_args.seed);
    c_sim->add_option("--samples", sim_args.samples, "sampled jobs to collect");
    c_sim->add_option("--sample-rate", sim_args.sample_rate);
    c_sim->add_option("--warmup", sim_args.warmup, "jobs discarded before sampling");
    c_sim->add_option("--budget", sim_args.budget, "maximum jobs generated");
    c_sim->add_option("--service", sim_args.service, "exponential, deterministic or weibull");
    c_sim->add_option("--weibull-shape", sim_args.weibull_shape);
    c_sim->add_option("--arrival", sim_args.arrival, "poisson or deterministic");

    std::string recipe_path, output;
    unsigned workers = 0;
    auto* c_exp = app.add_subcommand("experiment", "Run a recipe file and write CSV");
    c_exp->add_option("recipe", recipe_path)->required();
    c_exp->add_option("-o,--output", output, "output path, '-' for stdout (overrides the recipe)");
    c_exp->add_option("-j,--jobs", workers, "worker threads (0 = all cores)");

    int verify_n = 40;
    auto* c_verify = app.add_subcommand("verify", "Check the order-statistic identity on the oracle suite");
    c_verify->add_option("--max-n", verify_n, "largest n for the exponential harmonic check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*c_coeff) return cmd_coeff(coeff);
        if (*c_approx) return cmd_approx(approx, method, use_float, digits);
        if (*c_bounds) return cmd_bounds(bounds);
        if (*c_sim) return cmd_simulate(sim_args);
        if (*c_exp) return cmd_experiment(recipe_path, output, workers);
        if (*c_verify) return cmd_verify(verify_n);
    } catch (const MalformedCacheError& e) {
        std::cerr << "error: malformed cache: " << e.what() << '\n';
        return usage;
    } catch (const InstabilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return unstable;
    } catch (const InapplicableError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return unstable;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return other;
    }
    return other;
}
