#pragma once

#include "fjq/queue_spec.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace fjq::sim {

enum class ArrivalKind { poisson, deterministic };

std::string_view to_string(ArrivalKind a);
ArrivalKind parse_arrival_kind(std::string_view text);

/// Service time law with mean 1/mu. Weibull uses `weibull_shape` and a
/// scale chosen to keep that mean.
struct ServiceDistribution {
    ServiceKind kind = ServiceKind::exponential;
    double weibull_shape = 1.0;

    double draw(std::mt19937_64& engine, double mu) const;
    double mean(double mu) const { return 1.0 / mu; }
};

struct SimConfig {
    QueueSpec spec;
    ArrivalKind arrival = ArrivalKind::poisson;
    double weibull_shape = 1.0;  // used when spec.service is weibull
    std::uint64_t seed = 42;
    double sample_rate = 0.01;
    std::int64_t target_samples = 10000;
    std::optional<std::int64_t> warmup_jobs;  // default ceil(10 n / max(1 - rho, 0.01))
    std::optional<std::int64_t> job_budget;   // default warmup + 20 * target / sample_rate
    std::int64_t max_jobs_in_system = 2'000'000;
    int batches = 20;

    void validate() const;
    std::int64_t effective_warmup() const;
    std::int64_t effective_budget() const;
    ServiceDistribution service() const { return {spec.service, weibull_shape}; }
};

struct SimResult {
    double mean_sojourn = 0.0;
    std::int64_t sample_count = 0;
    double half_width_95 = 0.0;  // batch means, Student t
    std::uint64_t seed = 0;
    std::int64_t job_count_total = 0;
    std::int64_t warmup_jobs = 0;
    bool converged = true;
};

/// Everything that happened to one job. task_end[q] is the time the
/// sub-task on queue q completed, or NaN when it was purged.
struct JobRecord {
    std::int64_t id = 0;
    double arrival = 0.0;
    double departure = 0.0;
    std::vector<double> service;
    std::vector<double> task_end;
    bool sampled = false;
};

using JobObserver = std::function<void(const JobRecord&)>;

/// Discrete-event run of one queue variant. The observer, when given, sees
/// every job once all of its sub-tasks have ended, in job order.
SimResult run(const SimConfig& config, const JobObserver& observer = {});

struct JointResult {
    std::map<int, SimResult> by_rank;  // k -> mean of the k-th smallest sub-task sojourn
    std::vector<SimResult> prefix_max; // [i-1] -> mean of max over sub-queues 1..i
    std::int64_t job_count_total = 0;
    bool converged = true;
};

/// One basic (n,n) run; every sampled job contributes its sorted sub-task
/// sojourn times to all requested ranks. Basic or non-purging only.
JointResult run_joint(const SimConfig& config, std::span<const int> ranks);

/// Mean and 95% half-width from `batches` contiguous batch means.
struct BatchMeans {
    double mean = 0.0;
    double half_width_95 = 0.0;
};
BatchMeans batch_means(std::span<const double> samples, int batches);

/// Two-sided 95% Student t quantile for the given degrees of freedom.
double student_t_975(int dof);

}  // namespace fjq::sim
