#include "fjq/simulator.hpp"

#include "fjq/errors.hpp"
#include "fjq/random_streams.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

namespace fjq::sim {

std::string_view to_string(ArrivalKind a) { return a == ArrivalKind::poisson ? "poisson" : "deterministic"; }

ArrivalKind parse_arrival_kind(std::string_view text) {
    if (text == "poisson") return ArrivalKind::poisson;
    if (text == "deterministic") return ArrivalKind::deterministic;
    throw DomainError("unknown arrival process '" + std::string(text) + "' (expected poisson or deterministic)");
}

double ServiceDistribution::draw(std::mt19937_64& engine, double mu) const {
    switch (kind) {
        case ServiceKind::exponential: return -std::log1p(-uniform01(engine)) / mu;
        case ServiceKind::deterministic: return 1.0 / mu;
        case ServiceKind::weibull: {
            const double scale = (1.0 / mu) / std::tgamma(1.0 + 1.0 / weibull_shape);
            return scale * std::pow(-std::log1p(-uniform01(engine)), 1.0 / weibull_shape);
        }
    }
    return 0.0;
}

void SimConfig::validate() const {
    spec.validate();
    if (spec.variant == Variant::basic && spec.k != spec.n) throw DomainError("basic queue needs k = n");
    if (!(sample_rate > 0.0 && sample_rate <= 1.0)) throw DomainError("sample_rate must lie in (0, 1]");
    if (target_samples < 1) throw DomainError("target_samples must be >= 1");
    if (batches < 2) throw DomainError("need at least 2 batches");
    if (spec.service == ServiceKind::weibull && !(weibull_shape > 0.0)) throw DomainError("weibull shape must be > 0");
    if (warmup_jobs && *warmup_jobs < 0) throw DomainError("warmup_jobs must be >= 0");
    if (job_budget && *job_budget < 1) throw DomainError("job_budget must be >= 1");
}

std::int64_t SimConfig::effective_warmup() const {
    if (warmup_jobs) return *warmup_jobs;
    const double slack = std::max(1.0 - spec.rho_value(), 0.01);
    return static_cast<std::int64_t>(std::ceil(10.0 * spec.n / slack));
}

std::int64_t SimConfig::effective_budget() const {
    if (job_budget) return *job_budget;
    return effective_warmup() + static_cast<std::int64_t>(std::ceil(20.0 * target_samples / sample_rate));
}

double student_t_975(int dof) {
    if (dof < 1) return std::numeric_limits<double>::infinity();
    boost::math::students_t dist(dof);
    return boost::math::quantile(dist, 0.975);
}

BatchMeans batch_means(std::span<const double> samples, int batches) {
    BatchMeans out;
    const auto count = static_cast<std::int64_t>(samples.size());
    if (count == 0) {
        out.mean = std::numeric_limits<double>::quiet_NaN();
        out.half_width_95 = std::numeric_limits<double>::infinity();
        return out;
    }
    double total = 0.0;
    for (double x : samples) total += x;
    out.mean = total / static_cast<double>(count);

    std::vector<double> means;
    if (count >= 2 * static_cast<std::int64_t>(batches)) {
        const std::int64_t size = count / batches;
        for (int b = 0; b < batches; ++b) {
            double s = 0.0;
            for (std::int64_t j = b * size; j < (b + 1) * size; ++j) s += samples[j];
            means.push_back(s / static_cast<double>(size));
        }
    } else {
        // Too few samples to batch: treat them as independent.
        means.assign(samples.begin(), samples.end());
    }
    if (means.size() < 2) {
        out.half_width_95 = std::numeric_limits<double>::infinity();
        return out;
    }
    double grand = 0.0;
    for (double m : means) grand += m;
    grand /= static_cast<double>(means.size());
    double ss = 0.0;
    for (double m : means) ss += (m - grand) * (m - grand);
    const double var = ss / static_cast<double>(means.size() - 1);
    out.half_width_95 = student_t_975(static_cast<int>(means.size()) - 1) * std::sqrt(var / static_cast<double>(means.size()));
    return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class TaskState : unsigned char { waiting, in_service, done, purged };

struct Job {
    std::int64_t id = 0;
    double arrival = 0.0;
    double departure = kNaN;
    int finished = 0;  // sub-tasks completed
    int ended = 0;     // completed or purged
    bool departed = false;
    std::int64_t sample_slot = -1;
    std::vector<double> service;
    std::vector<double> task_end;
    std::vector<TaskState> state;
};

// Completions sort before arrivals at equal times, then by sub-queue index.
struct Event {
    double time;
    int kind;  // 0 completion, 1 arrival
    int queue;
    std::int64_t job;
    std::uint64_t generation;

    bool operator>(const Event& other) const {
        if (time != other.time) return time > other.time;
        if (kind != other.kind) return kind > other.kind;
        return queue > other.queue;
    }
};

struct Server {
    std::deque<std::int64_t> waiting;
    std::int64_t current = -1;
    std::uint64_t generation = 0;
};

class Engine {
  public:
    using RetireHook = std::function<void(const Job&)>;

    // drain: on exit also hand over finished jobs stuck behind unfinished
    // older ones (the hook then sees a gapped, still increasing, id sequence).
    Engine(const SimConfig& config, RetireHook hook, bool drain = false)
        : config_(config),
          drain_(drain),
          n_(config.spec.n),
          k_(config.spec.variant == Variant::basic ? config.spec.n : config.spec.k),
          variant_(config.spec.variant),
          lambda_(config.spec.lambda_value()),
          mu_(config.spec.mu_value()),
          service_(config.service()),
          warmup_(config.effective_warmup()),
          budget_(config.effective_budget()),
          hook_(std::move(hook)),
          arrivals_(RandomStreams::make(config.seed, RandomStreams::arrivals_id)),
          sampling_(RandomStreams::make(config.seed, RandomStreams::sampling_id)),
          servers_(n_) {
        service_streams_.reserve(n_);
        for (int q = 0; q < n_; ++q) service_streams_.push_back(RandomStreams::make(config.seed, RandomStreams::service_id(q)));
        samples_.assign(config.target_samples, kNaN);
    }

    SimResult run() {
        if (lambda_ > 0.0) {
            schedule_arrival(next_interarrival());
        } else {
            schedule_arrival(0.0);
        }
        while (!events_.empty()) {
            const Event ev = events_.top();
            events_.pop();
            if (ev.kind == 1) {
                on_arrival(ev.time);
            } else {
                on_completion(ev);
            }
            if (aborted_) break;
            if (arrivals_stopped_ && outstanding_samples_ == 0) break;
        }
        if (drain_ && hook_) {
            for (const Job& j : jobs_) {
                if (j.ended == n_) hook_(j);
            }
        }

        std::vector<double> collected;
        collected.reserve(samples_.size());
        for (double x : samples_) {
            if (!std::isnan(x)) collected.push_back(x);
        }
        const auto stats = batch_means(collected, config_.batches);
        SimResult result;
        result.mean_sojourn = stats.mean;
        result.half_width_95 = stats.half_width_95;
        result.sample_count = static_cast<std::int64_t>(collected.size());
        result.seed = config_.seed;
        result.job_count_total = next_id_;
        result.warmup_jobs = warmup_;
        result.converged = !aborted_ && result.sample_count == config_.target_samples;
        return result;
    }

  private:
    double next_interarrival() {
        if (config_.arrival == ArrivalKind::deterministic) return 1.0 / lambda_;
        return -std::log1p(-uniform01(arrivals_)) / lambda_;
    }

    void schedule_arrival(double time) { events_.push({time, 1, 0, next_id_, 0}); }

    Job& job(std::int64_t id) { return jobs_[static_cast<std::size_t>(id - first_id_)]; }

    void on_arrival(double t) {
        const std::int64_t id = next_id_++;
        Job& j = jobs_.emplace_back();
        j.id = id;
        j.arrival = t;
        take_buffers(j);
        for (int q = 0; q < n_; ++q) {
            j.service[q] = service_.draw(service_streams_[q], mu_);
            j.task_end[q] = kNaN;
            j.state[q] = TaskState::waiting;
        }
        const double u = uniform01(sampling_);
        if (id >= warmup_ && u < config_.sample_rate && marked_ < config_.target_samples) {
            j.sample_slot = marked_++;
            ++outstanding_samples_;
        }

        if (marked_ >= config_.target_samples || next_id_ >= budget_) {
            arrivals_stopped_ = true;
        } else if (lambda_ > 0.0) {
            schedule_arrival(t + next_interarrival());
        }
        if (static_cast<std::int64_t>(jobs_.size()) > config_.max_jobs_in_system) {
            aborted_ = true;
            return;
        }

        if (variant_ == Variant::split_merge) {
            blocked_.push_back(id);
            if (head_ < 0) start_head(t);
        } else {
            for (int q = 0; q < n_; ++q) {
                servers_[q].waiting.push_back(id);
                if (servers_[q].current < 0) start_next(q, t);
            }
        }
    }

    void start_next(int q, double t) {
        Server& s = servers_[q];
        while (!s.waiting.empty()) {
            const std::int64_t id = s.waiting.front();
            s.waiting.pop_front();
            if (id < first_id_) continue;  // purged and already retired
            Job& j = job(id);
            if (j.state[q] == TaskState::purged) continue;
            j.state[q] = TaskState::in_service;
            s.current = id;
            ++s.generation;
            events_.push({t + j.service[q], 0, q, id, s.generation});
            return;
        }
        s.current = -1;
    }

    void start_head(double t) {
        if (blocked_.empty()) {
            head_ = -1;
            return;
        }
        head_ = blocked_.front();
        blocked_.pop_front();
        Job& j = job(head_);
        for (int q = 0; q < n_; ++q) {
            Server& s = servers_[q];
            j.state[q] = TaskState::in_service;
            s.current = head_;
            ++s.generation;
            events_.push({t + j.service[q], 0, q, head_, s.generation});
        }
    }

    void cancel_in_service(Job& j, int q) {
        Server& s = servers_[q];
        ++s.generation;  // invalidates the pending completion
        s.current = -1;
        j.state[q] = TaskState::purged;
        ++j.ended;
    }

    void on_completion(const Event& ev) {
        Server& s = servers_[ev.queue];
        if (ev.generation != s.generation || s.current != ev.job) return;
        const double t = ev.time;
        const std::int64_t id = ev.job;
        {
            Job& j = job(id);
            j.task_end[ev.queue] = t;
            j.state[ev.queue] = TaskState::done;
            ++j.finished;
            ++j.ended;
            s.current = -1;
        }

        if (variant_ == Variant::split_merge) {
            Job& j = job(id);
            if (!j.departed && j.finished == k_) {
                depart(j, t);
                for (int q = 0; q < n_; ++q) {
                    if (j.state[q] == TaskState::in_service) cancel_in_service(j, q);
                }
                retire_ready(t);
                start_head(t);
            }
            return;
        }

        Job& j = job(id);
        if (!j.departed && j.finished == k_) {
            depart(j, t);
            if (variant_ == Variant::purging) {
                for (int q = 0; q < n_; ++q) {
                    if (j.state[q] == TaskState::in_service) {
                        cancel_in_service(j, q);
                        start_next(q, t);
                    } else if (j.state[q] == TaskState::waiting) {
                        j.state[q] = TaskState::purged;
                        ++j.ended;
                    }
                }
            }
        }
        start_next(ev.queue, t);
        retire_ready(t);
    }

    void depart(Job& j, double t) {
        j.departed = true;
        j.departure = t;
        if (j.sample_slot >= 0) {
            samples_[j.sample_slot] = t - j.arrival;
            --outstanding_samples_;
        }
    }

    void retire_ready(double t) {
        while (!jobs_.empty() && jobs_.front().ended == n_) {
            Job& front = jobs_.front();
            if (hook_) hook_(front);
            give_buffers(front);
            jobs_.pop_front();
            ++first_id_;
        }
        // Zero load: the next job enters an empty system.
        if (lambda_ == 0.0 && jobs_.empty() && !arrivals_stopped_) schedule_arrival(t);
    }

    void take_buffers(Job& j) {
        if (!pool_.empty()) {
            j.service = std::move(pool_.back().service);
            j.task_end = std::move(pool_.back().task_end);
            j.state = std::move(pool_.back().state);
            pool_.pop_back();
        }
        j.service.resize(n_);
        j.task_end.resize(n_);
        j.state.resize(n_);
    }

    void give_buffers(Job& j) {
        Job& spare = pool_.emplace_back();
        spare.service = std::move(j.service);
        spare.task_end = std::move(j.task_end);
        spare.state = std::move(j.state);
    }

    const SimConfig& config_;
    const bool drain_;
    const int n_;
    const int k_;
    const Variant variant_;
    const double lambda_;
    const double mu_;
    const ServiceDistribution service_;
    const std::int64_t warmup_;
    const std::int64_t budget_;
    RetireHook hook_;

    std::mt19937_64 arrivals_;
    std::mt19937_64 sampling_;
    std::vector<std::mt19937_64> service_streams_;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::vector<Server> servers_;
    std::deque<Job> jobs_;
    std::vector<Job> pool_;
    std::deque<std::int64_t> blocked_;  // split-merge: jobs waiting for the servers
    std::int64_t head_ = -1;            // split-merge: job in service

    std::int64_t next_id_ = 0;
    std::int64_t first_id_ = 0;
    std::int64_t marked_ = 0;
    std::int64_t outstanding_samples_ = 0;
    bool arrivals_stopped_ = false;
    bool aborted_ = false;
    std::vector<double> samples_;
};

JobRecord to_record(const Job& j) {
    JobRecord r;
    r.id = j.id;
    r.arrival = j.arrival;
    r.departure = j.departure;
    r.service = j.service;
    r.task_end = j.task_end;
    r.sampled = j.sample_slot >= 0;
    return r;
}

}  // namespace

SimResult run(const SimConfig& config, const JobObserver& observer) {
    config.validate();
    Engine::RetireHook hook;
    if (observer) hook = [&](const Job& j) { observer(to_record(j)); };
    Engine engine(config, std::move(hook));
    return engine.run();
}

JointResult run_joint(const SimConfig& config, std::span<const int> ranks) {
    config.validate();
    const Variant v = config.spec.variant;
    if (v != Variant::basic && v != Variant::non_purging) {
        throw DomainError("run_joint needs a basic or non-purging queue; purging dynamics depend on k");
    }
    const int n = config.spec.n;
    for (int k : ranks) {
        if (k < 1 || k > n) throw DomainError("rank " + std::to_string(k) + " outside [1, n]");
    }

    SimConfig basic = config;
    basic.spec.variant = Variant::basic;
    basic.spec.k = n;

    std::vector<std::vector<double>> ordered(n, std::vector<double>(config.target_samples, kNaN));
    std::vector<std::vector<double>> prefix(n, std::vector<double>(config.target_samples, kNaN));
    std::vector<double> sorted(n);
    Engine engine(basic, [&](const Job& j) {
        if (j.sample_slot < 0) return;
        double running = -std::numeric_limits<double>::infinity();
        for (int q = 0; q < n; ++q) {
            const double delay = j.task_end[q] - j.arrival;
            sorted[q] = delay;
            running = std::max(running, delay);
            prefix[q][j.sample_slot] = running;
        }
        std::sort(sorted.begin(), sorted.end());
        for (int q = 0; q < n; ++q) ordered[q][j.sample_slot] = sorted[q];
    }, true);
    const SimResult base = engine.run();

    auto summarise = [&](const std::vector<double>& slots) {
        std::vector<double> collected;
        for (double x : slots) {
            if (!std::isnan(x)) collected.push_back(x);
        }
        const auto stats = batch_means(collected, config.batches);
        SimResult r = base;
        r.mean_sojourn = stats.mean;
        r.half_width_95 = stats.half_width_95;
        r.sample_count = static_cast<std::int64_t>(collected.size());
        return r;
    };

    JointResult out;
    out.job_count_total = base.job_count_total;
    out.converged = base.converged;
    for (int k : ranks) out.by_rank.emplace(k, summarise(ordered[k - 1]));
    for (int i = 0; i < n; ++i) out.prefix_max.push_back(summarise(prefix[i]));
    return out;
}

}  // namespace fjq::sim
