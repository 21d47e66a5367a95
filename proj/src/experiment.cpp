#include "fjq/experiment.hpp"

#include "fjq/analytic.hpp"
#include "fjq/bounds.hpp"
#include "fjq/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace fjq::experiment {

namespace {

const std::set<std::string, std::less<>> kAnalytic = {"nelson-lt", "varma-lt", "naive-upper", "sm-upper",
                                                      "refined-upper", "sm-lower", "staging-lower"};

bool is_simulation(std::string_view method) { return method.starts_with("simulate:"); }

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw DomainError("recipe line " + std::to_string(line) + ": " + what);
}

long parse_long(std::string_view s, int line) {
    long value = 0;
    const auto t = trim(s);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) fail(line, "expected an integer, got '" + t + "'");
    return value;
}

// "7", "n", "n-2"
int rank_term(std::string_view term, int n, int line) {
    const auto t = trim(term);
    if (t == "n") return n;
    if (t.starts_with("n-")) return n - static_cast<int>(parse_long(std::string_view(t).substr(2), line));
    return static_cast<int>(parse_long(t, line));
}

// Rank expression for one n: "all", "a..b", "a", comma lists of those.
std::vector<int> expand_ranks(const std::string& expr, int n, int line) {
    std::vector<int> ks;
    for (const auto& item : split_list(expr)) {
        if (item == "all") {
            for (int k = 1; k <= n; ++k) ks.push_back(k);
        } else if (auto dots = item.find(".."); dots != std::string::npos) {
            const int lo = rank_term(std::string_view(item).substr(0, dots), n, line);
            const int hi = rank_term(std::string_view(item).substr(dots + 2), n, line);
            for (int k = lo; k <= hi; ++k) ks.push_back(k);
        } else {
            ks.push_back(rank_term(item, n, line));
        }
    }
    return ks;
}

std::string column_name(std::string method) {
    if (is_simulation(method)) method = "sim_" + method.substr(9);
    std::replace(method.begin(), method.end(), '-', '_');
    return method;
}

}  // namespace

void ExperimentRecipe::validate() const {
    if (grid.empty()) throw DomainError("recipe '" + name + "' has an empty grid");
    for (const auto& p : grid) {
        if (p.n < 1 || p.k < 1 || p.k > p.n) {
            throw DomainError("grid point (n=" + std::to_string(p.n) + ", k=" + std::to_string(p.k) +
                              ") violates 1 <= k <= n");
        }
        if (p.rho < 0) throw DomainError("grid point has negative rho");
    }
    if (methods.empty()) throw DomainError("recipe '" + name + "' lists no methods");
    for (const auto& m : methods) {
        if (is_simulation(m)) {
            parse_variant(std::string_view(m).substr(9));
        } else if (!kAnalytic.contains(m)) {
            throw DomainError("unknown method '" + m + "'");
        }
    }
    if (mu <= 0) throw DomainError("mu must be positive");
    if (!(sample_rate > 0 && sample_rate <= 1)) throw DomainError("sample_rate must lie in (0, 1]");
    if (target_samples < 1) throw DomainError("samples must be >= 1");
}

ExperimentRecipe parse_recipe(std::istream& in) {
    ExperimentRecipe recipe;
    std::vector<long> ns;
    std::string k_expr;
    int k_line = 0;
    std::vector<Rational> rhos;
    std::vector<GridPoint> points;

    std::string text;
    int line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
        if (trim(text).empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        try {
            if (key == "name") {
                recipe.name = value;
            } else if (key == "n") {
                for (const auto& item : split_list(value)) {
                    if (auto dots = item.find(".."); dots != std::string::npos) {
                        const long lo = parse_long(std::string_view(item).substr(0, dots), line);
                        const long hi = parse_long(std::string_view(item).substr(dots + 2), line);
                        for (long v = lo; v <= hi; ++v) ns.push_back(v);
                    } else {
                        ns.push_back(parse_long(item, line));
                    }
                }
            } else if (key == "k") {
                k_expr = value;
                k_line = line;
            } else if (key == "rho") {
                for (const auto& item : split_list(value)) rhos.push_back(parse_rational(item));
            } else if (key == "point") {
                const auto parts = split_list(value);
                if (parts.size() != 3) fail(line, "point needs 'n, k, rho'");
                points.push_back({static_cast<int>(parse_long(parts[0], line)), static_cast<int>(parse_long(parts[1], line)),
                                  parse_rational(parts[2])});
            } else if (key == "methods") {
                recipe.methods = split_list(value);
            } else if (key == "mu") {
                recipe.mu = parse_rational(value);
            } else if (key == "seed") {
                recipe.seed = static_cast<std::uint64_t>(parse_long(value, line));
            } else if (key == "samples") {
                recipe.target_samples = parse_long(value, line);
            } else if (key == "sample_rate") {
                recipe.sample_rate = to_double(parse_rational(value));
            } else if (key == "warmup") {
                recipe.warmup_jobs = parse_long(value, line);
            } else if (key == "service") {
                recipe.service = parse_service_kind(value);
            } else if (key == "weibull_shape") {
                recipe.weibull_shape = to_double(parse_rational(value));
            } else if (key == "arrival") {
                recipe.arrival = sim::parse_arrival_kind(value);
            } else if (key == "output") {
                recipe.output = value;
            } else {
                fail(line, "unknown key '" + key + "'");
            }
        } catch (const DomainError& e) {
            const std::string what = e.what();
            if (what.starts_with("recipe line")) throw;
            fail(line, what);
        }
    }

    if (!ns.empty() || !k_expr.empty() || !rhos.empty()) {
        if (ns.empty() || k_expr.empty() || rhos.empty()) {
            throw DomainError("recipe grid needs all of n, k and rho (or only point lines)");
        }
        for (long n : ns) {
            for (int k : expand_ranks(k_expr, static_cast<int>(n), k_line)) {
                for (const auto& rho : rhos) recipe.grid.push_back({static_cast<int>(n), k, rho});
            }
        }
    }
    recipe.grid.insert(recipe.grid.end(), points.begin(), points.end());
    recipe.validate();
    return recipe;
}

ExperimentRecipe load_recipe(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open recipe " + path);
    return parse_recipe(in);
}

namespace {

struct Row {
    std::vector<std::string> cells;
};

std::vector<std::string> header_for(const ExperimentRecipe& recipe, std::vector<std::string>& approx_for_rel) {
    std::vector<std::string> header{"schema", "n", "k", "rho", "lambda", "mu"};
    int simulations = 0;
    for (const auto& m : recipe.methods) {
        const auto col = column_name(m);
        if (is_simulation(m)) {
            ++simulations;
            header.insert(header.end(), {col, col + "_hw", col + "_samples"});
        } else if (m == "nelson-lt" || m == "varma-lt") {
            header.insert(header.end(), {col, col + "_raw", col + "_clipped"});
            approx_for_rel.push_back(m);
        } else {
            header.push_back(col);
        }
    }
    if (simulations != 1) approx_for_rel.clear();
    for (const auto& m : approx_for_rel) header.push_back("rel_err_" + column_name(m));
    return header;
}

std::vector<std::string> evaluate(const ExperimentRecipe& recipe, const GridPoint& p, CoefficientStore& store,
                                  const std::vector<std::string>& approx_for_rel) {
    QueueSpec spec;
    spec.n = p.n;
    spec.k = p.k;
    spec.mu = recipe.mu;
    spec.lambda = p.rho * recipe.mu;
    spec.variant = Variant::purging;
    spec.service = recipe.service;

    std::vector<std::string> cells{std::string(csv::schema_version), std::to_string(p.n), std::to_string(p.k),
                                   csv::number(to_double(p.rho)), csv::number(spec.lambda_value()),
                                   csv::number(spec.mu_value())};
    const auto table = store.table(p.n);

    auto guarded = [](auto&& fn) -> std::optional<Rational> {
        try {
            return fn();
        } catch (const InstabilityError&) {
        } catch (const InapplicableError&) {
        }
        return std::nullopt;
    };
    auto cell = [](const std::optional<Rational>& v) { return v ? csv::number(to_double(*v)) : std::string(); };

    std::map<std::string, double> approx_values;
    std::optional<double> sim_mean;
    for (const auto& m : recipe.methods) {
        if (is_simulation(m)) {
            sim::SimConfig config;
            config.spec = spec;
            config.spec.variant = parse_variant(std::string_view(m).substr(9));
            if (config.spec.variant == Variant::basic) config.spec.k = config.spec.n;
            config.seed = recipe.seed;
            config.sample_rate = recipe.sample_rate;
            config.target_samples = recipe.target_samples;
            config.warmup_jobs = recipe.warmup_jobs;
            config.weibull_shape = recipe.weibull_shape;
            config.arrival = recipe.arrival;
            const auto result = sim::run(config);
            sim_mean = result.mean_sojourn;
            cells.push_back(result.converged ? csv::number(result.mean_sojourn) : std::string());
            cells.push_back(csv::number(result.half_width_95));
            cells.push_back(std::to_string(result.sample_count));
        } else if (m == "nelson-lt" || m == "varma-lt") {
            std::optional<ApproxValue> approx;
            try {
                approx = m == "nelson-lt" ? nelson_lt(spec, *table) : varma_lt(spec, *table);
            } catch (const InstabilityError&) {
            }
            if (approx) {
                approx_values[m] = approx->value;
                cells.insert(cells.end(), {csv::number(approx->value), csv::number(approx->raw), approx->clipped ? "1" : "0"});
            } else {
                cells.insert(cells.end(), {"", "", ""});
            }
        } else if (m == "naive-upper") {
            cells.push_back(cell(guarded([&] { return naive_upper(spec, *table); })));
        } else if (m == "sm-upper") {
            cells.push_back(cell(guarded([&] { return split_merge_upper(spec); })));
        } else if (m == "refined-upper") {
            cells.push_back(cell(guarded([&] { return refined_upper(spec, *table); })));
        } else if (m == "sm-lower") {
            cells.push_back(cell(guarded([&] { return split_merge_lower(spec); })));
        } else if (m == "staging-lower") {
            cells.push_back(cell(guarded([&] { return staging_lower(spec); })));
        }
    }
    for (const auto& m : approx_for_rel) {
        auto it = approx_values.find(m);
        if (it != approx_values.end() && sim_mean && *sim_mean > 0) {
            cells.push_back(csv::number(it->second / *sim_mean - 1.0));
        } else {
            cells.emplace_back();
        }
    }
    return cells;
}

}  // namespace

csv::Table run_experiment(const ExperimentRecipe& recipe, CoefficientStore& store, unsigned workers) {
    recipe.validate();
    csv::Table table;
    std::vector<std::string> approx_for_rel;
    table.header = header_for(recipe, approx_for_rel);
    table.rows.resize(recipe.grid.size());

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(recipe.grid.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < recipe.grid.size(); i = next++) {
            try {
                table.rows[i] = evaluate(recipe, recipe.grid[i], store, approx_for_rel);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

}  // namespace fjq::experiment
