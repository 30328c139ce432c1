#include "eeva/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace eeva {

// --- Replay -------------------------------------------------------------------

std::shared_ptr<const std::vector<std::uint64_t>> next_use_for(const Trace& trace) {
  const auto accesses = trace.flat_accesses();
  return std::make_shared<const std::vector<std::uint64_t>>(
      next_use_positions(accesses, trace.catalog.total_pages()));
}

ReplayResult replay(const Trace& trace, std::string_view policy_name, const ReplayOptions& options,
                    std::shared_ptr<const std::vector<std::uint64_t>> next_use) {
  PolicyOptions policy_options;
  policy_options.eeva = EevaConfig{options.mu, trace.total_accesses(), options.rng_seed};
  policy_options.seq = options.seq;
  if (policy_name == "belady") {
    policy_options.next_use = next_use ? std::move(next_use) : next_use_for(trace);
  }
  auto policy = make_policy(policy_name, policy_options);

  BufferManager manager(options.capacity, trace.catalog, *policy, options.cost);
  manager.set_timing(options.timing);

  ReplayResult result{std::string(policy_name), RunMetrics(options.sample_every), 0.0,
                      std::nullopt, {}};
  std::vector<AccessOutcome> outcomes;
  if (options.keep_log) result.log.reserve(trace.total_accesses());
  for (const auto& request : trace.requests) {
    outcomes.clear();
    manager.process_request(request, outcomes);
    result.metrics.record(outcomes);
    if (options.keep_log) result.log.insert(result.log.end(), outcomes.begin(), outcomes.end());
  }
  result.metrics.finish();
  result.metrics.decisions = manager.decision_stats();
  if (result.metrics.accesses() > 0) {
    result.time_cost = averaged_time_cost(result.metrics, options.cost);
  }
  if (options.keep_log && result.metrics.accesses() > 0) {
    std::vector<std::uint32_t> sizes;
    sizes.reserve(trace.requests.size());
    for (const auto& r : trace.requests) sizes.push_back(static_cast<std::uint32_t>(r.size()));
    result.log_time_cost = time_cost_from_log(result.log, sizes, options.cost);
  }
  return result;
}

// --- Scenarios ------------------------------------------------------------------

namespace {

constexpr std::uint32_t kWorstCaseDefaultBuffer = 50;

struct ScenarioName {
  Scenario scenario;
  std::string_view name;
};

constexpr ScenarioName kScenarioNames[] = {
    {Scenario::GetOnly, "get-only"},     {Scenario::LowScan, "low-scan"},
    {Scenario::MediumScan, "medium-scan"}, {Scenario::HighScan, "high-scan"},
    {Scenario::WorstCase, "worst-case"}, {Scenario::Custom, "custom"},
};

struct WorstCaseDims {
  std::uint32_t capacity;
  std::uint32_t universe;
};

WorstCaseDims worst_case_dims(const BenchConfig& cfg) {
  if (cfg.buffer_pages) {
    return {*cfg.buffer_pages, cfg.universe != 0 ? cfg.universe : 2 * *cfg.buffer_pages};
  }
  if (cfg.universe != 0) {
    const auto k = static_cast<std::uint32_t>(std::floor(cfg.buffer_fraction * cfg.universe));
    return {std::max<std::uint32_t>(1, k), cfg.universe};
  }
  return {kWorstCaseDefaultBuffer, 2 * kWorstCaseDefaultBuffer};
}

double effective_p_scan(const BenchConfig& cfg) {
  if (cfg.p_scan) return *cfg.p_scan;
  if (cfg.scenario == Scenario::Custom) return cfg.workload.p_scan;
  return scenario_p_scan(cfg.scenario);
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (const auto& entry : kScenarioNames) {
    if (entry.scenario == s) return entry.name;
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (const auto& entry : kScenarioNames) {
    if (entry.name == name) return entry.scenario;
  }
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

double scenario_p_scan(Scenario s) {
  switch (s) {
    case Scenario::GetOnly:
    case Scenario::WorstCase:
      return 0.0;
    case Scenario::LowScan:
      return 0.6e-3;
    case Scenario::MediumScan:
      return 1.3e-3;
    case Scenario::HighScan:
      return 1.8e-3;
    case Scenario::Custom:
      break;
  }
  throw std::invalid_argument("custom scenario has no p_scan preset");
}

void apply_desk_scale(WorkloadConfig& workload) {
  workload.num_queries = 50'000;
  workload.num_tables = 10;
  workload.p_max = 100;
}

void BenchConfig::validate() const {
  for (const auto& p : policies) {
    if (!is_known_policy(p)) throw std::invalid_argument("unknown policy '" + p + "'");
  }
  if (!(buffer_fraction > 0.0 && buffer_fraction <= 1.0)) {
    throw std::invalid_argument("buffer fraction must lie in (0, 1]");
  }
  if (buffer_pages && *buffer_pages == 0) throw std::invalid_argument("buffer pages must be > 0");
  if (repetitions == 0 && seeds.empty()) throw std::invalid_argument("repetitions must be > 0");
  if (sample_every == 0) throw std::invalid_argument("sample interval must be > 0");
  if (mu < 0.0) throw std::invalid_argument("mu must be positive");
  if (seq_cost && *seq_cost < 0.0) throw std::invalid_argument("seq cost must be >= 0");
  if (scenario == Scenario::WorstCase && repeats == 0) {
    throw std::invalid_argument("worst-case repeats must be > 0");
  }
  cost.validate();
  if (!trace_file && scenario != Scenario::WorstCase) {
    WorkloadConfig w = workload;
    w.p_scan = effective_p_scan(*this);
    w.validate();
  }
}

std::vector<std::uint64_t> BenchConfig::seed_list() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (std::uint32_t i = 0; i < repetitions; ++i) out.push_back(derive_seed(base_seed, i));
  return out;
}

Trace bench_trace(const BenchConfig& cfg, std::uint64_t seed) {
  if (cfg.trace_file) {
    Trace trace = read_trace(*cfg.trace_file);
    trace.validate();
    return trace;
  }
  if (cfg.scenario == Scenario::WorstCase) {
    return worst_case_trace(worst_case_dims(cfg).universe, cfg.repeats);
  }
  WorkloadConfig w = cfg.workload;
  w.p_scan = effective_p_scan(cfg);
  w.seed = seed;
  return generate_trace(w);
}

std::uint32_t bench_capacity(const BenchConfig& cfg, const Trace& trace) {
  if (cfg.scenario == Scenario::WorstCase && !cfg.trace_file) return worst_case_dims(cfg).capacity;
  if (cfg.buffer_pages) return *cfg.buffer_pages;
  const auto k = static_cast<std::uint64_t>(
      std::floor(cfg.buffer_fraction * static_cast<double>(trace.catalog.total_pages())));
  return static_cast<std::uint32_t>(std::max<std::uint64_t>(1, k));
}

// --- Benchmark ----------------------------------------------------------------

namespace {

template <typename Task>
void run_parallel(std::size_t count, unsigned jobs, Task&& task) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

RunReport run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  const auto seeds = cfg.seed_list();
  const bool wants_belady =
      std::find(cfg.policies.begin(), cfg.policies.end(), "belady") != cfg.policies.end();

  struct SeedInput {
    Trace trace;
    std::uint32_t capacity = 0;
    std::shared_ptr<const std::vector<std::uint64_t>> next_use;
  };
  std::vector<SeedInput> inputs(seeds.size());
  run_parallel(seeds.size(), cfg.jobs, [&](std::size_t i) {
    inputs[i].trace = bench_trace(cfg, seeds[i]);
    inputs[i].capacity = bench_capacity(cfg, inputs[i].trace);
    if (wants_belady) inputs[i].next_use = next_use_for(inputs[i].trace);
  });

  RunReport report;
  report.scenario = cfg.scenario;
  report.p_scan = (cfg.trace_file || cfg.scenario == Scenario::WorstCase) ? 0.0
                                                                          : effective_p_scan(cfg);
  report.rows.resize(seeds.size() * cfg.policies.size());

  const std::size_t per_seed = cfg.policies.size();
  run_parallel(report.rows.size(), cfg.jobs, [&](std::size_t task) {
    const std::size_t s = task / per_seed;
    const std::string& policy = cfg.policies[task % per_seed];
    const SeedInput& in = inputs[s];

    ReplayOptions options;
    options.capacity = in.capacity;
    options.cost = cfg.cost;
    options.mu = cfg.mu;
    options.rng_seed = mix_seed(seeds[s], 1);
    options.seq.policy_cost = cfg.seq_cost.value_or(0.01 * cfg.cost.c_get);
    options.sample_every = cfg.sample_every;
    options.keep_log = true;
    options.timing = cfg.timing;
    ReplayResult result = replay(in.trace, policy, options, in.next_use);

    RunRow& row = report.rows[task];
    row.policy = policy;
    row.seed = seeds[s];
    row.capacity = in.capacity;
    row.accesses = result.metrics.accesses();
    if (row.accesses == 0) {
      row.miss_rate = 0.0;
    } else {
      row.miss_rate = miss_rate(result.metrics);
    }
    row.avg_time_cost = result.time_cost;
    row.log_time_cost = result.log_time_cost.value_or(result.time_cost);
    if (row.log_time_cost != row.avg_time_cost) {
      throw std::logic_error("time cost of " + policy + " (seed " + std::to_string(seeds[s]) +
                             ") disagrees with its outcome log");
    }
    row.decisions = result.metrics.decisions;
    row.curve = result.metrics.cumulative_curve();
  });
  return report;
}

std::vector<PolicyAggregate> RunReport::aggregates() const {
  std::vector<PolicyAggregate> out;
  for (const auto& row : rows) {
    if (std::none_of(out.begin(), out.end(), [&](const auto& a) { return a.policy == row.policy; })) {
      out.push_back({row.policy});
    }
  }
  for (auto& agg : out) {
    std::vector<double> miss;
    std::vector<double> cost;
    DecisionStats decisions;
    for (const auto& row : rows) {
      if (row.policy != agg.policy) continue;
      miss.push_back(row.miss_rate);
      cost.push_back(row.avg_time_cost);
      decisions.evictions += row.decisions.evictions;
      decisions.total_time += row.decisions.total_time;
    }
    agg.runs = miss.size();
    agg.mean_miss_rate = mean_of(miss);
    agg.var_miss_rate = sample_variance(miss);
    agg.mean_time_cost = mean_of(cost);
    agg.var_time_cost = sample_variance(cost);
    agg.mean_decision_ns = mean_decision_ns(decisions);
  }
  return out;
}

PolicyAggregate RunReport::aggregate(std::string_view policy) const {
  for (auto& a : aggregates()) {
    if (a.policy == policy) return a;
  }
  throw std::invalid_argument("no rows for policy '" + std::string(policy) + "'");
}

std::vector<AblationPoint> ablation_sweep(const BenchConfig& cfg,
                                          const std::vector<double>& p_scan_values) {
  if (p_scan_values.empty()) throw std::invalid_argument("ablation needs at least one p_scan value");
  std::vector<AblationPoint> out;
  out.reserve(p_scan_values.size());
  for (double p : p_scan_values) {
    BenchConfig point = cfg;
    point.scenario = Scenario::Custom;
    point.p_scan = p;
    point.trace_file.reset();
    out.push_back({p, run_benchmark(point)});
  }
  return out;
}

// --- CSV ----------------------------------------------------------------------

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void close_csv(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

std::string decision_column(const DecisionStats& stats, const CsvOptions& options) {
  return options.include_timing ? fixed(mean_decision_ns(stats), 1) : "NA";
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

void emit_csv(const RunReport& report, const std::filesystem::path& dir,
              const CsvOptions& options) {
  prepare_dir(dir);

  const auto summary_path = dir / "summary.csv";
  auto summary = open_csv(summary_path);
  summary << "policy,seed,miss_rate,avg_time_cost,mean_decision_ns\n";
  for (const auto& row : report.rows) {
    summary << row.policy << ',' << row.seed << ',' << fixed(row.miss_rate, 8) << ','
            << fixed(row.avg_time_cost, 8) << ',' << decision_column(row.decisions, options)
            << '\n';
  }
  close_csv(summary, summary_path);

  const auto curves_path = dir / "curves.csv";
  auto curves = open_csv(curves_path);
  curves << "policy,seed,accesses,cum_miss_rate\n";
  for (const auto& row : report.rows) {
    for (const auto& point : row.curve) {
      curves << row.policy << ',' << row.seed << ',' << point.accesses << ','
             << fixed(point.miss_rate, 8) << '\n';
    }
  }
  close_csv(curves, curves_path);

  const auto aggregate_path = dir / "aggregate.csv";
  auto aggregate = open_csv(aggregate_path);
  aggregate << "policy,runs,mean_miss_rate,var_miss_rate,mean_avg_time_cost,var_avg_time_cost\n";
  for (const auto& a : report.aggregates()) {
    aggregate << a.policy << ',' << a.runs << ',' << fixed(a.mean_miss_rate, 8) << ','
              << fixed(a.var_miss_rate, 10) << ',' << fixed(a.mean_time_cost, 8) << ','
              << fixed(a.var_time_cost, 10) << '\n';
  }
  close_csv(aggregate, aggregate_path);
}

void emit_ablation_csv(const std::vector<AblationPoint>& points, const std::filesystem::path& dir,
                       const CsvOptions& options) {
  prepare_dir(dir);
  const auto path = dir / "ablation.csv";
  auto out = open_csv(path);
  out << "p_scan,policy,seed,miss_rate,avg_time_cost,mean_decision_ns\n";
  for (const auto& point : points) {
    for (const auto& row : point.report.rows) {
      out << fixed(point.p_scan, 6) << ',' << row.policy << ',' << row.seed << ','
          << fixed(row.miss_rate, 8) << ',' << fixed(row.avg_time_cost, 8) << ','
          << decision_column(row.decisions, options) << '\n';
    }
  }
  close_csv(out, path);
}

}  // namespace eeva
