#pragma once

// Benchmark orchestration: replay traces under several policies and seeds,
// aggregate the results and write them out as CSV.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eeva/buffer.hpp"
#include "eeva/metrics.hpp"
#include "eeva/policies.hpp"
#include "eeva/workload.hpp"

namespace eeva {

// --- Single replay ----------------------------------------------------------

struct ReplayOptions {
  std::uint32_t capacity = 1;
  CostModel cost;
  // 0 selects the default learning rate for the trace length.
  double mu = 0.0;
  std::uint64_t rng_seed = 0;
  SeqConfig seq;
  std::uint64_t sample_every = 1000;
  bool keep_log = false;
  bool timing = true;
};

struct ReplayResult {
  std::string policy;
  RunMetrics metrics;
  double time_cost = 0.0;
  // Second-pass recomputation over the outcome log (keep_log only).
  std::optional<double> log_time_cost;
  std::vector<AccessOutcome> log;
};

// Replays the whole trace from an empty buffer with a fresh policy.
// next_use may be passed in when already computed for this trace.
ReplayResult replay(const Trace& trace, std::string_view policy, const ReplayOptions& options,
                    std::shared_ptr<const std::vector<std::uint64_t>> next_use = nullptr);

std::shared_ptr<const std::vector<std::uint64_t>> next_use_for(const Trace& trace);

// --- Benchmark matrix -------------------------------------------------------

enum class Scenario { GetOnly, LowScan, MediumScan, HighScan, WorstCase, Custom };

std::string_view to_string(Scenario s);
// Throws std::invalid_argument for an unknown name.
Scenario parse_scenario(std::string_view name);
// Scan probability preset of a synthetic scenario.
double scenario_p_scan(Scenario s);

// N = 5e4 queries over 10 tables of at most 100 pages.
void apply_desk_scale(WorkloadConfig& workload);

struct BenchConfig {
  Scenario scenario = Scenario::LowScan;
  std::vector<std::string> policies;
  double buffer_fraction = 0.1;
  // Explicit capacity in pages; overrides buffer_fraction.
  std::optional<std::uint32_t> buffer_pages;
  std::uint32_t repetitions = 5;
  std::uint64_t base_seed = 1;
  // Explicit seeds; when non-empty they replace base_seed + i.
  std::vector<std::uint64_t> seeds;
  WorkloadConfig workload;
  // Overrides the scenario's p_scan (required for Custom unless a trace
  // file is given).
  std::optional<double> p_scan;
  CostModel cost;
  double mu = 0.0;
  // Defaults to 0.01 * c_get.
  std::optional<double> seq_cost;
  // Worst-case scenario: page universe (0 means twice the buffer) and cycles.
  std::uint32_t universe = 0;
  std::uint32_t repeats = 10;
  std::optional<std::filesystem::path> trace_file;
  std::uint64_t sample_every = 1000;
  // 0 uses the hardware concurrency.
  unsigned jobs = 0;
  bool timing = true;

  void validate() const;
  std::vector<std::uint64_t> seed_list() const;
};

struct RunRow {
  std::string policy;
  std::uint64_t seed = 0;
  std::uint32_t capacity = 0;
  std::uint64_t accesses = 0;
  double miss_rate = 0.0;
  double avg_time_cost = 0.0;
  double log_time_cost = 0.0;
  DecisionStats decisions;
  std::vector<CurvePoint> curve;
};

struct PolicyAggregate {
  std::string policy;
  std::size_t runs = 0;
  double mean_miss_rate = 0.0;
  double var_miss_rate = 0.0;
  double mean_time_cost = 0.0;
  double var_time_cost = 0.0;
  double mean_decision_ns = 0.0;
};

struct RunReport {
  Scenario scenario = Scenario::Custom;
  double p_scan = 0.0;
  // Rows are ordered by seed, then by the configured policy order.
  std::vector<RunRow> rows;

  // Mean and sample variance over seeds, in configured policy order.
  std::vector<PolicyAggregate> aggregates() const;
  PolicyAggregate aggregate(std::string_view policy) const;
};

// Builds the trace the benchmark replays for one seed.
Trace bench_trace(const BenchConfig& cfg, std::uint64_t seed);
std::uint32_t bench_capacity(const BenchConfig& cfg, const Trace& trace);

RunReport run_benchmark(const BenchConfig& cfg);

struct AblationPoint {
  double p_scan = 0.0;
  RunReport report;
};

std::vector<AblationPoint> ablation_sweep(const BenchConfig& cfg,
                                          const std::vector<double>& p_scan_values);

// --- CSV ----------------------------------------------------------------------

struct CsvOptions {
  // Without timing the mean_decision_ns column holds "NA", which keeps the
  // files byte-identical across runs.
  bool include_timing = false;
};

// Writes summary.csv, curves.csv and aggregate.csv into dir.
void emit_csv(const RunReport& report, const std::filesystem::path& dir,
              const CsvOptions& options = {});
// Writes ablation.csv (one row per p_scan, policy and seed) into dir.
void emit_ablation_csv(const std::vector<AblationPoint>& points, const std::filesystem::path& dir,
                       const CsvOptions& options = {});

}  // namespace eeva
