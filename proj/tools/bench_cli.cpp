// bench: replay synthetic or recorded traces under the eviction policies and
// write per-run CSV results.
//
//   bench run --scenario low-scan --policies eeva-greedy,lru --desk-scale --out results/
//   bench ablation --p-scan-values 0,0.0009,0.0018 --desk-scale --out results/
//   bench trace gen trace.txt --desk-scale --seed 7
//   bench trace validate trace.txt

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eeva/bench.hpp"

namespace {

using namespace eeva;

const std::vector<std::string> kDefaultPolicies = {"eeva", "eeva-greedy", "eeva-t", "eeva-seq",
                                                   "lru",  "lfu",         "fifo",   "belady"};

struct WorkloadArgs {
  std::string scenario = "low-scan";
  bool desk_scale = false;
  std::optional<std::uint64_t> n;
  std::optional<std::uint32_t> tables;
  std::optional<std::uint32_t> p_max;
  std::optional<double> p_scan;
  double zipf_q = 0.1;
  std::uint64_t seed = 1;

  void add(CLI::App* app) {
    app->add_option("--scenario", scenario,
                    "get-only | low-scan | medium-scan | high-scan | worst-case | custom")
        ->capture_default_str();
    app->add_flag("--desk-scale", desk_scale, "N=5e4 queries, 10 tables, P_max=100");
    app->add_option("--n", n, "number of queries");
    app->add_option("--tables", tables, "number of tables");
    app->add_option("--p-max", p_max, "maximum pages per table");
    app->add_option("--p-scan", p_scan, "scan probability (overrides the scenario preset)");
    app->add_option("--zipf-q", zipf_q, "Zipf exponent of get lookups")->capture_default_str();
    app->add_option("--seed", seed, "base seed")->capture_default_str();
  }

  WorkloadConfig workload() const {
    WorkloadConfig w;
    if (desk_scale) apply_desk_scale(w);
    if (n) w.num_queries = *n;
    if (tables) w.num_tables = *tables;
    if (p_max) w.p_max = *p_max;
    w.zipf_q = zipf_q;
    w.seed = seed;
    return w;
  }
};

struct BenchArgs {
  WorkloadArgs workload;
  std::vector<std::string> policies = kDefaultPolicies;
  double buffer_fraction = 0.1;
  std::optional<std::uint32_t> buffer_pages;
  std::uint32_t reps = 5;
  std::vector<std::uint64_t> seeds;
  std::string out = "results";
  std::optional<double> mu;
  std::optional<double> seq_cost;
  std::optional<std::string> trace;
  std::uint32_t universe = 0;
  std::uint32_t repeats = 10;
  std::uint64_t sample_every = 1000;
  unsigned jobs = 0;
  bool timing = false;
  CostModel cost;

  void add(CLI::App* app) {
    workload.add(app);
    app->add_option("--policies", policies, "comma-separated policy names")
        ->delimiter(',')
        ->check(CLI::IsMember(kDefaultPolicies))
        ->capture_default_str();
    app->add_option("--buffer-fraction", buffer_fraction, "buffer size as a fraction of all pages")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--buffer-pages", buffer_pages, "explicit buffer size in pages");
    app->add_option("--reps", reps, "repetitions (seeds base, base+1, ...)")->capture_default_str();
    app->add_option("--seeds", seeds, "explicit comma-separated seeds")->delimiter(',');
    app->add_option("--out", out, "output directory")->capture_default_str();
    app->add_option("--mu", mu, "EEvA learning rate (default sqrt(8 ln T / T))");
    app->add_option("--seq-cost", seq_cost, "EEvA-Seq skip threshold c (default 0.01 * c_get)");
    app->add_option("--trace", trace, "replay a trace file instead of generating one")
        ->check(CLI::ExistingFile);
    app->add_option("--universe", universe, "worst-case page universe (default 2 x buffer)");
    app->add_option("--repeats", repeats, "worst-case cycles")->capture_default_str();
    app->add_option("--sample-every", sample_every, "miss-rate curve sampling interval")
        ->capture_default_str();
    app->add_option("--jobs", jobs, "parallel runs (0 = all cores)")->capture_default_str();
    app->add_flag("--timing", timing, "report mean decision time instead of NA");
    app->add_option("--c-get", cost.c_get, "missed get page penalty")->capture_default_str();
    app->add_option("--c-scan", cost.c_scan, "missed scan page penalty")->capture_default_str();
    app->add_option("--c-idx", cost.c_idx, "index access base cost")->capture_default_str();
    app->add_option("--c-load", cost.c_load, "sequential load cost")->capture_default_str();
    app->add_option("--gamma", cost.gamma, "false hit rate of scans")->capture_default_str();
  }

  BenchConfig config() const {
    BenchConfig cfg;
    cfg.scenario = parse_scenario(workload.scenario);
    cfg.policies = policies;
    cfg.buffer_fraction = buffer_fraction;
    cfg.buffer_pages = buffer_pages;
    cfg.repetitions = reps;
    cfg.base_seed = workload.seed;
    cfg.seeds = seeds;
    cfg.workload = workload.workload();
    cfg.p_scan = workload.p_scan;
    cfg.cost = cost;
    cfg.mu = mu.value_or(0.0);
    cfg.seq_cost = seq_cost;
    if (trace) cfg.trace_file = *trace;
    cfg.universe = universe;
    cfg.repeats = repeats;
    cfg.sample_every = sample_every;
    cfg.jobs = jobs;
    cfg.timing = timing;
    return cfg;
  }
};

// Config files hold plain key=value lines for the chosen subcommand, e.g.
// "p-scan=0.001". CLI11 reads config on the root app only, so keys outside
// a [section] are routed to the innermost selected subcommand.
class SubcommandConfig : public CLI::ConfigINI {
 public:
  explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    std::vector<std::string> chain;
    for (const CLI::App* a = app_; !a->get_subcommands().empty();) {
      a = a->get_subcommands().front();
      chain.push_back(a->get_name());
    }
    for (auto& item : items) {
      if (item.parents.empty()) item.parents = chain;
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

void print_aggregates(const RunReport& report, bool timing) {
  std::printf("%-12s %4s %12s %12s %12s %12s", "policy", "runs", "miss_rate", "var", "time_cost",
              "var");
  if (timing) std::printf(" %12s", "decision_ns");
  std::printf("\n");
  for (const auto& a : report.aggregates()) {
    std::printf("%-12s %4zu %12.6f %12.3e %12.6f %12.3e", a.policy.c_str(), a.runs,
                a.mean_miss_rate, a.var_miss_rate, a.mean_time_cost, a.var_time_cost);
    if (timing) std::printf(" %12.1f", a.mean_decision_ns);
    std::printf("\n");
  }
}

int run_command(const BenchArgs& args) {
  const auto cfg = args.config();
  const auto report = run_benchmark(cfg);
  emit_csv(report, args.out, {args.timing});
  std::printf("scenario %s, p_scan %.6f, %zu rows -> %s\n",
              std::string(to_string(report.scenario)).c_str(), report.p_scan, report.rows.size(),
              args.out.c_str());
  print_aggregates(report, args.timing);
  return 0;
}

int ablation_command(const BenchArgs& args, const std::vector<double>& values) {
  const auto cfg = args.config();
  const auto points = ablation_sweep(cfg, values);
  emit_ablation_csv(points, args.out, {args.timing});
  for (const auto& point : points) {
    std::printf("\np_scan %.6f\n", point.p_scan);
    print_aggregates(point.report, args.timing);
  }
  return 0;
}

int trace_gen_command(const WorkloadArgs& args, const std::string& path) {
  auto w = args.workload();
  const auto scenario = parse_scenario(args.scenario);
  if (args.p_scan) {
    w.p_scan = *args.p_scan;
  } else if (scenario != Scenario::Custom && scenario != Scenario::WorstCase) {
    w.p_scan = scenario_p_scan(scenario);
  }
  const auto trace = generate_trace(w);
  write_trace(trace, std::filesystem::path(path));
  std::printf("wrote %zu requests (%llu page accesses) over %zu tables to %s\n",
              trace.requests.size(), static_cast<unsigned long long>(trace.total_accesses()),
              trace.catalog.table_count(), path.c_str());
  return 0;
}

int trace_validate_command(const std::string& path) {
  const auto trace = read_trace(std::filesystem::path(path));
  trace.validate();
  std::size_t scans = 0;
  for (const auto& r : trace.requests) scans += r.query_type() == QueryType::Scan;
  std::printf("%s: ok, %zu tables, %llu pages, %zu requests (%zu scans), %llu page accesses\n",
              path.c_str(), trace.catalog.table_count(),
              static_cast<unsigned long long>(trace.catalog.total_pages()), trace.requests.size(),
              scans, static_cast<unsigned long long>(trace.total_accesses()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Buffer-pool eviction benchmark"};
  app.require_subcommand(1);
  // Lets --config follow the subcommand name.
  app.fallthrough();
  app.set_config("--config", "", "key=value file of subcommand flags; command-line flags win");
  app.config_formatter(std::make_shared<SubcommandConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  BenchArgs run_args;
  auto* run = app.add_subcommand("run", "replay one scenario under several policies and seeds");
  run_args.add(run);

  BenchArgs ablation_args;
  std::vector<double> p_scan_values;
  auto* ablation = app.add_subcommand("ablation", "sweep p_scan with shared seeds");
  ablation_args.add(ablation);
  ablation->add_option("--p-scan-values", p_scan_values, "comma-separated scan probabilities")
      ->delimiter(',')
      ->required();

  auto* trace = app.add_subcommand("trace", "generate or validate trace files");
  trace->require_subcommand(1);
  WorkloadArgs gen_args;
  std::string gen_path;
  auto* gen = trace->add_subcommand("gen", "generate a synthetic trace file");
  gen_args.add(gen);
  gen->add_option("file", gen_path, "output path")->required();
  std::string validate_path;
  auto* validate = trace->add_subcommand("validate", "check a trace file");
  validate->add_option("file", validate_path, "trace path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(run_args);
    if (*ablation) return ablation_command(ablation_args, p_scan_values);
    if (*gen) return trace_gen_command(gen_args, gen_path);
    if (*validate) return trace_validate_command(validate_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bench: %s\n", e.what());
    return 1;
  }
  return 1;
}
