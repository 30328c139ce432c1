#include "eeva/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eeva {

void WorkloadConfig::validate() const {
  if (num_tables < 3) throw ContractViolation("workload: at least 3 tables are required");
  if (p_max == 0) throw ContractViolation("workload: p_max must be positive");
  if (!(p_scan >= 0.0 && p_scan <= 1.0)) throw ContractViolation("workload: p_scan outside [0, 1]");
  if (!(zipf_q >= 0.0)) throw ContractViolation("workload: zipf_q must be non-negative");
  if (num_queries == 0) throw ContractViolation("workload: num_queries must be positive");
  if (!(scan_table_boost > 0.0)) throw ContractViolation("workload: scan_table_boost must be positive");
}

std::uint64_t Trace::total_accesses() const {
  std::uint64_t n = 0;
  for (const auto& r : requests) n += r.size();
  return n;
}

std::vector<FlatIndex> Trace::flat_accesses() const {
  std::vector<FlatIndex> out;
  out.reserve(total_accesses());
  for (const auto& r : requests) {
    for (const auto& p : r.pages()) out.push_back(catalog.flatten(p));
  }
  return out;
}

void Trace::validate() const {
  for (std::size_t i = 0; i < requests.size(); ++i) {
    for (const auto& p : requests[i].pages()) {
      if (!catalog.contains(p)) {
        throw ContractViolation("request " + std::to_string(i) + " touches page " +
                                to_string(p) + " outside the catalog");
      }
    }
  }
}

TableDistributions table_distributions(const WorkloadConfig& cfg) {
  if (cfg.num_tables < 3) throw ContractViolation("table_distributions: need >= 3 tables");
  const std::uint32_t boosted = cfg.num_tables / 3;
  const double base = 1.0 / (4.0 * cfg.num_tables);
  TableDistributions d;
  d.scan.resize(cfg.num_tables);
  d.get.resize(cfg.num_tables);
  for (std::uint32_t t = 0; t < cfg.num_tables; ++t) {
    const bool first_third = t < boosted;
    d.scan[t] = first_third ? cfg.scan_table_boost * base : base;
    d.get[t] = first_third ? base : cfg.scan_table_boost * base;
  }
  for (auto* v : {&d.scan, &d.get}) {
    const double total = std::accumulate(v->begin(), v->end(), 0.0);
    for (double& x : *v) x /= total;
  }
  return d;
}

ZipfSampler::ZipfSampler(std::uint32_t num_pages, double q) {
  if (num_pages == 0) throw ContractViolation("zipf: num_pages must be >= 1");
  if (!(q >= 0.0)) throw ContractViolation("zipf: q must be >= 0");
  cumulative_.resize(num_pages);
  double running = 0.0;
  for (std::uint32_t j = 0; j < num_pages; ++j) {
    running += 1.0 / std::pow(static_cast<double>(j) + 1.0, q);
    cumulative_[j] = running;
  }
}

std::uint32_t ZipfSampler::operator()(Rng& rng) const {
  return static_cast<std::uint32_t>(rng.pick_cumulative(cumulative_));
}

double ZipfSampler::probability(std::uint32_t index) const {
  const double prev = index == 0 ? 0.0 : cumulative_[index - 1];
  return (cumulative_[index] - prev) / cumulative_.back();
}

std::uint32_t zipf_sample(std::uint32_t num_pages, double q, Rng& rng) {
  return ZipfSampler(num_pages, q)(rng);
}

namespace {

std::vector<double> cumulative_of(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  std::partial_sum(p.begin(), p.end(), c.begin());
  return c;
}

}  // namespace

Trace generate_trace(const WorkloadConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  const std::uint32_t lo = std::max<std::uint32_t>(1, cfg.p_max / 2);
  std::vector<std::uint32_t> sizes(cfg.num_tables);
  for (auto& s : sizes) s = static_cast<std::uint32_t>(rng.uniform_between(lo, cfg.p_max));

  Trace trace;
  trace.catalog = TableCatalog(sizes);
  trace.provenance = "synthetic seed=" + std::to_string(cfg.seed);

  const auto dists = table_distributions(cfg);
  const auto scan_cdf = cumulative_of(dists.scan);
  const auto get_cdf = cumulative_of(dists.get);
  std::vector<ZipfSampler> samplers;
  samplers.reserve(sizes.size());
  for (auto s : sizes) samplers.emplace_back(s, cfg.zipf_q);

  trace.requests.reserve(cfg.num_queries);
  for (std::uint64_t i = 0; i < cfg.num_queries; ++i) {
    if (rng.bernoulli(cfg.p_scan)) {
      const auto table = static_cast<std::uint32_t>(rng.pick_cumulative(scan_cdf));
      trace.requests.push_back(Request::scan(TableId{table}, 0, sizes[table]));
    } else {
      const auto table = static_cast<std::uint32_t>(rng.pick_cumulative(get_cdf));
      trace.requests.push_back(Request::get(PageId{TableId{table}, samplers[table](rng)}));
    }
  }
  return trace;
}

Trace worst_case_trace(std::uint32_t universe_pages, std::uint32_t repeats) {
  if (universe_pages < 2) throw ContractViolation("worst-case trace needs >= 2 pages");
  if (repeats == 0) throw ContractViolation("worst-case trace needs >= 1 repeat");
  Trace trace;
  trace.catalog = TableCatalog(std::vector<std::uint32_t>(universe_pages, 1));
  trace.provenance = "worst-case universe=" + std::to_string(universe_pages) +
                     " repeats=" + std::to_string(repeats);
  trace.requests.reserve(static_cast<std::size_t>(universe_pages) * repeats);
  for (std::uint32_t r = 0; r < repeats; ++r) {
    for (std::uint32_t p = 0; p < universe_pages; ++p) {
      trace.requests.push_back(Request::get(PageId{TableId{p}, 0}));
    }
  }
  return trace;
}

}  // namespace eeva
