#include "eeva/metrics.hpp"

namespace eeva {

RunMetrics::RunMetrics(std::uint64_t sample_every) : sample_every_(sample_every) {
  if (sample_every_ == 0) throw ContractViolation("sample_every must be positive");
}

void RunMetrics::record(const AccessOutcome& outcome) {
  if (outcome.hit) {
    ++hits_;
  } else {
    ++misses_;
    if (outcome.query_type == QueryType::Get) {
      ++missed_get_;
    } else {
      ++missed_scan_;
    }
  }
  const auto n = accesses();
  if (n % sample_every_ == 0) {
    curve_.push_back({n, static_cast<double>(misses_) / static_cast<double>(n)});
  }
}

void RunMetrics::record(std::span<const AccessOutcome> outcomes) {
  for (const auto& o : outcomes) record(o);
}

void RunMetrics::finish() {
  const auto n = accesses();
  if (n == 0 || (!curve_.empty() && curve_.back().accesses == n)) return;
  curve_.push_back({n, static_cast<double>(misses_) / static_cast<double>(n)});
}

double averaged_time_cost(std::uint64_t missed_get_pages, std::uint64_t missed_scan_pages,
                          const CostModel& cost, std::uint64_t total_pages_requested) {
  if (total_pages_requested == 0) {
    throw ContractViolation("averaged_time_cost: no pages requested");
  }
  const double penalty = cost.c_scan * static_cast<double>(missed_scan_pages) +
                         cost.c_get * static_cast<double>(missed_get_pages);
  return penalty / static_cast<double>(total_pages_requested);
}

double averaged_time_cost(const RunMetrics& metrics, const CostModel& cost,
                          std::uint64_t total_pages_requested) {
  return averaged_time_cost(metrics.missed_get_pages(), metrics.missed_scan_pages(), cost,
                            total_pages_requested);
}

double miss_rate(const RunMetrics& metrics) {
  if (metrics.accesses() == 0) throw ContractViolation("miss_rate: no accesses recorded");
  return static_cast<double>(metrics.misses()) / static_cast<double>(metrics.accesses());
}

double mean_decision_ns(const DecisionStats& stats) {
  if (stats.evictions == 0) return 0.0;
  return static_cast<double>(stats.total_time.count()) / static_cast<double>(stats.evictions);
}

std::vector<RelativePoint> relative_cumulative_curve(const RunMetrics& metrics,
                                                     const RunMetrics& baseline) {
  const auto& a = metrics.cumulative_curve();
  const auto& b = baseline.cumulative_curve();
  if (a.size() != b.size()) throw ContractViolation("curves sampled on different grids");
  std::vector<RelativePoint> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].accesses != b[i].accesses) {
      throw ContractViolation("curves sampled on different grids");
    }
    RelativePoint p{a[i].accesses, std::nullopt};
    if (b[i].miss_rate != 0.0) {
      p.percent_worse = 100.0 * (a[i].miss_rate - b[i].miss_rate) / b[i].miss_rate;
    }
    out.push_back(p);
  }
  return out;
}

double time_cost_from_log(std::span<const AccessOutcome> log,
                          std::span<const std::uint32_t> request_sizes, const CostModel& cost) {
  std::uint64_t requested = 0;
  std::uint64_t missed_scan = 0;
  std::uint64_t missed_get = 0;
  std::size_t pos = 0;
  for (const auto size : request_sizes) {
    if (pos + size > log.size()) throw ContractViolation("outcome log shorter than requests");
    // MP_i split into its scan and get parts.
    std::uint64_t mp_scan = 0;
    std::uint64_t mp_get = 0;
    for (std::size_t j = pos; j < pos + size; ++j) {
      if (log[j].hit) continue;
      (log[j].query_type == QueryType::Scan ? mp_scan : mp_get) += 1;
    }
    missed_scan += mp_scan;
    missed_get += mp_get;
    requested += size;
    pos += size;
  }
  if (pos != log.size()) throw ContractViolation("outcome log longer than requests");
  return averaged_time_cost(missed_get, missed_scan, cost, requested);
}

}  // namespace eeva
