#pragma once

// Miss accounting for one replay: hit/miss counters split by query type,
// the averaged time cost and the cumulative miss-rate curve.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eeva/buffer.hpp"
#include "eeva/rewards.hpp"

namespace eeva {

struct CurvePoint {
  std::uint64_t accesses = 0;
  double miss_rate = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

class RunMetrics {
 public:
  explicit RunMetrics(std::uint64_t sample_every = 1000);

  void record(const AccessOutcome& outcome);
  void record(std::span<const AccessOutcome> outcomes);
  // Appends the final point if the last access is off the sampling grid.
  void finish();

  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  std::uint64_t accesses() const { return hits_ + misses_; }
  std::uint64_t missed_get_pages() const { return missed_get_; }
  std::uint64_t missed_scan_pages() const { return missed_scan_; }
  std::uint64_t sample_every() const { return sample_every_; }
  const std::vector<CurvePoint>& cumulative_curve() const { return curve_; }

  DecisionStats decisions;

 private:
  std::uint64_t sample_every_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
  std::uint64_t missed_get_ = 0;
  std::uint64_t missed_scan_ = 0;
  std::vector<CurvePoint> curve_;
};

// (c_scan * missed scan pages + c_get * missed get pages) / pages requested.
double averaged_time_cost(std::uint64_t missed_get_pages, std::uint64_t missed_scan_pages,
                          const CostModel& cost, std::uint64_t total_pages_requested);
double averaged_time_cost(const RunMetrics& metrics, const CostModel& cost,
                          std::uint64_t total_pages_requested);
inline double averaged_time_cost(const RunMetrics& metrics, const CostModel& cost) {
  return averaged_time_cost(metrics, cost, metrics.accesses());
}

double miss_rate(const RunMetrics& metrics);

// Mean wall-clock time per eviction, or 0 when nothing was evicted.
double mean_decision_ns(const DecisionStats& stats);

// Pointwise 100 * (policy - baseline) / baseline; nullopt where the
// baseline rate is zero. Throws ContractViolation if the grids differ.
struct RelativePoint {
  std::uint64_t accesses = 0;
  std::optional<double> percent_worse;
};
std::vector<RelativePoint> relative_cumulative_curve(const RunMetrics& metrics,
                                                     const RunMetrics& baseline);

// Independent recomputation of the averaged time cost from an outcome log.
// request_sizes partitions the log into queries, in order.
double time_cost_from_log(std::span<const AccessOutcome> log,
                          std::span<const std::uint32_t> request_sizes, const CostModel& cost);

}  // namespace eeva
