#pragma once

// Buffer manager pipeline: resolve hit or miss, evict on demand, then
// credit the page and its table.

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "eeva/buffer_state.hpp"
#include "eeva/core.hpp"
#include "eeva/policies.hpp"
#include "eeva/rewards.hpp"

namespace eeva {

struct AccessOutcome {
  PageId page;
  QueryType query_type = QueryType::Get;
  bool hit = false;
  std::optional<PageId> victim;

  friend bool operator==(const AccessOutcome&, const AccessOutcome&) = default;
};

// Observables of the eviction decisions themselves.
struct DecisionStats {
  std::uint64_t evictions = 0;
  std::chrono::nanoseconds total_time{0};
  std::uint32_t max_sweep = 0;
  std::uint64_t total_sweep = 0;
};

class BufferManager {
 public:
  // The policy must outlive the manager.
  BufferManager(std::uint32_t capacity, const TableCatalog& catalog, EvictionPolicy& policy,
                const CostModel& cost);

  // scan_len is the page count of the enclosing request (1 for a get).
  AccessOutcome process_page(PageId page, QueryType type, std::uint32_t scan_len);

  // Appends one outcome per page of the request to `out`.
  void process_request(const Request& request, std::vector<AccessOutcome>& out);
  std::vector<AccessOutcome> process_request(const Request& request);

  const BufferState& buffer() const { return buffer_; }
  const RewardLedger& ledger() const { return ledger_; }
  const DecisionStats& decision_stats() const { return stats_; }

  // Disables the wall-clock measurement around victim selection.
  void set_timing(bool enabled) { timing_ = enabled; }

 private:
  BufferState buffer_;
  RewardLedger ledger_;
  EvictionPolicy* policy_;
  CostModel cost_;
  DecisionStats stats_;
  bool timing_ = true;
};

}  // namespace eeva
