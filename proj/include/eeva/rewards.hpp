#pragma once

// Per-page and per-table cumulative rewards. Pages are the primary experts;
// table rewards warm-start a page when it is (re)admitted to the buffer.

#include <cstdint>
#include <vector>

#include "eeva/core.hpp"

namespace eeva {

struct CostModel {
  // Base cost of one index-access page load. A random index read is priced
  // at ten sequential page loads.
  double c_idx = 10.0;
  double c_load = 1.0;  // base cost of one sequentially loaded page
  double gamma = 0.5;   // false hit rate of scan-loaded pages, in [0, 1]
  double c_get = 1.0;   // miss penalty of a get page in the time cost metric
  double c_scan = 0.8;  // miss penalty of a scan page in the time cost metric

  // Throws ContractViolation on non-positive costs or gamma outside [0, 1].
  void validate() const;
};

// Reward increment for a page touched by an index lookup:
// c_idx * log2(P_T), with the log factor clamped to >= 1.
double alpha_for(TableId table, const TableCatalog& catalog, const CostModel& cost);

// Reward increment for a page touched by a scan of scan_len pages:
// c_idx * log2(P_T) / scan_len + 1 + gamma * c_load.
double beta_for(TableId table, std::uint32_t scan_len, const TableCatalog& catalog,
                const CostModel& cost);

// Per-access increment for the given query type.
inline double delta_for(QueryType type, TableId table, std::uint32_t scan_len,
                        const TableCatalog& catalog, const CostModel& cost) {
  return type == QueryType::Get ? alpha_for(table, catalog, cost)
                                : beta_for(table, scan_len, catalog, cost);
}

class RewardLedger {
 public:
  explicit RewardLedger(const TableCatalog& catalog);

  // Applies one page access. resident_count_of_table is the number of pages
  // of the page's table in the buffer, counted after the page was admitted.
  void update_on_access(PageId page, QueryType type, bool was_resident,
                        std::uint64_t resident_count_of_table, double delta);

  void reset_on_eviction(PageId victim);

  double page_reward(PageId page) const { return page_rewards_[catalog_.flatten(page)]; }
  double page_reward(FlatIndex index) const { return page_rewards_[index]; }
  double table_reward(TableId table) const { return table_rewards_[table.value]; }
  std::uint64_t access_count() const { return access_count_; }

  // r / t, or 0 before the first access.
  double average_reward(PageId page) const;

  const TableCatalog& catalog() const { return catalog_; }

 private:
  TableCatalog catalog_;
  std::vector<double> page_rewards_;
  std::vector<double> table_rewards_;
  std::uint64_t access_count_ = 0;
};

}  // namespace eeva
