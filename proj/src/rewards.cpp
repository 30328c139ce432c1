#include "eeva/rewards.hpp"

#include <algorithm>
#include <cmath>

namespace eeva {

void CostModel::validate() const {
  if (!(c_idx > 0) || !(c_load > 0) || !(c_get > 0) || !(c_scan > 0)) {
    throw ContractViolation("cost model: all costs must be positive");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ContractViolation("cost model: gamma must lie in [0, 1]");
  }
}

namespace {

double index_cost(TableId table, const TableCatalog& catalog, const CostModel& cost) {
  const double log_pages = std::log2(static_cast<double>(catalog.page_count(table)));
  return cost.c_idx * std::max(1.0, log_pages);
}

}  // namespace

double alpha_for(TableId table, const TableCatalog& catalog, const CostModel& cost) {
  return index_cost(table, catalog, cost);
}

double beta_for(TableId table, std::uint32_t scan_len, const TableCatalog& catalog,
                const CostModel& cost) {
  if (scan_len == 0) throw ContractViolation("beta_for: scan_len must be >= 1");
  return index_cost(table, catalog, cost) / scan_len + 1.0 + cost.gamma * cost.c_load;
}

RewardLedger::RewardLedger(const TableCatalog& catalog)
    : catalog_(catalog),
      page_rewards_(catalog.total_pages(), 0.0),
      table_rewards_(catalog.table_count(), 0.0) {}

void RewardLedger::update_on_access(PageId page, QueryType type, bool was_resident,
                                    std::uint64_t resident_count_of_table, double delta) {
  if (!(delta > 0)) throw ContractViolation("reward delta must be positive");
  double& table_reward = table_rewards_[page.table.value];
  double& reward = page_rewards_[catalog_.flatten(page)];
  if (!was_resident) reward = table_reward;
  reward += delta;
  if (type == QueryType::Get) {
    table_reward += delta / static_cast<double>(std::max<std::uint64_t>(1, resident_count_of_table));
  } else {
    table_reward += delta;
  }
  ++access_count_;
}

void RewardLedger::reset_on_eviction(PageId victim) {
  page_rewards_[catalog_.flatten(victim)] = 0.0;
}

double RewardLedger::average_reward(PageId page) const {
  if (access_count_ == 0) return 0.0;
  return page_reward(page) / static_cast<double>(access_count_);
}

}  // namespace eeva
