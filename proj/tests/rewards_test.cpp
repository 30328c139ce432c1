#include <gtest/gtest.h>

#include <cmath>

#include "eeva/bench.hpp"
#include "eeva/buffer.hpp"
#include "eeva/rewards.hpp"
#include "test_support.hpp"

namespace eeva {
namespace {

const TableId kT0{0};

TEST(Alpha, IndexCostIsLog2OfTableSize) {
  CostModel cost;
  cost.c_idx = 1.0;
  EXPECT_DOUBLE_EQ(alpha_for(kT0, TableCatalog({1024}), cost), std::log2(1024.0));
  EXPECT_DOUBLE_EQ(alpha_for(kT0, TableCatalog({1024}), cost), 10.0);
  cost.c_idx = 2.0;
  EXPECT_DOUBLE_EQ(alpha_for(kT0, TableCatalog({2}), cost), 2.0);
}

TEST(Alpha, SinglePageTableClampsLogToOne) {
  CostModel cost;
  cost.c_idx = 1.0;
  EXPECT_DOUBLE_EQ(alpha_for(kT0, TableCatalog({1}), cost), 1.0);
}

TEST(Beta, AmortizedIndexCostPlusLoad) {
  CostModel cost;
  cost.c_idx = 1.0;
  cost.c_load = 1.0;
  cost.gamma = 0.0;
  EXPECT_DOUBLE_EQ(beta_for(kT0, 10, TableCatalog({1024}), cost), 10.0 / 10 + 1 + 0);
  cost.gamma = 1.0;
  EXPECT_DOUBLE_EQ(beta_for(kT0, 1, TableCatalog({2}), cost), 3.0);
  cost.c_load = 0.5;
  cost.gamma = 0.5;
  EXPECT_NEAR(beta_for(kT0, 1000, TableCatalog({1024}), cost), 10.0 / 1000 + 1 + 0.25, 1e-12);
  EXPECT_NEAR(beta_for(kT0, 1000, TableCatalog({1024}), cost), 1.26, 1e-12);
  EXPECT_THROW(beta_for(kT0, 0, TableCatalog({1024}), cost), ContractViolation);
}

TEST(CostModelTest, Validation) {
  CostModel cost;
  EXPECT_NO_THROW(cost.validate());
  cost.gamma = 1.5;
  EXPECT_THROW(cost.validate(), ContractViolation);
  cost = CostModel{};
  cost.c_get = 0.0;
  EXPECT_THROW(cost.validate(), ContractViolation);
}

TEST(UpdateOnAccess, ResidentGet) {
  TableCatalog catalog({8});
  RewardLedger ledger(catalog);
  const PageId a{kT0, 0};
  // Establish r_A = 2.0, v = 0.5.
  ledger.update_on_access(a, QueryType::Get, false, 4, 2.0);
  ASSERT_DOUBLE_EQ(ledger.page_reward(a), 2.0);
  ASSERT_DOUBLE_EQ(ledger.table_reward(kT0), 0.5);

  ledger.update_on_access(a, QueryType::Get, true, 4, 1.0);
  EXPECT_DOUBLE_EQ(ledger.page_reward(a), 3.0);
  EXPECT_DOUBLE_EQ(ledger.table_reward(kT0), 0.75);
  EXPECT_EQ(ledger.access_count(), 2u);
}

TEST(UpdateOnAccess, AdmittedScanPageStartsFromTableReward) {
  TableCatalog catalog({8});
  RewardLedger ledger(catalog);
  ledger.update_on_access(PageId{kT0, 1}, QueryType::Scan, false, 1, 5.0);
  ASSERT_DOUBLE_EQ(ledger.table_reward(kT0), 5.0);

  const PageId b{kT0, 2};
  ledger.update_on_access(b, QueryType::Scan, false, 2, 2.0);
  EXPECT_DOUBLE_EQ(ledger.page_reward(b), 7.0);
  EXPECT_DOUBLE_EQ(ledger.table_reward(kT0), 7.0);
}

TEST(UpdateOnAccess, ZeroResidentCountIsClamped) {
  TableCatalog catalog({8});
  RewardLedger ledger(catalog);
  const PageId a{kT0, 0};
  ledger.update_on_access(a, QueryType::Get, true, 0, 1.0);
  EXPECT_DOUBLE_EQ(ledger.table_reward(kT0), 1.0);
}

TEST(UpdateOnAccess, RejectsNonPositiveDelta) {
  TableCatalog catalog({8});
  RewardLedger ledger(catalog);
  EXPECT_THROW(ledger.update_on_access(PageId{kT0, 0}, QueryType::Get, true, 1, 0.0),
               ContractViolation);
  EXPECT_THROW(ledger.update_on_access(PageId{kT0, 0}, QueryType::Get, true, 1, -1.0),
               ContractViolation);
}

TEST(ResetOnEviction, ZeroesOnlyThePage) {
  TableCatalog catalog({8});
  RewardLedger ledger(catalog);
  const PageId e{kT0, 3};
  ledger.update_on_access(e, QueryType::Get, false, 1, 7.3);
  const double v = ledger.table_reward(kT0);
  ledger.reset_on_eviction(e);
  EXPECT_EQ(ledger.page_reward(e), 0.0);
  EXPECT_EQ(ledger.table_reward(kT0), v);
  ledger.reset_on_eviction(e);
  EXPECT_EQ(ledger.page_reward(e), 0.0);
}

TEST(ResetOnEviction, ReadmissionStartsFromCurrentTableReward) {
  TableCatalog catalog({8});
  RewardLedger ledger(catalog);
  const PageId e{kT0, 3};
  ledger.update_on_access(e, QueryType::Scan, false, 1, 2.0);  // v = 2
  ledger.reset_on_eviction(e);
  ASSERT_DOUBLE_EQ(ledger.table_reward(kT0), 2.0);
  ledger.update_on_access(e, QueryType::Get, false, 1, 0.5);
  EXPECT_DOUBLE_EQ(ledger.page_reward(e), 2.0 + 0.5);
}

TEST(AverageReward, DividesByAccessCount) {
  TableCatalog catalog({8});
  RewardLedger ledger(catalog);
  const PageId a{kT0, 0};
  const PageId b{kT0, 1};
  EXPECT_EQ(ledger.average_reward(a), 0.0);
  ledger.update_on_access(a, QueryType::Get, true, 1, 10.0);
  for (int i = 0; i < 99; ++i) ledger.update_on_access(b, QueryType::Get, true, 1, 1.0);
  EXPECT_DOUBLE_EQ(ledger.average_reward(a), 0.1);
  EXPECT_EQ(ledger.average_reward(PageId{kT0, 5}), 0.0);
}

TEST(RewardProperties, MonotoneAndLinearBetweenResets) {
  TableCatalog catalog({1024, 16});
  CostModel cost;
  cost.c_idx = 1.0;
  const double alpha = alpha_for(kT0, catalog, cost);
  ASSERT_EQ(alpha, 10.0);
  RewardLedger ledger(catalog);
  const PageId p{kT0, 17};
  ledger.update_on_access(p, QueryType::Get, false, 1, alpha);
  const double start = ledger.page_reward(p);
  Rng rng(3);
  double previous = start;
  for (int k = 1; k <= 200; ++k) {
    // Interleave accesses to other pages; they must not lower p's reward.
    const PageId other{TableId{1}, static_cast<std::uint32_t>(rng.uniform_below(16))};
    ledger.update_on_access(other, QueryType::Scan, rng.bernoulli(0.5), 3, 1.25);
    ledger.update_on_access(p, QueryType::Get, true, 2, alpha);
    ASSERT_GE(ledger.page_reward(p), previous);
    ASSERT_EQ(ledger.page_reward(p), start + k * alpha);
    previous = ledger.page_reward(p);
  }
}

TEST(RewardProperties, WarmStartEqualsTableRewardExactly) {
  TableCatalog catalog({32});
  RewardLedger ledger(catalog);
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const PageId p{kT0, static_cast<std::uint32_t>(rng.uniform_below(32))};
    const bool resident = ledger.page_reward(p) > 0 && rng.bernoulli(0.7);
    if (!resident) ledger.reset_on_eviction(p);
    const double v_before = ledger.table_reward(kT0);
    const double delta = 0.25 + rng.uniform01();
    ledger.update_on_access(p, rng.bernoulli(0.3) ? QueryType::Scan : QueryType::Get, resident,
                            1 + rng.uniform_below(8), delta);
    if (!resident) {
      ASSERT_EQ(ledger.page_reward(p), v_before + delta);
    }
  }
}

// Get-only IID trace with a buffer that holds every page: r_i / t tends to
// alpha * p_i.
TEST(RewardProperties, AverageRewardConvergesToAlphaTimesFrequency) {
  const std::vector<double> probs = {0.4, 0.25, 0.15, 0.1, 0.06, 0.04};
  TableCatalog catalog({static_cast<std::uint32_t>(probs.size())});
  CostModel cost;
  const double alpha = alpha_for(kT0, catalog, cost);

  EevaGreedyPolicy policy;
  BufferManager manager(static_cast<std::uint32_t>(probs.size()), catalog, policy, cost);
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  Rng rng(2024);
  for (int t = 0; t < 100'000; ++t) {
    const auto page = static_cast<std::uint32_t>(rng.pick_cumulative(cdf));
    manager.process_page(PageId{kT0, page}, QueryType::Get, 1);
  }
  ASSERT_EQ(manager.decision_stats().evictions, 0u);
  for (std::uint32_t i = 0; i < probs.size(); ++i) {
    const double expected = alpha * probs[i];
    EXPECT_NEAR(manager.ledger().average_reward(PageId{kT0, i}), expected, 0.1 * expected)
        << "page " << i;
  }
}

}  // namespace
}  // namespace eeva
