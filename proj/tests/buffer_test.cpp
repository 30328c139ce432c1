#include <gtest/gtest.h>

#include "eeva/bench.hpp"
#include "eeva/buffer.hpp"
#include "test_support.hpp"

namespace eeva {
namespace {

const TableId kT0{0};

std::vector<std::uint32_t> resident_indices(const BufferState& buffer) {
  std::vector<std::uint32_t> out;
  for (SlotIndex s = 0; s < buffer.occupied(); ++s) out.push_back(buffer.page_at(s).index_in_table);
  return out;
}

TEST(BufferStateTest, AdmitFillsLowestFreeSlot) {
  TableCatalog catalog({4});
  BufferState buffer(3, catalog);
  EXPECT_TRUE(buffer.empty());
  EXPECT_EQ(buffer.admit(PageId{kT0, 2}), 0u);
  EXPECT_EQ(buffer.admit(PageId{kT0, 0}), 1u);
  EXPECT_EQ(buffer.resident_count(kT0), 2u);
  EXPECT_EQ(buffer.slot_of(PageId{kT0, 0}), 1u);
  EXPECT_FALSE(buffer.is_resident(PageId{kT0, 1}));
  EXPECT_EQ(buffer.replace(PageId{kT0, 2}, PageId{kT0, 3}), 0u);
  EXPECT_FALSE(buffer.is_resident(PageId{kT0, 2}));
  EXPECT_EQ(buffer.slot_of(PageId{kT0, 3}), 0u);
  EXPECT_THROW(buffer.replace(PageId{kT0, 2}, PageId{kT0, 1}), ContractViolation);
  EXPECT_THROW(BufferState(0, catalog), ContractViolation);
}

TEST(Pipeline, ResidentGetIsAHit) {
  TableCatalog catalog({8});
  EevaGreedyPolicy policy;
  BufferManager m(4, catalog, policy, CostModel{});
  const PageId a{kT0, 1};
  EXPECT_FALSE(m.process_page(a, QueryType::Get, 1).hit);
  const auto outcome = m.process_page(a, QueryType::Get, 1);
  EXPECT_TRUE(outcome.hit);
  EXPECT_FALSE(outcome.victim);
  EXPECT_EQ(m.buffer().occupied(), 1u);
  EXPECT_EQ(m.decision_stats().evictions, 0u);
}

// A five-page scan through a three-page buffer, traced by hand.
struct ScanCase {
  const char* policy;
  std::vector<std::uint32_t> final_pages;
};

class ScanThroughSmallBuffer : public ::testing::TestWithParam<ScanCase> {};

TEST_P(ScanThroughSmallBuffer, FinalContents) {
  TableCatalog catalog({5});
  PolicyOptions options;
  auto policy = make_policy(GetParam().policy, options);
  BufferManager m(3, catalog, *policy, CostModel{});
  const auto outcomes = m.process_request(Request::scan(kT0, 0, 5));
  ASSERT_EQ(outcomes.size(), 5u);
  for (const auto& o : outcomes) EXPECT_FALSE(o.hit);
  EXPECT_EQ(resident_indices(m.buffer()), GetParam().final_pages);
  EXPECT_EQ(m.decision_stats().evictions, 2u);
}

INSTANTIATE_TEST_SUITE_P(Policies, ScanThroughSmallBuffer,
                         ::testing::Values(ScanCase{"lru", {3, 4, 2}}, ScanCase{"fifo", {3, 4, 2}},
                                           ScanCase{"eeva-greedy", {3, 4, 2}},
                                           ScanCase{"eeva-t", {4, 1, 2}}));

TEST(Pipeline, ScanRewardsFollowTheTable) {
  TableCatalog catalog({1024});
  CostModel cost;
  EevaGreedyPolicy policy;
  BufferManager m(8, catalog, policy, cost);
  m.process_request(Request::scan(kT0, 0, 3));
  const double beta = beta_for(kT0, 3, catalog, cost);
  EXPECT_NEAR(m.ledger().page_reward(PageId{kT0, 0}), beta, 1e-12);
  EXPECT_NEAR(m.ledger().page_reward(PageId{kT0, 1}), 2 * beta, 1e-12);
  EXPECT_NEAR(m.ledger().page_reward(PageId{kT0, 2}), 3 * beta, 1e-12);
  EXPECT_NEAR(m.ledger().table_reward(kT0), 3 * beta, 1e-12);
}

TEST(Pipeline, GetCreditIsSharedByResidentPagesOfTheTable) {
  TableCatalog catalog({1024});
  CostModel cost;
  EevaGreedyPolicy policy;
  BufferManager m(8, catalog, policy, cost);
  const double alpha = alpha_for(kT0, catalog, cost);
  m.process_page(PageId{kT0, 0}, QueryType::Get, 1);
  m.process_page(PageId{kT0, 1}, QueryType::Get, 1);
  // Counted after admission: 1, then 2 resident pages.
  EXPECT_NEAR(m.ledger().table_reward(kT0), alpha + alpha / 2, 1e-12);
}

TEST(Pipeline, VictimRewardIsReset) {
  TableCatalog catalog(std::vector<std::uint32_t>(3, 1));
  LruPolicy policy;
  BufferManager m(2, catalog, policy, CostModel{});
  const PageId p0{TableId{0}, 0};
  m.process_page(p0, QueryType::Get, 1);
  m.process_page(PageId{TableId{1}, 0}, QueryType::Get, 1);
  ASSERT_GT(m.ledger().page_reward(p0), 0.0);
  const auto o = m.process_page(PageId{TableId{2}, 0}, QueryType::Get, 1);
  EXPECT_EQ(o.victim, p0);
  EXPECT_EQ(m.ledger().page_reward(p0), 0.0);
}

class BadPolicy final : public EvictionPolicy {
 public:
  std::string_view name() const override { return "bad"; }
  PageId select_victim(const BufferState&, const RewardLedger&) override {
    return PageId{TableId{2}, 0};
  }
};

TEST(Pipeline, NonResidentVictimIsRejected) {
  TableCatalog catalog(std::vector<std::uint32_t>(4, 1));
  BadPolicy policy;
  BufferManager m(2, catalog, policy, CostModel{});
  m.process_page(PageId{TableId{0}, 0}, QueryType::Get, 1);
  m.process_page(PageId{TableId{1}, 0}, QueryType::Get, 1);
  EXPECT_THROW(m.process_page(PageId{TableId{3}, 0}, QueryType::Get, 1), ContractViolation);
}

// Residency map, slots and per-table counts agree after every access.
class PipelineInvariants : public ::testing::TestWithParam<const char*> {};

TEST_P(PipelineInvariants, HoldOnRandomTraces) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto trace = testing::random_mixed_trace(6, 20, 500, 0.1, seed);
    PolicyOptions options;
    options.next_use = next_use_for(trace);
    options.eeva.horizon = trace.total_accesses();
    options.eeva.rng_seed = seed;
    auto policy = make_policy(GetParam(), options);
    const std::uint32_t k = 10;
    BufferManager m(k, trace.catalog, *policy, CostModel{});
    std::uint64_t accesses = 0;
    for (const auto& r : trace.requests) {
      const auto outcomes = m.process_request(r);
      accesses += outcomes.size();
      const auto& b = m.buffer();
      ASSERT_LE(b.occupied(), k);
      std::vector<std::uint32_t> per_table(trace.catalog.table_count(), 0);
      for (SlotIndex s = 0; s < k; ++s) {
        if (s >= b.occupied()) {
          ASSERT_FALSE(b.at(s).has_value());
          continue;
        }
        const PageId p = b.page_at(s);
        ASSERT_EQ(b.slot_of(p), s);
        ++per_table[p.table.value];
      }
      for (std::uint32_t t = 0; t < per_table.size(); ++t)
        ASSERT_EQ(b.resident_count(TableId{t}), per_table[t]);
      for (FlatIndex f = 0; f < trace.catalog.total_pages(); ++f) {
        const PageId p = trace.catalog.unflatten(f);
        if (!b.is_resident(p)) {
          ASSERT_EQ(m.ledger().page_reward(p), 0.0);
        }
      }
      for (const auto& o : outcomes) ASSERT_TRUE(!o.victim || !o.hit);
    }
    EXPECT_EQ(m.ledger().access_count(), accesses);
  }
}

INSTANTIATE_TEST_SUITE_P(Policies, PipelineInvariants,
                         ::testing::Values("eeva", "eeva-greedy", "eeva-t", "eeva-seq", "lru",
                                           "lfu", "fifo", "belady"));

TEST(Pipeline, ReplayIsDeterministic) {
  const auto trace = testing::random_mixed_trace(5, 30, 2000, 0.05, 3);
  ReplayOptions opts;
  opts.capacity = 12;
  opts.rng_seed = 99;
  opts.keep_log = true;
  opts.timing = false;
  for (auto name : kPolicyNames) {
    const auto a = replay(trace, name, opts);
    const auto b = replay(trace, name, opts);
    EXPECT_EQ(a.log, b.log) << name;
  }
}

}  // namespace
}  // namespace eeva
