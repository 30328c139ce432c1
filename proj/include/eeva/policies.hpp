#pragma once

// Victim selection strategies. Each strategy exists twice: as a stateless
// linear-scan function over the buffer (the reference form used in tests)
// and as an EvictionPolicy implementation that the buffer pipeline drives.
// The indexed policies keep ordered per-slot keys so that a decision is
// logarithmic in the buffer size; EEvA sampling is linear by nature.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eeva/buffer_state.hpp"
#include "eeva/core.hpp"
#include "eeva/random.hpp"
#include "eeva/rewards.hpp"

namespace eeva {

// What the pipeline reports to a policy once the rewards of an access have
// been applied.
struct AccessEvent {
  PageId page;
  SlotIndex slot = 0;
  QueryType type = QueryType::Get;
  bool hit = false;
  std::optional<PageId> victim;
  // Reward held by the slot before this access: the page's own reward on a
  // hit, the victim's reward (before its reset) on a replacement, 0 for a
  // previously free slot.
  double previous_slot_reward = 0.0;
};

class EvictionPolicy {
 public:
  virtual ~EvictionPolicy() = default;

  virtual std::string_view name() const = 0;

  virtual void on_hit(PageId /*page*/, SlotIndex /*slot*/) {}
  virtual void on_admit(PageId /*page*/, SlotIndex /*slot*/) {}
  // Must return a resident page. Called only on a miss with a full buffer.
  virtual PageId select_victim(const BufferState& buffer, const RewardLedger& ledger) = 0;
  virtual void after_update(const AccessEvent& /*event*/, const BufferState& /*buffer*/,
                            const RewardLedger& /*ledger*/) {}

  // Candidate slots inspected by the last decision, for sweeping policies.
  virtual std::uint32_t last_sweep_length() const { return 0; }
};

// ---------------------------------------------------------------------------
// EEvA family

// mu = sqrt(8 / T * ln T), with T clamped to >= 2.
double default_learning_rate(std::uint64_t horizon);

struct EevaConfig {
  double mu = 0.0;  // 0 selects default_learning_rate(horizon)
  std::uint64_t horizon = 1;
  std::uint64_t rng_seed = 0;

  double effective_mu() const { return mu > 0 ? mu : default_learning_rate(horizon); }
};

// p_i = exp(-mu r_i) / sum_j exp(-mu r_j), evaluated with a min shift.
std::vector<double> eviction_probabilities(std::span<const double> rewards, double mu);

// Samples an index of `rewards` with eviction_probabilities. `scratch` is
// reused across calls to avoid allocation.
std::size_t sample_eviction_index(std::span<const double> rewards, double mu, Rng& rng,
                                  std::vector<double>& scratch);

PageId eeva_select(const BufferState& buffer, const RewardLedger& ledger, double mu, Rng& rng);

// Resident page with the smallest reward; ties by lowest slot.
PageId greedy_select(const BufferState& buffer, const RewardLedger& ledger);

// First resident page (by slot) whose table has the smallest table reward.
PageId eeva_t_select(const BufferState& buffer, const RewardLedger& ledger);

struct SeqConfig {
  // Skip threshold c. The benchmark default is 0.01 * c_get.
  double policy_cost = 0.01;
  // Exact recomputation period of the running average, in evictions.
  std::uint32_t recompute_every = 4096;
};

struct SeqState {
  SlotIndex cursor = 0;
  double avg_weight = 0.0;
  double policy_cost = 0.0;
};

struct SweepResult {
  SlotIndex victim_slot = 0;
  std::uint32_t advances = 0;  // cursor moves made before stopping
};

// Walks from `cursor` (wrapping) while r/t > avg/t + cost. Stops after at
// most `capacity` inspected slots; if every slot is skipped the starting
// cursor is returned.
template <typename RewardAt>
SweepResult seq_sweep(std::uint32_t capacity, const SeqState& state, std::uint64_t t,
                      RewardAt&& reward_at) {
  const double inv_t = 1.0 / static_cast<double>(t);
  const double threshold = inv_t * state.avg_weight + state.policy_cost;
  SlotIndex pos = state.cursor;
  for (std::uint32_t step = 0; step < capacity; ++step) {
    if (!(inv_t * reward_at(pos) > threshold)) return {pos, step};
    pos = (pos + 1 == capacity) ? 0 : pos + 1;
  }
  return {state.cursor, capacity};
}

// Reference form of one EEvA-Seq decision on a full buffer. Returns the
// victim and advances state.cursor one past it.
PageId eeva_seq_select(const BufferState& buffer, const RewardLedger& ledger, SeqState& state,
                       std::uint32_t* advances = nullptr);

class EevaPolicy final : public EvictionPolicy {
 public:
  explicit EevaPolicy(const EevaConfig& cfg);
  std::string_view name() const override { return "eeva"; }
  PageId select_victim(const BufferState& buffer, const RewardLedger& ledger) override;
  double mu() const { return mu_; }

 private:
  double mu_;
  Rng rng_;
  std::vector<double> rewards_;
  std::vector<double> scratch_;
};

class EevaGreedyPolicy final : public EvictionPolicy {
 public:
  std::string_view name() const override { return "eeva-greedy"; }
  PageId select_victim(const BufferState& buffer, const RewardLedger& ledger) override;
  void after_update(const AccessEvent& event, const BufferState& buffer,
                    const RewardLedger& ledger) override;

 private:
  std::set<std::pair<double, SlotIndex>> order_;
  std::vector<std::optional<double>> key_;
};

class EevaTablePolicy final : public EvictionPolicy {
 public:
  std::string_view name() const override { return "eeva-t"; }
  PageId select_victim(const BufferState& buffer, const RewardLedger& ledger) override;
  void after_update(const AccessEvent& event, const BufferState& buffer,
                    const RewardLedger& ledger) override;

 private:
  void rekey_table(std::uint32_t table, const RewardLedger& ledger);

  std::vector<std::set<SlotIndex>> slots_by_table_;
  std::set<std::pair<double, std::uint32_t>> tables_;
  std::vector<std::optional<double>> table_key_;
};

class EevaSeqPolicy final : public EvictionPolicy {
 public:
  explicit EevaSeqPolicy(const SeqConfig& cfg) : cfg_(cfg) { state_.policy_cost = cfg.policy_cost; }
  std::string_view name() const override { return "eeva-seq"; }
  PageId select_victim(const BufferState& buffer, const RewardLedger& ledger) override;
  void after_update(const AccessEvent& event, const BufferState& buffer,
                    const RewardLedger& ledger) override;
  std::uint32_t last_sweep_length() const override { return last_sweep_; }

  const SeqState& state() const { return state_; }
  bool initialized() const { return initialized_; }

 private:
  static double exact_average(const BufferState& buffer, const RewardLedger& ledger);

  SeqConfig cfg_;
  SeqState state_;
  bool initialized_ = false;
  std::uint32_t since_recompute_ = 0;
  std::uint32_t last_sweep_ = 0;
};

// ---------------------------------------------------------------------------
// Classical baselines

// Slot with the smallest stamp; ties by lowest slot. Stamps are indexed by
// slot and only occupied slots are considered.
PageId lru_select(const BufferState& buffer, std::span<const std::uint64_t> last_access);
PageId fifo_select(const BufferState& buffer, std::span<const std::uint64_t> admitted_at);
// Smallest hit count, ties by oldest last access.
PageId lfu_select(const BufferState& buffer, std::span<const std::uint64_t> hit_counts,
                  std::span<const std::uint64_t> last_access);

// Orders slots by a per-slot key and evicts the smallest (key, slot).
class StampOrderPolicy : public EvictionPolicy {
 public:
  PageId select_victim(const BufferState& buffer, const RewardLedger& ledger) override;

 protected:
  using Key = std::pair<std::uint64_t, std::uint64_t>;
  void set_key(SlotIndex slot, Key key);
  std::uint64_t tick() { return ++clock_; }

 private:
  std::set<std::pair<Key, SlotIndex>> order_;
  std::vector<std::optional<Key>> key_;
  std::uint64_t clock_ = 0;
};

class LruPolicy final : public StampOrderPolicy {
 public:
  std::string_view name() const override { return "lru"; }
  void on_hit(PageId, SlotIndex slot) override { set_key(slot, {tick(), 0}); }
  void on_admit(PageId, SlotIndex slot) override { set_key(slot, {tick(), 0}); }
};

class FifoPolicy final : public StampOrderPolicy {
 public:
  std::string_view name() const override { return "fifo"; }
  void on_admit(PageId, SlotIndex slot) override { set_key(slot, {tick(), 0}); }
};

class LfuPolicy final : public StampOrderPolicy {
 public:
  std::string_view name() const override { return "lfu"; }
  void on_hit(PageId, SlotIndex slot) override;
  void on_admit(PageId, SlotIndex slot) override;

 private:
  std::vector<std::uint64_t> hits_;
};

// ---------------------------------------------------------------------------
// Offline optimum

inline constexpr std::uint64_t kNeverUsed = UINT64_MAX;

// For every position of a page-access sequence, the position of the next
// access to the same page (kNeverUsed if none).
std::vector<std::uint64_t> next_use_positions(std::span<const FlatIndex> accesses,
                                              std::uint64_t universe);

// Resident page whose next use is farthest; never-used pages first, ties by
// lowest slot. next_use is indexed by slot.
PageId belady_select(const BufferState& buffer, std::span<const std::uint64_t> next_use);

class BeladyPolicy final : public EvictionPolicy {
 public:
  // next_use must come from next_use_positions over exactly the access
  // sequence that will be replayed.
  explicit BeladyPolicy(std::shared_ptr<const std::vector<std::uint64_t>> next_use)
      : next_use_(std::move(next_use)) {}
  std::string_view name() const override { return "belady"; }
  void on_hit(PageId, SlotIndex slot) override { record(slot); }
  void on_admit(PageId, SlotIndex slot) override { record(slot); }
  PageId select_victim(const BufferState& buffer, const RewardLedger& ledger) override;

 private:
  void record(SlotIndex slot);

  std::shared_ptr<const std::vector<std::uint64_t>> next_use_;
  std::uint64_t position_ = 0;
  // Ordered by farthest next use first, then lowest slot.
  std::set<std::pair<std::uint64_t, SlotIndex>> order_;
  std::vector<std::optional<std::uint64_t>> key_;
};

// ---------------------------------------------------------------------------
// Construction by name

inline constexpr std::string_view kPolicyNames[] = {"eeva", "eeva-greedy", "eeva-t", "eeva-seq",
                                                    "lru",  "lfu",         "fifo",   "belady"};

bool is_known_policy(std::string_view name);

struct PolicyOptions {
  EevaConfig eeva;
  SeqConfig seq;
  // Required for "belady".
  std::shared_ptr<const std::vector<std::uint64_t>> next_use;
};

// Throws std::invalid_argument for an unknown name.
std::unique_ptr<EvictionPolicy> make_policy(std::string_view name, const PolicyOptions& options);

}  // namespace eeva
