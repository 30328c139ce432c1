#include "eeva/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eeva {

namespace {

void require_nonempty(const BufferState& buffer) {
  if (buffer.empty()) throw ContractViolation("victim selection on an empty buffer");
}

template <typename Slot>
void grow_to(std::vector<Slot>& v, std::size_t size) {
  if (v.size() < size) v.resize(size);
}

}  // namespace

double default_learning_rate(std::uint64_t horizon) {
  const double t = static_cast<double>(std::max<std::uint64_t>(2, horizon));
  return std::sqrt(8.0 / t * std::log(t));
}

std::vector<double> eviction_probabilities(std::span<const double> rewards, double mu) {
  if (rewards.empty()) throw ContractViolation("eviction_probabilities: no candidates");
  const double r_min = *std::min_element(rewards.begin(), rewards.end());
  std::vector<double> p(rewards.size());
  double total = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    p[i] = std::exp(-mu * (rewards[i] - r_min));
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

std::size_t sample_eviction_index(std::span<const double> rewards, double mu, Rng& rng,
                                  std::vector<double>& scratch) {
  if (rewards.empty()) throw ContractViolation("sample_eviction_index: no candidates");
  const double r_min = *std::min_element(rewards.begin(), rewards.end());
  scratch.resize(rewards.size());
  double running = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    running += std::exp(-mu * (rewards[i] - r_min));
    scratch[i] = running;
  }
  return rng.pick_cumulative(scratch);
}

PageId eeva_select(const BufferState& buffer, const RewardLedger& ledger, double mu, Rng& rng) {
  require_nonempty(buffer);
  std::vector<double> rewards;
  rewards.reserve(buffer.occupied());
  for (SlotIndex s = 0; s < buffer.occupied(); ++s) {
    rewards.push_back(ledger.page_reward(buffer.page_at(s)));
  }
  std::vector<double> scratch;
  return buffer.page_at(static_cast<SlotIndex>(sample_eviction_index(rewards, mu, rng, scratch)));
}

PageId greedy_select(const BufferState& buffer, const RewardLedger& ledger) {
  require_nonempty(buffer);
  SlotIndex best = 0;
  double best_reward = ledger.page_reward(buffer.page_at(0));
  for (SlotIndex s = 1; s < buffer.occupied(); ++s) {
    const double r = ledger.page_reward(buffer.page_at(s));
    if (r < best_reward) {
      best = s;
      best_reward = r;
    }
  }
  return buffer.page_at(best);
}

PageId eeva_t_select(const BufferState& buffer, const RewardLedger& ledger) {
  require_nonempty(buffer);
  SlotIndex best = 0;
  double best_reward = ledger.table_reward(buffer.page_at(0).table);
  for (SlotIndex s = 1; s < buffer.occupied(); ++s) {
    const double v = ledger.table_reward(buffer.page_at(s).table);
    if (v < best_reward) {
      best = s;
      best_reward = v;
    }
  }
  return buffer.page_at(best);
}

PageId eeva_seq_select(const BufferState& buffer, const RewardLedger& ledger, SeqState& state,
                       std::uint32_t* advances) {
  if (!buffer.full()) throw ContractViolation("eeva_seq_select needs a full buffer");
  if (ledger.access_count() == 0) throw ContractViolation("eeva_seq_select before any access");
  const auto result =
      seq_sweep(buffer.capacity(), state, ledger.access_count(),
                [&](SlotIndex s) { return ledger.page_reward(buffer.page_at(s)); });
  state.cursor = (result.victim_slot + 1) % buffer.capacity();
  if (advances != nullptr) *advances = result.advances;
  return buffer.page_at(result.victim_slot);
}

// --- EevaPolicy -------------------------------------------------------------

EevaPolicy::EevaPolicy(const EevaConfig& cfg) : mu_(cfg.effective_mu()), rng_(cfg.rng_seed) {
  if (!(mu_ > 0)) throw ContractViolation("eeva: learning rate must be positive");
}

PageId EevaPolicy::select_victim(const BufferState& buffer, const RewardLedger& ledger) {
  require_nonempty(buffer);
  rewards_.resize(buffer.occupied());
  for (SlotIndex s = 0; s < buffer.occupied(); ++s) {
    rewards_[s] = ledger.page_reward(buffer.page_at(s));
  }
  return buffer.page_at(
      static_cast<SlotIndex>(sample_eviction_index(rewards_, mu_, rng_, scratch_)));
}

// --- EevaGreedyPolicy -------------------------------------------------------

PageId EevaGreedyPolicy::select_victim(const BufferState& buffer, const RewardLedger&) {
  require_nonempty(buffer);
  return buffer.page_at(order_.begin()->second);
}

void EevaGreedyPolicy::after_update(const AccessEvent& event, const BufferState& buffer,
                                    const RewardLedger& ledger) {
  grow_to(key_, buffer.capacity());
  auto& key = key_[event.slot];
  if (key) order_.erase({*key, event.slot});
  key = ledger.page_reward(event.page);
  order_.emplace(*key, event.slot);
}

// --- EevaTablePolicy --------------------------------------------------------

PageId EevaTablePolicy::select_victim(const BufferState& buffer, const RewardLedger&) {
  require_nonempty(buffer);
  const double min_reward = tables_.begin()->first;
  SlotIndex best = std::numeric_limits<SlotIndex>::max();
  for (auto it = tables_.begin(); it != tables_.end() && it->first == min_reward; ++it) {
    best = std::min(best, *slots_by_table_[it->second].begin());
  }
  return buffer.page_at(best);
}

void EevaTablePolicy::rekey_table(std::uint32_t table, const RewardLedger& ledger) {
  auto& key = table_key_[table];
  if (key) tables_.erase({*key, table});
  if (slots_by_table_[table].empty()) {
    key.reset();
    return;
  }
  key = ledger.table_reward(TableId{table});
  tables_.emplace(*key, table);
}

void EevaTablePolicy::after_update(const AccessEvent& event, const BufferState& buffer,
                                   const RewardLedger& ledger) {
  grow_to(slots_by_table_, buffer.catalog().table_count());
  grow_to(table_key_, buffer.catalog().table_count());
  if (event.victim) {
    const auto victim_table = event.victim->table.value;
    slots_by_table_[victim_table].erase(event.slot);
    rekey_table(victim_table, ledger);
  }
  if (!event.hit) slots_by_table_[event.page.table.value].insert(event.slot);
  rekey_table(event.page.table.value, ledger);
}

// --- EevaSeqPolicy ----------------------------------------------------------

double EevaSeqPolicy::exact_average(const BufferState& buffer, const RewardLedger& ledger) {
  double sum = 0.0;
  for (SlotIndex s = 0; s < buffer.occupied(); ++s) sum += ledger.page_reward(buffer.page_at(s));
  return sum / static_cast<double>(buffer.capacity());
}

PageId EevaSeqPolicy::select_victim(const BufferState& buffer, const RewardLedger& ledger) {
  if (!initialized_ || since_recompute_ >= cfg_.recompute_every) {
    state_.avg_weight = exact_average(buffer, ledger);
    initialized_ = true;
    since_recompute_ = 0;
  }
  ++since_recompute_;
  return eeva_seq_select(buffer, ledger, state_, &last_sweep_);
}

void EevaSeqPolicy::after_update(const AccessEvent& event, const BufferState& buffer,
                                 const RewardLedger& ledger) {
  if (!initialized_) return;
  state_.avg_weight += (ledger.page_reward(event.page) - event.previous_slot_reward) /
                       static_cast<double>(buffer.capacity());
}

// --- Classical baselines ----------------------------------------------------

PageId lru_select(const BufferState& buffer, std::span<const std::uint64_t> last_access) {
  require_nonempty(buffer);
  SlotIndex best = 0;
  for (SlotIndex s = 1; s < buffer.occupied(); ++s) {
    if (last_access[s] < last_access[best]) best = s;
  }
  return buffer.page_at(best);
}

PageId fifo_select(const BufferState& buffer, std::span<const std::uint64_t> admitted_at) {
  return lru_select(buffer, admitted_at);
}

PageId lfu_select(const BufferState& buffer, std::span<const std::uint64_t> hit_counts,
                  std::span<const std::uint64_t> last_access) {
  require_nonempty(buffer);
  SlotIndex best = 0;
  for (SlotIndex s = 1; s < buffer.occupied(); ++s) {
    if (std::pair(hit_counts[s], last_access[s]) < std::pair(hit_counts[best], last_access[best])) {
      best = s;
    }
  }
  return buffer.page_at(best);
}

PageId StampOrderPolicy::select_victim(const BufferState& buffer, const RewardLedger&) {
  require_nonempty(buffer);
  return buffer.page_at(order_.begin()->second);
}

void StampOrderPolicy::set_key(SlotIndex slot, Key key) {
  grow_to(key_, static_cast<std::size_t>(slot) + 1);
  if (key_[slot]) order_.erase({*key_[slot], slot});
  key_[slot] = key;
  order_.emplace(key, slot);
}

void LfuPolicy::on_hit(PageId, SlotIndex slot) {
  const auto hits = ++hits_[slot];
  set_key(slot, {hits, tick()});
}

void LfuPolicy::on_admit(PageId, SlotIndex slot) {
  grow_to(hits_, static_cast<std::size_t>(slot) + 1);
  hits_[slot] = 0;
  set_key(slot, {0, tick()});
}

// --- Belady -----------------------------------------------------------------

std::vector<std::uint64_t> next_use_positions(std::span<const FlatIndex> accesses,
                                              std::uint64_t universe) {
  std::vector<std::uint64_t> next(accesses.size(), kNeverUsed);
  std::vector<std::uint64_t> upcoming(universe, kNeverUsed);
  for (std::size_t i = accesses.size(); i-- > 0;) {
    const FlatIndex page = accesses[i];
    if (page >= universe) throw ContractViolation("access outside the page universe");
    next[i] = upcoming[page];
    upcoming[page] = i;
  }
  return next;
}

PageId belady_select(const BufferState& buffer, std::span<const std::uint64_t> next_use) {
  require_nonempty(buffer);
  SlotIndex best = 0;
  for (SlotIndex s = 1; s < buffer.occupied(); ++s) {
    if (next_use[s] > next_use[best]) best = s;
  }
  return buffer.page_at(best);
}

void BeladyPolicy::record(SlotIndex slot) {
  if (position_ >= next_use_->size()) {
    throw ContractViolation("belady: replay ran past the precomputed access sequence");
  }
  const std::uint64_t key = kNeverUsed - (*next_use_)[position_++];
  grow_to(key_, static_cast<std::size_t>(slot) + 1);
  if (key_[slot]) order_.erase({*key_[slot], slot});
  key_[slot] = key;
  order_.emplace(key, slot);
}

PageId BeladyPolicy::select_victim(const BufferState& buffer, const RewardLedger&) {
  require_nonempty(buffer);
  return buffer.page_at(order_.begin()->second);
}

// --- Factory ----------------------------------------------------------------

bool is_known_policy(std::string_view name) {
  return std::find(std::begin(kPolicyNames), std::end(kPolicyNames), name) !=
         std::end(kPolicyNames);
}

std::unique_ptr<EvictionPolicy> make_policy(std::string_view name, const PolicyOptions& options) {
  if (name == "eeva") return std::make_unique<EevaPolicy>(options.eeva);
  if (name == "eeva-greedy") return std::make_unique<EevaGreedyPolicy>();
  if (name == "eeva-t") return std::make_unique<EevaTablePolicy>();
  if (name == "eeva-seq") return std::make_unique<EevaSeqPolicy>(options.seq);
  if (name == "lru") return std::make_unique<LruPolicy>();
  if (name == "lfu") return std::make_unique<LfuPolicy>();
  if (name == "fifo") return std::make_unique<FifoPolicy>();
  if (name == "belady") {
    if (!options.next_use) throw std::invalid_argument("belady needs the future access sequence");
    return std::make_unique<BeladyPolicy>(options.next_use);
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

}  // namespace eeva
