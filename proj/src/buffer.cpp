#include "eeva/buffer.hpp"

#include <algorithm>

namespace eeva {

BufferManager::BufferManager(std::uint32_t capacity, const TableCatalog& catalog,
                             EvictionPolicy& policy, const CostModel& cost)
    : buffer_(capacity, catalog), ledger_(catalog), policy_(&policy), cost_(cost) {
  cost_.validate();
}

AccessOutcome BufferManager::process_page(PageId page, QueryType type, std::uint32_t scan_len) {
  buffer_.catalog().validate(page);
  AccessOutcome outcome{page, type, buffer_.is_resident(page), std::nullopt};
  AccessEvent event{page, 0, type, outcome.hit, std::nullopt, 0.0};

  if (outcome.hit) {
    event.slot = buffer_.slot_of(page);
    event.previous_slot_reward = ledger_.page_reward(page);
    policy_->on_hit(page, event.slot);
  } else if (buffer_.full()) {
    PageId victim;
    if (timing_) {
      const auto start = std::chrono::steady_clock::now();
      victim = policy_->select_victim(buffer_, ledger_);
      stats_.total_time += std::chrono::steady_clock::now() - start;
    } else {
      victim = policy_->select_victim(buffer_, ledger_);
    }
    if (!buffer_.is_resident(victim)) {
      throw ContractViolation(std::string(policy_->name()) + " chose non-resident victim " +
                              to_string(victim));
    }
    ++stats_.evictions;
    const auto sweep = policy_->last_sweep_length();
    stats_.max_sweep = std::max(stats_.max_sweep, sweep);
    stats_.total_sweep += sweep;

    event.previous_slot_reward = ledger_.page_reward(victim);
    ledger_.reset_on_eviction(victim);
    event.slot = buffer_.replace(victim, page);
    event.victim = victim;
    outcome.victim = victim;
    policy_->on_admit(page, event.slot);
  } else {
    event.slot = buffer_.admit(page);
    policy_->on_admit(page, event.slot);
  }

  const double delta = delta_for(type, page.table, scan_len, buffer_.catalog(), cost_);
  ledger_.update_on_access(page, type, outcome.hit, buffer_.resident_count(page.table), delta);
  policy_->after_update(event, buffer_, ledger_);
  return outcome;
}

void BufferManager::process_request(const Request& request, std::vector<AccessOutcome>& out) {
  const auto scan_len = request.query_type() == QueryType::Scan
                            ? static_cast<std::uint32_t>(request.size())
                            : 1u;
  for (const PageId& page : request.pages()) {
    out.push_back(process_page(page, request.query_type(), scan_len));
  }
}

std::vector<AccessOutcome> BufferManager::process_request(const Request& request) {
  std::vector<AccessOutcome> out;
  out.reserve(request.size());
  process_request(request, out);
  return out;
}

}  // namespace eeva
