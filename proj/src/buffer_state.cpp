#include "eeva/buffer_state.hpp"

namespace eeva {

BufferState::BufferState(std::uint32_t capacity, const TableCatalog& catalog)
    : catalog_(catalog),
      slots_(capacity),
      residency_(catalog.total_pages(), kNoSlot),
      per_table_(catalog.table_count(), 0) {
  if (capacity == 0) throw ContractViolation("buffer capacity must be positive");
}

SlotIndex BufferState::admit(PageId page) {
  catalog_.validate(page);
  if (full()) throw ContractViolation("admit into a full buffer");
  if (is_resident(page)) throw ContractViolation("page " + to_string(page) + " already resident");
  const SlotIndex slot = occupied_++;
  slots_[slot] = page;
  residency_[catalog_.flatten(page)] = slot;
  ++per_table_[page.table.value];
  return slot;
}

SlotIndex BufferState::replace(PageId victim, PageId page) {
  catalog_.validate(page);
  catalog_.validate(victim);
  const SlotIndex slot = slot_of(victim);
  if (slot == kNoSlot) {
    throw ContractViolation("victim " + to_string(victim) + " is not resident");
  }
  if (is_resident(page)) throw ContractViolation("page " + to_string(page) + " already resident");
  residency_[catalog_.flatten(victim)] = kNoSlot;
  --per_table_[victim.table.value];
  slots_[slot] = page;
  residency_[catalog_.flatten(page)] = slot;
  ++per_table_[page.table.value];
  return slot;
}

}  // namespace eeva
