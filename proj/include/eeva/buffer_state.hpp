#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eeva/core.hpp"

namespace eeva {

using SlotIndex = std::uint32_t;

// Fixed-capacity set of resident pages. Slots and the residency map agree
// bidirectionally; free slots always form a suffix because pages only leave
// the buffer by being replaced in place.
class BufferState {
 public:
  static constexpr SlotIndex kNoSlot = UINT32_MAX;

  BufferState(std::uint32_t capacity, const TableCatalog& catalog);

  std::uint32_t capacity() const { return static_cast<std::uint32_t>(slots_.size()); }
  std::uint32_t occupied() const { return occupied_; }
  bool full() const { return occupied_ == slots_.size(); }
  bool empty() const { return occupied_ == 0; }

  bool is_resident(PageId page) const { return slot_of(page) != kNoSlot; }
  SlotIndex slot_of(PageId page) const { return residency_[catalog_.flatten(page)]; }
  const std::optional<PageId>& at(SlotIndex slot) const { return slots_[slot]; }
  // Page in an occupied slot.
  PageId page_at(SlotIndex slot) const { return *slots_[slot]; }

  // Number of resident pages that belong to the table.
  std::uint32_t resident_count(TableId table) const { return per_table_[table.value]; }

  // Places the page in the lowest free slot.
  SlotIndex admit(PageId page);
  // Replaces the occupant of the victim's slot; returns that slot.
  SlotIndex replace(PageId victim, PageId page);

  const TableCatalog& catalog() const { return catalog_; }

 private:
  TableCatalog catalog_;
  std::vector<std::optional<PageId>> slots_;
  std::vector<SlotIndex> residency_;
  std::vector<std::uint32_t> per_table_;
  std::uint32_t occupied_ = 0;
};

}  // namespace eeva
