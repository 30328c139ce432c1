#include "eeva/core.hpp"

#include <algorithm>
#include <limits>

namespace eeva {

std::string to_string(PageId page) {
  return "(" + std::to_string(page.table.value) + "," +
         std::to_string(page.index_in_table) + ")";
}

TableCatalog::TableCatalog(std::vector<std::uint32_t> page_counts)
    : page_counts_(std::move(page_counts)) {
  offsets_.reserve(page_counts_.size());
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < page_counts_.size(); ++i) {
    if (page_counts_[i] == 0) {
      throw ContractViolation("table " + std::to_string(i) + " has no pages");
    }
    offsets_.push_back(static_cast<FlatIndex>(sum));
    sum += page_counts_[i];
    if (sum > std::numeric_limits<FlatIndex>::max()) {
      throw ContractViolation("catalog exceeds the flat index range");
    }
  }
  total_pages_ = sum;
}

std::uint32_t TableCatalog::page_count(TableId table) const {
  if (table.value >= page_counts_.size()) {
    throw ContractViolation("unknown table " + std::to_string(table.value));
  }
  return page_counts_[table.value];
}

bool TableCatalog::contains(PageId page) const {
  return page.table.value < page_counts_.size() &&
         page.index_in_table < page_counts_[page.table.value];
}

void TableCatalog::validate(PageId page) const {
  if (!contains(page)) {
    throw ContractViolation("page " + to_string(page) + " is outside the catalog");
  }
}

FlatIndex TableCatalog::flatten(PageId page) const {
  return offsets_[page.table.value] + page.index_in_table;
}

PageId TableCatalog::unflatten(FlatIndex index) const {
  if (index >= total_pages_) {
    throw ContractViolation("flat index " + std::to_string(index) + " out of range");
  }
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  auto table = static_cast<std::uint32_t>(std::distance(offsets_.begin(), it) - 1);
  return PageId{TableId{table}, index - offsets_[table]};
}

std::string_view to_string(QueryType type) {
  return type == QueryType::Get ? "get" : "scan";
}

Request Request::get(PageId page) { return Request(QueryType::Get, {page}); }

Request Request::scan(TableId table, std::uint32_t first_index, std::uint32_t count) {
  if (count == 0) throw ContractViolation("scan must cover at least one page");
  std::vector<PageId> pages;
  pages.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    pages.push_back(PageId{table, first_index + i});
  }
  return Request(QueryType::Scan, std::move(pages));
}

Request Request::from_pages(QueryType type, std::vector<PageId> pages) {
  if (pages.empty()) throw ContractViolation("request without pages");
  if (type == QueryType::Get) {
    if (pages.size() != 1) {
      throw ContractViolation("get request must hold exactly one page");
    }
    return Request(type, std::move(pages));
  }
  for (std::size_t i = 1; i < pages.size(); ++i) {
    if (pages[i].table != pages[0].table) {
      throw ContractViolation("scan spans tables " + std::to_string(pages[0].table.value) +
                              " and " + std::to_string(pages[i].table.value));
    }
    if (pages[i].index_in_table != pages[i - 1].index_in_table + 1) {
      throw ContractViolation("scan pages are not contiguous at position " +
                              std::to_string(i));
    }
  }
  return Request(type, std::move(pages));
}

}  // namespace eeva
