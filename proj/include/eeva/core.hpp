#pragma once

// Identifiers, the table catalog and the request model shared by every
// other part of the library.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eeva {

// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct TableId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(TableId, TableId) = default;
};

struct PageId {
  TableId table;
  std::uint32_t index_in_table = 0;

  friend constexpr auto operator<=>(const PageId&, const PageId&) = default;
};

std::string to_string(PageId page);

// Dense index of a page inside a catalog, in 0..total_pages-1.
using FlatIndex = std::uint32_t;

// Immutable universe of tables and their page counts.
class TableCatalog {
 public:
  TableCatalog() = default;
  explicit TableCatalog(std::vector<std::uint32_t> page_counts);

  std::size_t table_count() const { return page_counts_.size(); }
  std::uint32_t page_count(TableId table) const;
  std::uint64_t total_pages() const { return total_pages_; }
  std::span<const std::uint32_t> page_counts() const { return page_counts_; }

  bool contains(PageId page) const;
  // Throws ContractViolation when the page is not part of the catalog.
  void validate(PageId page) const;

  // Pages of table i occupy a contiguous block after tables 0..i-1.
  FlatIndex flatten(PageId page) const;
  PageId unflatten(FlatIndex index) const;
  FlatIndex first_index(TableId table) const { return offsets_.at(table.value); }

  friend bool operator==(const TableCatalog& a, const TableCatalog& b) {
    return a.page_counts_ == b.page_counts_;
  }

 private:
  std::vector<std::uint32_t> page_counts_;
  std::vector<FlatIndex> offsets_;
  std::uint64_t total_pages_ = 0;
};

inline TableId table_of(PageId page) { return page.table; }

enum class QueryType : std::uint8_t { Get, Scan };

std::string_view to_string(QueryType type);

// One query: a single index lookup, or a contiguous ascending run of pages
// from one table.
class Request {
 public:
  static Request get(PageId page);
  static Request scan(TableId table, std::uint32_t first_index, std::uint32_t count);
  // Validates the page layout for the given type.
  static Request from_pages(QueryType type, std::vector<PageId> pages);

  QueryType query_type() const { return type_; }
  std::span<const PageId> pages() const { return pages_; }
  std::size_t size() const { return pages_.size(); }
  TableId table() const { return pages_.front().table; }

  friend bool operator==(const Request&, const Request&) = default;

 private:
  Request(QueryType type, std::vector<PageId> pages)
      : type_(type), pages_(std::move(pages)) {}

  QueryType type_;
  std::vector<PageId> pages_;
};

}  // namespace eeva

template <>
struct std::hash<eeva::PageId> {
  std::size_t operator()(const eeva::PageId& p) const noexcept {
    return (static_cast<std::size_t>(p.table.value) << 32) ^ p.index_in_table;
  }
};
