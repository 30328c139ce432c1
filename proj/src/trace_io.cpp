#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "eeva/workload.hpp"

namespace eeva {

void write_trace(const Trace& trace, std::ostream& out) {
  out << "#catalog";
  for (auto p : trace.catalog.page_counts()) out << ' ' << p;
  out << '\n';
  if (!trace.provenance.empty()) out << "# source: " << trace.provenance << '\n';
  for (const auto& r : trace.requests) {
    const PageId first = r.pages().front();
    if (r.query_type() == QueryType::Get) {
      out << "G " << first.table.value << ' ' << first.index_in_table << '\n';
    } else {
      out << "S " << first.table.value << ' ' << first.index_in_table << ' ' << r.size() << '\n';
    }
  }
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_trace(trace, out);
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

namespace {

class LineParser {
 public:
  LineParser(const std::string& source, std::size_t line_no, std::string_view text)
      : source_(source), line_no_(line_no), text_(text) {}

  std::optional<std::string_view> token() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    if (pos_ >= text_.size()) return std::nullopt;
    const auto start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::uint32_t number(const char* what) {
    auto tok = token();
    if (!tok) fail(std::string("missing ") + what);
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(tok->data(), tok->data() + tok->size(), value);
    if (ec != std::errc() || ptr != tok->data() + tok->size()) {
      fail(std::string("invalid ") + what + " '" + std::string(*tok) + "'");
    }
    return value;
  }

  void expect_end() {
    if (auto tok = token()) fail("unexpected trailing token '" + std::string(*tok) + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw TraceFormatError(source_, line_no_, what);
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

  const std::string& source_;
  std::size_t line_no_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Trace read_trace(std::istream& in, const std::string& source_name) {
  Trace trace;
  bool have_catalog = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    LineParser parser(source_name, line_no, line);
    auto head = parser.token();
    if (!head) continue;
    if (*head == "#catalog") {
      if (have_catalog) parser.fail("duplicate #catalog header");
      std::vector<std::uint32_t> counts;
      while (true) {
        auto tok = parser.token();
        if (!tok) break;
        std::uint32_t value = 0;
        auto [ptr, ec] = std::from_chars(tok->data(), tok->data() + tok->size(), value);
        if (ec != std::errc() || ptr != tok->data() + tok->size() || value == 0) {
          parser.fail("invalid table size '" + std::string(*tok) + "'");
        }
        counts.push_back(value);
      }
      if (counts.empty()) parser.fail("#catalog header lists no tables");
      trace.catalog = TableCatalog(std::move(counts));
      have_catalog = true;
      continue;
    }
    if (head->front() == '#') {
      const std::string_view rest = std::string_view(line).substr(line.find('#') + 1);
      constexpr std::string_view kSource = " source: ";
      if (rest.starts_with(kSource)) trace.provenance = std::string(rest.substr(kSource.size()));
      continue;
    }
    if (!have_catalog) parser.fail("request before the #catalog header");
    const auto& catalog = trace.catalog;
    auto check_table = [&](std::uint32_t table) {
      if (table >= catalog.table_count()) {
        parser.fail("table " + std::to_string(table) + " not in catalog of " +
                    std::to_string(catalog.table_count()) + " tables");
      }
    };
    if (*head == "G") {
      const auto table = parser.number("table");
      const auto index = parser.number("page index");
      parser.expect_end();
      check_table(table);
      if (index >= catalog.page_count(TableId{table})) {
        parser.fail("page index " + std::to_string(index) + " >= size of table " +
                    std::to_string(table));
      }
      trace.requests.push_back(Request::get(PageId{TableId{table}, index}));
    } else if (*head == "S") {
      const auto table = parser.number("table");
      const auto first = parser.number("first index");
      const auto count = parser.number("count");
      parser.expect_end();
      check_table(table);
      if (count == 0) parser.fail("scan of zero pages");
      if (static_cast<std::uint64_t>(first) + count > catalog.page_count(TableId{table})) {
        parser.fail("scan [" + std::to_string(first) + ", +" + std::to_string(count) +
                    ") exceeds size of table " + std::to_string(table));
      }
      trace.requests.push_back(Request::scan(TableId{table}, first, count));
    } else {
      parser.fail("unknown record type '" + std::string(*head) + "'");
    }
  }
  if (in.bad()) throw std::runtime_error(source_name + ": read error");
  if (!have_catalog) throw TraceFormatError(source_name, line_no, "missing #catalog header");
  if (trace.provenance.empty()) trace.provenance = "file:" + source_name;
  return trace;
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trace(in, path.string());
}

}  // namespace eeva
