#pragma once

// Synthetic traces: a catalog of tables with random sizes, and a stream of
// get and full-table scan queries over it.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eeva/core.hpp"
#include "eeva/random.hpp"

namespace eeva {

struct WorkloadConfig {
  std::uint32_t num_tables = 50;
  std::uint32_t p_max = 1000;
  double p_scan = 2e-3;
  double zipf_q = 0.1;
  std::uint64_t num_queries = 1'000'000;
  // How much more likely the first third of the tables is to be scanned
  // (and less likely to be looked up).
  double scan_table_boost = 10.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Trace {
  TableCatalog catalog;
  std::vector<Request> requests;
  std::string provenance;

  std::uint64_t total_accesses() const;
  // Every page access in replay order, as flat catalog indices.
  std::vector<FlatIndex> flat_accesses() const;
  // Throws ContractViolation if a request does not fit the catalog.
  void validate() const;
};

inline bool same_content(const Trace& a, const Trace& b) {
  return a.catalog == b.catalog && a.requests == b.requests;
}

struct TableDistributions {
  std::vector<double> scan;
  std::vector<double> get;
};

// Per-table query probabilities. The first floor(|T|/3) tables are
// `scan_table_boost` times more likely to be scanned and that many times less
// likely to be looked up; both vectors are normalized to sum to 1.
TableDistributions table_distributions(const WorkloadConfig& cfg);

// Samples page indices with P(j) proportional to 1 / (j+1)^q.
class ZipfSampler {
 public:
  ZipfSampler(std::uint32_t num_pages, double q);
  std::uint32_t operator()(Rng& rng) const;
  double probability(std::uint32_t index) const;
  std::uint32_t size() const { return static_cast<std::uint32_t>(cumulative_.size()); }

 private:
  std::vector<double> cumulative_;
};

std::uint32_t zipf_sample(std::uint32_t num_pages, double q, Rng& rng);

Trace generate_trace(const WorkloadConfig& cfg);

// Cyclic get-only trace: pages 0..universe-1 (each its own one-page table)
// requested in order, `repeats` times.
Trace worst_case_trace(std::uint32_t universe_pages, std::uint32_t repeats = 10);

// --- Trace files ------------------------------------------------------------
//
//   #catalog <P_0> <P_1> ... <P_{n-1}>
//   G <table> <page_index>
//   S <table> <first_index> <count>
//
// Other lines starting with '#' are comments; blank lines are ignored.

class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

void write_trace(const Trace& trace, std::ostream& out);
void write_trace(const Trace& trace, const std::filesystem::path& path);
Trace read_trace(std::istream& in, const std::string& source_name = "<stream>");
Trace read_trace(const std::filesystem::path& path);

}  // namespace eeva
