#pragma once

// Test-only oracles and statistics helpers. Nothing here calls into the
// policy or pipeline code it is used to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "eeva/core.hpp"
#include "eeva/random.hpp"
#include "eeva/workload.hpp"

namespace eeva::testing {

// Upper-tail p-value of Pearson's chi-square statistic.
inline double chi_square_p_value(std::span<const std::uint64_t> observed,
                                 std::span<const double> probabilities) {
  std::uint64_t n = 0;
  for (auto o : observed) n += o;
  double stat = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probabilities[i] * static_cast<double>(n);
    if (expected <= 0.0) continue;
    const double d = static_cast<double>(observed[i]) - expected;
    stat += d * d / expected;
    ++cells;
  }
  boost::math::chi_squared dist(static_cast<double>(cells - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Minimum number of misses any eviction strategy can achieve on the access
// sequence: dynamic programming over every reachable buffer content.
inline std::uint64_t optimal_misses(std::span<const std::uint32_t> accesses, std::size_t k) {
  std::map<std::set<std::uint32_t>, std::uint64_t> states{{{}, 0}};
  for (auto page : accesses) {
    std::map<std::set<std::uint32_t>, std::uint64_t> next;
    auto relax = [&](std::set<std::uint32_t> s, std::uint64_t misses) {
      auto [it, inserted] = next.emplace(std::move(s), misses);
      if (!inserted) it->second = std::min(it->second, misses);
    };
    for (const auto& [content, misses] : states) {
      if (content.contains(page)) {
        relax(content, misses);
      } else if (content.size() < k) {
        auto s = content;
        s.insert(page);
        relax(std::move(s), misses + 1);
      } else {
        for (auto e : content) {
          auto s = content;
          s.erase(e);
          s.insert(page);
          relax(std::move(s), misses + 1);
        }
      }
    }
    states = std::move(next);
  }
  std::uint64_t best = UINT64_MAX;
  for (const auto& [content, misses] : states) best = std::min(best, misses);
  return best;
}

// Random get-only trace over `pages` single-page tables.
inline Trace random_small_trace(std::uint32_t pages, std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  Trace trace;
  trace.catalog = TableCatalog(std::vector<std::uint32_t>(pages, 1));
  for (std::size_t i = 0; i < length; ++i) {
    const auto t = static_cast<std::uint32_t>(rng.uniform_below(pages));
    trace.requests.push_back(Request::get(PageId{TableId{t}, 0}));
  }
  return trace;
}

// Random mixed trace over a few multi-page tables, including partial scans.
inline Trace random_mixed_trace(std::uint32_t tables, std::uint32_t max_pages, std::size_t length,
                                double p_scan, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint32_t> sizes(tables);
  for (auto& s : sizes) s = static_cast<std::uint32_t>(rng.uniform_between(1, max_pages));
  Trace trace;
  trace.catalog = TableCatalog(sizes);
  for (std::size_t i = 0; i < length; ++i) {
    const auto t = static_cast<std::uint32_t>(rng.uniform_below(tables));
    if (rng.bernoulli(p_scan)) {
      const auto first = static_cast<std::uint32_t>(rng.uniform_below(sizes[t]));
      const auto count = static_cast<std::uint32_t>(rng.uniform_between(1, sizes[t] - first));
      trace.requests.push_back(Request::scan(TableId{t}, first, count));
    } else {
      const auto p = static_cast<std::uint32_t>(rng.uniform_below(sizes[t]));
      trace.requests.push_back(Request::get(PageId{TableId{t}, p}));
    }
  }
  return trace;
}

}  // namespace eeva::testing
