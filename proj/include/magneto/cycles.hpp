#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "magneto/charge.hpp"
#include "magneto/graph.hpp"

namespace magneto {

struct CycleLimits {
  std::int64_t max_cycles = 1'000'000;
  Index max_length = 32;
};

/// Lengths of the elementary directed cycles of a graph. Self-loops are not
/// cycles here (every length is >= 2); a reciprocal pair u <-> v is a 2-cycle.
struct CycleReport {
  std::vector<Index> lengths;  // ascending
  bool truncated = false;      // a cap was hit; the list may be incomplete
  bool is_acyclic = false;

  std::map<Index, std::int64_t> histogram() const;
};

/// Johnson's elementary circuit enumeration run per strongly connected
/// component. Enumeration stops once `max_cycles` cycles are recorded;
/// paths longer than `max_length` are not extended. Either cap marks the
/// report truncated when it actually cuts the search.
CycleReport elementary_cycles(const DirectedGraph& g, const CycleLimits& limits = {});

struct QCandidates {
  std::vector<Charge> values;  // 1/m for ascending m, then 0 if included
  bool includes_zero_fallback = false;
};

/// Distinct reciprocals 1/m of the observed cycle lengths, shortest cycle
/// first. An acyclic report yields {0}; `include_zero` appends 0 otherwise.
QCandidates q_candidates(const CycleReport& report, bool include_zero = false);

}  // namespace magneto
