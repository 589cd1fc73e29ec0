#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "entrograph/graph.hpp"
#include "entrograph/spectral.hpp"

namespace entrograph {

enum class CountKind {
  PathsXY,             ///< paths from source to target
  PathsFromX,          ///< paths from source to anywhere
  CyclesAtV,           ///< closed paths at source
  PrimitiveCyclesAtV,  ///< closed paths at source not visiting it in between
};

const char* to_string(CountKind kind) noexcept;

/// Sorted multiset of path lengths strictly below a horizon, as produced by
/// the enumeration oracle. N(r) counts lengths strictly below r.
struct CountProfile {
  CountKind kind = CountKind::PathsFromX;
  WalkMode mode = WalkMode::NonBacktracking;
  double horizon = 0.0;
  VertexId source = 0;
  VertexId target = 0;

  std::vector<double> lengths;
  /// For the cycle kinds: position (within out_darts(source)) of the first
  /// dart and of the reverse of the last dart, parallel to `lengths`. So a
  /// primitive cycle leaving along e_i and returning along the reverse of e_j
  /// is recorded as (i, j). Empty for the path kinds.
  std::vector<std::uint32_t> first;
  std::vector<std::uint32_t> last;

  std::size_t size() const noexcept { return lengths.size(); }
  /// N(r) = number of recorded lengths < r.
  std::size_t count_below(double r) const;
};

}  // namespace entrograph
