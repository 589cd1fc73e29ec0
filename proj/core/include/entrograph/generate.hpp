#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

#include "entrograph/graph.hpp"

namespace entrograph {

enum class LengthModel {
  Generic,  ///< i.i.d. uniform on [0.5, 2.5]
  Lattice,  ///< all lengths 1
};

const char* to_string(LengthModel model) noexcept;
/// Throws Error(UnknownFormat).
LengthModel parse_length_model(std::string_view text);

struct GeneratorSpec {
  std::uint64_t seed = 1;
  std::size_t vertices = 5;
  std::size_t edges = 8;
  LengthModel lengths = LengthModel::Generic;
  bool connected = true;
  /// Require first Betti number >= 2 (needs connected and edges >= vertices + 1).
  bool hyperbolic = false;
  bool allow_loops = false;
};

/// Seeded random multigraph on vertices v0..v{n-1}. Connected output starts
/// from a random recursive spanning tree; the remaining edges join uniformly
/// drawn vertex pairs. Bit-for-bit reproducible for a fixed spec on every
/// platform. Throws Error(InfeasibleParameters).
MetricGraph generate_graph(const GeneratorSpec& spec);

/// std::mt19937_64 with distribution code of our own, so draws are identical
/// across standard libraries (the std distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on {0, ..., n - 1} by rejection; n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace entrograph
