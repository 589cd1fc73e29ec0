#include "entrograph/generate.hpp"

#include <string>

#include "entrograph/error.hpp"

namespace entrograph {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

const char* to_string(LengthModel model) noexcept {
  return model == LengthModel::Generic ? "generic" : "lattice";
}

LengthModel parse_length_model(std::string_view text) {
  if (text == "generic") return LengthModel::Generic;
  if (text == "lattice") return LengthModel::Lattice;
  throw Error(ErrorCode::UnknownFormat, "unknown length model '" + std::string(text) + "'");
}

MetricGraph generate_graph(const GeneratorSpec& spec) {
  const std::size_t n = spec.vertices;
  if (n == 0) throw Error(ErrorCode::InfeasibleParameters, "need at least one vertex");
  const bool connected = spec.connected || spec.hyperbolic;
  if (connected && spec.edges + 1 < n) {
    throw Error(ErrorCode::InfeasibleParameters,
                std::to_string(spec.edges) + " edges cannot connect " + std::to_string(n) + " vertices");
  }
  if (spec.hyperbolic && spec.edges < n + 1) {
    throw Error(ErrorCode::InfeasibleParameters,
                "a hyperbolic graph on " + std::to_string(n) + " vertices needs at least " +
                    std::to_string(n + 1) + " edges");
  }
  if (n == 1 && spec.edges > 0 && !spec.allow_loops) {
    throw Error(ErrorCode::InfeasibleParameters, "a single vertex only carries loops");
  }

  Rng rng(spec.seed);
  auto length = [&] { return spec.lengths == LengthModel::Lattice ? 1.0 : rng.uniform(0.5, 2.5); };
  GraphBuilder b;
  for (std::size_t v = 0; v < n; ++v) b.add_vertex("v" + std::to_string(v));
  std::size_t placed = 0;
  if (connected) {
    for (std::size_t v = 1; v < n; ++v, ++placed) {
      const auto parent = static_cast<VertexId>(rng.below(v));
      b.add_edge(parent, v, length());
    }
  }
  for (; placed < spec.edges; ++placed) {
    VertexId u = 0, v = 0;
    do {
      u = static_cast<VertexId>(rng.below(n));
      v = static_cast<VertexId>(rng.below(n));
    } while (u == v && !spec.allow_loops);
    b.add_edge(u, v, length());
  }
  return b.build();
}

}  // namespace entrograph
