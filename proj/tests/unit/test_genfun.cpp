#include <doctest.h>

#include <cmath>

#include "entrograph/entropy.hpp"
#include "entrograph/error.hpp"
#include "entrograph/genfun.hpp"
#include "oracles.hpp"

using namespace entrograph;

namespace {

MetricGraph bigon() {
  GraphBuilder b;
  b.add_vertex("x");
  b.add_vertex("y");
  b.add_edge(0, 1, 1.0);
  b.add_edge(0, 1, 1.0);
  return b.build();
}

// Hub v joined by unit spokes to the corners of a unit triangle.
MetricGraph star_triangle() {
  GraphBuilder b;
  for (const char* n : {"v", "a", "b", "c"}) b.add_vertex(n);
  b.add_edge(0, 1, 1.0);
  b.add_edge(0, 2, 1.0);
  b.add_edge(0, 3, 1.0);
  b.add_edge(1, 2, 1.0);
  b.add_edge(2, 3, 1.0);
  b.add_edge(3, 1, 1.0);
  return b.build();
}

std::size_t position(const MetricGraph& g, VertexId v, DartId d) {
  const auto out = g.out_darts(v);
  return static_cast<std::size_t>(std::find(out.begin(), out.end(), d) - out.begin());
}

}  // namespace

TEST_CASE("path series closed forms") {
  for (double t : {0.3, 1.0, 2.5}) {
    CAPTURE(t);
    const double u = std::exp(-t);
    CHECK(f_path(oracle::path(2), 0, 1, t).value == doctest::Approx(u).epsilon(1e-14));
    CHECK(f_from(oracle::path(2), 0, t).value == doctest::Approx(u).epsilon(1e-14));
    CHECK(f_path(bigon(), 0, 1, t).value == doctest::Approx(2 * u / (1 - u * u)).epsilon(1e-12));

    const PathSeries sq(oracle::square(), t);
    CHECK(sq.f(0, 2) == doctest::Approx(2 * u * u / (1 - std::pow(u, 4))).epsilon(1e-12));
    CHECK(sq.f(0, 0) == doctest::Approx(2 * std::pow(u, 4) / (1 - std::pow(u, 4))).epsilon(1e-12));
  }
  const double t = std::log(3.0) + 0.4;
  const double u = std::exp(-t);
  CHECK(f_from(oracle::rose(2), 0, t).value == doctest::Approx(4 * u / (1 - 3 * u)).epsilon(1e-12));
}

TEST_CASE("divergence at and below the entropy") {
  const MetricGraph g = oracle::rose(2);
  const double h = std::log(3.0);
  CHECK(f_from(g, 0, h).status == GenFunStatus::Divergent);
  CHECK(f_path(g, 0, 0, h - 0.1).status == GenFunStatus::Divergent);
  CHECK_THROWS_AS(f_path(g, 0, 0, h - 0.1).require(), Error);
  const PathSeries s(g, 0.5);
  CHECK_FALSE(s.convergent());
  CHECK_THROWS_AS(s.f(0, 0), Error);

  GraphBuilder b(oracle::rose(2));
  b.add_vertex("lonely");
  const GenFunValue off = f_path(b.build(), 0, 1, 3.0);
  CHECK(off.status == GenFunStatus::Disconnected);
  CHECK(off.value == 0.0);
}

TEST_CASE("property: resolvent equals the brute-force path sum") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    CAPTURE(seed);
    const MetricGraph g = oracle::random_hyperbolic(seed, 3 + seed % 3, 6 + seed % 3, 0.5, 2.5, seed % 3 == 0);
    const double h = volume_entropy(g).h;
    const double t = h + 2.0;
    // Grow the radius until the enumeration holds a few hundred thousand paths.
    double r = std::log(1e5) / h;
    auto all = oracle::walks(g, 0, r, oracle::Walks::NonBacktracking, oracle::Select::FromX);
    while (all.size() < 200000) {
      r += 0.5 / h;
      all = oracle::walks(g, 0, r, oracle::Walks::NonBacktracking, oracle::Select::FromX);
    }
    const PathSeries s(g, t);
    const double truncated = oracle::laplace_sum(oracle::lengths(all), t);
    const double f0 = s.f_from(0);
    CHECK(truncated <= f0 * (1 + 1e-12));
    CHECK(f0 - truncated <= 1e-8 * f0);
    for (VertexId y = 0; y < g.vertex_count(); ++y) {
      const auto to_y = oracle::walks(g, 0, r, oracle::Walks::NonBacktracking, oracle::Select::ToY, y);
      const double part = oracle::laplace_sum(oracle::lengths(to_y), t);
      CHECK(s.f(0, y) == doctest::Approx(part).epsilon(1e-7));
    }
    const std::vector<VertexId> xs = {0, 1};
    const std::vector<VertexId> ys = {1, 2};
    const Eigen::MatrixXd m = s.f_matrix(xs, ys);
    CHECK(m(0, 0) == doctest::Approx(s.f(0, 1)).epsilon(1e-13));
    CHECK(m(1, 1) == doctest::Approx(s.f(1, 2)).epsilon(1e-13));
  }
}

TEST_CASE("primitive cycles: closed forms") {
  const MetricGraph g = star_triangle();
  for (double t : {1.0, 2.0}) {
    const double u = std::exp(-t);
    const double tri = (u + u * u) / (1 - u * u * u);
    CHECK(g_primitive(g, 0, 0, 1, t).value == doctest::Approx(u * u * tri).epsilon(1e-12));
    // Out to b, k times around the triangle, back the same way.
    CHECK(g_primitive(g, 0, 1, 1, t).value == doctest::Approx(u * u * 2 * u * u * u / (1 - u * u * u)).epsilon(1e-12));
  }

  const MetricGraph b = bigon();
  for (double t : {0.2, 1.0}) {
    CHECK(g_primitive(b, 0, 0, 1, t).value == doctest::Approx(std::exp(-2 * t)).epsilon(1e-14));
    CHECK(g_primitive(b, 0, 0, 0, t).value == 0.0);
  }
  CHECK_THROWS_AS(g_primitive(b, 0, 0, 2, 1.0), Error);

  // G minus the hub of a rose-2 + theta construction has entropy ln 2.
  GraphBuilder gb(oracle::theta());
  const VertexId hub = gb.add_vertex("hub");
  gb.add_edge(hub, 0, 1.0);
  gb.add_edge(hub, 1, 1.0);
  gb.add_edge(hub, 0, 1.0);
  CHECK(g_primitive(gb.build(), hub, 0, 1, 0.6).status == GenFunStatus::Divergent);
}

TEST_CASE("property: primitive matrix matches enumeration and the first-return route") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    CAPTURE(seed);
    const MetricGraph g = oracle::random_hyperbolic(seed, 4, 8, 0.5, 2.5, seed % 2 == 1);
    const VertexId v = seed % 4;
    const double h = volume_entropy(g).h;
    const double t = h + 1.5;
    const auto pm = primitive_matrix(g, v, t);
    REQUIRE(pm.has_value());
    const std::size_t n = g.degree(v);
    REQUIRE(pm->rows() == static_cast<Eigen::Index>(n));

    const double r = std::log(4e5) / h;
    const auto cycles = oracle::walks(g, v, r, oracle::Walks::NonBacktracking, oracle::Select::Primitive);
    Eigen::MatrixXd brute = Eigen::MatrixXd::Zero(n, n);
    for (const auto& c : cycles) {
      brute(position(g, v, c.first), position(g, v, g.dart(c.last).reverse)) += std::exp(-t * c.length);
    }
    CHECK((*pm - brute).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, pm->cwiseAbs().maxCoeff()));

    const GenFunValue first = first_return_series(g, v, t, WalkMode::NonBacktracking);
    CHECK(first.value == doctest::Approx(pm->sum()).epsilon(1e-10));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(g_primitive(g, v, i, j, t).value == doctest::Approx((*pm)(i, j)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("backtracking first returns on a path") {
  // Closed walks at the middle of x - y - z that never revisit y: out and back.
  const MetricGraph p = oracle::path(3);
  const GenFunValue g = first_return_series(p, 1, 0.7, WalkMode::Backtracking);
  CHECK(g.value == doctest::Approx(2 * std::exp(-1.4)).epsilon(1e-13));
}

TEST_CASE("symmetry") {
  CHECK(check_symmetry(oracle::square(), 0, 2, 1.0) <= 1e-10);
  CHECK(check_symmetry(oracle::path(2), 0, 1, 2.0) == 0.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const MetricGraph g = oracle::random_hyperbolic(seed, 5, 9);
    const double t = volume_entropy(g).h + 0.5;
    for (VertexId x = 0; x < 5; ++x) {
      for (VertexId y = x + 1; y < 5; ++y) {
        CHECK(check_symmetry(g, x, y, t) <= 1e-10 * std::max(1.0, f_path(g, x, y, t).value));
      }
    }
  }
}
