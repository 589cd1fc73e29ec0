#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entrograph/entropy.hpp"
#include "entrograph/error.hpp"
#include "entrograph/persistence.hpp"
#include "oracles.hpp"

using namespace entrograph;

namespace {

MetricGraph k4_with_long_chord() {
  GraphBuilder b;
  for (int i = 0; i < 4; ++i) b.add_vertex(std::to_string(i));
  b.add_edge(0, 1, 1.0);
  b.add_edge(1, 2, 1.0);
  b.add_edge(2, 3, 1.0);
  b.add_edge(3, 0, 1.0);
  b.add_edge(1, 3, 1.0);
  b.add_edge(0, 2, 2.0);
  return b.build();
}

MetricGraph square_with_chord() {
  GraphBuilder b(oracle::square());
  b.add_edge(0, 2, 3.0);
  return b.build();
}

// Hub joined to three vertices of a hyperbolic core, all hub edges sharing
// one length so they arrive in a single filtration step.
MetricGraph with_hub(std::uint64_t seed) {
  const MetricGraph core = oracle::random_hyperbolic(seed, 4, 7, 0.5, 1.5);
  GraphBuilder b(core);
  const VertexId hub = b.add_vertex("hub");
  entrograph::Rng rng(seed);
  const double l = rng.uniform(1.6, 2.4);
  for (int k = 0; k < 3; ++k) b.add_edge(hub, rng.below(4), l);
  return b.build();
}

std::size_t line_count(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_CASE("thresholds and filtration graphs") {
  GraphBuilder b;
  for (int i = 0; i < 4; ++i) b.add_vertex(std::to_string(i));
  b.add_edge(0, 1, 1.0);
  b.add_edge(1, 2, 1.0);
  b.add_edge(2, 3, 2.0);
  b.add_edge(3, 0, 3.5);
  const MetricGraph g = b.build();
  CHECK(thresholds(g) == std::vector<double>{1.0, 2.0, 3.5});
  CHECK(thresholds(oracle::complete4()) == std::vector<double>{1.0});
  CHECK(thresholds(MetricGraph{}).empty());

  CHECK(filter_at(g, 0.5).edge_count() == 0);
  CHECK(filter_at(g, 0.5).vertex_count() == 4);
  CHECK(equivalent(filter_at(g, 10.0), g));
  CHECK(filter_at(g, 2.0).edge_count() == 3);
}

TEST_CASE("K4 with a long chord") {
  const MetricGraph g = k4_with_long_chord();
  const EntropyCurve c = persistent_entropy(g, Strategy::Direct);
  REQUIRE(c.steps.size() == 2);
  CHECK(c.steps[0].epsilon == 1.0);
  CHECK(c.steps[0].h == doctest::Approx(volume_entropy(filter_at(g, 1.0)).h).epsilon(1e-10));
  CHECK(c.steps[1].h == doctest::Approx(volume_entropy(g).h).epsilon(1e-10));
  CHECK(c.steps[1].h > c.steps[0].h);
}

TEST_CASE("trees have a zero curve") {
  GraphBuilder b;
  for (int i = 0; i < 5; ++i) b.add_vertex(std::to_string(i));
  for (VertexId i = 1; i < 5; ++i) b.add_edge(i - 1, i, 0.5 * i);
  for (Strategy s : {Strategy::Direct, Strategy::Incremental, Strategy::Auto}) {
    const EntropyCurve c = persistent_entropy(b.build(), s);
    CHECK(c.steps.size() == 4);
    for (const auto& st : c.steps) CHECK(st.h == 0.0);
  }
}

TEST_CASE("square plus chord takes the incremental edge step") {
  const MetricGraph g = square_with_chord();
  const EntropyCurve a = persistent_entropy(g, Strategy::Auto);
  const EntropyCurve d = persistent_entropy(g, Strategy::Direct);
  REQUIRE(a.steps.size() == 2);
  CHECK(a.steps[1].method == StepMethod::IncrementalEdge);
  CHECK(std::abs(a.steps[1].h - d.steps[1].h) <= 1e-7);
  CHECK(d.steps[1].method == StepMethod::Direct);
}

TEST_CASE("property: strategies agree and the curve is monotone") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    const MetricGraph g = seed % 2 ? oracle::random_hyperbolic(seed, 6, 10) : with_hub(seed);
    const EntropyCurve d = persistent_entropy(g, Strategy::Direct);
    const EntropyCurve i = persistent_entropy(g, Strategy::Incremental);
    const EntropyCurve a = persistent_entropy(g, Strategy::Auto);
    REQUIRE(d.steps.size() == thresholds(g).size());
    REQUIRE(i.steps.size() == d.steps.size());
    REQUIRE(a.steps.size() == d.steps.size());
    for (std::size_t k = 0; k < d.steps.size(); ++k) {
      CHECK(std::abs(d.steps[k].h - i.steps[k].h) <= 1e-7);
      CHECK(std::abs(d.steps[k].h - a.steps[k].h) <= 1e-7);
      if (k > 0) CHECK(d.steps[k].h >= d.steps[k - 1].h);
      if (k > 0) CHECK(i.steps[k].h >= i.steps[k - 1].h);
    }
    CHECK(d.steps.back().h == doctest::Approx(volume_entropy(g).h).epsilon(1e-10));
  }
}

TEST_CASE("hub steps go through vertex addition") {
  bool seen = false;
  for (std::uint64_t seed = 2; seed <= 10; seed += 2) {
    const EntropyCurve c = persistent_entropy(with_hub(seed), Strategy::Incremental);
    for (const auto& s : c.steps) seen = seen || s.method == StepMethod::IncrementalVertex;
  }
  CHECK(seen);
}

TEST_CASE("curve serialization") {
  EntropyCurve empty;
  CHECK(export_curve(empty, CurveFormat::Csv) == "epsilon,h,strategy,iterations,ms\n");

  const EntropyCurve c = persistent_entropy(k4_with_long_chord(), Strategy::Auto);
  const std::string csv = export_curve(c, CurveFormat::Csv);
  CHECK(line_count(csv) == 3);

  for (CurveFormat f : {CurveFormat::Csv, CurveFormat::Json}) {
    const EntropyCurve back = import_curve(export_curve(c, f), f);
    REQUIRE(back.steps.size() == c.steps.size());
    for (std::size_t k = 0; k < c.steps.size(); ++k) {
      CHECK(back.steps[k].epsilon == c.steps[k].epsilon);
      CHECK(back.steps[k].h == c.steps[k].h);
      CHECK(back.steps[k].method == c.steps[k].method);
      CHECK(back.steps[k].iterations == c.steps[k].iterations);
    }
    CHECK(back.thresholds == c.thresholds);
  }
  CHECK_THROWS_AS(import_curve("{\"steps\": 3}", CurveFormat::Json), Error);
  CHECK_THROWS_AS(import_curve("epsilon,h\n1,2\n", CurveFormat::Csv), Error);
  CHECK_THROWS_AS(import_curve("epsilon,h,strategy,iterations,ms\n1,x,direct,1,0\n", CurveFormat::Csv), Error);
}

TEST_CASE("names and parsing") {
  CHECK(parse_strategy("auto") == Strategy::Auto);
  CHECK(parse_strategy("incremental") == Strategy::Incremental);
  CHECK_THROWS_AS(parse_strategy("fast"), Error);
  CHECK(parse_format("json") == CurveFormat::Json);
  CHECK_THROWS_AS(parse_format("xml"), Error);
  for (StepMethod m : {StepMethod::Direct, StepMethod::IncrementalEdge, StepMethod::IncrementalVertex}) {
    CHECK(parse_step_method(to_string(m)) == m);
  }
}

TEST_CASE("solver failures name the offending epsilon") {
  PersistenceOptions opt;
  opt.max_iter = 1;
  opt.tol = 1e-300;
  try {
    persistent_entropy(k4_with_long_chord(), Strategy::Direct, opt);
    FAIL("expected a solver failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
  }
}

TEST_CASE("strategy benchmark") {
  const MetricGraph g = oracle::random_hyperbolic(5, 8, 20);
  const BenchReport r = persistence_bench(g, {}, 1);
  CHECK(r.rows.size() == thresholds(g).size());
  CHECK(r.max_disagreement <= 1e-7);
  CHECK(r.incremental_wins + r.direct_wins <= r.rows.size());
  const std::string table = bench_table(r);
  CHECK(table.find("epsilon") != std::string::npos);
  CHECK(table.find("crossover") != std::string::npos);
}
