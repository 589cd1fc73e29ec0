#include <doctest.h>

#include <algorithm>
#include <map>

#include "entrograph/error.hpp"
#include "entrograph/graph.hpp"
#include "oracles.hpp"

using namespace entrograph;

namespace {

bool has(const ValidationReport& r, ViolationKind kind) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

MetricGraph two_triangles() {
  GraphBuilder b;
  for (int i = 0; i < 6; ++i) b.add_vertex("t" + std::to_string(i));
  for (VertexId base : {0, 3}) {
    b.add_edge(base, base + 1, 1.0);
    b.add_edge(base + 1, base + 2, 1.0);
    b.add_edge(base + 2, base, 1.0);
  }
  return b.build();
}

double total_length(const MetricGraph& g) {
  double s = 0.0;
  for (const Edge& e : g.edges()) s += e.length;
  return s;
}

}  // namespace

TEST_CASE("builder pairs darts and keeps names") {
  const MetricGraph g = oracle::square();
  CHECK(g.vertex_count() == 4);
  CHECK(g.dart_count() == 8);
  for (DartId d = 0; d < g.dart_count(); ++d) {
    CHECK(g.dart(d).reverse == (d ^ 1));
    CHECK(g.dart(g.dart(d).reverse).tail == g.dart(d).head);
  }
  CHECK(g.vertex("c") == 2);
  CHECK_FALSE(g.find("zz").has_value());
  CHECK_THROWS_AS(g.vertex("zz"), Error);
  CHECK(g.adjacent(0, 1));
  CHECK_FALSE(g.adjacent(0, 2));
  CHECK(g.degree(0) == 2);

  GraphBuilder b;
  b.add_vertex("a");
  CHECK_THROWS_AS(b.add_vertex("a"), Error);
  CHECK_THROWS_AS(b.add_edge(0, 0, 0.0), Error);
  CHECK_THROWS_AS(b.add_edge(0, 3, 1.0), Error);
}

TEST_CASE("loops count twice in the degree") {
  const MetricGraph g = oracle::rose(3);
  CHECK(g.degree(0) == 6);
  CHECK(g.dart(0).head == 0);
  CHECK(g.dart(0).reverse == 1);
}

TEST_CASE("validate") {
  CHECK(validate(oracle::square()).ok());

  std::vector<Dart> darts = {{0, 1, 0.0, 1}, {1, 0, 0.0, 0}};
  CHECK(has(validate(MetricGraph({"a", "b"}, darts)), ViolationKind::NonPositiveLength));

  darts = {{0, 1, 1.0, 0}, {1, 0, 1.0, 0}};
  CHECK(has(validate(MetricGraph({"a", "b"}, darts)), ViolationKind::ReversalFixedPoint));

  darts = {{0, 1, 1.0, 5}, {1, 0, 1.0, 0}};
  CHECK(has(validate(MetricGraph({"a", "b"}, darts)), ViolationKind::ReversalOutOfRange));

  darts = {{0, 1, 1.0, 1}, {1, 0, 2.0, 0}};
  CHECK(has(validate(MetricGraph({"a", "b"}, darts)), ViolationKind::PairedLengthMismatch));

  darts = {{0, 1, 1.0, 1}, {0, 0, 1.0, 0}};
  CHECK(has(validate(MetricGraph({"a", "b"}, darts)), ViolationKind::ReversalEndpointMismatch));

  darts = {{0, 7, 1.0, 1}, {7, 0, 1.0, 0}};
  const ValidationReport dangling = validate(MetricGraph({"a"}, darts));
  CHECK(has(dangling, ViolationKind::DanglingEndpoint));
  CHECK_FALSE(dangling.summary().empty());
  CHECK_THROWS_AS(require_valid(MetricGraph({"a"}, darts)), Error);
}

TEST_CASE("components") {
  const MetricGraph k4 = oracle::complete4();
  const auto one = components(k4);
  REQUIRE(one.size() == 1);
  CHECK(equivalent(one[0].graph, k4));

  const auto two = components(two_triangles());
  REQUIRE(two.size() == 2);
  CHECK(two[0].graph.vertex_count() == 3);
  CHECK(two[1].graph.vertex_count() == 3);
  CHECK(two[1].to_parent == std::vector<VertexId>{3, 4, 5});
  CHECK(component_labels(two_triangles()) == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});

  CHECK(components(MetricGraph{}).empty());
  const Subgraph c = component_containing(two_triangles(), 4);
  CHECK(local_vertex(c, 4) == 1);
}

TEST_CASE("first Betti number") {
  CHECK(first_betti(two_triangles()) == std::vector<long>{1, 1});
  CHECK(first_betti(oracle::complete4()) == std::vector<long>{3});
  CHECK(first_betti(oracle::path(5)) == std::vector<long>{0});
  CHECK(classify(0) == ComponentKind::Trivial);
  CHECK(classify(1) == ComponentKind::SingleCycle);
  CHECK(classify(4) == ComponentKind::Hyperbolic);
}

TEST_CASE("reduce normal forms") {
  GraphBuilder b;
  for (const char* n : {"x", "y", "z"}) b.add_vertex(n);
  b.add_edge(0, 1, 1.0);
  b.add_edge(1, 2, 2.0);
  const Reduction tree = reduce(b.build());
  REQUIRE(tree.components.size() == 1);
  CHECK(tree.components[0].kind == ComponentKind::Trivial);
  CHECK(tree.components[0].graph.vertex_count() == 0);

  const Reduction cycle = reduce(oracle::square());
  REQUIRE(cycle.components.size() == 1);
  const MetricGraph& loop = cycle.components[0].graph;
  CHECK(cycle.components[0].kind == ComponentKind::SingleCycle);
  REQUIRE(loop.vertex_count() == 1);
  REQUIRE(loop.edge_count() == 1);
  CHECK(loop.edges()[0].length == doctest::Approx(4.0));

  const MetricGraph k4 = oracle::complete4();
  const Reduction same = reduce(k4);
  CHECK(same.components[0].kind == ComponentKind::Hyperbolic);
  CHECK(equivalent(same.graph, k4));
}

TEST_CASE("property: reduction undoes subdivision and keeps total cycle length") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    CAPTURE(seed);
    const MetricGraph g = oracle::random_hyperbolic(seed, 3 + seed % 4, 7 + seed % 3);
    const Reduction direct = reduce(g);
    const Reduction sub = reduce(oracle::subdivided(g, 2 + seed % 3));
    REQUIRE(direct.components.size() == 1);
    REQUIRE(sub.components.size() == 1);
    const MetricGraph& a = direct.components[0].graph;
    const MetricGraph& s = sub.components[0].graph;
    CHECK(s.vertex_count() == a.vertex_count());
    CHECK(s.edge_count() == a.edge_count());
    CHECK(total_length(s) == doctest::Approx(total_length(a)).epsilon(1e-12));
    for (VertexId v = 0; v < s.vertex_count(); ++v) CHECK(s.degree(v) >= 3);
    // Betti number is preserved.
    CHECK(direct.components[0].betti == first_betti(g)[0]);
    CHECK(sub.components[0].betti == direct.components[0].betti);
  }
}

TEST_CASE("reduce prunes pendant trees") {
  const MetricGraph g = oracle::irregular();
  const Reduction r = reduce(g);
  REQUIRE(r.components.size() == 1);
  CHECK(r.components[0].graph.vertex_count() == 4);
  CHECK(r.components[0].graph.edge_count() == 6);
  CHECK(r.components[0].to_original == std::vector<VertexId>{0, 1, 2, 3});
}

TEST_CASE("editing operations") {
  const MetricGraph sq = oracle::square();
  const MetricGraph chord = add_edge(sq, 0, 2, 1.0);
  CHECK(chord.edge_count() == 5);
  CHECK(chord.dart(8).tail == 0);
  CHECK(chord.dart(8).head == 2);
  CHECK(validate(add_edge(sq, 1, 1, 2.0)).ok());
  CHECK_THROWS_AS(add_edge(sq, 0, 2, -1.0), Error);

  const std::vector<Attachment> three = {{0, 1.0}, {1, 1.0}, {2, 1.0}};
  const MetricGraph hub = add_vertex(sq, three, "hub");
  CHECK(hub.vertex_count() == 5);
  CHECK(hub.edge_count() == 7);
  CHECK(hub.name(4) == "hub");

  const std::vector<Attachment> one = {{3, 2.0}};
  const MetricGraph pendant = add_vertex(sq, one);
  CHECK(validate(pendant).ok());
  CHECK(pendant.degree(4) == 1);
  CHECK(reduce(pendant).components[0].graph.vertex_count() == 1);

  const std::vector<Attachment> missing = {{9, 1.0}};
  CHECK_THROWS_AS(add_vertex(sq, missing), Error);

  const MetricGraph back = remove_edge(chord, 9);
  CHECK(equivalent(back, sq));
  const MetricGraph cut = detach_vertex(sq, 0);
  CHECK(cut.vertex_count() == 4);
  CHECK(cut.degree(0) == 0);
  CHECK(cut.edge_count() == 2);
}

TEST_CASE("equivalence ignores numbering") {
  GraphBuilder a;
  a.add_vertex("p");
  a.add_vertex("q");
  a.add_edge(0, 1, 1.0);
  a.add_edge(1, 1, 2.0);
  GraphBuilder b;
  b.add_vertex("p");
  b.add_vertex("q");
  b.add_edge(1, 1, 2.0);
  b.add_edge(1, 0, 1.0);
  CHECK(equivalent(a.build(), b.build()));
  b.add_edge(0, 1, 1.0);
  CHECK_FALSE(equivalent(a.build(), b.build()));
}
