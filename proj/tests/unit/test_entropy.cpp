#include <doctest.h>

#include <cmath>

#include "entrograph/counting.hpp"
#include "entrograph/entropy.hpp"
#include "entrograph/error.hpp"
#include "oracles.hpp"

using namespace entrograph;

TEST_CASE("closed-form entropies") {
  for (int k = 1; k <= 5; ++k) {
    CAPTURE(k);
    CHECK(volume_entropy(oracle::rose(k)).h == doctest::Approx(std::log(2.0 * k - 1)).epsilon(1e-11));
  }
  CHECK(volume_entropy(oracle::theta()).h == doctest::Approx(std::log(2.0)).epsilon(1e-11));
  CHECK(volume_entropy(oracle::complete4()).h == doctest::Approx(std::log(2.0)).epsilon(1e-11));
  // Theta with lengths a, b, c: the reduced graph is itself, and with all
  // lengths 2 the rate halves.
  CHECK(volume_entropy(oracle::theta(2, 2, 2)).h == doctest::Approx(std::log(2.0) / 2).epsilon(1e-11));
}

TEST_CASE("trees and single cycles have zero entropy") {
  CHECK(volume_entropy(oracle::path(6)).h == 0.0);
  CHECK(volume_entropy(oracle::square()).h == 0.0);
  CHECK(volume_entropy(MetricGraph{}).h == 0.0);
  CHECK(volume_entropy(oracle::rose(1)).h == 0.0);
}

TEST_CASE("entropy is the max over components") {
  GraphBuilder b(oracle::rose(2));
  const VertexId u = b.add_vertex("u");
  const VertexId v = b.add_vertex("v");
  for (int i = 0; i < 3; ++i) b.add_edge(u, v, 0.5);
  const EntropyResult r = volume_entropy(b.build());
  CHECK(r.h == doctest::Approx(2 * std::log(2.0)).epsilon(1e-11));
  REQUIRE(r.per_component.size() == 2);
  CHECK(r.per_component[0].h == doctest::Approx(std::log(3.0)).epsilon(1e-11));
  CHECK(r.per_component[1].kind == ComponentKind::Hyperbolic);
}

TEST_CASE("rho curve closed forms") {
  const auto rose = rho_curve(oracle::rose(2), {0.0, std::log(3.0), 2 * std::log(3.0)});
  CHECK(rose[0].second == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(rose[1].second == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rose[2].second == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(rho_curve(oracle::path(4), {0.0, 1.0})[1].second == 0.0);
  CHECK(rho_curve(oracle::complete4(), {std::log(2.0)})[0].second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("root methods agree") {
  const MetricGraph g = oracle::irregular();
  const double ref = oracle::entropy(g);
  for (RootMethod m : {RootMethod::Newton, RootMethod::Bisection, RootMethod::Hybrid}) {
    EntropyOptions opt;
    opt.method = m;
    const EntropyResult r = volume_entropy(g, opt);
    CAPTURE(to_string(m));
    CHECK(r.h == doctest::Approx(ref).epsilon(1e-9));
    CHECK(r.residual <= 1e-9);
    CHECK(r.t_lo <= r.h);
    CHECK(r.t_hi >= r.h);
  }
}

TEST_CASE("property: solver agrees with the dense-eigensolver bisection") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const MetricGraph g = oracle::random_hyperbolic(seed, 2 + seed % 5, 5 + seed % 6, 0.3, 3.0, seed % 2 == 0);
    const double h = volume_entropy(g).h;
    CHECK(h == doctest::Approx(oracle::entropy(g)).epsilon(1e-9));
    CHECK(h <= trivial_upper_bound(g) + 1e-12);
    CHECK(h > 0.0);
  }
}

TEST_CASE("warm start floor gives the same root") {
  const MetricGraph g = oracle::irregular();
  const double h = volume_entropy(g).h;
  EntropyOptions opt;
  CHECK(volume_entropy(g, opt, 0.9 * h).h == doctest::Approx(h).epsilon(1e-11));
  CHECK(volume_entropy(g, opt, h).h == doctest::Approx(h).epsilon(1e-11));
  // A floor above the root is detected.
  CHECK(volume_entropy(g, opt, 2 * h).h == doctest::Approx(h).epsilon(1e-11));
}

TEST_CASE("property: scaling covariance and subdivision invariance") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    CAPTURE(seed);
    const MetricGraph g = oracle::random_hyperbolic(seed, 4, 8);
    const double h = volume_entropy(g).h;
    for (double s : {0.25, 3.0, 17.5}) {
      CHECK(volume_entropy(oracle::scaled(g, s)).h == doctest::Approx(h / s).epsilon(1e-10));
    }
    CHECK(volume_entropy(oracle::subdivided(g, 3)).h == doctest::Approx(h).epsilon(1e-10));
    CHECK(volume_entropy(reduce(g).graph).h == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("property: rho(B(t)) is strictly decreasing and log-convex") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const MetricGraph g = oracle::random_hyperbolic(seed, 5, 9);
    std::vector<double> ts;
    for (int k = 0; k <= 40; ++k) ts.push_back(0.05 * k);
    const auto curve = rho_curve(g, ts);
    for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k].second < curve[k - 1].second);
    for (std::size_t k = 1; k + 1 < curve.size(); ++k) {
      const double second = std::log(curve[k + 1].second) - 2 * std::log(curve[k].second) +
                            std::log(curve[k - 1].second);
      CHECK(second >= -1e-12);
    }
  }
}

TEST_CASE("unit radius root on a pattern") {
  const TransferPattern p = transfer_pattern(oracle::rose(3), WalkMode::NonBacktracking);
  const RootResult r = unit_radius_root(p, 0.0, 5.0);
  CHECK(r.t == doctest::Approx(std::log(5.0)).epsilon(1e-11));
  CHECK(r.t_lo <= r.t);
  CHECK(r.t_hi >= r.t);
  CHECK(hyperbolic_entropy(oracle::complete4()).t == doctest::Approx(std::log(2.0)).epsilon(1e-11));
}

TEST_CASE("entropy from counts") {
  const MetricGraph rose = oracle::rose(2);
  EnumerationSpec spec;
  spec.horizon = 14.0;
  const CountProfile p = enumerate(rose, spec);
  const CountEstimate e = entropy_from_counts(p, 7.0, 14.0);
  CHECK(std::abs(e.h - std::log(3.0)) <= 0.05 * std::log(3.0));
  CHECK(e.samples >= 4);

  // Linear growth on a cycle: the slope is at most log(r2) / r2.
  EnumerationSpec cyc;
  cyc.horizon = 200.0;
  const CountProfile c = enumerate(oracle::square(), cyc);
  const CountEstimate flat = entropy_from_counts(c, 100.0, 200.0);
  CHECK(flat.h >= 0.0);
  CHECK(flat.h <= std::log(200.0) / 200.0);

  CHECK_THROWS_AS(entropy_from_counts(p, 7.0, 20.0), Error);
  CHECK_THROWS_AS(entropy_from_counts(p, 9.0, 9.0), Error);
}

TEST_CASE("slope oracle cross-checks the closed forms") {
  // K4: N(r) from one vertex is 3 * 2^(k-1) for integer k < r.
  EnumerationSpec spec;
  spec.horizon = 20.5;
  const CountProfile p = enumerate(oracle::complete4(), spec);
  CHECK(p.count_below(20.5) == 3 * ((1u << 20) - 1));
  const CountEstimate e = entropy_from_counts(p, 10.5, 20.5);
  CHECK(std::abs(e.h - std::log(2.0)) <= e.band + 1e-12);
}
