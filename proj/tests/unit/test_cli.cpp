#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "entrograph/io.hpp"
#include "entrograph/persistence.hpp"
#include "oracles.hpp"

using namespace entrograph;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "entrograph");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Files {
 public:
  Files() : dir_(fs::temp_directory_path() / "entrograph_cli_test") { fs::create_directories(dir_); }
  ~Files() { fs::remove_all(dir_); }
  std::string put(const std::string& name, const std::string& content) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

int count_lines_starting(const std::string& s, const std::string& prefix) {
  std::istringstream in(s);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST_CASE("entropy command") {
  Files f;
  const Run k4 = run({"entropy", f.put("k4.txt", to_text(oracle::complete4()))});
  CHECK(k4.code == cli::kOk);
  CHECK(k4.out.find("h = 0.693147") != std::string::npos);
  CHECK(k4.err.empty());

  const Run tree = run({"entropy", f.put("tree.txt", to_text(oracle::path(4)))});
  CHECK(tree.code == cli::kOk);
  CHECK(tree.out.rfind("h = 0\n", 0) == 0);

  const Run bad = run({"entropy", f.put("bad.json", "{\"edges\": [")});
  CHECK(bad.code == cli::kInvalidInput);
  CHECK(bad.out.empty());
  CHECK_FALSE(bad.err.empty());

  const Run json = run({"entropy", f.path("k4.txt"), "--format", "json"});
  CHECK(json.code == cli::kOk);
  CHECK(json.out.find("\"per_component\"") != std::string::npos);

  CHECK(run({"entropy", f.put("neg.txt", "a b -1\n")}).code == cli::kInvalidInput);
  CHECK(run({"entropy", f.path("missing.txt")}).code == cli::kInvalidInput);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
}

TEST_CASE("solver failure exit code") {
  Files f;
  const Run r = run({"entropy", f.put("k4.txt", to_text(oracle::irregular())), "--max-iter", "1", "--tol", "1e-300"});
  CHECK(r.code == cli::kSolverFailure);
}

TEST_CASE("add-edge command") {
  Files f;
  const std::string sq = f.put("c4.json", to_json(oracle::square()));
  const Run r = run({"add-edge", sq, "a", "c", "1"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("h_prime_incremental = 0.41961762499") != std::string::npos);
  CHECK(r.out.find("discrepancy = ") != std::string::npos);

  const Run adj = run({"add-edge", sq, "a", "b", "1"});
  CHECK(adj.code == cli::kPrecondition);
  CHECK(adj.err.find("adjacent") != std::string::npos);
  CHECK(run({"add-edge", sq, "a", "zz", "1"}).code == cli::kPrecondition);
}

TEST_CASE("add-vertex command") {
  Files f;
  const std::string sq = f.put("c4.json", to_json(oracle::square()));
  const Run r = run({"add-vertex", sq, "a:1", "b:1", "c:1"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("h_prime_transfer_da") != std::string::npos);
  CHECK(r.out.find("discrepancy_paper_f_direct") != std::string::npos);
  CHECK(run({"add-vertex", sq, "a:1", "c:1"}).code == cli::kPrecondition);
  CHECK(run({"add-vertex", sq, "a:1", "b", "c:1"}).code == cli::kInvalidInput);
}

TEST_CASE("persistence command") {
  Files f;
  const Run tree = run({"persistence", f.put("tree.txt", to_text(oracle::path(4)))});
  CHECK(tree.code == cli::kOk);
  const EntropyCurve zero = import_curve(tree.out, CurveFormat::Csv);
  REQUIRE(zero.steps.size() == 1);
  CHECK(zero.steps[0].h == 0.0);

  const std::string chord = f.put("k4c.txt", "a b 1\nb c 1\nc d 1\nd a 1\na c 2\n");
  const Run csv = run({"persistence", chord});
  CHECK(csv.code == cli::kOk);
  CHECK(import_curve(csv.out, CurveFormat::Csv).steps.size() == 2);

  const std::string out = f.path("curve.json");
  const Run json = run({"persistence", chord, "--format", "json", "--strategy", "direct", "--out", out});
  CHECK(json.code == cli::kOk);
  std::ifstream in(out);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const EntropyCurve c = import_curve(text, CurveFormat::Json);
  REQUIRE(c.steps.size() == 2);
  CHECK(c.steps[1].method == StepMethod::Direct);

  CHECK(run({"persistence", chord, "--strategy", "fastest"}).code != cli::kOk);

  const std::string big = f.put("big.txt", to_text(oracle::random_hyperbolic(3, 8, 20)));
  const Run bench = run({"persistence", big, "--bench"});
  CHECK(bench.code == cli::kOk);
  CHECK(bench.out.find("crossover") != std::string::npos);
}

TEST_CASE("verify command") {
  Files f;
  const Run rose = run({"verify", f.put("rose.txt", to_text(oracle::rose(2)))});
  CHECK(rose.code == cli::kOk);
  CHECK(count_lines_starting(rose.out, "FAIL") == 0);
  CHECK(count_lines_starting(rose.out, "PASS") >= 8);

  const Run theta = run({"verify", f.put("theta.txt", to_text(oracle::theta()))});
  CHECK(theta.code == cli::kOk);
  CHECK(count_lines_starting(theta.out, "FAIL") == 0);

  const Run capped = run({"verify", f.put("k4.txt", to_text(oracle::complete4())), "--cap", "10"});
  CHECK(capped.code == cli::kOk);
  CHECK(count_lines_starting(capped.out, "SKIPPED") >= 4);
  CHECK(count_lines_starting(capped.out, "FAIL") == 0);

  const Run irregular = run({"verify", f.put("irr.txt", to_text(oracle::irregular()))});
  CHECK(irregular.code == cli::kOk);
  CHECK(count_lines_starting(irregular.out, "INFO factorization") == 1);
}

TEST_CASE("generate command") {
  Files f;
  const Run a = run({"generate", "--seed", "1", "--vertices", "5", "--edges", "8"});
  const Run b = run({"generate", "--seed", "1", "--vertices", "5", "--edges", "8"});
  CHECK(a.code == cli::kOk);
  CHECK(a.out == b.out);
  CHECK(parse_graph(a.out).edge_count() == 8);

  const Run lattice = run({"generate", "--lengths", "lattice", "--format", "text"});
  for (const Edge& e : parse_graph(lattice.out).edges()) CHECK(e.length == 1.0);

  const Run bad = run({"generate", "--vertices", "6", "--edges", "3"});
  CHECK(bad.code == cli::kPrecondition);

  const std::string out = f.path("g.json");
  CHECK(run({"generate", "--seed", "4", "--out", out}).code == cli::kOk);
  CHECK(fs::exists(out));
}

TEST_CASE("count command") {
  Files f;
  const std::string rose = f.put("rose.txt", to_text(oracle::rose(2)));
  const Run r = run({"count", rose, "--kind", "paths", "--source", "x", "--r", "3.5"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.rfind("length,count\n1,4\n2,16\n3,52\n", 0) == 0);
  CHECK(r.out.find("N(3.5) = 52") != std::string::npos);
  const Run capped = run({"count", rose, "--source", "x", "--r", "40", "--cap", "100"});
  CHECK(capped.code == cli::kSolverFailure);
}
