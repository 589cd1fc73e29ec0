#include "entrograph/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "entrograph/error.hpp"

namespace entrograph {

GraphFormat detect_format(std::string_view content) noexcept {
  for (char c : content) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? GraphFormat::Json : GraphFormat::Text;
  }
  return GraphFormat::Text;
}

namespace {

std::string id_of(const nlohmann::json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw Error(ErrorCode::ParseError, std::string(what) + " must be a string or an integer");
}

double parse_length(std::string_view token, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": bad length '" + std::string(token) + "'");
  }
  return value;
}

void check_length(double length, const std::string& where) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::NonPositiveLength, where + ": length must be positive and finite");
  }
}

}  // namespace

MetricGraph parse_graph_json(std::string_view content) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "graph document must be an object");

  GraphBuilder b;
  const bool declared = doc.contains("vertices");
  if (declared) {
    if (!doc["vertices"].is_array()) throw Error(ErrorCode::ParseError, "\"vertices\" must be an array");
    for (const auto& v : doc["vertices"]) {
      try {
        b.add_vertex(id_of(v, "vertex id"));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        throw Error(ErrorCode::InvalidGraph, e.what());
      }
    }
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    throw Error(ErrorCode::ParseError, "missing \"edges\" array");
  }
  std::size_t k = 0;
  for (const auto& e : doc["edges"]) {
    const std::string where = "edge " + std::to_string(k++);
    if (!e.is_object() || !e.contains("u") || !e.contains("v") || !e.contains("length")) {
      throw Error(ErrorCode::ParseError, where + ": needs \"u\", \"v\" and \"length\"");
    }
    if (!e["length"].is_number()) throw Error(ErrorCode::ParseError, where + ": length must be a number");
    const std::string u = id_of(e["u"], "endpoint");
    const std::string v = id_of(e["v"], "endpoint");
    const double length = e["length"].get<double>();
    check_length(length, where);
    const std::size_t before = b.vertex_count();
    const VertexId a = b.vertex(u);
    const VertexId c = b.vertex(v);
    // Unknown ids are an error when the vertex list is explicit.
    if (declared && b.vertex_count() != before) {
      throw Error(ErrorCode::ParseError, where + ": endpoint not listed in \"vertices\"");
    }
    b.add_edge(a, c, length);
  }
  MetricGraph g = b.build();
  require_valid(g);
  return g;
}

MetricGraph parse_graph_text(std::string_view content) {
  GraphBuilder b;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t end = std::min(content.find('\n', pos), content.size());
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    if (tokens.empty()) continue;
    if (tokens.size() == 1) {
      b.vertex(tokens[0]);
      continue;
    }
    if (tokens.size() != 3) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected 'u v length'");
    }
    const double length = parse_length(tokens[2], line_no);
    check_length(length, "line " + std::to_string(line_no));
    const VertexId u = b.vertex(tokens[0]);
    const VertexId v = b.vertex(tokens[1]);
    b.add_edge(u, v, length);
  }
  MetricGraph g = b.build();
  require_valid(g);
  return g;
}

MetricGraph parse_graph(std::string_view content, GraphFormat format) {
  return format == GraphFormat::Json ? parse_graph_json(content) : parse_graph_text(content);
}

MetricGraph parse_graph(std::string_view content) { return parse_graph(content, detect_format(content)); }

MetricGraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();
  if (path.extension() == ".json") return parse_graph_json(content);
  return parse_graph(content);
}

std::string to_json(const MetricGraph& graph) {
  nlohmann::ordered_json doc;
  doc["vertices"] = nlohmann::ordered_json::array();
  for (const auto& n : graph.names()) doc["vertices"].push_back(n);
  doc["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : graph.edges()) {
    nlohmann::ordered_json j;
    j["u"] = graph.name(e.u);
    j["v"] = graph.name(e.v);
    j["length"] = e.length;
    doc["edges"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string to_text(const MetricGraph& graph) {
  for (const auto& n : graph.names()) {
    const bool bad = n.empty() || n.find('#') != std::string::npos ||
                     std::any_of(n.begin(), n.end(),
                                 [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (bad) {
      throw Error(ErrorCode::InvalidGraph, "vertex name '" + n + "' cannot be written as an edge list");
    }
  }
  std::string out = "# u v length\n";
  for (const auto& n : graph.names()) out += n + "\n";
  char buf[64];
  for (const Edge& e : graph.edges()) {
    std::snprintf(buf, sizeof buf, " %.17g\n", e.length);
    out += graph.name(e.u) + " " + graph.name(e.v) + buf;
  }
  return out;
}

std::string serialize(const MetricGraph& graph, GraphFormat format) {
  return format == GraphFormat::Json ? to_json(graph) : to_text(graph);
}

}  // namespace entrograph
