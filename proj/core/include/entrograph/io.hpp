#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "entrograph/graph.hpp"

namespace entrograph {

enum class GraphFormat { Json, Text };

/// JSON documents start with '{'; anything else is read as an edge list.
GraphFormat detect_format(std::string_view content) noexcept;

/// {"vertices": [ids], "edges": [{"u": id, "v": id, "length": number}]}.
/// Ids may be strings or integers. "vertices" is optional; when present every
/// edge endpoint must be listed. Throws Error(ParseError) on malformed input
/// and Error(InvalidGraph) / Error(NonPositiveLength) on invalid content.
MetricGraph parse_graph_json(std::string_view content);

/// One "u v length" triple per line; a line holding a single id declares a
/// vertex (possibly isolated). '#' starts a comment.
MetricGraph parse_graph_text(std::string_view content);

MetricGraph parse_graph(std::string_view content, GraphFormat format);
MetricGraph parse_graph(std::string_view content);

/// Throws Error(ParseError) when the file cannot be read.
MetricGraph read_graph_file(const std::filesystem::path& path);

std::string to_json(const MetricGraph& graph);
/// Throws Error(InvalidGraph) for vertex names the edge list cannot carry.
std::string to_text(const MetricGraph& graph);
std::string serialize(const MetricGraph& graph, GraphFormat format);

}  // namespace entrograph
