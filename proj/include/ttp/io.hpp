#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ttp/clustering.hpp"
#include "ttp/graph.hpp"
#include "ttp/shift.hpp"
#include "ttp/tree_position.hpp"

namespace ttp::io {

// Graph plus the external string label of each dense vertex id.
struct LabeledGraph {
  WeightedGraph graph;
  std::vector<std::string> labels;

  std::optional<VertexId> vertex_by_label(const std::string& label) const;
};

// Tab-separated "u<TAB>v<TAB>weight" lines; '#' starts a comment line; labels
// are arbitrary strings mapped to dense ids in first-appearance order.
// Duplicate pairs merge by weight summation.  Throws ParseError with a line
// number on malformed input, and on files with no edges.
LabeledGraph load_edge_list(const std::filesystem::path& path);
LabeledGraph parse_edge_list(const std::string& text,
                             const std::string& origin = "<memory>");

// Canonical serialization: one line per merged edge, endpoint labels in
// lexicographic order, lines sorted lexicographically, weights printed with
// 17 significant digits.  load(save(g)) reproduces the same labeled graph.
std::string to_edge_list_string(const LabeledGraph& g);
void save_edge_list(const LabeledGraph& g, const std::filesystem::path& path);

// Matrix Market "coordinate real|pattern|integer symmetric" readers; entries
// must lie on or below the diagonal.  Diagonal entries and explicit zeros are
// skipped.  Vertex labels are the 0-based decimal ids.
LabeledGraph load_matrix_market(const std::filesystem::path& path);
LabeledGraph parse_matrix_market(const std::string& text,
                                 const std::string& origin = "<memory>");

// Graphviz rendering of a tree position: interior nodes as unlabeled open
// circles, leaves labeled by graph vertex, every edge labeled with its width.
// Edges listed in `highlight` are drawn bold.  Deterministic output.
std::string to_dot_string(const TreePosition& pos,
                          const std::vector<std::string>& labels,
                          std::span<const EdgeId> highlight = {});
void export_dot(const TreePosition& pos, const std::vector<std::string>& labels,
                const std::filesystem::path& path,
                std::span<const EdgeId> highlight = {});

// Planted-partition generator: vertices grouped into blocks of the given
// sizes; each intra-block pair draws an edge with probability p_in, each
// cross pair with p_out, all of weight w.  Pair draws happen in a fixed
// order, so output depends only on the arguments.
WeightedGraph gen_planted(std::uint64_t seed, std::span<const std::size_t> blocks,
                          double p_in, double p_out, double w);

// Two unit triangles {0,1,2} and {3,4,5} joined by the bridge (2,3).
LabeledGraph barbell_fixture();

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

// 17-significant-digit decimal that round-trips the double exactly.
std::string format_weight(double w);

struct RunReportRequest {
  std::string command;          // "thin" or "cluster"
  std::string input_path;      // as given on the command line
  std::string input_digest;    // digest_hex of the canonical edge list
  const LabeledGraph* graph = nullptr;
  const ThinConfig* config = nullptr;
  const ThinResult* result = nullptr;
  const TreePosition* position = nullptr;
  const ClusterReport* clusters = nullptr;  // cluster command only
};

// Deterministic JSON document: identical input, flags and seed produce
// identical bytes.  Wall-clock timing is intentionally not part of the
// report; the CLI prints timing to stderr instead.
std::string build_run_report(const RunReportRequest& req);

}  // namespace ttp::io
