#include "ttp/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"

namespace ttp::io {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << text;
}

double parse_positive_weight(const std::string& token, const std::string& origin,
                             std::size_t line_no) {
  double w = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, w);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(origin + ":" + std::to_string(line_no) +
                     ": weight does not parse: '" + token + "'");
  }
  if (!(w > 0.0)) {
    throw ParseError(origin + ":" + std::to_string(line_no) +
                     ": weight must be positive: '" + token + "'");
  }
  return w;
}

}  // namespace

std::optional<VertexId> LabeledGraph::vertex_by_label(
    const std::string& label) const {
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] == label) return static_cast<VertexId>(v);
  }
  return std::nullopt;
}

LabeledGraph parse_edge_list(const std::string& text, const std::string& origin) {
  std::vector<std::string> labels;
  std::map<std::string, VertexId> ids;
  auto intern = [&](const std::string& label) {
    auto it = ids.find(label);
    if (it != ids.end()) return it->second;
    const VertexId id = static_cast<VertexId>(labels.size());
    labels.push_back(label);
    ids.emplace(label, id);
    return id;
  };

  std::vector<WeightedEdge> edges;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": expected 'u<TAB>v<TAB>weight'");
    }
    const double w = parse_positive_weight(fields[2], origin, line_no);
    const VertexId u = intern(fields[0]);
    const VertexId v = intern(fields[1]);
    if (u == v) {
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": self-loop on '" + fields[0] + "'");
    }
    edges.push_back(WeightedEdge{u, v, w});
  }
  if (edges.empty()) {
    throw ParseError(origin + ": no edges");
  }
  LabeledGraph out;
  out.graph = WeightedGraph::from_edge_list(labels.size(), edges);
  out.labels = std::move(labels);
  return out;
}

LabeledGraph load_edge_list(const std::filesystem::path& path) {
  return parse_edge_list(read_file(path), path.string());
}

std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

std::string to_edge_list_string(const LabeledGraph& g) {
  std::vector<std::string> lines;
  lines.reserve(g.graph.edge_count());
  for (const WeightedEdge& e : g.graph.edges()) {
    const std::string& lu = g.labels.at(e.u);
    const std::string& lv = g.labels.at(e.v);
    const std::string& first = lu <= lv ? lu : lv;
    const std::string& second = lu <= lv ? lv : lu;
    lines.push_back(first + "\t" + second + "\t" + format_weight(e.weight));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

void save_edge_list(const LabeledGraph& g, const std::filesystem::path& path) {
  write_file(path, to_edge_list_string(g));
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

LabeledGraph parse_matrix_market(const std::string& text,
                                 const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(origin + ": empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_ws(line);
  if (header.size() != 5 || header[0] != "%%MatrixMarket" ||
      lower(header[1]) != "matrix" || lower(header[2]) != "coordinate") {
    throw ParseError(origin + ":1: unsupported MatrixMarket header");
  }
  const std::string field = lower(header[3]);
  const std::string symmetry = lower(header[4]);
  if (field != "real" && field != "pattern" && field != "integer") {
    throw ParseError(origin + ":1: unsupported field type '" + field + "'");
  }
  if (symmetry != "symmetric") {
    throw ParseError(origin + ":1: unsupported symmetry '" + symmetry +
                     "' (symmetric required)");
  }
  const bool has_value = field != "pattern";

  std::size_t rows = 0, cols = 0, entries = 0;
  bool have_dims = false;
  std::vector<WeightedEdge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '%') continue;
    auto fields = split_ws(line);
    if (!have_dims) {
      if (fields.size() != 3) {
        throw ParseError(origin + ":" + std::to_string(line_no) +
                         ": expected 'rows cols nnz'");
      }
      rows = std::stoul(fields[0]);
      cols = std::stoul(fields[1]);
      entries = std::stoul(fields[2]);
      if (rows != cols) {
        throw ParseError(origin + ":" + std::to_string(line_no) +
                         ": matrix must be square");
      }
      have_dims = true;
      continue;
    }
    if (fields.size() != (has_value ? 3u : 2u)) {
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": malformed entry");
    }
    const std::size_t i = std::stoul(fields[0]);
    const std::size_t j = std::stoul(fields[1]);
    if (i < 1 || j < 1 || i > rows || j > cols) {
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": index out of range");
    }
    if (i < j) {
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": entry above the diagonal in a symmetric matrix");
    }
    double w = 1.0;
    if (has_value) {
      w = std::stod(fields[2]);
      if (w == 0.0) continue;  // explicit zeros carry no edge
      if (w < 0.0) {
        throw ParseError(origin + ":" + std::to_string(line_no) +
                         ": negative weight");
      }
    }
    if (i == j) continue;  // vertex self-weight, not an edge
    edges.push_back(WeightedEdge{static_cast<VertexId>(i - 1),
                                 static_cast<VertexId>(j - 1), w});
  }
  if (!have_dims) throw ParseError(origin + ": missing size line");
  (void)entries;
  LabeledGraph out;
  out.graph = WeightedGraph::from_edge_list(rows, edges);
  out.labels.reserve(rows);
  for (std::size_t v = 0; v < rows; ++v) out.labels.push_back(std::to_string(v));
  return out;
}

LabeledGraph load_matrix_market(const std::filesystem::path& path) {
  return parse_matrix_market(read_file(path), path.string());
}

std::string to_dot_string(const TreePosition& pos,
                          const std::vector<std::string>& labels,
                          std::span<const EdgeId> highlight) {
  std::vector<std::uint8_t> bold(pos.edge_count(), 0);
  for (EdgeId e : highlight) bold.at(e) = 1;

  std::ostringstream out;
  out << "graph tree_position {\n";
  out << "  node [fontsize=10];\n";
  for (NodeId n = 0; n < pos.node_count(); ++n) {
    if (pos.is_interior(n)) {
      out << "  n" << n << " [shape=circle, label=\"\", width=0.12];\n";
    }
  }
  for (VertexId v = 0; v < pos.leaf_count(); ++v) {
    const std::string label =
        v < labels.size() ? labels[v] : std::to_string(v);
    out << "  n" << pos.leaf_of_vertex(v) << " [shape=box, label=\"" << label
        << "\"];\n";
  }
  for (EdgeId e = 0; e < pos.edge_count(); ++e) {
    const TreeEdgeRec& rec = pos.edge(e);
    out << "  n" << rec.a << " -- n" << rec.b << " [label=\""
        << format_weight(pos.width(e)) << "\"";
    if (bold[e]) out << ", style=bold";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

void export_dot(const TreePosition& pos, const std::vector<std::string>& labels,
                const std::filesystem::path& path,
                std::span<const EdgeId> highlight) {
  write_file(path, to_dot_string(pos, labels, highlight));
}

WeightedGraph gen_planted(std::uint64_t seed, std::span<const std::size_t> blocks,
                          double p_in, double p_out, double w) {
  if (!(w > 0.0)) throw Error("edge weight must be positive");
  if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0) {
    throw Error("probabilities must lie in [0, 1]");
  }
  std::size_t n = 0;
  for (std::size_t b : blocks) n += b;
  if (n < 2) throw Error("generator needs at least two vertices");
  std::vector<std::uint32_t> block_of(n);
  std::size_t v = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t k = 0; k < blocks[b]; ++k) block_of[v++] = static_cast<std::uint32_t>(b);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<WeightedEdge> edges;
  for (VertexId a = 0; a < n; ++a) {
    for (VertexId b = a + 1; b < n; ++b) {
      const double p = block_of[a] == block_of[b] ? p_in : p_out;
      if (unit(rng) < p) edges.push_back(WeightedEdge{a, b, w});
    }
  }
  return WeightedGraph::from_edge_list(n, edges);
}

LabeledGraph barbell_fixture() {
  const std::vector<WeightedEdge> edges{
      {0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0},
      {3, 4, 1.0}, {3, 5, 1.0}, {4, 5, 1.0},
      {2, 3, 1.0},
  };
  LabeledGraph out;
  out.graph = WeightedGraph::from_edge_list(6, edges);
  for (int v = 0; v < 6; ++v) out.labels.push_back(std::to_string(v));
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string digest_hex(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

namespace {

const char* scan_name(ScanStrategy s) {
  return s == ScanStrategy::FirstImprovement ? "first" : "best";
}

const char* init_name(InitKind k) {
  return k == InitKind::Caterpillar ? "caterpillar" : "random";
}

}  // namespace

std::string build_run_report(const RunReportRequest& req) {
  using nlohmann::json;
  if (!req.graph || !req.config || !req.result || !req.position) {
    throw Error("incomplete run report request");
  }
  json doc;
  doc["command"] = req.command;
  doc["input"] = {
      {"path", req.input_path},
      {"digest", req.input_digest},
      {"vertices", req.graph->graph.vertex_count()},
      {"edges", req.graph->graph.edge_count()},
      {"total_weight", req.graph->graph.total_weight()},
  };
  // Worker count and wall-clock timing are execution details: reports must
  // be byte-identical for identical (input, flags, seed).
  doc["config"] = {
      {"epsilon", req.config->epsilon},
      {"scan", scan_name(req.config->scan)},
      {"init", init_name(req.config->init)},
      {"seed", req.config->seed},
      {"max_iterations", req.config->max_iterations},
      {"parallel", req.config->parallel_scan},
  };
  json trace = json::array();
  for (const TraceStep& step : req.result->trace) {
    trace.push_back({
        {"step", step.index},
        {"shift", {{"x", step.shift.x}, {"y", step.shift.y}}},
        {"via_exhaustive", step.via_exhaustive},
        {"head_before", step.head_before},
        {"head_after", step.head_after},
    });
  }
  doc["trace"] = std::move(trace);
  doc["iterations"] = req.result->iterations;
  doc["certified_thin"] = req.result->certified_thin;
  doc["final_profile"] = req.position->width_profile().widths();

  if (req.clusters) {
    json pairs = json::array();
    for (const PinchClusterPair& p : req.clusters->pairs) {
      json side_a = json::array();
      for (VertexId v : p.cluster_a) side_a.push_back(req.graph->labels.at(v));
      json side_b = json::array();
      for (VertexId v : p.cluster_b) side_b.push_back(req.graph->labels.at(v));
      pairs.push_back({
          {"edge_id", p.edge},
          {"boundary", p.boundary},
          {"zero_boundary", p.boundary <= 0.0},
          {"side_a", std::move(side_a)},
          {"side_b", std::move(side_b)},
      });
    }
    doc["clusters"] = std::move(pairs);
  }
  return doc.dump(2) + "\n";
}

}  // namespace ttp::io
