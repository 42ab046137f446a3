#include "magneto/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace magneto {

namespace fs = std::filesystem;

namespace {

std::ifstream open_required(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing dataset file: " + path.string());
  return in;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view field, const fs::path& file, std::size_t line_no) {
  field = trim(field);
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": cannot parse '" + std::string(field) + "'");
  }
  return value;
}

std::vector<DirectedGraph::Edge> read_edges(const fs::path& path, Index base) {
  auto in = open_required(path);
  std::vector<DirectedGraph::Edge> edges;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto sep = text.find_first_of("\t ");
    if (sep == std::string_view::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 'src<TAB>dst'");
    }
    const auto src = parse_number<Index>(text.substr(0, sep), path, line_no) - base;
    const auto dst = parse_number<Index>(text.substr(sep + 1), path, line_no) - base;
    edges.emplace_back(src, dst);
  }
  return edges;
}

LabelVector read_labels(const fs::path& path) {
  auto in = open_required(path);
  LabelVector labels;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto text = trim(line);
    if (text.empty()) continue;
    labels.push_back(parse_number<int>(text, path, line_no));
  }
  return labels;
}

RealMatrix read_features(const fs::path& path) {
  auto in = open_required(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto text = trim(line);
    if (text.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      row.push_back(parse_number<double>(text.substr(start, comma - start), path, line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(rows.front().size()) + " columns, found " + std::to_string(row.size()));
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": non-finite value");
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Index>(rows.size());
  const Index c = rows.empty() ? 0 : static_cast<Index>(rows.front().size());
  RealMatrix x(n, c);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < c; ++j) x(i, j) = rows[i][j];
  }
  return x;
}

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  DatasetManifest m;
  if (doc.contains("nodes")) m.nodes = doc.at("nodes").get<Index>();
  if (doc.contains("edges")) m.edges = doc.at("edges").get<Index>();
  if (doc.contains("features")) m.features = doc.at("features").get<Index>();
  if (doc.contains("classes")) m.classes = doc.at("classes").get<int>();
  return m;
}

void check_count(const char* what, std::optional<Index> expected, Index actual) {
  if (expected && *expected != actual) {
    throw std::runtime_error(std::string("manifest mismatch for ") + what + ": expected " + std::to_string(*expected) +
                             ", found " + std::to_string(actual));
  }
}

}  // namespace

DatasetFormat parse_dataset_format(const std::string& id) {
  if (id == "zero-based" || id == "tsv" || id.empty()) return DatasetFormat::ZeroBased;
  if (id == "one-based") return DatasetFormat::OneBased;
  throw std::invalid_argument("unknown dataset format '" + id + "' (expected zero-based or one-based)");
}

void row_normalize(RealMatrix& features) {
  for (Index i = 0; i < features.rows(); ++i) {
    const double norm = features.row(i).cwiseAbs().sum();
    if (norm > 0.0) features.row(i) /= norm;
  }
}

Dataset load_dataset(const fs::path& dir, const LoadOptions& options) {
  Dataset ds;
  auto clean = fs::absolute(dir).lexically_normal();
  if (clean.filename().empty()) clean = clean.parent_path();  // trailing slash
  ds.name = clean.filename().string();

  ds.labels = read_labels(dir / "labels.csv");
  ds.features = read_features(dir / "features.csv");
  const auto n = static_cast<Index>(ds.labels.size());
  if (ds.features.rows() != n) {
    throw std::runtime_error("features.csv has " + std::to_string(ds.features.rows()) + " rows but labels.csv has " +
                             std::to_string(n));
  }
  const Index base = options.format == DatasetFormat::OneBased ? 1 : 0;
  ds.graph = DirectedGraph(n, read_edges(dir / "edges.tsv", base));
  if (options.row_normalize) row_normalize(ds.features);

  if (const auto manifest_path = dir / "manifest.json"; fs::exists(manifest_path)) {
    const auto m = read_manifest(manifest_path);
    check_count("nodes", m.nodes, n);
    check_count("edges", m.edges, ds.graph.num_edges());
    check_count("features", m.features, ds.features.cols());
    if (m.classes) check_count("classes", Index{*m.classes}, num_classes(ds.labels));
  }
  return ds;
}

}  // namespace magneto
