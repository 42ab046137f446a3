#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "magneto/dense.hpp"
#include "magneto/graph.hpp"

namespace magneto {

/// How node ids in `edges.tsv` map to row indices of the feature/label files.
enum class DatasetFormat {
  ZeroBased,  // ids are already 0..n-1
  OneBased,   // ids are 1..n
};

DatasetFormat parse_dataset_format(const std::string& id);

struct DatasetManifest {
  std::optional<Index> nodes;
  std::optional<Index> edges;
  std::optional<Index> features;
  std::optional<int> classes;
};

struct Dataset {
  std::string name;
  DirectedGraph graph;
  RealMatrix features;  // n x c, raw values unless row-normalized at load
  LabelVector labels;
};

struct LoadOptions {
  DatasetFormat format = DatasetFormat::ZeroBased;
  bool row_normalize = false;
};

/// Reads `edges.tsv`, `features.csv`, `labels.csv` and, if present,
/// `manifest.json` from `dir`. The node count comes from `labels.csv`.
///
/// Throws std::runtime_error for a missing file, a malformed line, a row
/// count mismatch between features and labels, or a manifest mismatch, and
/// std::out_of_range for an edge endpoint outside the node range.
Dataset load_dataset(const std::filesystem::path& dir, const LoadOptions& options = {});

/// Scales every nonzero feature row to unit L1 norm.
void row_normalize(RealMatrix& features);

}  // namespace magneto
