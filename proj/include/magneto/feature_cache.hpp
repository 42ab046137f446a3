#pragma once

#include <filesystem>

#include "magneto/filters.hpp"

namespace magneto {

/// Binary layout, all fields little-endian:
///
///   offset  size  field
///        0     8  magic "MGCFEAT1"
///        8     8  u64 n (rows)
///       16     8  u64 c (columns)
///       24     8  i64 q numerator
///       32     8  i64 q denominator
///       40     4  u32 filter kind (0 lr, 1 md, 2 ppr, 3 hkpr)
///       44     4  u32 sign (0 low-pass, 1 high-pass)
///       48     4  u32 order K
///       52     4  u32 reserved (0)
///       56     8  f64 alpha (NaN when absent)
///       64     8  f64 t (NaN when absent)
///       72  16nc  row-major (re, im) f64 pairs
void write_feature_cache(const std::filesystem::path& path, const FilteredFeatures& features);

/// The dataset field is not stored and comes back empty. Throws
/// std::runtime_error on a bad magic, truncated file or trailing bytes.
FilteredFeatures read_feature_cache(const std::filesystem::path& path);

}  // namespace magneto
