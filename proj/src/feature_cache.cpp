#include "magneto/feature_cache.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "magneto/binary_io.hpp"

namespace magneto {

namespace {

constexpr std::array<char, 8> kMagic = {'M', 'G', 'C', 'F', 'E', 'A', 'T', '1'};

}  // namespace

void write_feature_cache(const std::filesystem::path& path, const FilteredFeatures& features) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  const auto& spec = features.spec;
  out.write(kMagic.data(), kMagic.size());
  io::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(features.values.rows()));
  io::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(features.values.cols()));
  io::write_le<std::int64_t>(out, features.q.num);
  io::write_le<std::int64_t>(out, features.q.den);
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.kind));
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.sign));
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.order));
  io::write_le<std::uint32_t>(out, 0);
  io::write_le<double>(out, spec.alpha.value_or(nan));
  io::write_le<double>(out, spec.time.value_or(nan));
  for (Index r = 0; r < features.values.rows(); ++r) {
    for (Index c = 0; c < features.values.cols(); ++c) {
      io::write_le<double>(out, features.values(r, c).real());
      io::write_le<double>(out, features.values(r, c).imag());
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

FilteredFeatures read_feature_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open feature cache " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error(path.string() + " is not a feature cache file");

  FilteredFeatures f;
  const auto n = io::read_le<std::uint64_t>(in);
  const auto c = io::read_le<std::uint64_t>(in);
  const auto q_num = io::read_le<std::int64_t>(in);
  const auto q_den = io::read_le<std::int64_t>(in);
  f.q = Charge(q_num, q_den);
  const auto kind = io::read_le<std::uint32_t>(in);
  const auto sign = io::read_le<std::uint32_t>(in);
  if (kind > static_cast<std::uint32_t>(FilterKind::HeatKernelPageRank) ||
      sign > static_cast<std::uint32_t>(FilterSign::HighPass)) {
    throw std::runtime_error(path.string() + ": corrupt filter header");
  }
  f.spec.kind = static_cast<FilterKind>(kind);
  f.spec.sign = static_cast<FilterSign>(sign);
  f.spec.order = static_cast<int>(io::read_le<std::uint32_t>(in));
  io::read_le<std::uint32_t>(in);
  const double alpha = io::read_le<double>(in);
  const double time = io::read_le<double>(in);
  if (!std::isnan(alpha)) f.spec.alpha = alpha;
  if (!std::isnan(time)) f.spec.time = time;
  f.spec.validate();

  const auto header_end = static_cast<std::uintmax_t>(in.tellg());
  const auto total = std::filesystem::file_size(path);
  if (c != 0 && (total < header_end || n > (total - header_end) / 16 / c)) {
    throw std::runtime_error(path.string() + ": payload shorter than header claims");
  }
  f.values.resize(static_cast<Index>(n), static_cast<Index>(c));
  for (Index r = 0; r < f.values.rows(); ++r) {
    for (Index col = 0; col < f.values.cols(); ++col) {
      const double re = io::read_le<double>(in);
      const double im = io::read_le<double>(in);
      f.values(r, col) = Complex{re, im};
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw std::runtime_error(path.string() + " has trailing bytes");
  return f;
}

}  // namespace magneto
