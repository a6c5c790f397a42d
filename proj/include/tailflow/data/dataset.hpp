#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tailflow/io.hpp"
#include "tailflow/rng.hpp"
#include "tailflow/types.hpp"

namespace tailflow {

enum class SplitName { Train, Val, Test };

struct SplitIndices {
  std::vector<int> train, val, test;

  const std::vector<int>& of(SplitName s) const {
    switch (s) {
      case SplitName::Train: return train;
      case SplitName::Val: return val;
      case SplitName::Test: return test;
    }
    return train;
  }
  std::vector<int>& of(SplitName s) {
    return const_cast<std::vector<int>&>(
        static_cast<const SplitIndices*>(this)->of(s));
  }
};

struct DatasetMeta {
  std::string source;
  bool dequantized = false;
  int bits = 0;
  int pool_factor = 1;
};

/// N observations with split bookkeeping and contamination audit trail.
/// Image data is stored flat (row-major channel, row, column) with `shape`
/// carrying the layout.
struct Dataset {
  Mat X;
  TensorShape shape;
  SplitIndices split;
  std::vector<std::uint8_t> contaminated;  // per-row mask
  std::vector<std::pair<int, Vec>> original_rows;  // audit: replaced rows
  DatasetMeta meta;

  int rows() const { return static_cast<int>(X.rows()); }
  int dim() const { return static_cast<int>(X.cols()); }
  int contaminated_count() const {
    int c = 0;
    for (auto m : contaminated) c += m != 0;
    return c;
  }

  Mat rows_of(SplitName s) const {
    const auto& idx = split.of(s);
    Mat out(static_cast<Eigen::Index>(idx.size()), X.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = X.row(idx[i]);
    return out;
  }
};

namespace data_detail {

inline void init_all_train(Dataset& ds) {
  ds.split.train.resize(ds.rows());
  std::iota(ds.split.train.begin(), ds.split.train.end(), 0);
  ds.split.val.clear();
  ds.split.test.clear();
  ds.contaminated.assign(ds.rows(), 0);
}

/// Zero mean, unit variance per dimension (population convention).
inline void normalize_columns(Mat& X) {
  const double n = static_cast<double>(X.rows());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).sum() / n;
    X.col(j).array() -= mean;
    const double sd = std::sqrt(X.col(j).squaredNorm() / n);
    if (sd > 0) X.col(j) /= sd;
  }
}

inline void shuffle(std::vector<int>& v, RngState& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j =
        static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(v[i - 1], v[j < i ? j : i - 1]);
  }
}

}  // namespace data_detail

/// Two interleaved half-circles with Gaussian jitter, normalized to zero
/// mean / unit variance per dimension.
inline Dataset gen_two_moons(int n, double noise_sd, RngState& rng) {
  if (n < 10) throw std::invalid_argument("gen_two_moons: n must be >= 10");
  Dataset ds;
  ds.X.resize(n, 2);
  ds.shape = TensorShape::flat_dim(2);
  const double pi = 3.141592653589793238462643383279502884;
  for (int i = 0; i < n; ++i) {
    const double phi = pi * rng.uniform();
    double x, y;
    if (i % 2 == 0) {
      x = std::cos(phi);
      y = std::sin(phi);
    } else {
      x = 1.0 - std::cos(phi);
      y = 0.5 - std::sin(phi);
    }
    ds.X(i, 0) = x + noise_sd * rng.normal();
    ds.X(i, 1) = y + noise_sd * rng.normal();
  }
  data_detail::normalize_columns(ds.X);
  data_detail::init_all_train(ds);
  ds.meta.source = "two_moons";
  return ds;
}

/// Concentric circles (one per radius) with Gaussian radial jitter,
/// normalized per dimension.
inline Dataset gen_rings(int n, const std::vector<double>& radii,
                         double noise_sd, RngState& rng) {
  if (n < 10) throw std::invalid_argument("gen_rings: n must be >= 10");
  if (radii.empty()) throw std::invalid_argument("gen_rings: no radii");
  Dataset ds;
  ds.X.resize(n, 2);
  ds.shape = TensorShape::flat_dim(2);
  const double pi = 3.141592653589793238462643383279502884;
  for (int i = 0; i < n; ++i) {
    const auto ring = static_cast<std::size_t>(rng.uniform() *
                                               static_cast<double>(radii.size()));
    const double r =
        radii[ring < radii.size() ? ring : radii.size() - 1] +
        noise_sd * rng.normal();
    const double phi = 2.0 * pi * rng.uniform();
    ds.X(i, 0) = r * std::cos(phi);
    ds.X(i, 1) = r * std::sin(phi);
  }
  data_detail::normalize_columns(ds.X);
  data_detail::init_all_train(ds);
  ds.meta.source = "rings";
  return ds;
}

/// Deterministic shuffled split; fractions honored to within one row
/// (train and val take the floor, test gets the remainder).
inline Dataset split_dataset(Dataset ds, double f_train, double f_val,
                             double f_test, RngState& rng) {
  if (!(f_train >= 0) || !(f_val >= 0) || !(f_test >= 0) ||
      std::abs(f_train + f_val + f_test - 1.0) > 1e-9)
    throw std::invalid_argument("split_dataset: fractions must sum to 1");
  const int n = ds.rows();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  data_detail::shuffle(idx, rng);
  const int n_train = static_cast<int>(std::floor(f_train * n));
  const int n_val = static_cast<int>(std::floor(f_val * n));
  ds.split.train.assign(idx.begin(), idx.begin() + n_train);
  ds.split.val.assign(idx.begin() + n_train, idx.begin() + n_train + n_val);
  ds.split.test.assign(idx.begin() + n_train + n_val, idx.end());
  return ds;
}

enum class OutlierKind { UniformBox, ShiftedCluster, ForeignDataset };

struct OutlierSpec {
  OutlierKind kind = OutlierKind::UniformBox;
  double scale = 8.0;    // UniformBox: draws uniform on [-scale, scale]^D
  double offset = 8.0;   // ShiftedCluster: every coordinate offset
  double sd = 0.5;       // ShiftedCluster: isotropic std around the offset
  Mat foreign_rows;      // ForeignDataset: rows to draw from

  static OutlierSpec uniform_box(double scale) {
    OutlierSpec s;
    s.kind = OutlierKind::UniformBox;
    s.scale = scale;
    return s;
  }
  static OutlierSpec shifted_cluster(double offset, double sd) {
    OutlierSpec s;
    s.kind = OutlierKind::ShiftedCluster;
    s.offset = offset;
    s.sd = sd;
    return s;
  }
  static OutlierSpec foreign(Mat rows) {
    OutlierSpec s;
    s.kind = OutlierKind::ForeignDataset;
    s.foreign_rows = std::move(rows);
    return s;
  }
};

/// Replace ceil(p * |split|) rows of each target split with outlier draws.
/// Clean rows are untouched; replaced originals are kept in the audit list
/// and the contamination mask is updated.
inline Dataset inject_outliers(Dataset ds, double p, const OutlierSpec& spec,
                               const std::vector<SplitName>& targets,
                               RngState& rng) {
  if (!(p >= 0.0) || p > 0.5)
    throw std::invalid_argument("inject_outliers: p must be in [0, 0.5]");
  if (spec.kind == OutlierKind::ForeignDataset &&
      spec.foreign_rows.cols() != ds.X.cols())
    throw std::invalid_argument(
        "inject_outliers: foreign rows have dim " +
        std::to_string(spec.foreign_rows.cols()) + ", dataset has " +
        std::to_string(ds.X.cols()));
  if (p == 0.0) return ds;

  const int d = ds.dim();
  for (SplitName target : targets) {
    const auto& idx = ds.split.of(target);
    const int count = static_cast<int>(
        std::ceil(p * static_cast<double>(idx.size())));
    std::vector<int> pool = idx;
    data_detail::shuffle(pool, rng);
    for (int i = 0; i < count; ++i) {
      const int row = pool[static_cast<std::size_t>(i)];
      ds.original_rows.emplace_back(row, ds.X.row(row).transpose());
      switch (spec.kind) {
        case OutlierKind::UniformBox:
          for (int j = 0; j < d; ++j)
            ds.X(row, j) = rng.uniform(-spec.scale, spec.scale);
          break;
        case OutlierKind::ShiftedCluster:
          for (int j = 0; j < d; ++j)
            ds.X(row, j) = spec.offset + spec.sd * rng.normal();
          break;
        case OutlierKind::ForeignDataset: {
          const auto src = static_cast<Eigen::Index>(
              rng.uniform() * static_cast<double>(spec.foreign_rows.rows()));
          ds.X.row(row) = spec.foreign_rows.row(
              src < spec.foreign_rows.rows() ? src
                                             : spec.foreign_rows.rows() - 1);
          break;
        }
      }
      ds.contaminated[static_cast<std::size_t>(row)] = 1;
    }
  }
  return ds;
}

/// x' = (x + u) / 2^bits with u ~ U[0,1), giving values in [0, 1). Requires
/// integer-valued input in [0, 2^bits). NLL reporting in bits/dim must add
/// the `bits` change-of-variables offset per dimension (see the trainer).
inline Dataset dequantize(Dataset ds, int bits, RngState& rng) {
  if (bits < 1 || bits > 16)
    throw std::invalid_argument("dequantize: bits must be in [1, 16]");
  const double levels = std::pow(2.0, bits);
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i)
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
      const double v = ds.X(i, j);
      if (v != std::floor(v) || v < 0 || v >= levels)
        throw std::invalid_argument(
            "dequantize: value " + std::to_string(v) + " at row " +
            std::to_string(i) + " is not an integer in [0, 2^bits)");
      ds.X(i, j) = (v + rng.uniform()) / levels;
    }
  ds.meta.dequantized = true;
  ds.meta.bits = bits;
  return ds;
}

/// Average-pool image data by an integer factor (height and width must be
/// divisible). Pixel intensities are rounded back to the integer grid so the
/// result can still be dequantized.
inline Dataset downsample(Dataset ds, int factor) {
  if (factor == 1) return ds;
  if (factor < 1) throw std::invalid_argument("downsample: factor must be >= 1");
  const TensorShape s = ds.shape;
  if (s.height % factor != 0 || s.width % factor != 0)
    throw std::invalid_argument("downsample: shape not divisible by factor");
  const int nh = s.height / factor, nw = s.width / factor;
  Mat out(ds.X.rows(), s.channels * nh * nw);
  for (Eigen::Index r = 0; r < ds.X.rows(); ++r)
    for (int c = 0; c < s.channels; ++c)
      for (int y = 0; y < nh; ++y)
        for (int x = 0; x < nw; ++x) {
          double acc = 0;
          for (int dy = 0; dy < factor; ++dy)
            for (int dx = 0; dx < factor; ++dx)
              acc += ds.X(r, (c * s.height + y * factor + dy) * s.width +
                                 x * factor + dx);
          out(r, (c * nh + y) * nw + x) =
              std::round(acc / (factor * factor));
        }
  ds.X = std::move(out);
  ds.shape = TensorShape::image(s.channels, nh, nw);
  ds.meta.pool_factor *= factor;
  return ds;
}

// Dataset cache: same array encoding as the model checkpoint (little-endian
// f64), magic "TFDS".
inline void save_dataset(const std::string& path, const Dataset& ds) {
  BinaryWriter w(path);
  w.bytes("TFDS", 4);
  w.u32(1);
  w.u32(static_cast<std::uint32_t>(ds.rows()));
  w.u32(static_cast<std::uint32_t>(ds.dim()));
  w.u32(static_cast<std::uint32_t>(ds.shape.channels));
  w.u32(static_cast<std::uint32_t>(ds.shape.height));
  w.u32(static_cast<std::uint32_t>(ds.shape.width));
  w.f64_array(ds.X.data(), static_cast<std::size_t>(ds.X.size()));
  const auto write_idx = [&](const std::vector<int>& v) {
    w.u32(static_cast<std::uint32_t>(v.size()));
    for (int i : v) w.u32(static_cast<std::uint32_t>(i));
  };
  write_idx(ds.split.train);
  write_idx(ds.split.val);
  write_idx(ds.split.test);
  w.u32(static_cast<std::uint32_t>(ds.contaminated.size()));
  w.bytes(ds.contaminated.data(), ds.contaminated.size());
  w.u32(static_cast<std::uint32_t>(ds.original_rows.size()));
  for (const auto& [row, values] : ds.original_rows) {
    w.u32(static_cast<std::uint32_t>(row));
    w.f64_array(values.data(), static_cast<std::size_t>(values.size()));
  }
  w.str(ds.meta.source);
  w.u8(ds.meta.dequantized ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(ds.meta.bits));
  w.u32(static_cast<std::uint32_t>(ds.meta.pool_factor));
}

inline Dataset load_dataset(const std::string& path) {
  BinaryReader r(path);
  r.expect_magic("TFDS");
  if (r.u32() != 1)
    throw DataError(path + ": unsupported dataset cache version at byte 4", 4);
  Dataset ds;
  const auto n = r.u32();
  const auto d = r.u32();
  ds.shape.channels = static_cast<int>(r.u32());
  ds.shape.height = static_cast<int>(r.u32());
  ds.shape.width = static_cast<int>(r.u32());
  ds.X.resize(n, d);
  r.f64_array(ds.X.data(), static_cast<std::size_t>(ds.X.size()));
  const auto read_idx = [&](std::vector<int>& v) {
    v.resize(r.u32());
    for (auto& i : v) i = static_cast<int>(r.u32());
  };
  read_idx(ds.split.train);
  read_idx(ds.split.val);
  read_idx(ds.split.test);
  ds.contaminated.resize(r.u32());
  r.bytes(ds.contaminated.data(), ds.contaminated.size());
  const auto n_orig = r.u32();
  ds.original_rows.reserve(n_orig);
  for (std::uint32_t i = 0; i < n_orig; ++i) {
    const int row = static_cast<int>(r.u32());
    Vec v(d);
    r.f64_array(v.data(), d);
    ds.original_rows.emplace_back(row, std::move(v));
  }
  ds.meta.source = r.str();
  ds.meta.dequantized = r.u8() != 0;
  ds.meta.bits = static_cast<int>(r.u32());
  ds.meta.pool_factor = static_cast<int>(r.u32());
  return ds;
}

}  // namespace tailflow
