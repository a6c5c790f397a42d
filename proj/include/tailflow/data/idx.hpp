#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tailflow/data/dataset.hpp"
#include "tailflow/io.hpp"
#include "tailflow/types.hpp"

namespace tailflow {

// IDX container (the MNIST distribution format): big-endian magic
// 0x00000803 for ubyte image tensors (dims N, H, W) and 0x00000801 for
// ubyte label vectors (dim N). Parse errors carry the byte offset.

namespace idx_detail {

inline std::uint32_t read_be_u32(BinaryReader& r) {
  std::uint8_t b[4];
  r.bytes(b, 4);
  return (static_cast<std::uint32_t>(b[0]) << 24) |
         (static_cast<std::uint32_t>(b[1]) << 16) |
         (static_cast<std::uint32_t>(b[2]) << 8) |
         static_cast<std::uint32_t>(b[3]);
}

inline void write_be_u32(BinaryWriter& w, std::uint32_t v) {
  const std::uint8_t b[4] = {static_cast<std::uint8_t>(v >> 24),
                             static_cast<std::uint8_t>(v >> 16),
                             static_cast<std::uint8_t>(v >> 8),
                             static_cast<std::uint8_t>(v)};
  w.bytes(b, 4);
}

}  // namespace idx_detail

/// Images as an N x (H*W) dataset with byte values 0..255 and shape
/// (1, H, W).
inline Dataset load_idx_images(const std::string& path) {
  BinaryReader r(path);
  const std::uint32_t magic = idx_detail::read_be_u32(r);
  if (magic != 0x00000803u)
    throw DataError(path + ": bad IDX image magic at byte 0 (got 0x" +
                        [&] {
                          char buf[16];
                          std::snprintf(buf, sizeof(buf), "%08x", magic);
                          return std::string(buf);
                        }() +
                        ", want 0x00000803)",
                    0);
  const std::uint32_t n = idx_detail::read_be_u32(r);
  const std::uint32_t h = idx_detail::read_be_u32(r);
  const std::uint32_t w = idx_detail::read_be_u32(r);
  Dataset ds;
  ds.shape = TensorShape::image(1, static_cast<int>(h), static_cast<int>(w));
  ds.X.resize(n, static_cast<Eigen::Index>(h) * w);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(h) * w);
  for (std::uint32_t i = 0; i < n; ++i) {
    r.bytes(row.data(), row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
      ds.X(i, static_cast<Eigen::Index>(j)) = static_cast<double>(row[j]);
  }
  data_detail::init_all_train(ds);
  ds.meta.source = "idx:" + path;
  return ds;
}

inline std::vector<std::uint8_t> load_idx_labels(const std::string& path) {
  BinaryReader r(path);
  const std::uint32_t magic = idx_detail::read_be_u32(r);
  if (magic != 0x00000801u)
    throw DataError(path + ": bad IDX label magic at byte 0", 0);
  const std::uint32_t n = idx_detail::read_be_u32(r);
  std::vector<std::uint8_t> labels(n);
  r.bytes(labels.data(), labels.size());
  return labels;
}

/// Write byte images (values must already be integers in [0, 255]).
inline void write_idx_images(const std::string& path, ConstMatRef X,
                             int height, int width) {
  if (X.cols() != static_cast<Eigen::Index>(height) * width)
    throw std::invalid_argument("write_idx_images: shape mismatch");
  BinaryWriter w(path);
  idx_detail::write_be_u32(w, 0x00000803u);
  idx_detail::write_be_u32(w, static_cast<std::uint32_t>(X.rows()));
  idx_detail::write_be_u32(w, static_cast<std::uint32_t>(height));
  idx_detail::write_be_u32(w, static_cast<std::uint32_t>(width));
  std::vector<std::uint8_t> row(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double v = X(i, j);
      if (v != std::floor(v) || v < 0 || v > 255)
        throw std::invalid_argument(
            "write_idx_images: value not a byte at row " + std::to_string(i));
      row[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(v);
    }
    w.bytes(row.data(), row.size());
  }
}

inline void write_idx_labels(const std::string& path,
                             const std::vector<std::uint8_t>& labels) {
  BinaryWriter w(path);
  idx_detail::write_be_u32(w, 0x00000801u);
  idx_detail::write_be_u32(w, static_cast<std::uint32_t>(labels.size()));
  w.bytes(labels.data(), labels.size());
}

}  // namespace tailflow
