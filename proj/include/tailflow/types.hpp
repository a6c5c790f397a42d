#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tailflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ConstVecRef = Eigen::Ref<const Vec>;
using ConstMatRef = Eigen::Ref<const Mat>;

/// Shape of one sample: (channels, height, width). Flat vectors use (D, 1, 1).
struct TensorShape {
  int channels = 0;
  int height = 1;
  int width = 1;

  int flat() const { return channels * height * width; }
  int positions() const { return height * width; }
  bool is_flat() const { return height == 1 && width == 1; }

  bool operator==(const TensorShape&) const = default;

  static TensorShape flat_dim(int d) { return TensorShape{d, 1, 1}; }
  static TensorShape image(int c, int h, int w) { return TensorShape{c, h, w}; }
};

/// Configuration problem (bad field value, unknown key, inconsistent sizes).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input data (file parse failures carry the byte offset).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg, std::int64_t offset = -1)
      : std::runtime_error(msg), byte_offset(offset) {}
  std::int64_t byte_offset;
};

/// A non-finite value appeared during a model pass.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& msg, int index)
      : std::runtime_error(msg), index(index) {}
  int index;  // layer index or batch row, depending on the throw site
};

}  // namespace tailflow
