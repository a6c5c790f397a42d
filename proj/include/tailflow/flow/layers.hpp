#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tailflow/flow/coupling_net.hpp"
#include "tailflow/rng.hpp"
#include "tailflow/types.hpp"

namespace tailflow {

enum class LayerKind : uint8_t {
  ActNorm = 0,
  InvertibleLinear = 1,
  AffineCoupling = 2,
  Squeeze = 3,
  Split = 4
};

inline const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::ActNorm: return "actnorm";
    case LayerKind::InvertibleLinear: return "invertible_linear";
    case LayerKind::AffineCoupling: return "affine_coupling";
    case LayerKind::Squeeze: return "squeeze";
    case LayerKind::Split: return "split";
  }
  return "?";
}

struct ActNormTape {
  Mat z;  // inverse output
};
struct LinearTape {
  Mat z;
};
struct CouplingTape {
  CouplingNet::Tape net;
  Mat z_b;        // transformed half after inverse
  Mat inv_s;      // 1/s
  Mat scale_mask; // 1 where the pre-scale clamp is inactive
};
struct EmptyTape {};

using LayerTape = std::variant<EmptyTape, ActNormTape, LinearTape, CouplingTape>;

/// One invertible transform. `forward` runs in the generative direction
/// (latent side -> data side); `inverse` runs the normalizing direction used
/// for likelihood evaluation and training, optionally filling a tape that
/// `backward_inverse` later consumes. Log-determinants are analytic; inverse
/// contributions are accumulated per batch row.
///
/// Layers are immutable during passes (all pass methods const), so a frozen
/// model can be evaluated from concurrent contexts; tapes live with the
/// caller.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual LayerKind kind() const = 0;
  /// Shape on the data (x) side of this layer.
  virtual TensorShape data_shape() const = 0;
  /// Shape on the latent (z) side; differs from data_shape for Squeeze/Split.
  virtual TensorShape latent_shape() const = 0;

  virtual int param_count() const { return 0; }
  virtual void pack_params(double* /*out*/) const {}
  virtual void unpack_params(const double* /*in*/) {}

  virtual void forward(ConstMatRef z, Mat& x, Vec& logdet_acc) const = 0;
  virtual void inverse(ConstMatRef x, Mat& z, Vec& logdet_inv_acc,
                       LayerTape* tape) const = 0;
  /// d_z = dL/d(inverse output); d_ld = dL/d(this layer's per-row logdet_inv
  /// contribution). Writes dL/d(inverse input) and accumulates parameter
  /// gradients into `grad` (pack_params layout).
  virtual void backward_inverse(const LayerTape& tape, ConstMatRef d_z,
                                ConstVecRef d_ld, Mat& d_x,
                                double* grad) const = 0;
};

// ---------------------------------------------------------------------------
// ActNorm: per-channel affine with data-dependent initialization.
// Normalizing direction: z = (x - b) * exp(-log_s); logdet_inv = -P sum log_s.
// ---------------------------------------------------------------------------
class ActNormLayer final : public Layer {
 public:
  ActNormLayer(TensorShape shape, bool identity_init)
      : shape_(shape),
        log_s_(Vec::Zero(shape.channels)),
        bias_(Vec::Zero(shape.channels)),
        initialized_(identity_init) {}

  LayerKind kind() const override { return LayerKind::ActNorm; }
  TensorShape data_shape() const override { return shape_; }
  TensorShape latent_shape() const override { return shape_; }
  bool initialized() const { return initialized_; }

  int param_count() const override { return 2 * shape_.channels; }
  void pack_params(double* out) const override {
    Eigen::Map<Vec>(out, shape_.channels) = log_s_;
    Eigen::Map<Vec>(out + shape_.channels, shape_.channels) = bias_;
  }
  void unpack_params(const double* in) override {
    log_s_ = Eigen::Map<const Vec>(in, shape_.channels);
    bias_ = Eigen::Map<const Vec>(in + shape_.channels, shape_.channels);
  }

  /// Set scale/bias so the batch maps to zero mean, unit variance per
  /// channel in the normalizing direction. Returns true if a zero-variance
  /// channel was hit (epsilon 1e-6 added to its std in that case).
  bool init_from_batch(ConstMatRef x) {
    if (x.rows() < 2)
      throw std::invalid_argument("actnorm init: need at least 2 rows");
    check_cols(x.cols());
    const int C = shape_.channels, P = shape_.positions();
    const double n = static_cast<double>(x.rows()) * P;
    bool degenerate = false;
    for (int c = 0; c < C; ++c) {
      const auto block = x.middleCols(c * P, P);
      const double mean = block.sum() / n;
      double var = (block.array() - mean).square().sum() / n;
      double sd = std::sqrt(var);
      if (!(sd > 0.0)) {
        sd += 1e-6;  // zero-variance channel
        degenerate = true;
      }
      bias_[c] = mean;
      log_s_[c] = std::log(sd);
    }
    initialized_ = true;
    return degenerate;
  }

  void forward(ConstMatRef z, Mat& x, Vec& logdet_acc) const override {
    require_init();
    check_cols(z.cols());
    const int P = shape_.positions();
    x.resize(z.rows(), z.cols());
    for (int c = 0; c < shape_.channels; ++c)
      x.middleCols(c * P, P) =
          z.middleCols(c * P, P).array() * std::exp(log_s_[c]) + bias_[c];
    logdet_acc.array() += P * log_s_.sum();
  }

  void inverse(ConstMatRef x, Mat& z, Vec& logdet_inv_acc,
               LayerTape* tape) const override {
    require_init();
    check_cols(x.cols());
    const int P = shape_.positions();
    z.resize(x.rows(), x.cols());
    for (int c = 0; c < shape_.channels; ++c)
      z.middleCols(c * P, P) =
          (x.middleCols(c * P, P).array() - bias_[c]) * std::exp(-log_s_[c]);
    logdet_inv_acc.array() -= P * log_s_.sum();
    if (tape) *tape = ActNormTape{z};
  }

  void backward_inverse(const LayerTape& tape, ConstMatRef d_z,
                        ConstVecRef d_ld, Mat& d_x,
                        double* grad) const override {
    const auto& t = std::get<ActNormTape>(tape);
    const int C = shape_.channels, P = shape_.positions();
    d_x.resize(d_z.rows(), d_z.cols());
    const double ld_sum = d_ld.sum();
    for (int c = 0; c < C; ++c) {
      const double inv_s = std::exp(-log_s_[c]);
      d_x.middleCols(c * P, P) = d_z.middleCols(c * P, P) * inv_s;
      // z depends on log_s as dz/dlog_s = -z; logdet_inv contributes -P each
      grad[c] += -(d_z.middleCols(c * P, P).array() *
                   t.z.middleCols(c * P, P).array())
                      .sum() -
                 ld_sum * P;
      grad[C + c] += -d_z.middleCols(c * P, P).sum() * inv_s;
    }
  }

 private:
  void require_init() const {
    if (!initialized_)
      throw std::logic_error("actnorm: used before data-dependent init");
  }
  void check_cols(Eigen::Index cols) const {
    if (cols != shape_.flat())
      throw std::invalid_argument("actnorm: batch width " +
                                  std::to_string(cols) + " != " +
                                  std::to_string(shape_.flat()));
  }

  TensorShape shape_;
  Vec log_s_, bias_;
  bool initialized_;
};

// ---------------------------------------------------------------------------
// InvertibleLinear: W = P L U over the channel dimension (a 1x1 convolution
// in image mode). P is a fixed permutation; L unit lower; U upper with
// nonzero diagonal, so log|det W| = sum ln|U_ii| per position.
// ---------------------------------------------------------------------------
class InvertibleLinearLayer final : public Layer {
 public:
  /// Identity-initialized.
  explicit InvertibleLinearLayer(TensorShape shape)
      : shape_(shape), C_(shape.channels) {
    L_ = Mat::Identity(C_, C_);
    U_ = Mat::Identity(C_, C_);
    perm_.resize(C_);
    for (int i = 0; i < C_; ++i) perm_[i] = i;
  }

  /// Initialized from a random rotation (QR of a Gaussian matrix), stored in
  /// LU-factored form via partial-pivot decomposition.
  InvertibleLinearLayer(TensorShape shape, RngState& rng)
      : InvertibleLinearLayer(shape) {
    Mat A(C_, C_);
    for (int i = 0; i < C_; ++i)
      for (int j = 0; j < C_; ++j) A(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A.transpose());
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Q);
    // Q = P^-1 L U with P from the decomposition; store Pm = P^-1 as indices
    Eigen::MatrixXd LU = lu.matrixLU();
    L_ = Mat::Identity(C_, C_);
    U_ = Mat::Zero(C_, C_);
    for (int i = 0; i < C_; ++i)
      for (int j = 0; j < C_; ++j) {
        if (j < i)
          L_(i, j) = LU(i, j);
        else
          U_(i, j) = LU(i, j);
      }
    const auto& pidx = lu.permutationP().indices();  // row i of PA is row pidx... // P maps row pidx_inv
    // (P A)(i,:) = A(p(i),:) with p from the transposition sequence; recover
    // Pm = P^T by applying P to the identity and transposing.
    Eigen::MatrixXd Pd =
        lu.permutationP().transpose() * Eigen::MatrixXd::Identity(C_, C_);
    for (int i = 0; i < C_; ++i)
      for (int j = 0; j < C_; ++j)
        if (Pd(i, j) > 0.5) perm_[i] = j;
    (void)pidx;
  }

  LayerKind kind() const override { return LayerKind::InvertibleLinear; }
  TensorShape data_shape() const override { return shape_; }
  TensorShape latent_shape() const override { return shape_; }

  const std::vector<int>& permutation() const { return perm_; }
  void set_permutation(std::vector<int> p) { perm_ = std::move(p); }

  // strict lower of L, then upper (incl. diagonal) of U, both row-major
  int param_count() const override { return C_ * C_; }
  void pack_params(double* out) const override {
    for (int i = 0; i < C_; ++i)
      for (int j = 0; j < i; ++j) *out++ = L_(i, j);
    for (int i = 0; i < C_; ++i)
      for (int j = i; j < C_; ++j) *out++ = U_(i, j);
  }
  void unpack_params(const double* in) override {
    for (int i = 0; i < C_; ++i)
      for (int j = 0; j < i; ++j) L_(i, j) = *in++;
    for (int i = 0; i < C_; ++i)
      for (int j = i; j < C_; ++j) U_(i, j) = *in++;
  }

  void forward(ConstMatRef z, Mat& x, Vec& logdet_acc) const override {
    const int P = shape_.positions();
    check_diag();
    x.resize(z.rows(), z.cols());
    if (P == 1) {
      Mat T = z * U_.transpose();
      T = T * L_.transpose();
      for (int c = 0; c < C_; ++c) x.col(perm_[c]) = T.col(c);
    } else {
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        Eigen::Map<const Mat> zin(z.row(r).data(), C_, P);
        Mat T = L_ * (U_ * zin);
        Eigen::Map<Mat> xout(x.row(r).data(), C_, P);
        for (int c = 0; c < C_; ++c) xout.row(perm_[c]) = T.row(c);
      }
    }
    logdet_acc.array() += P * log_abs_det();
  }

  void inverse(ConstMatRef x, Mat& z, Vec& logdet_inv_acc,
               LayerTape* tape) const override {
    const int P = shape_.positions();
    check_diag();
    z.resize(x.rows(), x.cols());
    if (P == 1) {
      Mat T(x.rows(), C_);
      for (int c = 0; c < C_; ++c) T.col(c) = x.col(perm_[c]);
      // solve (L U)^T on row vectors: T <- T * (L^-1)^T, then * (U^-1)^T
      L_.transpose()
          .triangularView<Eigen::UnitUpper>()
          .solveInPlace<Eigen::OnTheRight>(T);
      U_.transpose()
          .triangularView<Eigen::Lower>()
          .solveInPlace<Eigen::OnTheRight>(T);
      z = T;
    } else {
      Mat T(C_, P);
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        Eigen::Map<const Mat> xin(x.row(r).data(), C_, P);
        for (int c = 0; c < C_; ++c) T.row(c) = xin.row(perm_[c]);
        L_.triangularView<Eigen::UnitLower>().solveInPlace(T);
        U_.triangularView<Eigen::Upper>().solveInPlace(T);
        Eigen::Map<Mat>(z.row(r).data(), C_, P) = T;
      }
    }
    logdet_inv_acc.array() -= P * log_abs_det();
    if (tape) *tape = LinearTape{z};
  }

  void backward_inverse(const LayerTape& tape, ConstMatRef d_z,
                        ConstVecRef d_ld, Mat& d_x,
                        double* grad) const override {
    const auto& t = std::get<LinearTape>(tape);
    const int P = shape_.positions();
    d_x.resize(d_z.rows(), d_z.cols());
    Mat dW = Mat::Zero(C_, C_);
    if (P == 1) {
      // column form: d_x = W^-T g ; dW = -sum_s d_x_s z_s^T
      Mat B = d_z;
      U_.transpose()
          .triangularView<Eigen::Lower>()
          .transpose()  // acts as U^-T on row vectors
          .solveInPlace<Eigen::OnTheRight>(B);
      L_.transpose()
          .triangularView<Eigen::UnitUpper>()
          .transpose()
          .solveInPlace<Eigen::OnTheRight>(B);
      for (int c = 0; c < C_; ++c) d_x.col(perm_[c]) = B.col(c);
      dW.noalias() = -(d_x.transpose() * t.z);
    } else {
      Mat B(C_, P);
      for (Eigen::Index r = 0; r < d_z.rows(); ++r) {
        Eigen::Map<const Mat> g(d_z.row(r).data(), C_, P);
        B = g;
        U_.transpose().triangularView<Eigen::Lower>().solveInPlace(B);
        L_.transpose().triangularView<Eigen::UnitUpper>().solveInPlace(B);
        Eigen::Map<Mat> dx(d_x.row(r).data(), C_, P);
        for (int c = 0; c < C_; ++c) dx.row(perm_[c]) = B.row(c);
        Eigen::Map<const Mat> zb(t.z.row(r).data(), C_, P);
        dW.noalias() -= dx * zb.transpose();
      }
    }
    // translate dW into dL (strict lower) and dU (upper); undo the row perm
    Mat dWp(C_, C_);
    for (int c = 0; c < C_; ++c) dWp.row(c) = dW.row(perm_[c]);
    Mat dL = dWp * U_.transpose();
    Mat dU = L_.transpose() * dWp;
    const double ld_sum = d_ld.sum();
    double* g = grad;
    for (int i = 0; i < C_; ++i)
      for (int j = 0; j < i; ++j) *g++ += dL(i, j);
    for (int i = 0; i < C_; ++i)
      for (int j = i; j < C_; ++j) {
        double v = dU(i, j);
        if (i == j) v += ld_sum * (-P / U_(i, i));  // logdet_inv term
        *g++ += v;
      }
  }

 private:
  double log_abs_det() const {
    double s = 0.0;
    for (int i = 0; i < C_; ++i) s += std::log(std::abs(U_(i, i)));
    return s;
  }
  void check_diag() const {
    for (int i = 0; i < C_; ++i) {
      const double d = U_(i, i);
      if (d == 0.0 || !std::isfinite(d))
        throw std::runtime_error(
            "invertible_linear: singular or non-finite U diagonal");
    }
  }

  TensorShape shape_;
  int C_;
  Mat L_, U_;
  std::vector<int> perm_;  // x[perm[i]] = (L U z)[i]
};

// ---------------------------------------------------------------------------
// AffineCoupling: one channel block conditions, the other is transformed as
// x_B = z_B * s + shift with s = exp(clamp(pre, -5, 5)). parity swaps the
// roles of the two blocks.
// ---------------------------------------------------------------------------
class AffineCouplingLayer final : public Layer {
 public:
  static constexpr double kScaleClamp = 5.0;

  AffineCouplingLayer(TensorShape shape, int parity, int hidden,
                      Activation act, RngState& rng)
      : shape_(shape), parity_(parity % 2) {
    if (shape.channels < 2)
      throw std::invalid_argument("affine_coupling: needs >= 2 channels");
    const int P = shape.positions();
    d_cond_ = (shape.channels + 1) / 2;
    d_trans_ = shape.channels - d_cond_;
    net_ = CouplingNet(d_cond_ * P, d_trans_ * P, hidden, act, rng);
  }

  LayerKind kind() const override { return LayerKind::AffineCoupling; }
  TensorShape data_shape() const override { return shape_; }
  TensorShape latent_shape() const override { return shape_; }
  int parity() const { return parity_; }
  const CouplingNet& net() const { return net_; }
  CouplingNet& net() { return net_; }

  int param_count() const override { return net_.param_count(); }
  void pack_params(double* out) const override { net_.pack(out); }
  void unpack_params(const double* in) override { net_.unpack(in); }

  void forward(ConstMatRef z, Mat& x, Vec& logdet_acc) const override {
    const auto [cond, trans] = block_cols();
    Mat out;
    net_.forward(z.middleCols(cond.first, cond.second), out, nullptr);
    const int w = trans.second;
    Mat pre = out.rightCols(w)
                  .array()
                  .min(kScaleClamp)
                  .max(-kScaleClamp);
    x.resize(z.rows(), z.cols());
    x.middleCols(cond.first, cond.second) = z.middleCols(cond.first, cond.second);
    x.middleCols(trans.first, w) =
        z.middleCols(trans.first, w).array() * pre.array().exp() +
        out.leftCols(w).array();
    logdet_acc += pre.rowwise().sum();
  }

  void inverse(ConstMatRef x, Mat& z, Vec& logdet_inv_acc,
               LayerTape* tape) const override {
    const auto [cond, trans] = block_cols();
    const int w = trans.second;
    CouplingTape ct;
    Mat out;
    net_.forward(x.middleCols(cond.first, cond.second), out,
                 tape ? &ct.net : nullptr);
    Mat pre_raw = out.rightCols(w);
    Mat pre = pre_raw.array().min(kScaleClamp).max(-kScaleClamp);
    Mat inv_s = (-pre).array().exp();
    z.resize(x.rows(), x.cols());
    z.middleCols(cond.first, cond.second) = x.middleCols(cond.first, cond.second);
    z.middleCols(trans.first, w) =
        (x.middleCols(trans.first, w) - out.leftCols(w)).array() *
        inv_s.array();
    logdet_inv_acc -= pre.rowwise().sum();
    if (tape) {
      ct.z_b = z.middleCols(trans.first, w);
      ct.inv_s = std::move(inv_s);
      ct.scale_mask =
          (pre_raw.array().abs() < kScaleClamp).cast<double>();
      *tape = std::move(ct);
    }
  }

  void backward_inverse(const LayerTape& tape, ConstMatRef d_z,
                        ConstVecRef d_ld, Mat& d_x,
                        double* grad) const override {
    const auto& t = std::get<CouplingTape>(tape);
    const auto [cond, trans] = block_cols();
    const int w = trans.second;
    const auto d_zb = d_z.middleCols(trans.first, w);

    // z_B = (x_B - shift) / s, logdet_inv = -sum pre
    Mat d_xb = d_zb.array() * t.inv_s.array();
    Mat d_shift = -d_xb;
    Mat d_pre = (-(d_zb.array() * t.z_b.array()).matrix()).colwise() - d_ld;
    d_pre.array() *= t.scale_mask.array();

    Mat d_out(d_z.rows(), 2 * w);
    d_out.leftCols(w) = d_shift;
    d_out.rightCols(w) = d_pre;

    Mat d_cond_net;
    net_.backward(t.net, d_out, d_cond_net, grad);

    d_x.resize(d_z.rows(), d_z.cols());
    d_x.middleCols(cond.first, cond.second) =
        d_z.middleCols(cond.first, cond.second) + d_cond_net;
    d_x.middleCols(trans.first, w) = d_xb;
  }

 private:
  // (offset, width) column ranges of the conditioning and transformed blocks
  std::pair<std::pair<int, int>, std::pair<int, int>> block_cols() const {
    const int P = shape_.positions();
    if (parity_ == 0)
      return {{0, d_cond_ * P}, {d_cond_ * P, d_trans_ * P}};
    return {{d_trans_ * P, d_cond_ * P}, {0, d_trans_ * P}};
  }

  TensorShape shape_;
  int parity_;
  int d_cond_ = 0, d_trans_ = 0;
  CouplingNet net_;
};

// ---------------------------------------------------------------------------
// Squeeze: 2x2 space-to-channel permutation, (C,H,W) -> (4C,H/2,W/2) in the
// normalizing direction. Pure reindexing; log-det 0.
// ---------------------------------------------------------------------------
class SqueezeLayer final : public Layer {
 public:
  explicit SqueezeLayer(TensorShape data_side) : data_shape_(data_side) {
    if (data_side.height % 2 != 0 || data_side.width % 2 != 0)
      throw std::invalid_argument("squeeze: height and width must be even");
    latent_shape_ = TensorShape::image(4 * data_side.channels,
                                       data_side.height / 2,
                                       data_side.width / 2);
    // latent flat index -> data flat index
    perm_.resize(latent_shape_.flat());
    const int C = data_side.channels, H = data_side.height, W = data_side.width;
    const int h2 = H / 2, w2 = W / 2;
    for (int c = 0; c < C; ++c)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const int oc = c * 4 + dy * 2 + dx;
          for (int y = 0; y < h2; ++y)
            for (int x = 0; x < w2; ++x)
              perm_[(oc * h2 + y) * w2 + x] =
                  (c * H + 2 * y + dy) * W + 2 * x + dx;
        }
  }

  LayerKind kind() const override { return LayerKind::Squeeze; }
  TensorShape data_shape() const override { return data_shape_; }
  TensorShape latent_shape() const override { return latent_shape_; }

  void forward(ConstMatRef z, Mat& x, Vec& /*logdet_acc*/) const override {
    x.resize(z.rows(), z.cols());
    for (size_t j = 0; j < perm_.size(); ++j)
      x.col(perm_[j]) = z.col(static_cast<Eigen::Index>(j));
  }

  void inverse(ConstMatRef x, Mat& z, Vec& /*logdet_inv_acc*/,
               LayerTape* tape) const override {
    z.resize(x.rows(), x.cols());
    for (size_t j = 0; j < perm_.size(); ++j)
      z.col(static_cast<Eigen::Index>(j)) = x.col(perm_[j]);
    if (tape) *tape = EmptyTape{};
  }

  void backward_inverse(const LayerTape&, ConstMatRef d_z, ConstVecRef,
                        Mat& d_x, double*) const override {
    d_x.resize(d_z.rows(), d_z.cols());
    for (size_t j = 0; j < perm_.size(); ++j)
      d_x.col(perm_[j]) = d_z.col(static_cast<Eigen::Index>(j));
  }

 private:
  TensorShape data_shape_, latent_shape_;
  std::vector<int> perm_;
};

// ---------------------------------------------------------------------------
// Split: factors the second half of the channels out to the base
// distribution; the first half continues through the rest of the stack.
// ---------------------------------------------------------------------------
class SplitLayer final : public Layer {
 public:
  explicit SplitLayer(TensorShape data_side) : data_shape_(data_side) {
    if (data_side.channels % 2 != 0)
      throw std::invalid_argument("split: channel count must be even");
    latent_shape_ = TensorShape::image(data_side.channels / 2,
                                       data_side.height, data_side.width);
  }

  LayerKind kind() const override { return LayerKind::Split; }
  TensorShape data_shape() const override { return data_shape_; }
  TensorShape latent_shape() const override { return latent_shape_; }
  int chunk_dim() const { return latent_shape_.flat(); }

  // the model drives Split through these; the generic pass entry points are
  // not meaningful for an arity-changing layer
  void inverse_split(ConstMatRef x, Mat& keep, Mat& chunk) const {
    const int half = latent_shape_.flat();
    keep = x.leftCols(half);
    chunk = x.rightCols(half);
  }
  void forward_split(ConstMatRef keep, ConstMatRef chunk, Mat& x) const {
    const int half = latent_shape_.flat();
    x.resize(keep.rows(), 2 * half);
    x.leftCols(half) = keep;
    x.rightCols(half) = chunk;
  }
  void backward_split(ConstMatRef d_keep, ConstMatRef d_chunk, Mat& d_x) const {
    const int half = latent_shape_.flat();
    d_x.resize(d_keep.rows(), 2 * half);
    d_x.leftCols(half) = d_keep;
    d_x.rightCols(half) = d_chunk;
  }

  void forward(ConstMatRef, Mat&, Vec&) const override {
    throw std::logic_error("split: use forward_split");
  }
  void inverse(ConstMatRef, Mat&, Vec&, LayerTape*) const override {
    throw std::logic_error("split: use inverse_split");
  }
  void backward_inverse(const LayerTape&, ConstMatRef, ConstVecRef, Mat&,
                        double*) const override {
    throw std::logic_error("split: use backward_split");
  }

 private:
  TensorShape data_shape_, latent_shape_;
};

}  // namespace tailflow
