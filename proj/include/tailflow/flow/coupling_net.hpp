#pragma once

#include <cmath>
#include <stdexcept>

#include "tailflow/rng.hpp"
#include "tailflow/types.hpp"

namespace tailflow {

enum class Activation { Tanh, Relu };

/// Conditioner of an affine coupling: a fully-connected network with two
/// hidden layers mapping the conditioning half to per-dimension
/// (shift, pre-scale) pairs. The output layer is zero-initialized so a fresh
/// coupling is the identity map.
class CouplingNet {
 public:
  CouplingNet() = default;

  CouplingNet(int in_dim, int out_halves, int hidden, Activation act,
              RngState& rng)
      : in_dim_(in_dim), out_dim_(2 * out_halves), hidden_(hidden), act_(act) {
    if (in_dim < 1 || out_halves < 1 || hidden < 1)
      throw std::invalid_argument("CouplingNet: bad dimensions");
    const auto init = [&](Mat& W, int rows, int cols) {
      W.resize(rows, cols);
      const double sd = 1.0 / std::sqrt(static_cast<double>(cols));
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) W(r, c) = sd * rng.normal();
    };
    init(W1_, hidden, in_dim);
    init(W2_, hidden, hidden);
    b1_ = Vec::Zero(hidden);
    b2_ = Vec::Zero(hidden);
    W3_ = Mat::Zero(out_dim_, hidden);
    b3_ = Vec::Zero(out_dim_);
  }

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }

  int param_count() const {
    return static_cast<int>(W1_.size() + b1_.size() + W2_.size() + b2_.size() +
                            W3_.size() + b3_.size());
  }

  struct Tape {
    Mat h0;  // input, n x in_dim
    Mat a1, h1, a2, h2;
  };

  /// Batch forward; rows of `in` are independent samples. Returns n x out_dim.
  void forward(ConstMatRef in, Mat& out, Tape* tape) const {
    Mat a1 = in * W1_.transpose();
    a1.rowwise() += b1_.transpose();
    Mat h1 = activate(a1);
    Mat a2 = h1 * W2_.transpose();
    a2.rowwise() += b2_.transpose();
    Mat h2 = activate(a2);
    out.noalias() = h2 * W3_.transpose();
    out.rowwise() += b3_.transpose();
    if (tape) {
      tape->h0 = in;
      tape->a1 = std::move(a1);
      tape->h1 = std::move(h1);
      tape->a2 = std::move(a2);
      tape->h2 = std::move(h2);
    }
  }

  /// Backward through the batch forward. `d_out` is dL/d(output); returns
  /// dL/d(input) in `d_in` and accumulates parameter gradients into `grad`,
  /// which must use the pack() layout.
  void backward(const Tape& tape, ConstMatRef d_out, Mat& d_in,
                double* grad) const {
    Mat d_h2 = d_out * W3_;
    Mat d_a2 = activate_grad(tape.a2, tape.h2, d_h2);
    Mat d_h1 = d_a2 * W2_;
    Mat d_a1 = activate_grad(tape.a1, tape.h1, d_h1);
    d_in.noalias() = d_a1 * W1_;

    double* g = grad;
    const auto acc_mat = [&](const Mat& m) {
      Eigen::Map<Mat>(g, m.rows(), m.cols()) += m;
      g += m.size();
    };
    const auto acc_vec = [&](const Vec& v) {
      Eigen::Map<Vec>(g, v.size()) += v;
      g += v.size();
    };
    acc_mat(d_a1.transpose() * tape.h0);        // dW1
    acc_vec(d_a1.colwise().sum().transpose());  // db1
    acc_mat(d_a2.transpose() * tape.h1);        // dW2
    acc_vec(d_a2.colwise().sum().transpose());  // db2
    acc_mat(d_out.transpose() * tape.h2);       // dW3
    acc_vec(d_out.colwise().sum().transpose()); // db3
  }

  void pack(double* out) const {
    const auto put_mat = [&](const Mat& m) {
      Eigen::Map<Mat>(out, m.rows(), m.cols()) = m;
      out += m.size();
    };
    const auto put_vec = [&](const Vec& v) {
      Eigen::Map<Vec>(out, v.size()) = v;
      out += v.size();
    };
    put_mat(W1_); put_vec(b1_);
    put_mat(W2_); put_vec(b2_);
    put_mat(W3_); put_vec(b3_);
  }

  void unpack(const double* in) {
    const auto get_mat = [&](Mat& m) {
      m = Eigen::Map<const Mat>(in, m.rows(), m.cols());
      in += m.size();
    };
    const auto get_vec = [&](Vec& v) {
      v = Eigen::Map<const Vec>(in, v.size());
      in += v.size();
    };
    get_mat(W1_); get_vec(b1_);
    get_mat(W2_); get_vec(b2_);
    get_mat(W3_); get_vec(b3_);
  }

  int hidden() const { return hidden_; }
  Activation activation() const { return act_; }

 private:
  Mat activate(const Mat& a) const {
    if (act_ == Activation::Tanh) return a.array().tanh();
    return a.array().max(0.0);
  }

  // dL/da given a, h = act(a) and dL/dh
  Mat activate_grad(const Mat& a, const Mat& h, const Mat& dh) const {
    if (act_ == Activation::Tanh)
      return dh.array() * (1.0 - h.array().square());
    return (a.array() > 0.0).select(dh, 0.0);
  }

  int in_dim_ = 0, out_dim_ = 0, hidden_ = 0;
  Activation act_ = Activation::Tanh;
  Mat W1_, W2_, W3_;
  Vec b1_, b2_, b3_;
};

}  // namespace tailflow
