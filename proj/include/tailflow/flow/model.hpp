#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tailflow/base_dist.hpp"
#include "tailflow/flow/layers.hpp"
#include "tailflow/types.hpp"

namespace tailflow {

/// Cached activations from one inverse (normalizing) pass, sufficient for an
/// exact backward sweep. Invalidated by any parameter change.
struct ModelTape {
  std::vector<LayerTape> layer_tapes;
  Mat z_full;   // n x D, chunk columns first, final block last
  Vec loglik;   // per row
  std::uint64_t param_version = ~0ull;
  Eigen::Index rows = 0;
  bool valid = false;
};

struct FlowModelConfig {
  TensorShape data_shape;
  int steps_k = 6;   // flow steps per level
  int levels_l = 1;  // multiscale levels (image mode only)
  int hidden = 64;   // coupling net width (two hidden layers)
  Activation activation = Activation::Tanh;
  bool random_linear_init = true;
  bool actnorm_identity_init = false;  // true skips data-dependent init
};

/// An invertible map between data x and latent z plus a base distribution on
/// z, with exact log-likelihood via change of variables:
///
///   ln p(x) = ln p_base(f^-1(x)) + sum_k ln |det J_k^-1|
///
/// Layers are kept in generative order: layers[0] touches the latent end.
/// Split layers factor part of the tensor straight out to the base; factored
/// chunks occupy the leading columns of z_full in the order the inverse pass
/// emits them, the final block comes last. The base density is evaluated
/// jointly on the whole D-dimensional z_full row (for Student-t bases the
/// dimensions are coupled through ||z||^2, so chunks cannot be scored
/// separately).
class FlowModel {
 public:
  FlowModel(TensorShape data_shape, BaseDistribution base,
            std::vector<std::unique_ptr<Layer>> layers)
      : data_shape_(data_shape), base_(base), layers_(std::move(layers)) {
    if (base_.dim != data_shape_.flat())
      throw std::invalid_argument("flow model: base dim " +
                                  std::to_string(base_.dim) +
                                  " != data dim " +
                                  std::to_string(data_shape_.flat()));
    TensorShape cur = data_shape_;  // walk from the data side
    chunk_offsets_.assign(layers_.size(), -1);
    int used = 0;
    for (int k = static_cast<int>(layers_.size()) - 1; k >= 0; --k) {
      const Layer& lay = *layers_[k];
      if (!(lay.data_shape() == cur))
        throw std::invalid_argument(
            "flow model: shape mismatch entering layer " + std::to_string(k));
      if (lay.kind() == LayerKind::Split) {
        chunk_offsets_[k] = used;
        used += static_cast<const SplitLayer&>(lay).chunk_dim();
      }
      cur = lay.latent_shape();
    }
    final_offset_ = used;
    final_dim_ = cur.flat();
    if (used + final_dim_ != data_shape_.flat())
      throw std::invalid_argument("flow model: split bookkeeping mismatch");
    param_offsets_.resize(layers_.size() + 1);
    param_offsets_[0] = 0;
    for (size_t k = 0; k < layers_.size(); ++k)
      param_offsets_[k + 1] = param_offsets_[k] + layers_[k]->param_count();
  }

  /// Glow-style stack. Flat data: K steps of [coupling, linear, actnorm]
  /// with alternating coupling parity. Image data: L levels of
  /// [squeeze, K steps, split], no split after the last level.
  static FlowModel build(const FlowModelConfig& cfg, BaseDistribution base,
                         RngState& rng) {
    std::vector<std::unique_ptr<Layer>> stack;  // normalizing order
    const auto add_step = [&](TensorShape s, int parity) {
      stack.push_back(
          std::make_unique<ActNormLayer>(s, cfg.actnorm_identity_init));
      if (cfg.random_linear_init)
        stack.push_back(std::make_unique<InvertibleLinearLayer>(s, rng));
      else
        stack.push_back(std::make_unique<InvertibleLinearLayer>(s));
      stack.push_back(std::make_unique<AffineCouplingLayer>(
          s, parity, cfg.hidden, cfg.activation, rng));
    };
    if (cfg.data_shape.is_flat()) {
      for (int k = 0; k < cfg.steps_k; ++k) add_step(cfg.data_shape, k);
    } else {
      TensorShape cur = cfg.data_shape;
      for (int level = 0; level < cfg.levels_l; ++level) {
        auto squeeze = std::make_unique<SqueezeLayer>(cur);
        cur = squeeze->latent_shape();
        stack.push_back(std::move(squeeze));
        for (int k = 0; k < cfg.steps_k; ++k) add_step(cur, k);
        if (level + 1 < cfg.levels_l) {
          auto split = std::make_unique<SplitLayer>(cur);
          cur = split->latent_shape();
          stack.push_back(std::move(split));
        }
      }
    }
    std::reverse(stack.begin(), stack.end());  // to generative order
    return FlowModel(cfg.data_shape, base, std::move(stack));
  }

  TensorShape data_shape() const { return data_shape_; }
  int data_dim() const { return data_shape_.flat(); }
  const BaseDistribution& base() const { return base_; }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  Layer& layer(int k) { return *layers_[k]; }
  const Layer& layer(int k) const { return *layers_[k]; }
  std::uint64_t param_version() const { return param_version_; }

  int param_count() const { return param_offsets_.back(); }

  Vec get_params() const {
    Vec p(param_count());
    for (size_t k = 0; k < layers_.size(); ++k)
      layers_[k]->pack_params(p.data() + param_offsets_[k]);
    return p;
  }

  void set_params(ConstVecRef p) {
    if (p.size() != param_count())
      throw std::invalid_argument("set_params: wrong size");
    if (!p.allFinite())
      throw std::invalid_argument("set_params: non-finite parameter");
    for (size_t k = 0; k < layers_.size(); ++k)
      layers_[k]->unpack_params(p.data() + param_offsets_[k]);
    ++param_version_;
  }

  bool actnorm_initialized() const {
    for (const auto& l : layers_)
      if (l->kind() == LayerKind::ActNorm &&
          !static_cast<const ActNormLayer&>(*l).initialized())
        return false;
    return true;
  }

  /// Data-dependent ActNorm initialization: one normalizing pass over the
  /// batch, initializing each uninitialized ActNorm from the activations
  /// that reach it. Returns true if any channel had to fall back to the
  /// zero-variance epsilon.
  bool init_actnorm(ConstMatRef batch) {
    bool degenerate = false;
    Mat cur = batch, next;
    Vec ld = Vec::Zero(batch.rows());
    for (int k = layer_count() - 1; k >= 0; --k) {
      Layer& lay = *layers_[k];
      if (lay.kind() == LayerKind::ActNorm) {
        auto& an = static_cast<ActNormLayer&>(lay);
        if (!an.initialized()) degenerate |= an.init_from_batch(cur);
      }
      if (lay.kind() == LayerKind::Split) {
        Mat keep, chunk;
        static_cast<const SplitLayer&>(lay).inverse_split(cur, keep, chunk);
        cur = std::move(keep);
      } else {
        lay.inverse(cur, next, ld, nullptr);
        std::swap(cur, next);
      }
    }
    ++param_version_;
    return degenerate;
  }

  /// Per-row exact log-density. Optionally fills `tape` for backward().
  /// Throws NonFiniteError naming the layer index if an intermediate goes
  /// non-finite.
  Vec log_likelihood(ConstMatRef X, ModelTape* tape = nullptr) const {
    if (X.cols() != data_dim())
      throw std::invalid_argument("log_likelihood: batch width mismatch");
    const Eigen::Index n = X.rows();
    Mat z_full(n, data_dim());
    Vec ld = Vec::Zero(n);
    if (tape) {
      tape->layer_tapes.assign(layers_.size(), LayerTape{EmptyTape{}});
      tape->valid = false;
    }
    Mat cur = X, next;
    for (int k = layer_count() - 1; k >= 0; --k) {
      const Layer& lay = *layers_[k];
      if (lay.kind() == LayerKind::Split) {
        Mat keep, chunk;
        static_cast<const SplitLayer&>(lay).inverse_split(cur, keep, chunk);
        z_full.middleCols(chunk_offsets_[k], chunk.cols()) = chunk;
        cur = std::move(keep);
      } else {
        lay.inverse(cur, next, ld, tape ? &tape->layer_tapes[k] : nullptr);
        std::swap(cur, next);
      }
      if (!cur.allFinite())
        throw NonFiniteError(
            "log_likelihood: non-finite output of layer " + std::to_string(k) +
                " (" + to_string(lay.kind()) + ")",
            k);
    }
    z_full.rightCols(final_dim_) = cur;
    Vec lp = log_prob_rows(base_, z_full) + ld;
    if (tape) {
      tape->z_full = std::move(z_full);
      tape->loglik = lp;
      tape->param_version = param_version_;
      tape->rows = n;
      tape->valid = true;
    }
    return lp;
  }

  /// Exact gradients of L = sum_i d_loglik[i] * loglik_i with respect to all
  /// parameters (pack layout). The tape must come from a log_likelihood call
  /// on the current parameters.
  void backward(const ModelTape& tape, ConstVecRef d_loglik, Vec& grad) const {
    if (!tape.valid || tape.param_version != param_version_)
      throw std::logic_error("backward: stale or invalid tape");
    if (d_loglik.size() != tape.rows)
      throw std::invalid_argument("backward: d_loglik size mismatch");
    grad = Vec::Zero(param_count());

    Mat g_full;
    grad_log_prob_rows(base_, tape.z_full, g_full);
    g_full.array().colwise() *= d_loglik.array();

    Mat cur = g_full.rightCols(final_dim_), next;
    for (int k = 0; k < layer_count(); ++k) {
      const Layer& lay = *layers_[k];
      if (lay.kind() == LayerKind::Split) {
        const auto& sp = static_cast<const SplitLayer&>(lay);
        sp.backward_split(cur,
                          g_full.middleCols(chunk_offsets_[k], sp.chunk_dim()),
                          next);
        std::swap(cur, next);
      } else {
        lay.backward_inverse(tape.layer_tapes[k], cur, d_loglik, next,
                             grad.data() + param_offsets_[k]);
        std::swap(cur, next);
      }
    }
  }

  /// x = f(z), z ~ base.
  Mat sample(int n, RngState& rng) const {
    Mat z_full = tailflow::sample(base_, n, rng);
    return forward_transform_full(z_full);
  }

  /// Generative map applied to explicit z_full rows (chunk layout as above).
  Mat forward_transform_full(ConstMatRef z_full) const {
    if (z_full.cols() != data_dim())
      throw std::invalid_argument("forward_transform_full: width mismatch");
    Mat cur = z_full.rightCols(final_dim_), next;
    Vec ld = Vec::Zero(z_full.rows());
    for (int k = 0; k < layer_count(); ++k) {
      const Layer& lay = *layers_[k];
      if (lay.kind() == LayerKind::Split) {
        const auto& sp = static_cast<const SplitLayer&>(lay);
        sp.forward_split(cur,
                         z_full.middleCols(chunk_offsets_[k], sp.chunk_dim()),
                         next);
      } else {
        lay.forward(cur, next, ld);
      }
      std::swap(cur, next);
    }
    return cur;
  }

  /// x -> z_full, plus the accumulated inverse log-det if wanted.
  Mat inverse_transform(ConstMatRef X, Vec* logdet_inv = nullptr) const {
    Mat z_full(X.rows(), data_dim());
    Vec ld = Vec::Zero(X.rows());
    Mat cur = X, next;
    for (int k = layer_count() - 1; k >= 0; --k) {
      const Layer& lay = *layers_[k];
      if (lay.kind() == LayerKind::Split) {
        Mat keep, chunk;
        static_cast<const SplitLayer&>(lay).inverse_split(cur, keep, chunk);
        z_full.middleCols(chunk_offsets_[k], chunk.cols()) = chunk;
        cur = std::move(keep);
      } else {
        lay.inverse(cur, next, ld, nullptr);
        std::swap(cur, next);
      }
    }
    z_full.rightCols(final_dim_) = cur;
    if (logdet_inv) *logdet_inv = ld;
    return z_full;
  }

  int final_dim() const { return final_dim_; }
  int chunk_offset(int layer_idx) const { return chunk_offsets_[layer_idx]; }
  int param_offset(int layer_idx) const { return param_offsets_[layer_idx]; }

 private:
  TensorShape data_shape_;
  BaseDistribution base_;
  std::vector<std::unique_ptr<Layer>> layers_;
  std::vector<int> chunk_offsets_;  // -1 for non-split layers
  std::vector<int> param_offsets_;
  int final_offset_ = 0;
  int final_dim_ = 0;
  std::uint64_t param_version_ = 0;
};

}  // namespace tailflow
