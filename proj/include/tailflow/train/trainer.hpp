#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailflow/data/dataset.hpp"
#include "tailflow/flow/model.hpp"
#include "tailflow/rng.hpp"
#include "tailflow/train/adam.hpp"
#include "tailflow/train/clip.hpp"
#include "tailflow/train/schedule.hpp"
#include "tailflow/types.hpp"

namespace tailflow {

struct TrainConfig {
  LrSchedule schedule = LrSchedule::constant(1e-3);
  AdamConfig adam;
  ClipMode clip = ClipMode::none();
  int batch_size = 256;
  long max_steps = 1000;
  long eval_every = 100;
  std::uint64_t seed = 1;
  // cap on rows evaluated for the train-NLL metric (keeps evals cheap)
  int train_eval_rows = 4096;

  void validate() const {
    if (batch_size < 1)
      throw std::invalid_argument("train config: batch_size must be >= 1");
    if (max_steps < 0)
      throw std::invalid_argument("train config: max_steps must be >= 0");
    if (eval_every < 1)
      throw std::invalid_argument("train config: eval_every must be >= 1");
  }
};

enum class TrainStatus { Converged, Diverged };

inline const char* to_string(TrainStatus s) {
  return s == TrainStatus::Converged ? "converged" : "diverged";
}

struct MetricsRow {
  long step;
  double train_nll;
  double val_nll;
  double grad_norm;  // pre-clip global l2 norm of the last update
  double lr;
  double seconds;    // wall clock since training start
};

/// Per-eval-step records plus the run outcome. NLL values are per-dimension:
/// nats/dim for plain data, bits/dim for dequantized image data (the
/// conversion adds the `bits` change-of-variables offset:
/// bits/dim = nats/dim / ln 2 + bits).
struct TrainMetrics {
  std::vector<MetricsRow> rows;
  TrainStatus status = TrainStatus::Converged;
  std::string units = "nats_per_dim";
  double initial_train_nll = 0.0;
  double final_val_nll = 0.0;
  double best_val_nll = 0.0;
  long best_val_step = 0;
  long steps_run = 0;
  bool actnorm_degenerate = false;
};

/// Mean NLL per dimension (nats) over the given rows; pure, does not touch
/// the model or any RNG.
inline double evaluate_nats(const FlowModel& model, ConstMatRef X) {
  if (X.rows() == 0) return 0.0;
  const Vec lp = model.log_likelihood(X);
  return -lp.mean() / model.data_dim();
}

/// Loss = mean over the batch of -loglik/D (nats per dimension), with the
/// tape left ready for backward(). Throws NonFiniteError with the offending
/// row index if an input row or its likelihood is non-finite.
inline double nll_loss(const FlowModel& model, ConstMatRef batch,
                       ModelTape& tape) {
  if (batch.rows() == 0)
    throw std::invalid_argument("nll_loss: empty batch");
  for (Eigen::Index i = 0; i < batch.rows(); ++i)
    if (!batch.row(i).allFinite())
      throw NonFiniteError("nll_loss: non-finite input at row " +
                               std::to_string(i),
                           static_cast<int>(i));
  const Vec lp = model.log_likelihood(batch, &tape);
  for (Eigen::Index i = 0; i < lp.size(); ++i)
    if (!std::isfinite(lp[i]))
      throw NonFiniteError("nll_loss: non-finite log-likelihood at row " +
                               std::to_string(i),
                           static_cast<int>(i));
  return -lp.mean() / model.data_dim();
}

/// Gradient of nll_loss with respect to all parameters.
inline void nll_backward(const FlowModel& model, const ModelTape& tape,
                         Vec& grad) {
  const double scale =
      -1.0 / (static_cast<double>(tape.rows) * model.data_dim());
  model.backward(tape, Vec::Constant(tape.rows, scale), grad);
}

namespace train_detail {

inline double to_report_units(double nats_per_dim, const DatasetMeta& meta) {
  if (!meta.dequantized) return nats_per_dim;
  return nats_per_dim / detail::kLogTwo + meta.bits;
}

inline Mat gather_rows(const Mat& X, const std::vector<int>& idx, int limit) {
  const int n = limit > 0
                    ? std::min<int>(limit, static_cast<int>(idx.size()))
                    : static_cast<int>(idx.size());
  Mat out(n, X.cols());
  for (int i = 0; i < n; ++i) out.row(i) = X.row(idx[static_cast<size_t>(i)]);
  return out;
}

}  // namespace train_detail

/// Maximum-likelihood training: schedule -> forward -> backward -> clip ->
/// Adam. Divergence (non-finite loss, or batch loss above 10x the initial
/// loss for 100 consecutive steps) stops the run with a Diverged status
/// instead of throwing. For data whose initial loss is not positive the
/// blow-up threshold is initial + 10.
inline TrainMetrics train(FlowModel& model, const Dataset& data,
                          const TrainConfig& cfg) {
  cfg.validate();
  if (data.split.train.empty())
    throw std::invalid_argument("train: dataset has no training split");

  TrainMetrics metrics;
  metrics.units = data.meta.dequantized ? "bits_per_dim" : "nats_per_dim";
  RngState rng(cfg.seed);
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  // deterministic epoch shuffling
  std::vector<int> order = data.split.train;
  std::size_t cursor = order.size();  // force shuffle before first batch
  const auto next_batch = [&](Mat& batch) {
    const int bs = std::min<int>(cfg.batch_size,
                                 static_cast<int>(order.size()));
    batch.resize(bs, data.X.cols());
    for (int i = 0; i < bs; ++i) {
      if (cursor >= order.size()) {
        data_detail::shuffle(order, rng);
        cursor = 0;
      }
      batch.row(i) = data.X.row(order[cursor++]);
    }
  };

  Mat batch;
  next_batch(batch);  // first batch used for ActNorm data init and step 0
  if (!model.actnorm_initialized())
    metrics.actnorm_degenerate = model.init_actnorm(batch);

  const Mat val_rows = train_detail::gather_rows(data.X, data.split.val, 0);
  const Mat train_probe =
      train_detail::gather_rows(data.X, data.split.train, cfg.train_eval_rows);

  Vec params = model.get_params();
  AdamState adam(params.size());
  ModelTape tape;
  Vec grad;

  double last_grad_norm = 0.0;
  double last_lr = 0.0;
  const auto record = [&](long step) {
    const double train_nll = evaluate_nats(model, train_probe);
    const double val_nll =
        val_rows.rows() > 0 ? evaluate_nats(model, val_rows) : train_nll;
    metrics.rows.push_back(
        {step, train_detail::to_report_units(train_nll, data.meta),
         train_detail::to_report_units(val_nll, data.meta), last_grad_norm,
         last_lr, elapsed()});
    if (metrics.rows.size() == 1 ||
        val_nll < metrics.best_val_nll) {
      metrics.best_val_nll = val_nll;
      metrics.best_val_step = step;
    }
    metrics.final_val_nll = val_nll;
  };

  metrics.initial_train_nll = evaluate_nats(model, train_probe);
  record(0);
  const double init_loss = metrics.initial_train_nll;
  const double blowup_threshold =
      init_loss > 0 ? 10.0 * init_loss : init_loss + 10.0;
  int consecutive_blowup = 0;

  for (long step = 0; step < cfg.max_steps; ++step) {
    const double lr = lr_at(cfg.schedule, step);
    last_lr = lr;
    if (step > 0) next_batch(batch);

    double loss;
    try {
      loss = nll_loss(model, batch, tape);
      nll_backward(model, tape, grad);
      last_grad_norm = grad.norm();
      clip_gradients_inplace(grad, cfg.clip);
      adam_step(params, grad, adam, cfg.adam, lr);
      model.set_params(params);
    } catch (const NonFiniteError&) {
      metrics.status = TrainStatus::Diverged;
      metrics.steps_run = step;
      record(step);
      return metrics;
    } catch (const std::runtime_error&) {  // non-finite Adam update etc.
      metrics.status = TrainStatus::Diverged;
      metrics.steps_run = step;
      record(step);
      return metrics;
    }

    if (!std::isfinite(loss) || loss > blowup_threshold) {
      if (!std::isfinite(loss) || ++consecutive_blowup >= 100) {
        metrics.status = TrainStatus::Diverged;
        metrics.steps_run = step + 1;
        record(step + 1);
        return metrics;
      }
    } else {
      consecutive_blowup = 0;
    }

    if ((step + 1) % cfg.eval_every == 0 || step + 1 == cfg.max_steps)
      record(step + 1);
  }
  metrics.steps_run = cfg.max_steps;
  metrics.status = TrainStatus::Converged;
  return metrics;
}

/// CSV schema: step,train_nll,val_nll,grad_norm,lr,seconds
inline void write_metrics_csv(const std::string& path,
                              const TrainMetrics& metrics) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write metrics CSV: " + path);
  f << "step,train_nll,val_nll,grad_norm,lr,seconds\n";
  char line[256];
  for (const auto& r : metrics.rows) {
    std::snprintf(line, sizeof(line), "%ld,%.17g,%.17g,%.17g,%.17g,%.3f\n",
                  r.step, r.train_nll, r.val_nll, r.grad_norm, r.lr,
                  r.seconds);
    f << line;
  }
}

}  // namespace tailflow
