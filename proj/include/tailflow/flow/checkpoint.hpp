#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tailflow/flow/model.hpp"
#include "tailflow/io.hpp"

namespace tailflow {

// Model checkpoint: little-endian binary, magic "TFCP", version 1. Stores
// base kind + nu, data shape, the RNG seed the run was configured with,
// and per-layer kind, shape, fixed structure (permutation / parity / net
// width / activation) and raw f64 parameters. Round-trips bitwise.

namespace ckpt_detail {

inline void write_shape(BinaryWriter& w, TensorShape s) {
  w.u32(static_cast<std::uint32_t>(s.channels));
  w.u32(static_cast<std::uint32_t>(s.height));
  w.u32(static_cast<std::uint32_t>(s.width));
}

inline TensorShape read_shape(BinaryReader& r) {
  TensorShape s;
  s.channels = static_cast<int>(r.u32());
  s.height = static_cast<int>(r.u32());
  s.width = static_cast<int>(r.u32());
  return s;
}

}  // namespace ckpt_detail

inline void save_checkpoint(const std::string& path, const FlowModel& model,
                            std::uint64_t seed) {
  BinaryWriter w(path);
  w.bytes("TFCP", 4);
  w.u32(1);
  w.u8(static_cast<std::uint8_t>(model.base().kind));
  w.f64(model.base().nu);
  w.u32(static_cast<std::uint32_t>(model.base().dim));
  ckpt_detail::write_shape(w, model.data_shape());
  w.u64(seed);
  w.u32(static_cast<std::uint32_t>(model.layer_count()));
  std::vector<double> buf;
  for (int k = 0; k < model.layer_count(); ++k) {
    const Layer& lay = model.layer(k);
    w.u8(static_cast<std::uint8_t>(lay.kind()));
    ckpt_detail::write_shape(w, lay.data_shape());
    switch (lay.kind()) {
      case LayerKind::ActNorm:
        w.u8(static_cast<const ActNormLayer&>(lay).initialized() ? 1 : 0);
        break;
      case LayerKind::InvertibleLinear: {
        const auto& lin = static_cast<const InvertibleLinearLayer&>(lay);
        for (int idx : lin.permutation())
          w.u32(static_cast<std::uint32_t>(idx));
        break;
      }
      case LayerKind::AffineCoupling: {
        const auto& cp = static_cast<const AffineCouplingLayer&>(lay);
        w.u32(static_cast<std::uint32_t>(cp.parity()));
        w.u32(static_cast<std::uint32_t>(cp.net().hidden()));
        w.u8(cp.net().activation() == Activation::Tanh ? 0 : 1);
        break;
      }
      case LayerKind::Squeeze:
      case LayerKind::Split:
        break;
    }
    buf.resize(static_cast<std::size_t>(lay.param_count()));
    lay.pack_params(buf.data());
    w.u32(static_cast<std::uint32_t>(buf.size()));
    w.f64_array(buf.data(), buf.size());
  }
}

struct LoadedCheckpoint {
  FlowModel model;
  std::uint64_t seed;
};

inline LoadedCheckpoint load_checkpoint(const std::string& path) {
  BinaryReader r(path);
  r.expect_magic("TFCP");
  const std::uint32_t version = r.u32();
  if (version != 1)
    throw DataError(path + ": unsupported checkpoint version " +
                        std::to_string(version) + " at byte 4",
                    4);
  const auto kind = static_cast<BaseKind>(r.u8());
  const double nu = r.f64();
  const int dim = static_cast<int>(r.u32());
  BaseDistribution base = kind == BaseKind::Gaussian
                              ? BaseDistribution::gaussian(dim)
                              : (kind == BaseKind::StudentT
                                     ? BaseDistribution::student_t(dim, nu)
                                     : BaseDistribution::laplace(dim));
  const TensorShape data_shape = ckpt_detail::read_shape(r);
  const std::uint64_t seed = r.u64();
  const std::uint32_t n_layers = r.u32();

  RngState scratch_rng(0);  // structure only; parameters overwritten below
  std::vector<std::unique_ptr<Layer>> layers;
  layers.reserve(n_layers);
  std::vector<double> buf;
  for (std::uint32_t k = 0; k < n_layers; ++k) {
    const std::int64_t kind_off = r.offset();
    const auto lkind = static_cast<LayerKind>(r.u8());
    const TensorShape s = ckpt_detail::read_shape(r);
    std::unique_ptr<Layer> lay;
    switch (lkind) {
      case LayerKind::ActNorm:
        lay = std::make_unique<ActNormLayer>(s, r.u8() != 0);
        break;
      case LayerKind::InvertibleLinear: {
        auto lin = std::make_unique<InvertibleLinearLayer>(s);
        std::vector<int> perm(static_cast<std::size_t>(s.channels));
        for (auto& p : perm) p = static_cast<int>(r.u32());
        lin->set_permutation(std::move(perm));
        lay = std::move(lin);
        break;
      }
      case LayerKind::AffineCoupling: {
        const int parity = static_cast<int>(r.u32());
        const int hidden = static_cast<int>(r.u32());
        const Activation act =
            r.u8() == 0 ? Activation::Tanh : Activation::Relu;
        lay = std::make_unique<AffineCouplingLayer>(s, parity, hidden, act,
                                                    scratch_rng);
        break;
      }
      case LayerKind::Squeeze:
        lay = std::make_unique<SqueezeLayer>(s);
        break;
      case LayerKind::Split:
        lay = std::make_unique<SplitLayer>(s);
        break;
      default:
        throw DataError(path + ": unknown layer kind at byte " +
                            std::to_string(kind_off),
                        kind_off);
    }
    const std::uint32_t count = r.u32();
    if (static_cast<int>(count) != lay->param_count())
      throw DataError(path + ": parameter count mismatch for layer " +
                          std::to_string(k) + " at byte " +
                          std::to_string(r.offset()),
                      r.offset());
    buf.resize(count);
    r.f64_array(buf.data(), count);
    lay->unpack_params(buf.data());
    layers.push_back(std::move(lay));
  }
  return LoadedCheckpoint{FlowModel(data_shape, base, std::move(layers)),
                          seed};
}

}  // namespace tailflow
