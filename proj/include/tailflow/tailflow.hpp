#pragma once

// Umbrella header for the tailflow library: normalizing-flow density
// estimation with swappable fat-tailed base distributions (multivariate
// Student-t, Laplace, Gaussian), a maximum-likelihood trainer, and a
// robust-statistics analysis toolkit.

#include "tailflow/base_dist.hpp"
#include "tailflow/data/dataset.hpp"
#include "tailflow/data/idx.hpp"
#include "tailflow/flow/checkpoint.hpp"
#include "tailflow/flow/coupling_net.hpp"
#include "tailflow/flow/layers.hpp"
#include "tailflow/flow/model.hpp"
#include "tailflow/io.hpp"
#include "tailflow/rng.hpp"
#include "tailflow/robust.hpp"
#include "tailflow/robust_io.hpp"
#include "tailflow/special.hpp"
#include "tailflow/svg.hpp"
#include "tailflow/train/adam.hpp"
#include "tailflow/train/clip.hpp"
#include "tailflow/train/schedule.hpp"
#include "tailflow/train/trainer.hpp"
#include "tailflow/types.hpp"
