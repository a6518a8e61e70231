#pragma once

#include <span>

#include "resperf/model.hpp"

namespace resperf {

/// Closed-form ridge fit of `targets` on the polynomial expansion of the rows
/// of `features` ({m, p}). The intercept is not penalized. Throws
/// std::runtime_error when the normal equations are singular.
PolyModel fit_poly(const Tensor& features, std::span<const double> targets, int degree = 2,
                   double ridge = 1e-6);

/// Polynomial baseline on the same split and fitted pipeline as `train`.
TrainedPhaseModel train_poly(const Dataset& ds, PhaseKind phase, const Hyperparams& hp,
                             int degree = 2, double ridge = 1e-6);

/// Fully-connected baseline trained with the same loop as `train`.
TrainedPhaseModel train_mlp(const Dataset& ds, PhaseKind phase, const Hyperparams& hp,
                            const EpochCallback& on_epoch = {});

}  // namespace resperf
