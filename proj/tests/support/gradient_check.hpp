#pragma once

#include <algorithm>
#include <cmath>

#include "resperf/network.hpp"

namespace resperf::testing {

struct GradientCheck {
  double relative_error = 0.0;  // ||analytic - numeric|| / (||analytic|| + ||numeric||)
  double max_relative_error = 0.0;  // max |a - n| / max(|a|, |n|, floor)
  std::size_t parameters = 0;
};

/// Central differences of L = sum(forward(x) * r) against backward, every
/// parameter perturbed by +-step. Dropout masks are held fixed by replaying
/// the same stream. Biases are set to random non-zero values first: with zero
/// biases a unit whose inputs are all dead ReLUs sits exactly on the kink.
inline GradientCheck check_gradients(Network net, std::size_t batch, std::uint64_t seed,
                                     double step = 1e-5, double floor = 1e-8) {
  RandomStream rng(seed, {7});
  for (auto& p : net.mutable_params()) {
    for (auto& v : p.bias.values()) v = 0.1 * (2.0 * rng.uniform() - 1.0);
  }
  Tensor x({batch, net.input_length()});
  for (auto& v : x.values()) v = 2.0 * rng.uniform() - 1.0;
  Tensor r({batch, 1});
  for (auto& v : r.values()) v = 2.0 * rng.uniform() - 1.0;

  auto loss = [&](const Network& n) {
    RandomStream drop(seed, {9});
    const Tensor y = n.forward(x, Mode::Train, &drop);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * r[i];
    return s;
  };

  RandomStream drop(seed, {9});
  ForwardCache cache;
  net.forward(x, Mode::Train, &drop, &cache);
  const Gradients analytic = net.backward(cache, r);

  double diff = 0.0, na = 0.0, nn = 0.0;
  GradientCheck out;
  for (std::size_t l = 0; l < net.params().size(); ++l) {
    for (int which = 0; which < 2; ++which) {
      const std::size_t count =
          which == 0 ? net.params()[l].weight.size() : net.params()[l].bias.size();
      for (std::size_t k = 0; k < count; ++k) {
        auto& slot = [&]() -> double& {
          auto& p = net.mutable_params()[l];
          return which == 0 ? p.weight[k] : p.bias[k];
        }();
        const double saved = slot;
        slot = saved + step;
        const double up = loss(net);
        slot = saved - step;
        const double down = loss(net);
        slot = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double a = which == 0 ? analytic[l].weight[k] : analytic[l].bias[k];
        diff += (a - numeric) * (a - numeric);
        const double scale = std::max({std::abs(a), std::abs(numeric), floor});
        out.max_relative_error = std::max(out.max_relative_error, std::abs(a - numeric) / scale);
        na += a * a;
        nn += numeric * numeric;
        ++out.parameters;
      }
    }
  }
  out.relative_error = std::sqrt(diff) / (std::sqrt(na) + std::sqrt(nn));
  return out;
}

}  // namespace resperf::testing
