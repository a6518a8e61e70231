#include "resperf/baselines.hpp"

#include <Eigen/Dense>

namespace resperf {

PolyModel fit_poly(const Tensor& features, std::span<const double> targets, int degree,
                   double ridge) {
  if (features.rank() != 2) throw std::invalid_argument("features must be an {m, p} matrix");
  const std::size_t m = features.dim(0);
  const std::size_t p = features.dim(1);
  if (targets.size() != m) throw std::invalid_argument("one target per row required");
  if (!(ridge >= 0.0)) throw std::invalid_argument("ridge must be non-negative");
  const auto q = static_cast<Eigen::Index>(expanded_feature_count(p, degree) + 1);

  Eigen::MatrixXd design(static_cast<Eigen::Index>(m), q);
  for (std::size_t i = 0; i < m; ++i) {
    const auto x = expand_polynomial(std::span<const double>(features.data() + i * p, p), degree);
    const auto r = static_cast<Eigen::Index>(i);
    design(r, 0) = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) design(r, static_cast<Eigen::Index>(j + 1)) = x[j];
  }
  const Eigen::Map<const Eigen::VectorXd> t(targets.data(), static_cast<Eigen::Index>(m));

  Eigen::MatrixXd gram = design.transpose() * design;
  gram.diagonal().tail(q - 1).array() += ridge;
  const Eigen::VectorXd rhs = design.transpose() * t;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-12 * ldlt.vectorD().maxCoeff()) {
    throw std::runtime_error("polynomial design matrix is singular");
  }
  const Eigen::VectorXd w = ldlt.solve(rhs);

  PolyModel model;
  model.degree = degree;
  model.ridge = ridge;
  model.coefficients.assign(w.data(), w.data() + w.size());
  return model;
}

TrainedPhaseModel train_poly(const Dataset& ds, PhaseKind phase, const Hyperparams& hp,
                             int degree, double ridge) {
  const auto data = prepare_data(ds, phase, hp);
  TrainedPhaseModel model;
  model.type = ModelType::Poly;
  model.kind = ds.kind;
  model.phase = phase;
  model.schema_version = ds.schema.version;
  model.hyperparams = hp;
  model.transform = data.transform;
  model.poly = fit_poly(data.train_x, data.train_t, degree, ridge);
  return model;
}

TrainedPhaseModel train_mlp(const Dataset& ds, PhaseKind phase, const Hyperparams& hp,
                            const EpochCallback& on_epoch) {
  const auto data = prepare_data(ds, phase, hp);
  TrainedPhaseModel model;
  model.type = ModelType::Mlp;
  model.kind = ds.kind;
  model.phase = phase;
  model.schema_version = ds.schema.version;
  model.hyperparams = hp;
  model.transform = data.transform;
  model.network = build_mlp(ds.schema.size(), hp.seed);
  model.history = fit_network(model.network, data, hp, on_epoch);
  return model;
}

}  // namespace resperf
