#include "lingd/simulate.hpp"

#include <cmath>

#include "lingd/random.hpp"

namespace lingd {

std::string_view to_string(Distribution d) noexcept {
  switch (d) {
    case Distribution::SignedSquareGaussian: return "signed-square-gaussian";
    case Distribution::Uniform: return "uniform";
    case Distribution::Laplace: return "laplace";
    case Distribution::Gaussian: return "gaussian";
  }
  return "unknown";
}

Distribution parse_distribution(std::string_view name) {
  for (auto d : {Distribution::SignedSquareGaussian, Distribution::Uniform,
                 Distribution::Laplace, Distribution::Gaussian}) {
    if (to_string(d) == name) return d;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown error distribution '" + std::string(name) + "'");
}

ErrorSpec::ErrorSpec(std::vector<ErrorTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "error spec is empty");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const double s = terms_[i].scale;
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::InvalidArgument,
                  "error term " + std::to_string(i + 1) + " needs a positive finite scale");
    }
  }
}

ErrorSpec ErrorSpec::uniform_default(Eigen::Index n) {
  return ErrorSpec(std::vector<ErrorTerm>(static_cast<std::size_t>(n), ErrorTerm{}));
}

std::size_t ErrorSpec::gaussian_count() const noexcept {
  std::size_t count = 0;
  for (const auto& t : terms_) count += t.dist == Distribution::Gaussian;
  return count;
}

namespace {

double draw(Rng& rng, const ErrorTerm& term) {
  switch (term.dist) {
    case Distribution::SignedSquareGaussian: return term.scale * signed_square(rng.normal());
    case Distribution::Uniform: return term.scale * (2.0 * rng.uniform() - 1.0);
    case Distribution::Laplace: return rng.laplace(term.scale);
    case Distribution::Gaussian: return term.scale * rng.normal();
  }
  return 0.0;
}

}  // namespace

Dataset sample_errors(const ErrorSpec& spec, Eigen::Index n_samples, std::uint64_t seed) {
  if (n_samples <= 0) throw Error(ErrorCode::InvalidArgument, "n_samples must be positive");
  Eigen::MatrixXd e(spec.size(), n_samples);
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    for (Eigen::Index t = 0; t < n_samples; ++t) e(i, t) = draw(rng, spec[i]);
  }
  return Dataset(std::move(e), {}, Provenance{"errors", seed});
}

Dataset sample_equilibrium(const StructuralModel& model, Eigen::Index n_samples,
                           std::uint64_t seed) {
  if (model.errors.size() != model.size()) {
    throw Error(ErrorCode::InvalidArgument, "error spec size does not match B");
  }
  Eigen::MatrixXd e = sample_errors(model.errors, n_samples, seed).values();
  if (model.error_gain.size() != 0) {
    if (model.error_gain.size() != model.size()) {
      throw Error(ErrorCode::InvalidArgument, "error gain size does not match B");
    }
    e = model.error_gain.asDiagonal() * e;
  }
  const Eigen::MatrixXd a = reduced_form(model.b);
  return Dataset(a * e, {}, Provenance{"equilibrium", seed});
}

DynamicsResult iterate_dynamics(const Eigen::MatrixXd& b_dyn, const Eigen::VectorXd& e,
                                int steps, std::optional<Eigen::VectorXd> x0) {
  detail::require_square(b_dyn, "dynamic coefficient matrix");
  const Eigen::Index n = b_dyn.rows();
  if (e.size() != n) throw Error(ErrorCode::InvalidArgument, "error vector size mismatch");
  if (steps < 0) throw Error(ErrorCode::InvalidArgument, "steps must be non-negative");
  Eigen::VectorXd x = x0 ? *x0 : Eigen::VectorXd::Zero(n);
  if (x.size() != n) throw Error(ErrorCode::InvalidArgument, "initial state size mismatch");
  if (!b_dyn.allFinite() || !e.allFinite() || !x.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "dynamics inputs must be finite");
  }

  std::vector<Eigen::VectorXd> states{x};
  DynamicsResult result;
  for (int k = 1; k <= steps; ++k) {
    Eigen::VectorXd next = b_dyn * x + e;
    if (!next.allFinite() || next.lpNorm<Eigen::Infinity>() > kDivergenceBound) {
      throw Error(ErrorCode::Diverged, "state norm exceeded 1e12 after " + std::to_string(k) +
                                           " steps; B_dyn is unstable");
    }
    const double change = (next - x).lpNorm<Eigen::Infinity>();
    x = std::move(next);
    if (change < kFixedPointTolerance) {
      // The previous state was already a fixed point.
      result.converged = true;
      break;
    }
    states.push_back(x);
    result.steps_taken = k;
  }

  result.trajectory.resize(n, static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) {
    result.trajectory.col(static_cast<Eigen::Index>(k)) = states[k];
  }
  result.state = x;
  return result;
}

}  // namespace lingd
