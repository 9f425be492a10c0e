#include "lingd/ica.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

#include "lingd/error.hpp"
#include "lingd/random.hpp"

namespace lingd {

namespace {

// E[log cosh(v)] for v ~ N(0, 1).
constexpr double kGaussianLogCosh = 0.374567207491438;

// (W W^T)^(-1/2) W
Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w * w.transpose());
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose() * w;
}

double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// One fixed-point sweep for a block of rows: w+ = E[z g(w z)] - E[g'(w z)] w.
Eigen::MatrixXd fixed_point_update(const Eigen::MatrixXd& w, const Eigen::MatrixXd& z,
                                   Nonlinearity g) {
  const double n = static_cast<double>(z.cols());
  const Eigen::ArrayXXd y = (w * z).array();
  Eigen::ArrayXXd gy;
  Eigen::VectorXd dg;
  if (g == Nonlinearity::Tanh) {
    gy = y.tanh();
    dg = (1.0 - gy.square()).rowwise().mean().matrix();
  } else {
    gy = y.cube();
    dg = (3.0 * y.square()).rowwise().mean().matrix();
  }
  return (gy.matrix() * z.transpose()) / n - dg.asDiagonal() * w;
}

double row_change(const Eigen::RowVectorXd& next, const Eigen::RowVectorXd& prev) {
  return std::min((next - prev).lpNorm<Eigen::Infinity>(),
                  (next + prev).lpNorm<Eigen::Infinity>());
}

Eigen::VectorXd negentropy(const Eigen::MatrixXd& w, const Eigen::MatrixXd& z, Nonlinearity g) {
  const Eigen::MatrixXd y = w * z;
  Eigen::VectorXd j(y.rows());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    if (g == Nonlinearity::Tanh) {
      double s = 0.0;
      for (Eigen::Index t = 0; t < y.cols(); ++t) s += log_cosh(y(i, t));
      const double d = s / static_cast<double>(y.cols()) - kGaussianLogCosh;
      j(i) = d * d;
    } else {
      const double kurt = y.row(i).array().pow(4).mean() - 3.0;
      j(i) = kurt * kurt / 48.0;
    }
  }
  return j;
}

struct Run {
  Eigen::MatrixXd w;
  bool converged = false;
  int iterations = 0;
};

Run run_symmetric(Eigen::MatrixXd w, const Eigen::MatrixXd& z, const IcaConfig& cfg) {
  Run run;
  w = symmetric_decorrelation(w);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    Eigen::MatrixXd next = symmetric_decorrelation(fixed_point_update(w, z, cfg.nonlinearity));
    double change = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      change = std::max(change, row_change(next.row(i), w.row(i)));
    }
    w = std::move(next);
    run.iterations = it;
    if (change < cfg.tol) {
      run.converged = true;
      break;
    }
  }
  run.w = std::move(w);
  return run;
}

Run run_deflation(const Eigen::MatrixXd& init, const Eigen::MatrixXd& z, const IcaConfig& cfg) {
  const Eigen::Index n = init.rows();
  Run run;
  run.converged = true;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    auto project_out = [&](Eigen::RowVectorXd v) {
      for (Eigen::Index q = 0; q < p; ++q) v -= v.dot(w.row(q)) * w.row(q);
      return Eigen::RowVectorXd(v / v.norm());
    };
    Eigen::RowVectorXd row = project_out(init.row(p));
    bool done = false;
    for (int it = 1; it <= cfg.max_iter; ++it) {
      Eigen::RowVectorXd next = project_out(fixed_point_update(row, z, cfg.nonlinearity));
      const double change = row_change(next, row);
      row = next;
      run.iterations = std::max(run.iterations, it);
      if (change < cfg.tol) {
        done = true;
        break;
      }
    }
    run.converged = run.converged && done;
    w.row(p) = row;
  }
  run.w = std::move(w);
  return run;
}

}  // namespace

Whitening center_whiten(const Eigen::MatrixXd& x) {
  if (x.rows() == 0 || x.cols() <= x.rows()) {
    throw Error(ErrorCode::InvalidArgument, "whitening needs more samples than variables");
  }
  Whitening out;
  out.mean = x.rowwise().mean();
  const Eigen::MatrixXd centered = x.colwise() - out.mean;
  const Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(x.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (!(ev.minCoeff() > 1e-10 * std::max(ev.maxCoeff(), std::numeric_limits<double>::min()))) {
    throw Error(ErrorCode::RankDeficient, "sample covariance is singular");
  }
  out.v = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
          es.eigenvectors().transpose();
  out.whitened = out.v * centered;
  return out;
}

UnmixingEstimate fastica(const Eigen::MatrixXd& x, const IcaConfig& config,
                         const std::optional<Eigen::MatrixXd>& initial_guess) {
  if (config.max_iter < 1 || config.restarts < 1 || !(config.tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ICA needs max_iter >= 1, restarts >= 1, tol > 0");
  }
  const Whitening wh = center_whiten(x);
  const Eigen::Index n = x.rows();

  UnmixingEstimate best;
  bool have_best = false;
  for (int r = 0; r < config.restarts; ++r) {
    Eigen::MatrixXd init(n, n);
    if (r == 0 && initial_guess) {
      if (initial_guess->rows() != n || initial_guess->cols() != n) {
        throw Error(ErrorCode::InvalidArgument, "initial unmixing guess has the wrong shape");
      }
      // Express the guess in whitened coordinates: W_orig = W_white V.
      init = *initial_guess * wh.v.inverse();
    } else {
      Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(r)));
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) init(i, j) = rng.normal();
    }

    const Run run = config.mode == Orthogonalization::Symmetric
                        ? run_symmetric(init, wh.whitened, config)
                        : run_deflation(init, wh.whitened, config);

    UnmixingEstimate est;
    est.w = run.w * wh.v;
    est.converged = run.converged;
    est.iterations_used = run.iterations;
    est.negentropy = negentropy(run.w, wh.whitened, config.nonlinearity);

    const bool better = !have_best || (est.converged && !best.converged) ||
                        (est.converged == best.converged && est.contrast() > best.contrast());
    if (better) {
      best = std::move(est);
      have_best = true;
    }
  }
  return best;
}

double amari_error(const Eigen::MatrixXd& w, const Eigen::MatrixXd& a) {
  if (w.rows() != w.cols() || a.rows() != a.cols() || w.cols() != a.rows()) {
    throw Error(ErrorCode::InvalidArgument, "amari_error needs square matrices of equal size");
  }
  const Eigen::Index n = w.rows();
  if (n < 2) return 0.0;
  const Eigen::ArrayXXd p = (w * a).cwiseAbs().array();
  const double rows = ((p.rowwise().sum() / p.rowwise().maxCoeff()) - 1.0).sum();
  const double cols = ((p.colwise().sum() / p.colwise().maxCoeff()) - 1.0).sum();
  return (rows + cols) / (2.0 * static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace lingd
