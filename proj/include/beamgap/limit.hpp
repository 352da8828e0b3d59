#pragma once

// Macroscopic dispersion in the high-contrast limit: plane-wave modes of
// the homogenized medium coupled to the soft-resonance matrix, and the
// epsilon-refinement study comparing scaled Bloch eigenvalues against the
// limit prediction.
//
// A plane wave amplitude A, direction d, wavenumber kappa propagates at
// frequency-squared lambda when (Q(d) kappa^2 - beta(lambda)) A = 0 with
// Q_jp(d) = C_jlpq d_l d_q, so admissible kappa^2 are the eigenvalues of
// the pencil (beta, Q).  Positive ones give real wavenumbers; their count
// equals the number of positive eigenvalues of beta.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beamgap/bloch.hpp"
#include "beamgap/errors.hpp"
#include "beamgap/homogenization.hpp"
#include "beamgap/lattice.hpp"
#include "beamgap/mesh.hpp"
#include "beamgap/resonance.hpp"

namespace beamgap {

// Acoustic tensor of the homogenized medium for a (not necessarily unit)
// vector d: Q_jp = C_jlpq d_l d_q.
inline Eigen::Matrix2d acoustic_tensor(const HomogenizedTensor& ch, const Vec2& d) {
  Eigen::Matrix2d q = Eigen::Matrix2d::Zero();
  for (int j = 1; j <= 2; ++j)
    for (int p = 1; p <= 2; ++p)
      for (int l = 1; l <= 2; ++l)
        for (int qi = 1; qi <= 2; ++qi)
          q(j - 1, p - 1) += ch(j, l, p, qi) * d[l - 1] * d[qi - 1];
  return q;
}

struct LimitMode {
  double lambda = 0;       // frequency-squared the mode propagates at
  Vec2 direction;          // unit propagation direction
  double wavenumber = 0;   // |k| of the plane wave
  Eigen::Vector2d amplitude;  // unit polarization
  double residual = 0;     // ||(Q |k|^2 - beta) A||
};

// Propagating plane-wave modes along `direction` at the lambda the given
// beta matrix was evaluated at.  Zero, one, or two modes come back,
// matching the number of positive eigenvalues of beta.
inline std::vector<LimitMode> limit_modes(const HomogenizedTensor& ch,
                                          const Eigen::Matrix2d& beta,
                                          double lambda, const Vec2& direction) {
  double n = direction.norm();
  if (!(n > 0)) throw config_error("propagation direction must be nonzero");
  Vec2 d = direction / n;
  Eigen::Matrix2d q = acoustic_tensor(ch, d);
  if (!(q(0, 0) > 0) || !(q.determinant() > 0))
    throw numeric_error("acoustic tensor is not positive definite");

  // kappa^2 solves beta A = kappa^2 Q A.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> ges;
  Eigen::Matrix2d beta_sym = 0.5 * (beta + beta.transpose());
  ges.compute(beta_sym, q);
  if (ges.info() != Eigen::Success)
    throw numeric_error("limit mode eigensolve failed");

  std::vector<LimitMode> modes;
  for (int i = 0; i < 2; ++i) {
    double t = ges.eigenvalues()[i];
    if (!(t > 0)) continue;
    LimitMode m;
    m.lambda = lambda;
    m.direction = d;
    m.wavenumber = std::sqrt(t);
    m.amplitude = ges.eigenvectors().col(i).normalized();
    m.residual = ((q * t - beta_sym) * m.amplitude).norm();
    modes.push_back(m);
  }
  return modes;
}

namespace detail {

inline bool positive_definite_2x2(const Eigen::Matrix2d& m) {
  return m(0, 0) > 0 && m.determinant() > 0;
}

}  // namespace detail

using BetaFunction = std::function<Eigen::Matrix2d(double)>;

// Smallest positive lambda with det(Q(k) - beta(lambda)) = 0 for a full
// (non-unit) wavevector k.  Fixed-point iteration seeded by the rigid-mass
// approximation beta ~ lambda |Gamma| I, with damping; falls back to a
// determinant sign-change bisection when the iteration cannot proceed.
inline double limit_eigenvalue(const HomogenizedTensor& ch, const BetaFunction& beta,
                               double cell_length, const Vec2& k_macro) {
  if (!(cell_length > 0)) throw config_error("cell length must be positive");
  Eigen::Matrix2d qk = acoustic_tensor(ch, k_macro);
  if (!detail::positive_definite_2x2(qk))
    throw numeric_error("acoustic tensor is not positive definite");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> qe(qk);
  const double lam0 = qe.eigenvalues()[0] / cell_length;
  if (!(lam0 > 0)) throw numeric_error("limit seed is not positive");

  auto det_mismatch = [&](double lam) {
    return (qk - beta(lam)).determinant();
  };
  auto bisect_fallback = [&]() {
    double prev = lam0 * 0.02;
    double fprev = det_mismatch(prev);
    for (int j = 2; j <= 2000; ++j) {
      double lam = lam0 * 0.02 * j;
      double f = det_mismatch(lam);
      if ((fprev < 0) != (f < 0))
        return detail::bisect_root(det_mismatch, prev, lam, 1e-13 * std::max(1.0, lam));
      prev = lam;
      fprev = f;
    }
    throw numeric_error("no limit eigenvalue found near the seed");
  };

  double lam = lam0;
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::Matrix2d b;
    try {
      b = beta(lam) / lam;
    } catch (const pole_error&) {
      return bisect_fallback();
    } catch (const resonance_error&) {
      return bisect_fallback();
    }
    Eigen::Matrix2d b_sym = 0.5 * (b + b.transpose());
    if (!detail::positive_definite_2x2(b_sym)) return bisect_fallback();

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> ges(qk, b_sym);
    if (ges.info() != Eigen::Success) return bisect_fallback();
    double t = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < 2; ++i)
      if (ges.eigenvalues()[i] > 0) {
        t = ges.eigenvalues()[i];
        break;
      }
    if (std::isnan(t)) return bisect_fallback();

    double next = lam + 0.5 * (t - lam);
    if (std::abs(next - lam) <= 1e-10 * std::max(1.0, lam)) return next;
    lam = next;
  }
  return bisect_fallback();
}

struct LimitValidationRow {
  double epsilon = 0;
  double lambda_bloch = 0;
  double lambda_limit = 0;
  double rel_dev = 0;
  double order_estimate = std::numeric_limits<double>::quiet_NaN();
};

// Scaled Bloch spectra against the limit prediction over a list of cell
// sizes.  The limit eigenvalue is epsilon-independent and computed once
// from the finite-element tensor and beta on the same mesh resolution.
inline std::vector<LimitValidationRow> validate_limit(const UnitCellGraph& g,
                                                      const std::vector<double>& epsilons,
                                                      const Vec2& k_macro, double h) {
  if (epsilons.empty()) throw config_error("epsilon list must not be empty");
  HomogenizedTensor ch = homogenized_tensor(g, h);
  SoftModel soft(soft_subgraph(g), h);
  const double cell_length = g.total_length();
  BetaFunction beta = [&](double lam) {
    return detail::beta_from_model(soft, cell_length, lam);
  };
  const double lam_limit = limit_eigenvalue(ch, beta, cell_length, k_macro);

  std::vector<LimitValidationRow> rows;
  MeshSpec mesh = make_mesh(g, h);
  for (double eps : epsilons) {
    ScalingParams s = ScalingParams::with_default_contrast(eps);
    Assembly<std::complex<double>> asmb = assemble_scaled(g, s, k_macro, mesh);
    double lam_bloch = detail::pencil_eigenvalues(asmb)[0];
    LimitValidationRow row;
    row.epsilon = eps;
    row.lambda_bloch = lam_bloch;
    row.lambda_limit = lam_limit;
    row.rel_dev = std::abs(lam_bloch - lam_limit) / std::abs(lam_limit);
    if (!rows.empty()) {
      const LimitValidationRow& prev = rows.back();
      row.order_estimate = std::log(prev.rel_dev / row.rel_dev) /
                           std::log(prev.epsilon / eps);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace beamgap
