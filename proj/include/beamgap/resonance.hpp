#pragma once

// Soft-component resonance: the clamped soft problem driven by a rigid unit
// translation, the 2x2 coupling matrix beta(lambda) it induces, closed forms
// for an isolated straight soft segment with unit material, and the spectral
// scan that partitions a lambda window into band / gap intervals.
//
// Sign conventions: beta(lambda) = lambda |Gamma| I + lambda G(lambda) where
// |Gamma| is the total beam length of the cell (both components) and
// G_jp = integral of the drive-p correction against drive j over the soft
// beams.  The correction solves (K0 - lambda M0) x = lambda F with clamped
// soft ends, so beta inherits poles at the clamped soft spectrum except
// where the drive does not couple.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "beamgap/assembly.hpp"
#include "beamgap/errors.hpp"
#include "beamgap/lattice.hpp"
#include "beamgap/mesh.hpp"
#include "beamgap/parallel.hpp"

namespace beamgap {

// ----------------------------------------------------------------------
// Closed forms for one straight soft segment of half-length a, unit
// material, clamped ends, driven by a rigid unit translation.  beta1 is
// the axial response, beta2 the transverse one.
// ----------------------------------------------------------------------

namespace detail {

// sin(sqrt(t) x)/(sqrt(t) x) and cos(sqrt(t) x) as functions of t = mu^2,
// valid for either sign of t and smooth through t = 0.
inline double sinc_x2(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t / 6.0 + t * t / 120.0;
  if (t > 0) {
    double x = std::sqrt(t);
    return std::sin(x) / x;
  }
  double x = std::sqrt(-t);
  return std::sinh(x) / x;
}

inline double cos_x2(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t / 2.0 + t * t / 24.0;
  if (t > 0) return std::cos(std::sqrt(t));
  return std::cosh(std::sqrt(-t));
}

inline void require_positive_lambda(double lambda) {
  if (!(lambda > 0)) throw config_error("lambda must be positive");
}

inline void require_positive_half_length(double a) {
  if (!(a > 0)) throw config_error("segment half-length must be positive");
}

}  // namespace detail

inline double beta1_closed(double lambda, double a) {
  detail::require_positive_lambda(lambda);
  detail::require_positive_half_length(a);
  double s = std::sqrt(lambda);
  // Axial poles sit where cos(sqrt(lambda) a) vanishes; reject arguments
  // closer than 1e-8 to pi/2 + m pi in the sqrt(lambda) a variable.
  double q = s * a / M_PI + 0.5;
  if (std::abs(q - std::round(q)) * M_PI < 1e-8) {
    double m = std::round(q);  // sqrt(pole) a = (m - 1/2) pi
    double pole = std::pow((m - 0.5) * M_PI / a, 2);
    throw pole_error("lambda is at an axial resonance", pole);
  }
  return 2.0 * lambda + 2.0 * s * std::tan(s * a);
}

// Denominator whose zeros are exactly the transverse poles; continuous in
// lambda on (0, inf), no spurious zero at lambda = 1.
inline double transverse_pole_function(double lambda, double a) {
  detail::require_positive_lambda(lambda);
  detail::require_positive_half_length(a);
  double s = std::sqrt(lambda);
  double mu1 = std::sqrt(lambda + s);
  double m2sq = lambda - s;  // mu2^2, negative below lambda = 1
  return mu1 * std::cos(mu1 * a) * a * detail::sinc_x2(m2sq * a * a) +
         std::sin(mu1 * a) * detail::cos_x2(m2sq * a * a);
}

inline double beta2_closed(double lambda, double a) {
  detail::require_positive_lambda(lambda);
  detail::require_positive_half_length(a);
  double s = std::sqrt(lambda);
  double mu1 = std::sqrt(lambda + s);
  double m2sq = lambda - s;
  double d = transverse_pole_function(lambda, a);
  double scale = std::abs(mu1 * std::cos(mu1 * a) * a) + std::abs(std::sin(mu1 * a)) + 1e-30;
  if (std::abs(d) < 1e-10 * scale)
    throw pole_error("lambda is at a transverse resonance", lambda);
  return 2.0 * lambda +
         4.0 * lambda * a * detail::sinc_x2(m2sq * a * a) * std::sin(mu1 * a) / d;
}

// Axial correction integral: int (U_total - 1) over the segment.
inline double axial_integral_closed(double lambda, double a) {
  detail::require_positive_lambda(lambda);
  detail::require_positive_half_length(a);
  double s = std::sqrt(lambda);
  return 2.0 * std::tan(s * a) / s - 2.0 * a;
}

// Transverse total-deflection profile V(y) = A cos(mu1 y) + B cos(mu2 y)
// with V(+-a) = 1, together with its correction integral.  Requires
// lambda > 1 so both wavenumbers are real.
struct TransverseMode {
  double mu1 = 0, mu2 = 0;
  double a_coeff = 0, b_coeff = 0;
  double integral = 0;

  double value(double y) const {
    return a_coeff * std::cos(mu1 * y) + b_coeff * std::cos(mu2 * y);
  }
};

inline TransverseMode transverse_mode_closed(double lambda, double a) {
  detail::require_positive_half_length(a);
  if (!(lambda > 1))
    throw config_error("transverse mode closed form requires lambda > 1");
  TransverseMode tm;
  double s = std::sqrt(lambda);
  tm.mu1 = std::sqrt(lambda + s);
  tm.mu2 = std::sqrt(lambda - s);
  double d = tm.mu1 * std::sin(tm.mu2 * a) * std::cos(tm.mu1 * a) +
             tm.mu2 * std::sin(tm.mu1 * a) * std::cos(tm.mu2 * a);
  double scale = std::abs(tm.mu1 * std::sin(tm.mu2 * a)) +
                 std::abs(tm.mu2 * std::sin(tm.mu1 * a)) + 1e-30;
  if (std::abs(d) < 1e-12 * scale)
    throw pole_error("lambda is at a transverse resonance", lambda);
  tm.a_coeff = tm.mu1 * std::sin(tm.mu2 * a) / d;
  tm.b_coeff = tm.mu2 * std::sin(tm.mu1 * a) / d;
  tm.integral = 2.0 * tm.a_coeff * std::sin(tm.mu1 * a) / tm.mu1 +
                2.0 * tm.b_coeff * std::sin(tm.mu2 * a) / tm.mu2 - 2.0 * a;
  return tm;
}

// Axial poles in (0, lambda_max]: lambda = ((m - 1/2) pi / a)^2.
inline std::vector<double> beta1_poles(double a, double lambda_max) {
  detail::require_positive_half_length(a);
  std::vector<double> p;
  for (int m = 1;; ++m) {
    double v = std::pow((m - 0.5) * M_PI / a, 2);
    if (v > lambda_max) break;
    p.push_back(v);
  }
  return p;
}

namespace detail {

template <typename F>
double bisect_root(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Transverse poles in (0, lambda_max]: sign changes of the pole function on
// a uniform grid, sharpened by bisection.
inline std::vector<double> beta2_poles(double a, double lambda_max, int grid = 4096) {
  detail::require_positive_half_length(a);
  std::vector<double> p;
  auto f = [&](double l) { return transverse_pole_function(l, a); };
  double prev_l = lambda_max / grid * 1e-3;
  double prev_f = f(prev_l);
  for (int i = 1; i <= grid; ++i) {
    double l = lambda_max * i / grid;
    double fl = f(l);
    if ((prev_f < 0) != (fl < 0))
      p.push_back(detail::bisect_root(f, prev_l, l, 1e-9 * std::max(1.0, l)));
    prev_l = l;
    prev_f = fl;
  }
  return p;
}

// ----------------------------------------------------------------------
// Finite-element soft model
// ----------------------------------------------------------------------

// Clamped soft operator with spectral guard rails.  All solves against
// (K0 - lambda M0) run through here so resonances are never silently
// inverted.
class SoftModel {
 public:
  SoftModel(const UnitCellGraph& g_soft, double h)
      : asmb_(assemble<double>(g_soft, make_mesh(g_soft, h), Constraints::clamped())) {
    if (asmb_.n_dofs == 0)
      throw structure_error("soft problem has no free dofs");
  }

  const Assembly<double>& assembly() const { return asmb_; }

  // Load of a rigid unit translation along e: F_i = m(lift, w_i) with the
  // lift (tau.e, n.e, 0) at every node.
  Eigen::VectorXd drive_load(const Vec2& e) const {
    return asmb_.load_from_lift([&](int b, int /*node*/) {
      const Beam& beam = asmb_.graph.beams[b];
      return Eigen::Vector3d(beam.tangent.dot(e), beam.normal.dot(e), 0.0);
    });
  }

  // Number of eigenvalues of (K0, M0) strictly below sigma, by the inertia
  // of K0 - sigma M0.  Retries with a nudged shift when the unpivoted
  // factorization breaks down on a near-singular shift.
  int eigencount_below(double sigma) const {
    double shift = sigma;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::SparseMatrix<double> s = asmb_.stiffness - shift * asmb_.mass;
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(s);
      if (ldlt.info() == Eigen::Success) {
        Eigen::VectorXd d = ldlt.vectorD();
        if (d.allFinite() && (d.cwiseAbs().minCoeff() > 0)) {
          int neg = 0;
          for (int i = 0; i < d.size(); ++i)
            if (d[i] < 0) ++neg;
          return neg;
        }
      }
      shift = sigma * (1.0 + (attempt + 1) * 1e-12) + (attempt + 1) * 1e-300;
    }
    throw numeric_error("inertia count failed near sigma = " + std::to_string(sigma));
  }

  // Eigenvalue of the clamped soft problem closest to lambda, located by
  // expanding brackets and inertia bisection.
  double nearest_eigenvalue(double lambda) const {
    const int n0 = eigencount_below(lambda);
    double r0 = std::max(1e-6, 1e-9 * std::abs(lambda));
    double above = std::numeric_limits<double>::quiet_NaN();
    double below = std::numeric_limits<double>::quiet_NaN();

    double r = r0;
    for (int i = 0; i < 40; ++i, r *= 2.0)
      if (eigencount_below(lambda + r) > n0) {
        double lo = lambda, hi = lambda + r;
        for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
          double mid = 0.5 * (lo + hi);
          (eigencount_below(mid) > n0 ? hi : lo) = mid;
        }
        above = 0.5 * (lo + hi);
        break;
      }
    if (n0 > 0) {
      r = r0;
      for (int i = 0; i < 40 && lambda - r > 0; ++i, r *= 2.0)
        if (eigencount_below(lambda - r) < n0) {
          double lo = lambda - r, hi = lambda;
          for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
            double mid = 0.5 * (lo + hi);
            (eigencount_below(mid) < n0 ? lo : hi) = mid;
          }
          below = 0.5 * (lo + hi);
          break;
        }
    }
    if (std::isnan(above)) return std::isnan(below) ? lambda : below;
    if (std::isnan(below)) return above;
    return (above - lambda) < (lambda - below) ? above : below;
  }

  // All eigenvalues in (0, lambda_max], isolated by recursive inertia
  // bisection.  Multiple eigenvalues closer than the resolution come out
  // as one entry.
  std::vector<double> eigenvalues_below(double lambda_max) const {
    std::vector<double> out;
    const double resolution = 1e-9;
    std::function<void(double, double, int, int)> split = [&](double lo, double hi,
                                                              int nlo, int nhi) {
      if (nhi == nlo) return;
      if (hi - lo < resolution * std::max(1.0, hi)) {
        // One entry per cluster; multiplicity does not matter for the scan.
        out.push_back(0.5 * (lo + hi));
        return;
      }
      double mid = 0.5 * (lo + hi);
      int nmid = eigencount_below(mid);
      split(lo, mid, nlo, nmid);
      split(mid, hi, nmid, nhi);
    };
    split(0.0, lambda_max, eigencount_below(0.0), eigencount_below(lambda_max));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  Assembly<double> asmb_;
};

// Guarded factorization of (K0 - lambda M0).  Construction throws
// resonance_error when lambda sits within the exclusion radius
// max(1e-6, 1e-9 lambda) of the discrete spectrum, or when the shifted
// operator is estimated to be ill-conditioned beyond 1e12.
class ShiftedSoftOperator {
 public:
  ShiftedSoftOperator(const SoftModel& model, double lambda)
      : model_(&model), lambda_(lambda) {
    detail::require_positive_lambda(lambda);
    double r = std::max(1e-6, 1e-9 * lambda);
    if (model.eigencount_below(lambda + r) > model.eigencount_below(lambda - r))
      throw resonance_error("lambda within the exclusion radius of a soft resonance",
                            model.nearest_eigenvalue(lambda));

    shifted_ = model.assembly().stiffness - lambda * model.assembly().mass;
    lu_.compute(shifted_);
    if (lu_.info() != Eigen::Success)
      throw resonance_error("shifted soft operator is numerically singular",
                            model.nearest_eigenvalue(lambda));

    double cond = norm1() * inverse_norm1_estimate();
    if (!(cond < 1e12))
      throw resonance_error("shifted soft operator too ill-conditioned (cond ~ " +
                                std::to_string(cond) + ")",
                            model.nearest_eigenvalue(lambda));
  }

  double lambda() const { return lambda_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return lu_.solve(rhs); }

  double residual(const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) const {
    double denom = std::max(rhs.norm(), 1e-300);
    return (shifted_ * x - rhs).norm() / denom;
  }

 private:
  double norm1() const {
    Eigen::VectorXd colsum = Eigen::VectorXd::Zero(shifted_.cols());
    for (int k = 0; k < shifted_.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(shifted_, k); it; ++it)
        colsum[it.col()] += std::abs(it.value());
    return colsum.maxCoeff();
  }

  // Hager's 1-norm estimator; the operator is symmetric so one
  // factorization serves both directions.
  double inverse_norm1_estimate() const {
    const int n = static_cast<int>(shifted_.rows());
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
      Eigen::VectorXd y = lu_.solve(x);
      est = y.lpNorm<1>();
      Eigen::VectorXd xi(n);
      for (int i = 0; i < n; ++i) xi[i] = y[i] >= 0 ? 1.0 : -1.0;
      Eigen::VectorXd z = lu_.solve(xi);
      int j;
      double zmax = z.cwiseAbs().maxCoeff(&j);
      if (zmax <= z.dot(x)) break;
      x.setZero();
      x[j] = 1.0;
    }
    return est;
  }

  const SoftModel* model_;
  double lambda_;
  Eigen::SparseMatrix<double> shifted_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

struct SoftResponse {
  Eigen::VectorXd solution;  // correction field on the free dofs
  double residual = 0.0;
};

// Correction of the clamped soft component under a rigid unit translation
// along `drive` at frequency-squared lambda: (K0 - lambda M0) x = lambda F.
inline SoftResponse solve_soft(const UnitCellGraph& g_soft, double lambda, double h,
                               const Vec2& drive) {
  SoftModel model(g_soft, h);
  ShiftedSoftOperator op(model, lambda);
  Eigen::VectorXd f = lambda * model.drive_load(drive);
  SoftResponse r;
  r.solution = op.solve(f);
  r.residual = op.residual(r.solution, f);
  return r;
}

// ----------------------------------------------------------------------
// beta matrix
// ----------------------------------------------------------------------

namespace detail {

inline Eigen::Matrix2d beta_from_model(const SoftModel& model, double total_length,
                                       double lambda) {
  ShiftedSoftOperator op(model, lambda);
  Eigen::Matrix2d beta;
  std::array<Eigen::VectorXd, 2> f = {model.drive_load(Vec2{1, 0}),
                                      model.drive_load(Vec2{0, 1})};
  std::array<Eigen::VectorXd, 2> x = {op.solve(lambda * f[0]),
                                      op.solve(lambda * f[1])};
  for (int j = 0; j < 2; ++j)
    for (int p = 0; p < 2; ++p)
      beta(j, p) = lambda * total_length * (j == p ? 1.0 : 0.0) +
                   lambda * f[j].dot(x[p]);
  return beta;
}

}  // namespace detail

// Soft-resonance coupling matrix of the whole cell at frequency-squared
// lambda.  The identity part carries the total beam length of both
// components; the correction part integrates over the soft beams only.
// cell_length overrides the rigid-mass measure for graphs that hold only
// the soft component of a larger cell; zero means use the graph's own
// total length.
inline Eigen::Matrix2d beta_matrix(const UnitCellGraph& g, double lambda, double h,
                                   double cell_length = 0.0) {
  SoftModel model(soft_subgraph(g), h);
  return detail::beta_from_model(
      model, cell_length > 0 ? cell_length : g.total_length(), lambda);
}

// Same coupling matrix reusing an already assembled soft model; the cheap
// path when sweeping many lambda values on one mesh.
inline Eigen::Matrix2d beta_matrix(const SoftModel& model, double cell_length,
                                   double lambda) {
  return detail::beta_from_model(model, cell_length, lambda);
}

// ----------------------------------------------------------------------
// Spectral scan
// ----------------------------------------------------------------------

enum class IntervalClass { Band, FullGap, WeakGap };
enum class PointClass { Band, FullGap, WeakGap, Resonance };
enum class BoundaryType { Zero, Pole };

inline const char* to_string(IntervalClass c) {
  switch (c) {
    case IntervalClass::Band: return "Band";
    case IntervalClass::FullGap: return "FullGap";
    case IntervalClass::WeakGap: return "WeakGap";
  }
  return "?";
}

inline const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::Band: return "Band";
    case PointClass::FullGap: return "FullGap";
    case PointClass::WeakGap: return "WeakGap";
    case PointClass::Resonance: return "Resonance";
  }
  return "?";
}

inline const char* to_string(BoundaryType b) {
  return b == BoundaryType::Zero ? "zero" : "pole";
}

// Eigenvalues within 1e-10 of zero count as propagating so roundoff never
// turns a band edge into a phantom gap.
inline PointClass classify_point(double eig_min, double eig_max) {
  bool neg_min = eig_min < -1e-10;
  bool neg_max = eig_max < -1e-10;
  if (!neg_min && !neg_max) return PointClass::Band;
  if (neg_min && neg_max) return PointClass::FullGap;
  return PointClass::WeakGap;
}

struct GapInterval {
  double lo = 0, hi = 0;
  IntervalClass cls = IntervalClass::Band;
  BoundaryType lower_boundary = BoundaryType::Zero;
};

struct ScanResult {
  std::vector<GapInterval> intervals;
  std::vector<double> poles;  // partition points of pole type
  std::vector<double> zeros;  // partition points of zero type
};

namespace detail {

// Shared second phase of the scan: the lambda axis is already partitioned
// at the poles; locate sign changes of both eigenvalue branches inside the
// pole-free intervals, then classify every resulting interval at its
// midpoint.  Samples that land inside a resonance exclusion come back as
// NaN and drop out of the sign-change search.
template <typename Branches>
ScanResult scan_partitioned(std::vector<double> poles, double lambda_max,
                            int samples, Branches&& branches) {
  auto guarded = [&](double l) -> std::pair<double, double> {
    try {
      return branches(l);
    } catch (const pole_error&) {
    } catch (const resonance_error&) {
    }
    double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  };

  std::sort(poles.begin(), poles.end());
  std::vector<double> cuts = {0.0};
  for (double p : poles) cuts.push_back(p);
  cuts.push_back(lambda_max);

  std::vector<double> zeros;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    if (hi - lo < 1e-9) continue;
    int n = std::max(16, static_cast<int>(samples * (hi - lo) / lambda_max));
    std::vector<std::pair<double, double>> vals(n);
    std::vector<double> grid(n);
    for (int k = 0; k < n; ++k)
      grid[k] = lo + (hi - lo) * (k + 0.5) / n;
    parallel_for(n, [&](int k) { vals[k] = guarded(grid[k]); });
    for (int br = 0; br < 2; ++br) {
      auto pick = [&](std::pair<double, double> v) { return br == 0 ? v.first : v.second; };
      int prev = -1;
      for (int k = 0; k < n; ++k) {
        if (std::isnan(pick(vals[k]))) continue;
        if (prev >= 0 && (pick(vals[prev]) < 0) != (pick(vals[k]) < 0)) {
          double z = bisect_root(
              [&](double l) { return pick(branches(l)); }, grid[prev], grid[k],
              1e-9 * std::max(1.0, grid[k]));
          zeros.push_back(z);
        }
        prev = k;
      }
    }
  }
  std::sort(zeros.begin(), zeros.end());

  std::vector<std::pair<double, BoundaryType>> events = {{0.0, BoundaryType::Zero}};
  for (double p : poles) events.push_back({p, BoundaryType::Pole});
  for (double z : zeros) events.push_back({z, BoundaryType::Zero});
  events.push_back({lambda_max, BoundaryType::Zero});
  std::sort(events.begin(), events.end());

  ScanResult out;
  out.poles = poles;
  out.zeros = zeros;
  for (size_t i = 0; i + 1 < events.size(); ++i) {
    double lo = events[i].first, hi = events[i + 1].first;
    if (hi - lo < 1e-9) continue;
    // Midpoint first; fall back to off-center probes if the midpoint sits
    // inside an exclusion radius.
    std::pair<double, double> probe{std::numeric_limits<double>::quiet_NaN(), 0};
    for (double t : {0.5, 0.25, 0.75, 0.1, 0.9}) {
      probe = guarded(lo + t * (hi - lo));
      if (!std::isnan(probe.first)) break;
    }
    if (std::isnan(probe.first))
      throw numeric_error("scan interval near lambda = " + std::to_string(lo) +
                          " lies entirely within a resonance exclusion");
    PointClass pc = classify_point(std::min(probe.first, probe.second),
                                   std::max(probe.first, probe.second));
    GapInterval gi;
    gi.lo = lo;
    gi.hi = hi;
    gi.lower_boundary = events[i].second;
    gi.cls = pc == PointClass::Band ? IntervalClass::Band
             : pc == PointClass::FullGap ? IntervalClass::FullGap
                                         : IntervalClass::WeakGap;
    out.intervals.push_back(gi);
  }
  // Merge same-class neighbors; this removes partition points at
  // eigenvalues the drive does not couple to.
  std::vector<GapInterval> merged;
  for (const GapInterval& gi : out.intervals) {
    if (!merged.empty() && merged.back().cls == gi.cls)
      merged.back().hi = gi.hi;
    else
      merged.push_back(gi);
  }
  out.intervals = std::move(merged);
  return out;
}

inline void check_scan_args(double lambda_max, int samples) {
  if (!(lambda_max > 0)) throw config_error("lambda-max must be positive");
  if (samples < 100) throw config_error("scan needs at least 100 samples");
}

}  // namespace detail

// Closed-form scan for the square cell with a unit-material soft segment of
// half-length a.
inline ScanResult scan_gaps(double a, double lambda_max, int samples = 2000) {
  detail::require_positive_half_length(a);
  detail::check_scan_args(lambda_max, samples);
  std::vector<double> poles = beta1_poles(a, lambda_max);
  std::vector<double> p2 = beta2_poles(a, lambda_max, std::max(samples, 1024));
  poles.insert(poles.end(), p2.begin(), p2.end());
  auto branches = [&](double l) {
    double b1 = beta1_closed(l, a);
    double b2 = beta2_closed(l, a);
    return std::pair<double, double>(std::min(b1, b2), std::max(b1, b2));
  };
  return detail::scan_partitioned(std::move(poles), lambda_max, samples, branches);
}

// Finite-element scan of an arbitrary cell.  Partition points are the
// eigenvalues of the clamped soft problem; intervals separated by
// eigenvalues the translation drives do not excite merge back together.
inline ScanResult scan_gaps(const UnitCellGraph& g, double lambda_max, int samples,
                            double h, double cell_length = 0.0) {
  detail::check_scan_args(lambda_max, samples);
  SoftModel model(soft_subgraph(g), h);
  const double total = cell_length > 0 ? cell_length : g.total_length();
  std::vector<double> poles = model.eigenvalues_below(lambda_max);
  auto branches = [&](double l) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(
        detail::beta_from_model(model, total, l));
    return std::pair<double, double>(es.eigenvalues()[0], es.eigenvalues()[1]);
  };
  return detail::scan_partitioned(std::move(poles), lambda_max, samples, branches);
}

}  // namespace beamgap
