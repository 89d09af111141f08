#pragma once

#include <vector>

#include "sielast/fem.hpp"
#include "sielast/types.hpp"

namespace sielast {

/// Scalar-mode amplification model of the linearized schemes. lambda is
/// the deviatoric operator-norm bound 4 mu / (rho0 h^2); c bounds the
/// volumetric operator norm. Both in 1/s^2.
struct AmplificationModel {
  double lambda = 0.0;
  double c = 0.0;
  double dt = 0.0;
  Scheme scheme = Scheme::MSBDF2;
};

/// Spectral radii at or below this count as stable; the BDF2 companion has
/// a unit root exactly, so a strict bound would reject everything.
inline constexpr double kStabilityTol = 1.0 + 1e-9;

/// Companion pair A1 Y^{n+1} = A0 Y^n over Y = (V^n, V^{n-1}, U^n, U^{n-1}).
/// A1 is scheme-independent and carries the implicit volumetric coupling;
/// A0 carries the scheme's explicit deviatoric terms with the modal
/// coefficient lambda/4 (lambda bounds four times the worst modal value of
/// M_V^{-1} K_dev, which is what enters a single-mode recurrence).
std::pair<Mat4, Mat4> amplification_pair(const AmplificationModel& model);

/// max |eig(A1^{-1} A0)| via a dense eigensolver. Throws NumericError on a
/// singular A1.
double spectral_radius(const Mat4& A1, const Mat4& A0);

struct DtMaxResult {
  double dt_max = 0.0;  // +infinity when stable across the whole bracket
  bool unconditionally_unstable = false;
};

/// Largest dt with rho <= kStabilityTol, found by a log-grid scan over
/// [1e-8, 1e2] for the first violation and bisection to relative width
/// tol_dt. Stable across the whole bracket returns +infinity; unstable at
/// the lower end reports unconditionally_unstable.
DtMaxResult max_stable_dt(Scheme scheme, double lambda, double c,
                          double tol_dt = 1e-6);

/// The CFL-relevant step bound when c is an operator-norm *bound*: the
/// infimum of max_stable_dt over volumetric intensities c' in [0, c]. A
/// PDE whose volumetric operator is bounded by c contains weakly-coupled
/// modes as well, so its guaranteed-stable step cannot exceed theirs. For
/// FEBDF2 this reproduces the h/c_mu scaling independent of the bulk speed.
DtMaxResult max_stable_dt_bulk_bound(Scheme scheme, double lambda,
                                     double c_bound, double tol_dt = 1e-6);

/// One (lambda, c, dt, rho) sample row of a sweep.
struct RhoSample {
  double lambda, c, dt, rho;
};

std::vector<RhoSample> sweep_spectral_radius(Scheme scheme,
                                             const std::vector<double>& lambdas,
                                             const std::vector<double>& c_mults,
                                             const std::vector<double>& dts);

}  // namespace sielast
