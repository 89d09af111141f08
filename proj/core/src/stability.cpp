#include "sielast/stability.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace sielast {

std::pair<Mat4, Mat4> amplification_pair(const AmplificationModel& model) {
  if (!(model.lambda > 0.0) || model.c < 0.0 || !(model.dt > 0.0)) {
    throw ConfigError("amplification model requires lambda > 0, c >= 0, dt > 0");
  }
  const double dt = model.dt;
  const double k = model.lambda / 4.0;  // deviatoric modal coefficient
  const double c = model.c;

  Mat4 A1;
  A1 << 1.0, 0.0, 2.0 / 3.0 * dt * c, 0.0,
        0.0, 1.0, 0.0, 0.0,
        -2.0 / 3.0 * dt, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0;

  Mat4 A0;
  if (model.scheme == Scheme::MSBDF2) {
    A0 << 4.0 / 3.0, -1.0 / 3.0, -4.0 / 3.0 * dt * k, 2.0 / 3.0 * dt * k,
          1.0, 0.0, 0.0, 0.0,
          0.0, 0.0, 4.0 / 3.0, -1.0 / 3.0,
          0.0, 0.0, 1.0, 0.0;
  } else {
    A0 << 2.0 / 3.0 * (2.0 - dt * dt * k), -1.0 / 3.0, -2.0 / 3.0 * dt * k, 0.0,
          1.0, 0.0, 0.0, 0.0,
          0.0, 0.0, 4.0 / 3.0, -1.0 / 3.0,
          0.0, 0.0, 1.0, 0.0;
  }
  return {A1, A0};
}

double spectral_radius(const Mat4& A1, const Mat4& A0) {
  Eigen::FullPivLU<Mat4> lu(A1);
  if (!lu.isInvertible()) {
    throw NumericError("singular A1 in spectral radius computation");
  }
  const Mat4 T = lu.solve(A0);
  Eigen::EigenSolver<Mat4> es(T, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericError("eigenvalue iteration failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

double rho_at(Scheme scheme, double lambda, double c, double dt) {
  const auto [A1, A0] = amplification_pair({lambda, c, dt, scheme});
  return spectral_radius(A1, A0);
}

}  // namespace

DtMaxResult max_stable_dt(Scheme scheme, double lambda, double c,
                          double tol_dt) {
  if (!(tol_dt > 0.0)) throw ConfigError("tol_dt must be positive");
  constexpr double kLo = 1e-8;
  constexpr double kHi = 1e2;
  constexpr int kScan = 400;

  if (rho_at(scheme, lambda, c, kLo) > kStabilityTol) {
    return {0.0, true};
  }
  double lo = kLo, hi = -1.0;
  for (int i = 1; i <= kScan; ++i) {
    const double dt =
        kLo * std::pow(kHi / kLo, static_cast<double>(i) / kScan);
    if (rho_at(scheme, lambda, c, dt) > kStabilityTol) {
      hi = dt;
      break;
    }
    lo = dt;
  }
  if (hi < 0.0) {
    return {std::numeric_limits<double>::infinity(), false};
  }
  while ((hi - lo) > tol_dt * hi) {
    const double mid = 0.5 * (lo + hi);
    if (rho_at(scheme, lambda, c, mid) > kStabilityTol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, false};
}

DtMaxResult max_stable_dt_bulk_bound(Scheme scheme, double lambda,
                                     double c_bound, double tol_dt) {
  DtMaxResult out{std::numeric_limits<double>::infinity(), false};
  std::vector<double> cs = {0.0};
  for (double f : {1e-3, 1e-2, 1e-1, 1.0}) {
    if (c_bound > 0.0) cs.push_back(f * c_bound);
  }
  for (double c : cs) {
    const DtMaxResult r = max_stable_dt(scheme, lambda, c, tol_dt);
    if (r.unconditionally_unstable) return r;
    out.dt_max = std::min(out.dt_max, r.dt_max);
  }
  return out;
}

std::vector<RhoSample> sweep_spectral_radius(
    Scheme scheme, const std::vector<double>& lambdas,
    const std::vector<double>& c_mults, const std::vector<double>& dts) {
  std::vector<RhoSample> out;
  out.reserve(lambdas.size() * c_mults.size() * dts.size());
  for (double lambda : lambdas)
    for (double mult : c_mults)
      for (double dt : dts) {
        const double c = mult * lambda;
        out.push_back({lambda, c, dt, rho_at(scheme, lambda, c, dt)});
      }
  return out;
}

}  // namespace sielast
