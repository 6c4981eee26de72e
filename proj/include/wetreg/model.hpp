#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wetreg {

/// Surface energy densities of the film/vapor/substrate system.
///
/// Only the isotropic partial-wetting regime is representable:
/// gamma_fv > 0, gamma_vs - gamma_fs > 0 and S < 0, i.e. a Young angle in
/// (0, pi/2). Both factories validate and normalize to the same record.
class MaterialSystem {
 public:
  static MaterialSystem from_densities(double gamma_fv, double gamma_vs,
                                       double gamma_fs);

  /// gamma_fs is fixed to 0 and gamma_vs = gamma_fv * cos(theta_e).
  static MaterialSystem from_angle(double gamma_fv, double theta_e);

  double gamma_fv() const noexcept { return gamma_fv_; }
  double gamma_vs() const noexcept { return gamma_vs_; }
  double gamma_fs() const noexcept { return gamma_fs_; }

  /// gamma_vs - gamma_fs, the density of the bare substrate.
  double substrate_density() const noexcept { return gamma_vs_ - gamma_fs_; }

  /// Spreading parameter S = gamma_vs - gamma_fs - gamma_fv (< 0).
  double spreading() const noexcept { return spreading_; }

  double theta_e() const noexcept { return theta_e_; }

 private:
  MaterialSystem(double fv, double vs, double fs);

  double gamma_fv_;
  double gamma_vs_;
  double gamma_fs_;
  double spreading_;
  double theta_e_;
};

/// Interpolation profile g between the bare substrate (g = -1 at z = 0) and
/// the thick film (g -> 0 as z -> inf), with its first two derivatives.
struct InterpolantG {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;

  double operator()(double z) const { return eval(z); }

  /// g(z) = exp(-z) - 2 exp(-z/2).
  static InterpolantG exp2();
};

struct ConditionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct InterpolantReport {
  std::vector<ConditionCheck> checks;

  bool all_passed() const;
  const ConditionCheck* find(const std::string& name) const;
};

/// Checks the admissibility conditions on g over a finite sample set.
///
/// Limits are replaced by surrogates on the ladder z = 2^k <= sample_max:
/// decay of |g| and |z g'| over the last rungs, and for the negative side a
/// strictly increasing g(-z) that reaches at least 10. Monotonicity and the
/// asymmetry g(z) <= g(-z) use n_samples uniform points on (0, sample_max].
/// Analytic derivatives are compared with centered differences.
/// Check names: "g(0)=-1", "monotone", "decay", "z*g' decay",
/// "negative blow-up", "asymmetry", "derivatives".
InterpolantReport validate_interpolant(const InterpolantG& g, double sample_max,
                                       int n_samples);

/// Regularized density gamma_fv - S g(h/eps).
double gamma_eps(double h, double eps, const MaterialSystem& sys,
                 const InterpolantG& g);

/// d/dh of gamma_eps: -(S/eps) g'(h/eps).
double gamma_eps_dh(double h, double eps, const MaterialSystem& sys,
                    const InterpolantG& g);

/// d^2/dh^2 of gamma_eps: -(S/eps^2) g''(h/eps).
double gamma_eps_dhh(double h, double eps, const MaterialSystem& sys,
                     const InterpolantG& g);

}  // namespace wetreg
