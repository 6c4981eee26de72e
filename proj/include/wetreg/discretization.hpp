#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wetreg/linalg.hpp"
#include "wetreg/model.hpp"

namespace wetreg {

/// Uniform grid on [a, b] with an even number of subintervals.
class Grid1D {
 public:
  Grid1D(double a, double b, int n);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  int n() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double length() const noexcept { return b_ - a_; }
  std::size_t nodes() const noexcept { return static_cast<std::size_t>(n_) + 1; }

  double x(std::size_t j) const noexcept { return a_ + static_cast<double>(j) * dx_; }
  std::vector<double> coordinates() const;

  /// Composite Simpson weights (dx/3)[1,4,2,...,4,1].
  std::vector<double> simpson_weights() const;

 private:
  double a_;
  double b_;
  int n_;
  double dx_;
};

/// Nodal heights on a grid. Boundary nodes carry mirror ghosts
/// (h_{-1} = h_1, h_{n+1} = h_{n-1}) wherever a stencil needs them.
class Profile {
 public:
  Profile(Grid1D grid, std::vector<double> h);

  static Profile constant(Grid1D grid, double value);

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const double> h() const noexcept { return h_; }
  std::span<double> h_mut() noexcept { return h_; }
  double operator[](std::size_t j) const noexcept { return h_[j]; }
  std::size_t size() const noexcept { return h_.size(); }

  double max() const;
  double min() const;

 private:
  Grid1D grid_;
  std::vector<double> h_;
};

double simpson_volume(const Profile& p);

/// Central slopes; zero at both boundary nodes by the mirror ghosts.
std::vector<double> gradient_central(const Profile& p);

/// Three-point second differences with mirror ghosts.
std::vector<double> second_difference(const Profile& p);

/// Simpson quadrature of gamma_eps(h) sqrt(1 + h'^2).
double energy_regularized(const Profile& p, double eps, const MaterialSystem& sys,
                          const InterpolantG& g);

/// gamma_fv * (piecewise-linear graph length) + S * (dry length), where a
/// subinterval is dry when both endpoint heights are below zero_tol.
/// A negative zero_tol selects the default 1e-9 * max(1, max h).
double energy_sharp(const Profile& p, const MaterialSystem& sys,
                    double zero_tol = -1.0);

/// Simpson value of sqrt(1 + h'^2), the discrete graph length used by the
/// energy lower bound.
double graph_length_simpson(const Profile& p);

/// Discrete Euler-Lagrange residual, length n + 2.
///
/// Rows 0..n:  gamma'(h)/sqrt(1+p^2) - gamma(h) h''/(1+p^2)^{3/2} - lambda
/// Row  n+1:   simpson_volume(p) - v_target
std::vector<double> residual(const Profile& p, double lambda, double v_target,
                             double eps, const MaterialSystem& sys,
                             const InterpolantG& g);

/// Analytic Jacobian of residual() with respect to (h_0..h_n, lambda).
BorderedTridiagonal jacobian(const Profile& p, double lambda, double eps,
                             const MaterialSystem& sys, const InterpolantG& g);

/// kappa_j = -h''_j / (1 + h'_j^2)^{3/2}; positive on a concave cap.
std::vector<double> curvature_profile(const Profile& p);

/// CSV with header "x,h", 17 significant digits.
void write_profile_csv(const Profile& p, std::ostream& os);
void write_profile_csv(const Profile& p, const std::string& path);
Profile read_profile_csv(std::istream& is);
Profile read_profile_csv(const std::string& path);

}  // namespace wetreg
