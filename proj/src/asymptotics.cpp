#include "wetreg/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "wetreg/error.hpp"

namespace wetreg {

double cap_segment_area(double radius, double theta) {
  return radius * radius * (theta - std::sin(theta) * std::cos(theta));
}

CapEquilibrium cap_equilibrium(double v_target, const MaterialSystem& sys) {
  if (!(v_target > 0.0) || !std::isfinite(v_target)) {
    throw invalid_argument("cap_equilibrium: v_target must be positive");
  }
  const double theta = sys.theta_e();
  const double shape = theta - std::sin(theta) * std::cos(theta);
  CapEquilibrium cap;
  cap.radius = std::sqrt(v_target / shape);
  cap.contact_half_width = cap.radius * std::sin(theta);
  cap.lambda0 = sys.gamma_fv() / cap.radius;
  cap.apex_height = cap.radius * (1.0 - std::cos(theta));
  return cap;
}

double precursor_height(double lambda0, double eps, const MaterialSystem& sys,
                        const InterpolantG& g) {
  if (!(eps > 0.0)) throw invalid_argument("precursor_height: eps must be positive");
  if (!(lambda0 > 0.0)) throw invalid_argument("precursor_height: lambda0 must be positive");
  const double g2 = g.deriv2(0.0);
  if (!(g2 > 0.0)) {
    throw invalid_argument("precursor_height: g''(0) must be positive (strict minimum at 0)");
  }
  return -lambda0 * eps * eps / (sys.spreading() * g2);
}

double inner_slope(double H, const MaterialSystem& sys, const InterpolantG& g) {
  if (!(H >= 0.0)) throw invalid_argument("inner_slope: H must be nonnegative");
  const double ratio = (sys.gamma_fv() - sys.spreading() * g(H)) / sys.substrate_density();
  double radicand = ratio * ratio - 1.0;
  if (radicand < 0.0) {
    if (radicand < -1e-14) {
      throw invalid_argument("inner_slope: negative radicand, inconsistent material");
    }
    radicand = 0.0;
  }
  return std::sqrt(radicand);
}

double InnerProfile::at(double x) const {
  if (xi.empty()) return 0.0;
  if (x <= xi.front()) return H.front();
  if (x >= xi.back()) return H.back();
  const auto it = std::upper_bound(xi.begin(), xi.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xi.begin());
  const double t = (x - xi[k - 1]) / (xi[k] - xi[k - 1]);
  return H[k - 1] + t * (H[k] - H[k - 1]);
}

double InnerProfile::xi_at(double level) const {
  if (H.empty()) return 0.0;
  if (level <= H.front()) return xi.front();
  if (level >= H.back()) return xi.back();
  const auto it = std::upper_bound(H.begin(), H.end(), level);
  const std::size_t k = static_cast<std::size_t>(it - H.begin());
  const double t = (level - H[k - 1]) / (H[k] - H[k - 1]);
  return xi[k - 1] + t * (xi[k] - xi[k - 1]);
}

InnerProfile inner_profile(double xi_min, double xi_max, int n_pts,
                           const MaterialSystem& sys, const InterpolantG& g,
                           double anchor_H) {
  if (!(xi_min < 0.0 && xi_max > 0.0)) {
    throw invalid_argument("inner_profile: need xi_min < 0 < xi_max");
  }
  if (n_pts < 64) throw invalid_argument("inner_profile: n_pts must be >= 64");
  if (!(anchor_H > 0.0)) throw invalid_argument("inner_profile: anchor must be positive");

  const double span = xi_max - xi_min;
  int n_left = static_cast<int>(std::lround((n_pts - 1) * (-xi_min) / span));
  n_left = std::clamp(n_left, 1, n_pts - 2);
  const int n_right = n_pts - 1 - n_left;

  auto rhs = [&](double H) { return inner_slope(std::max(H, 0.0), sys, g); };
  auto integrate = [&](double step, int n) {
    std::vector<double> out{anchor_H};
    out.reserve(static_cast<std::size_t>(n) + 1);
    double H = anchor_H;
    for (int i = 0; i < n; ++i) {
      const double k1 = rhs(H);
      const double k2 = rhs(H + 0.5 * step * k1);
      const double k3 = rhs(H + 0.5 * step * k2);
      const double k4 = rhs(H + step * k3);
      H += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      out.push_back(H);
    }
    return out;
  };
  const double step_left = xi_min / n_left;  // negative
  const double step_right = xi_max / n_right;
  const auto left = integrate(step_left, n_left);
  const auto right = integrate(step_right, n_right);

  InnerProfile p;
  p.anchor_H = anchor_H;
  p.xi.reserve(static_cast<std::size_t>(n_pts));
  p.H.reserve(static_cast<std::size_t>(n_pts));
  for (int i = n_left; i >= 1; --i) {
    p.xi.push_back(i * step_left);
    p.H.push_back(left[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i <= n_right; ++i) {
    p.xi.push_back(i * step_right);
    p.H.push_back(right[static_cast<std::size_t>(i)]);
  }
  return p;
}

void write_inner_csv(const InnerProfile& p, std::ostream& os) {
  os << "xi,H\n" << std::setprecision(17);
  for (std::size_t i = 0; i < p.xi.size(); ++i) os << p.xi[i] << ',' << p.H[i] << '\n';
}

void write_inner_csv(const InnerProfile& p, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  write_inner_csv(p, os);
}

double measure_precursor(const EquilibriumState& state) { return state.profile[0]; }

namespace {

Error fit_error(const std::string& what) { return Error(ErrorKind::fit_failure, what); }

ApparentContact fit_cap_l1(const Profile& profile) {
  const Grid1D& grid = profile.grid();
  const auto w = grid.simpson_weights();
  double volume = 0.0;
  double moment = 0.0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    volume += w[j] * profile[j];
    moment += w[j] * grid.x(j) * profile[j];
  }
  if (!(volume > 0.0)) throw fit_error("cap fit needs a positive volume");
  const double center = moment / volume;

  auto cap_at = [&](double theta, double x) {
    const double R = std::sqrt(volume / (theta - std::sin(theta) * std::cos(theta)));
    const double d = x - center;
    const double a = R * std::sin(theta);
    return std::abs(d) < a ? std::sqrt(R * R - d * d) - R * std::cos(theta) : 0.0;
  };
  auto misfit = [&](double theta) {
    double s = 0.0;
    for (std::size_t j = 0; j < profile.size(); ++j) {
      s += std::abs(profile[j] - cap_at(theta, grid.x(j)));
    }
    return s;
  };

  constexpr int kScan = 400;
  constexpr double lo = 1e-3;
  const double hi = std::numbers::pi / 2 - 1e-3;
  int best = 0;
  double best_val = misfit(lo);
  for (int k = 1; k <= kScan; ++k) {
    const double v = misfit(lo + (hi - lo) * k / kScan);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  double left = lo + (hi - lo) * std::max(best - 1, 0) / kScan;
  double right = lo + (hi - lo) * std::min(best + 1, kScan) / kScan;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = right - inv_phi * (right - left);
  double d = left + inv_phi * (right - left);
  double fc = misfit(c);
  double fd = misfit(d);
  while (right - left > 1e-12) {
    if (fc < fd) {
      right = d;
      d = c;
      fd = fc;
      c = right - inv_phi * (right - left);
      fc = misfit(c);
    } else {
      left = c;
      c = d;
      fc = fd;
      d = left + inv_phi * (right - left);
      fd = misfit(d);
    }
  }
  const double theta = 0.5 * (left + right);

  ApparentContact out;
  out.angle = theta;
  out.radius = std::sqrt(volume / (theta - std::sin(theta) * std::cos(theta)));
  out.center = center;
  out.point = center + out.radius * std::sin(theta);
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (cap_at(theta, grid.x(j)) > 0.0) ++out.fit_nodes;
  }
  if (out.fit_nodes < 8) throw fit_error("cap fit covers fewer than 8 nodes");
  return out;
}

ApparentContact fit_kasa(const Profile& profile, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw invalid_argument("fit_fraction must be in (0,1)");
  }
  const Grid1D& grid = profile.grid();
  const double level = fraction * profile.max();
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (profile[j] >= level) {
      xs.push_back(grid.x(j));
      ys.push_back(profile[j]);
    }
  }
  if (xs.size() < 8) throw fit_error("circle fit needs at least 8 nodes");

  // Shift x for conditioning; solve x^2 + y^2 = D x + E y + F.
  double xm = 0.0;
  for (double x : xs) xm += x;
  xm /= static_cast<double>(xs.size());
  std::array<std::array<double, 4>, 3> m{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = xs[i] - xm;
    const double y = ys[i];
    const std::array<double, 3> row{u, y, 1.0};
    const double b = u * u + y * y;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += row[r] * row[c];
      m[r][3] += row[r] * b;
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    std::swap(m[col], m[piv]);
    if (!(std::abs(m[col][col]) > 1e-300)) throw fit_error("degenerate circle fit");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  const double D = m[0][3] / m[0][0];
  const double E = m[1][3] / m[1][1];
  const double F = m[2][3] / m[2][2];
  const double cu = 0.5 * D;
  const double cy = 0.5 * E;
  const double R2 = F + cu * cu + cy * cy;
  if (!(R2 > cy * cy)) throw fit_error("fitted circle does not reach the substrate");

  ApparentContact out;
  out.radius = std::sqrt(R2);
  out.center = cu + xm;
  out.point = out.center + std::sqrt(R2 - cy * cy);
  out.angle = std::acos(std::clamp(-cy / out.radius, -1.0, 1.0));
  out.fit_nodes = static_cast<int>(xs.size());
  if (!(out.angle > 0.0 && out.angle < std::numbers::pi / 2)) {
    throw fit_error("fitted apparent angle outside (0, pi/2)");
  }
  return out;
}

}  // namespace

ApparentContact fit_apparent_contact(const Profile& profile, const FitOptions& opts) {
  const double top = profile.max();
  const double floor = std::max(profile[0], 0.0);
  if (!(top > 10.0 * floor) || !(top > 0.0)) {
    throw fit_error("droplet height must exceed 10x the precursor height");
  }
  return opts.method == FitMethod::kasa ? fit_kasa(profile, opts.fit_fraction)
                                        : fit_cap_l1(profile);
}

ApparentContact fit_apparent_contact(const EquilibriumState& state,
                                     const FitOptions& opts) {
  return fit_apparent_contact(state.profile, opts);
}

InnerComparison compare_with_inner(const EquilibriumState& state,
                                   const InnerProfile& inner, double xi_min,
                                   double xi_max) {
  const Profile& p = state.profile;
  const double eps = state.eps;
  if (!(eps > 0.0)) throw invalid_argument("compare_with_inner: state has no eps");
  std::size_t k = 0;
  while (k < p.size() && p[k] < eps) ++k;
  if (k == 0 || k == p.size()) {
    throw fit_error("profile never crosses h = eps from below");
  }
  const Grid1D& grid = p.grid();
  const double t = (eps - p[k - 1]) / (p[k] - p[k - 1]);
  const double x_left = grid.x(k - 1) + t * grid.dx();
  const double shift = inner.xi_at(1.0);

  InnerComparison out;
  out.eps = eps;
  out.contact_x = x_left;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double xi = (grid.x(j) - x_left) / eps;
    if (xi < xi_min || xi > xi_max) continue;
    const double dev = std::abs(p[j] / eps - inner.at(xi + shift));
    ++out.nodes;
    if (dev > out.max_deviation) {
      out.max_deviation = dev;
      out.xi_at_max = xi;
    }
  }
  return out;
}

}  // namespace wetreg
