#include "wetreg/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "wetreg/error.hpp"

namespace wetreg {

Grid1D::Grid1D(double a, double b, int n) : a_(a), b_(b), n_(n) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw invalid_argument("grid needs finite endpoints with b > a");
  }
  if (n < 2 || n % 2 != 0) {
    throw invalid_argument("grid needs an even number of subintervals >= 2");
  }
  dx_ = (b - a) / n;
}

std::vector<double> Grid1D::coordinates() const {
  std::vector<double> xs(nodes());
  for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = x(j);
  return xs;
}

std::vector<double> Grid1D::simpson_weights() const {
  std::vector<double> w(nodes(), 0.0);
  const double third = dx_ / 3.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j == 0 || j + 1 == w.size()) {
      w[j] = third;
    } else {
      w[j] = (j % 2 == 1 ? 4.0 : 2.0) * third;
    }
  }
  return w;
}

Profile::Profile(Grid1D grid, std::vector<double> h)
    : grid_(grid), h_(std::move(h)) {
  if (h_.size() != grid_.nodes()) {
    throw invalid_argument("profile length does not match the grid");
  }
  for (double v : h_) {
    if (!std::isfinite(v)) throw invalid_argument("profile contains non-finite heights");
  }
}

Profile Profile::constant(Grid1D grid, double value) {
  return Profile(grid, std::vector<double>(grid.nodes(), value));
}

double Profile::max() const { return *std::max_element(h_.begin(), h_.end()); }
double Profile::min() const { return *std::min_element(h_.begin(), h_.end()); }

double simpson_volume(const Profile& p) {
  const auto w = p.grid().simpson_weights();
  double v = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) v += w[j] * p[j];
  return v;
}

namespace {

// Neighbor values with mirror ghosts at both ends.
inline double left_of(std::span<const double> h, std::size_t j) {
  return j == 0 ? h[1] : h[j - 1];
}
inline double right_of(std::span<const double> h, std::size_t j) {
  return j + 1 == h.size() ? h[h.size() - 2] : h[j + 1];
}

}  // namespace

std::vector<double> gradient_central(const Profile& p) {
  const auto h = p.h();
  const double inv = 1.0 / (2.0 * p.grid().dx());
  std::vector<double> s(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    s[j] = (right_of(h, j) - left_of(h, j)) * inv;
  }
  return s;
}

std::vector<double> second_difference(const Profile& p) {
  const auto h = p.h();
  const double dx = p.grid().dx();
  const double inv = 1.0 / (dx * dx);
  std::vector<double> s(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    s[j] = (right_of(h, j) - 2.0 * h[j] + left_of(h, j)) * inv;
  }
  return s;
}

double energy_regularized(const Profile& p, double eps, const MaterialSystem& sys,
                          const InterpolantG& g) {
  const auto slope = gradient_central(p);
  const auto w = p.grid().simpson_weights();
  double e = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    e += w[j] * gamma_eps(p[j], eps, sys, g) * std::sqrt(1.0 + slope[j] * slope[j]);
  }
  return e;
}

double graph_length_simpson(const Profile& p) {
  const auto slope = gradient_central(p);
  const auto w = p.grid().simpson_weights();
  double e = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    e += w[j] * std::sqrt(1.0 + slope[j] * slope[j]);
  }
  return e;
}

double energy_sharp(const Profile& p, const MaterialSystem& sys, double zero_tol) {
  if (zero_tol < 0.0) zero_tol = 1e-9 * std::max(1.0, p.max());
  const auto h = p.h();
  for (double v : h) {
    if (v < -zero_tol) {
      throw invalid_argument("sharp energy is undefined for negative heights");
    }
  }
  const double dx = p.grid().dx();
  double length = 0.0;
  double dry = 0.0;
  for (std::size_t j = 0; j + 1 < h.size(); ++j) {
    const double dh = h[j + 1] - h[j];
    length += std::sqrt(dx * dx + dh * dh);
    if (h[j] < zero_tol && h[j + 1] < zero_tol) dry += dx;
  }
  return sys.gamma_fv() * length + sys.spreading() * dry;
}

std::vector<double> residual(const Profile& p, double lambda, double v_target,
                             double eps, const MaterialSystem& sys,
                             const InterpolantG& g) {
  const auto h = p.h();
  const auto slope = gradient_central(p);
  const auto curv = second_difference(p);
  std::vector<double> r(h.size() + 1);
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double q = 1.0 + slope[j] * slope[j];
    const double sq = std::sqrt(q);
    r[j] = gamma_eps_dh(h[j], eps, sys, g) / sq -
           gamma_eps(h[j], eps, sys, g) * curv[j] / (q * sq) - lambda;
  }
  r.back() = simpson_volume(p) - v_target;
  return r;
}

BorderedTridiagonal jacobian(const Profile& p, double /*lambda*/, double eps,
                             const MaterialSystem& sys, const InterpolantG& g) {
  const auto h = p.h();
  const std::size_t m = h.size();
  const double dx = p.grid().dx();
  const double inv_dx2 = 1.0 / (dx * dx);
  const double inv_2dx = 1.0 / (2.0 * dx);
  const auto slope = gradient_central(p);
  const auto curv = second_difference(p);

  BorderedTridiagonal J(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double pj = slope[j];
    const double q = 1.0 + pj * pj;
    const double sq = std::sqrt(q);
    const double q15 = q * sq;
    const double q25 = q15 * q;
    const double gam = gamma_eps(h[j], eps, sys, g);
    const double dg = gamma_eps_dh(h[j], eps, sys, g);
    const double ddg = gamma_eps_dhh(h[j], eps, sys, g);

    // R = dg/sqrt(q) - gam*s/q^{3/2} - lambda, with p and s depending on
    // the neighbors.
    const double dR_dh = ddg / sq - dg * curv[j] / q15 + 2.0 * gam * inv_dx2 / q15;
    const double dR_dp = -dg * pj / q15 + 3.0 * gam * curv[j] * pj / q25;
    const double dR_ds = -gam / q15;
    const double to_right = dR_dp * inv_2dx + dR_ds * inv_dx2;
    const double to_left = -dR_dp * inv_2dx + dR_ds * inv_dx2;

    J.diag[j] = dR_dh;
    if (j == 0) {
      J.upper[0] += to_right + to_left;  // ghost h_{-1} = h_1
    } else if (j + 1 == m) {
      J.lower[j] += to_right + to_left;  // ghost h_{n+1} = h_{n-1}
    } else {
      J.lower[j] = to_left;
      J.upper[j] = to_right;
    }
    J.column[j] = -1.0;
  }
  J.row = p.grid().simpson_weights();
  return J;
}

std::vector<double> curvature_profile(const Profile& p) {
  const auto slope = gradient_central(p);
  auto kappa = second_difference(p);
  for (std::size_t j = 0; j < kappa.size(); ++j) {
    const double q = 1.0 + slope[j] * slope[j];
    kappa[j] = -kappa[j] / (q * std::sqrt(q));
  }
  return kappa;
}

void write_profile_csv(const Profile& p, std::ostream& os) {
  os << "x,h\n" << std::setprecision(17);
  for (std::size_t j = 0; j < p.size(); ++j) {
    os << p.grid().x(j) << ',' << p[j] << '\n';
  }
}

void write_profile_csv(const Profile& p, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  write_profile_csv(p, os);
  if (!os) throw Error(ErrorKind::io, "write failed: " + path);
}

Profile read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,h", 0) != 0) {
    throw Error(ErrorKind::io, "profile CSV must start with header 'x,h'");
  }
  std::vector<double> xs;
  std::vector<double> hs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double x = 0.0;
    double h = 0.0;
    char comma = 0;
    if (!(ls >> x >> comma >> h) || comma != ',') {
      throw Error(ErrorKind::io, "malformed profile CSV line: " + line);
    }
    xs.push_back(x);
    hs.push_back(h);
  }
  if (xs.size() < 3) throw Error(ErrorKind::io, "profile CSV has fewer than 3 nodes");
  const int n = static_cast<int>(xs.size()) - 1;
  Grid1D grid(xs.front(), xs.back(), n);
  return Profile(grid, std::move(hs));
}

Profile read_profile_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot open " + path);
  return read_profile_csv(is);
}

}  // namespace wetreg
