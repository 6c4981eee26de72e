#include "wetreg/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wetreg/error.hpp"

namespace wetreg {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw invalid_argument(std::string(what) + " must be finite");
  }
}

void require_eps(double eps) {
  require_finite(eps, "eps");
  if (eps <= 0.0) throw invalid_argument("eps must be positive");
}

}  // namespace

MaterialSystem::MaterialSystem(double fv, double vs, double fs)
    : gamma_fv_(fv), gamma_vs_(vs), gamma_fs_(fs) {
  require_finite(fv, "gamma_fv");
  require_finite(vs, "gamma_vs");
  require_finite(fs, "gamma_fs");
  if (fv <= 0.0) throw invalid_argument("gamma_fv must be positive");
  const double c0 = vs - fs;
  if (c0 <= 0.0) throw invalid_argument("gamma_vs - gamma_fs must be positive");
  spreading_ = vs - fs - fv;
  if (spreading_ >= 0.0) {
    throw invalid_argument("spreading parameter must be negative (partial wetting)");
  }
  theta_e_ = std::acos(c0 / fv);
}

MaterialSystem MaterialSystem::from_densities(double gamma_fv, double gamma_vs,
                                              double gamma_fs) {
  return MaterialSystem(gamma_fv, gamma_vs, gamma_fs);
}

MaterialSystem MaterialSystem::from_angle(double gamma_fv, double theta_e) {
  require_finite(theta_e, "theta_e");
  if (!(theta_e > 0.0 && theta_e < std::numbers::pi / 2)) {
    throw invalid_argument("theta_e must lie in (0, pi/2)");
  }
  MaterialSystem sys(gamma_fv, gamma_fv * std::cos(theta_e), 0.0);
  // keep the requested angle bit-exact rather than acos(cos(theta))
  sys.theta_e_ = theta_e;
  return sys;
}

InterpolantG InterpolantG::exp2() {
  InterpolantG g;
  g.name = "exp2";
  g.eval = [](double z) { return std::exp(-z) - 2.0 * std::exp(-0.5 * z); };
  g.deriv = [](double z) { return -std::exp(-z) + std::exp(-0.5 * z); };
  g.deriv2 = [](double z) { return std::exp(-z) - 0.5 * std::exp(-0.5 * z); };
  return g;
}

bool InterpolantReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

const ConditionCheck* InterpolantReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

InterpolantReport validate_interpolant(const InterpolantG& g, double sample_max,
                                       int n_samples) {
  if (!(sample_max > 0.0) || n_samples < 16) {
    throw invalid_argument("validate_interpolant needs sample_max > 0 and n_samples >= 16");
  }
  InterpolantReport report;
  auto add = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  {
    const double g0 = g(0.0);
    std::ostringstream os;
    os << "g(0) = " << g0;
    add("g(0)=-1", std::abs(g0 + 1.0) <= 1e-12, os.str());
  }

  // condition (2) on a uniform grid of each half-line
  {
    bool ok = true;
    std::ostringstream os;
    double prev_pos = g(0.0);
    double prev_neg = g(0.0);
    for (int i = 1; i <= n_samples && ok; ++i) {
      const double z = sample_max * i / n_samples;
      const double gp = g(z);
      const double gn = g(-z);
      if (!(gp > prev_pos)) {
        ok = false;
        os << "not increasing at z = " << z;
      } else if (!(gn > prev_neg) && std::isfinite(gn)) {
        ok = false;
        os << "not decreasing at z = " << -z;
      }
      prev_pos = gp;
      prev_neg = gn;
    }
    add("monotone", ok, os.str());
  }

  std::vector<double> ladder;
  for (double z = 1.0; z <= sample_max; z *= 2.0) ladder.push_back(z);
  if (ladder.empty()) ladder.push_back(sample_max);
  const std::size_t tail = std::min<std::size_t>(4, ladder.size());
  const std::size_t first = ladder.size() - tail;

  auto decays = [&](auto&& f, const char* label) {
    bool ok = true;
    std::ostringstream os;
    for (std::size_t k = first + 1; k < ladder.size(); ++k) {
      if (!(std::abs(f(ladder[k])) < std::abs(f(ladder[k - 1])))) {
        ok = false;
        os << label << " not decreasing at z = " << ladder[k];
      }
    }
    const double last = std::abs(f(ladder.back()));
    if (ok && !(last < 1e-2)) {
      ok = false;
      os << label << " = " << last << " at z = " << ladder.back();
    }
    return std::make_pair(ok, os.str());
  };
  {
    auto [ok, detail] = decays([&](double z) { return g(z); }, "|g|");
    add("decay", ok, detail);
  }
  {
    auto [ok, detail] =
        decays([&](double z) { return z * g.deriv(z); }, "|z g'|");
    add("z*g' decay", ok, detail);
  }

  {
    bool ok = true;
    std::ostringstream os;
    double prev = g(0.0);
    for (double z : ladder) {
      const double v = g(-z);
      if (std::isnan(v) || !(v > prev)) {
        ok = false;
        os << "g(-z) not increasing at z = " << z;
        break;
      }
      prev = v;
    }
    if (ok && !(prev >= 10.0)) {
      ok = false;
      os << "g(" << -ladder.back() << ") = " << prev << " stays bounded";
    }
    add("negative blow-up", ok, os.str());
  }

  {
    bool ok = true;
    std::ostringstream os;
    for (int i = 1; i <= n_samples; ++i) {
      const double z = sample_max * i / n_samples;
      if (!(g(z) <= g(-z))) {
        ok = false;
        os << "g(z) > g(-z) at z = " << z;
        break;
      }
    }
    add("asymmetry", ok, os.str());
  }

  {
    // restricted range keeps exp-type instances away from overflow
    const double zr = std::min(sample_max, 8.0);
    double worst = 0.0;
    double worst_z = 0.0;
    for (int i = 0; i <= n_samples; ++i) {
      const double z = -zr + 2.0 * zr * i / n_samples;
      const double step = 1e-4 * std::max(1.0, std::abs(z));
      const double fd1 = (g(z + step) - g(z - step)) / (2.0 * step);
      const double fd2 = (g.deriv(z + step) - g.deriv(z - step)) / (2.0 * step);
      const double d1 = g.deriv(z);
      const double d2 = g.deriv2(z);
      const double e1 = std::abs(fd1 - d1) / std::max(1.0, std::abs(d1));
      const double e2 = std::abs(fd2 - d2) / std::max(1.0, std::abs(d2));
      const double e = std::max(e1, e2);
      if (!(e <= worst)) {
        worst = e;
        worst_z = z;
      }
    }
    std::ostringstream os;
    os << "max relative derivative mismatch " << worst << " at z = " << worst_z;
    add("derivatives", worst <= 1e-6, os.str());
  }

  return report;
}

double gamma_eps(double h, double eps, const MaterialSystem& sys,
                 const InterpolantG& g) {
  require_finite(h, "h");
  require_eps(eps);
  return sys.gamma_fv() - sys.spreading() * g(h / eps);
}

double gamma_eps_dh(double h, double eps, const MaterialSystem& sys,
                    const InterpolantG& g) {
  require_finite(h, "h");
  require_eps(eps);
  return -(sys.spreading() / eps) * g.deriv(h / eps);
}

double gamma_eps_dhh(double h, double eps, const MaterialSystem& sys,
                     const InterpolantG& g) {
  require_finite(h, "h");
  require_eps(eps);
  return -(sys.spreading() / (eps * eps)) * g.deriv2(h / eps);
}

}  // namespace wetreg
