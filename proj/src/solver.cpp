#include "wetreg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "wetreg/linalg.hpp"

namespace wetreg {

void NewtonConfig::validate() const {
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw config_error("newton.armijo_c must be in (0,1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw config_error("newton.backtrack must be in (0,1)");
  if (!(min_step > 0.0 && min_step <= 1.0)) throw config_error("newton.min_step must be in (0,1]");
  if (!(tol_residual > 0.0)) throw config_error("newton.tol_residual must be positive");
  if (max_iter < 1) throw config_error("newton.max_iter must be at least 1");
}

Profile initial_cap(const Grid1D& grid) {
  if (grid.a() > -0.5 || grid.b() < 0.5) {
    throw invalid_argument("initial cap needs a grid covering [-0.5, 0.5]");
  }
  std::vector<double> h(grid.nodes(), 0.0);
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double x = grid.x(j);
    if (std::abs(x) <= 0.5) h[j] = std::max(0.0, std::sqrt(0.41 - x * x) - 0.4);
  }
  return Profile(grid, std::move(h));
}

double lambda_guess(const Profile& p, const MaterialSystem& sys) {
  const double top = p.max();
  if (!(top > 0.0)) throw invalid_argument("lambda_guess: profile has no positive height");
  const auto kappa = curvature_profile(p);
  double sum = 0.0;
  int count = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.5 * top) {
      sum += kappa[j];
      ++count;
    }
  }
  if (count == 0) throw invalid_argument("lambda_guess: empty upper region");
  const double mean = sum / count;
  if (!(std::abs(mean) > 1e-12)) {
    throw invalid_argument("lambda_guess: profile has no curvature (flat)");
  }
  return sys.gamma_fv() * mean;
}

namespace {

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double half_sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return 0.5 * s;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

EquilibriumState make_state(const Profile& p, double lambda, double eps,
                            double res, int iters, int floor_steps,
                            const MaterialSystem& sys, const InterpolantG& g) {
  EquilibriumState s{p};
  s.lambda = lambda;
  s.eps = eps;
  s.residual_norm = res;
  s.iterations = iters;
  s.energy = energy_regularized(p, eps, sys, g);
  s.min_height = p.min();
  s.floor_steps = floor_steps;
  return s;
}

}  // namespace

EquilibriumState newton_solve(const Profile& p0, double lambda0, double v_target,
                              double eps, const MaterialSystem& sys,
                              const InterpolantG& g, const NewtonConfig& cfg,
                              std::ostream* log,
                              std::vector<IterationRecord>* history) {
  cfg.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw invalid_argument("eps must be positive");
  if (!(v_target > 0.0) || !std::isfinite(v_target)) {
    throw invalid_argument("v_target must be positive");
  }
  if (!std::isfinite(lambda0)) throw invalid_argument("lambda0 must be finite");

  const Grid1D grid = p0.grid();
  const std::size_t m = p0.size();
  std::vector<double> h(p0.h().begin(), p0.h().end());
  double lambda = lambda0;

  auto eval = [&](const std::vector<double>& hv, double lam) {
    return residual(Profile(grid, hv), lam, v_target, eps, sys, g);
  };

  std::vector<double> G = eval(h, lambda);
  double res = inf_norm(G);
  double merit = half_sq_norm(G);
  int floor_steps = 0;

  std::vector<double> best_h = h;
  double best_lambda = lambda;
  double best_res = res;

  if (log) *log << std::setprecision(17);

  if (cfg.stop_rule == StopRule::residual && res < cfg.tol_residual) {
    return make_state(Profile(grid, h), lambda, eps, res, 0, 0, sys, g);
  }

  std::vector<double> trial_h(m);
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    const auto J = jacobian(Profile(grid, h), lambda, eps, sys, g);
    std::vector<double> rhs(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) rhs[i] = -G[i];
    const auto delta = solve_bordered(J, rhs);

    // For the exact Newton direction the merit slope is -2 * merit.
    const double slope0 = -2.0 * merit;
    double alpha = 1.0;
    bool armijo = false;
    std::vector<double> trial_G;
    double trial_lambda = lambda;
    double trial_merit = 0.0;
    while (true) {
      for (std::size_t j = 0; j < m; ++j) trial_h[j] = h[j] + alpha * delta[j];
      trial_lambda = lambda + alpha * delta[m];
      bool finite = all_finite(trial_h) && std::isfinite(trial_lambda);
      if (finite) {
        trial_G = eval(trial_h, trial_lambda);
        finite = all_finite(trial_G);
      }
      trial_merit = finite ? half_sq_norm(trial_G)
                           : std::numeric_limits<double>::infinity();
      if (finite && trial_merit <= merit + cfg.armijo_c * alpha * slope0) {
        armijo = true;
        break;
      }
      if (alpha <= cfg.min_step) break;
      alpha = std::max(alpha * cfg.backtrack, cfg.min_step);
    }
    if (!std::isfinite(trial_merit)) {
      std::ostringstream os;
      os << "Newton step produced non-finite residual at the minimum step (eps=" << eps
         << ", iter=" << iter << ")";
      throw NonConvergence(os.str(), make_state(Profile(grid, best_h), best_lambda, eps,
                                                best_res, iter, floor_steps, sys, g));
    }
    if (!armijo) ++floor_steps;

    double step_inf = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      step_inf = std::max(step_inf, std::abs(trial_h[j] - h[j]));
    }
    h.swap(trial_h);
    lambda = trial_lambda;
    G = std::move(trial_G);
    res = inf_norm(G);
    merit = trial_merit;

    if (history) history->push_back({iter, alpha, res, lambda, armijo});
    if (log) *log << iter << ',' << alpha << ',' << res << ',' << lambda << '\n';

    if (res < best_res) {
      best_res = res;
      best_h = h;
      best_lambda = lambda;
    }

    const bool done = cfg.stop_rule == StopRule::residual ? res < cfg.tol_residual
                                                          : step_inf < cfg.tol_residual;
    if (done) {
      return make_state(Profile(grid, h), lambda, eps, res, iter, floor_steps, sys, g);
    }
  }

  std::ostringstream os;
  os << "Newton did not converge in " << cfg.max_iter << " iterations (eps=" << eps
     << ", best residual " << best_res << ")";
  throw NonConvergence(os.str(), make_state(Profile(grid, best_h), best_lambda, eps,
                                            best_res, cfg.max_iter, floor_steps, sys, g));
}

std::vector<EquilibriumState> continuation_solve(
    const std::vector<double>& eps_list, const Profile& p0, double lambda0,
    double v_target, const MaterialSystem& sys, const InterpolantG& g,
    const NewtonConfig& cfg, std::ostream* log) {
  if (eps_list.empty()) throw invalid_argument("eps_list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw invalid_argument("eps_list entries must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw invalid_argument("eps_list must be strictly decreasing");
    }
  }
  std::vector<EquilibriumState> states;
  states.reserve(eps_list.size());
  for (double eps : eps_list) {
    const Profile& start = states.empty() ? p0 : states.back().profile;
    const double lam = states.empty() ? lambda0 : states.back().lambda;
    try {
      states.push_back(newton_solve(start, lam, v_target, eps, sys, g, cfg, log));
    } catch (const Error& e) {
      throw SweepAborted(e.what(), eps, std::move(states));
    }
  }
  return states;
}

}  // namespace wetreg
