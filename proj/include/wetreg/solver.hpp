#pragma once

#include <iosfwd>
#include <vector>

#include "wetreg/discretization.hpp"
#include "wetreg/error.hpp"
#include "wetreg/model.hpp"

namespace wetreg {

enum class StopRule {
  residual,  // ||G||_inf < tol
  step,      // ||h^{k+1} - h^k||_inf < tol
};

struct NewtonConfig {
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double min_step = 1e-4;
  double tol_residual = 1e-8;
  int max_iter = 200;
  StopRule stop_rule = StopRule::residual;

  void validate() const;
};

/// One accepted Newton step. armijo_satisfied is false when the step length
/// was clamped to min_step without meeting sufficient decrease.
struct IterationRecord {
  int iter = 0;
  double alpha = 0.0;
  double residual_inf = 0.0;
  double lambda = 0.0;
  bool armijo_satisfied = true;
};

struct EquilibriumState {
  Profile profile;
  double lambda = 0.0;
  double eps = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  double energy = 0.0;
  double min_height = 0.0;
  int floor_steps = 0;  // steps taken at min_step without Armijo decrease

  /// min h > 0 and lambda > 0.
  bool positivity_holds() const noexcept { return min_height > 0.0 && lambda > 0.0; }
};

/// Thrown by newton_solve when max_iter is exhausted; carries the iterate
/// with the smallest residual seen.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, EquilibriumState best)
      : Error(ErrorKind::not_converged, what), best_(std::move(best)) {}
  const EquilibriumState& best() const noexcept { return best_; }

 private:
  EquilibriumState best_;
};

/// Thrown by continuation_solve; carries the states converged before the
/// failing eps.
class SweepAborted : public Error {
 public:
  SweepAborted(const std::string& what, double failed_eps,
               std::vector<EquilibriumState> partial)
      : Error(ErrorKind::not_converged, what),
        failed_eps_(failed_eps),
        partial_(std::move(partial)) {}
  double failed_eps() const noexcept { return failed_eps_; }
  const std::vector<EquilibriumState>& partial() const noexcept { return partial_; }

 private:
  double failed_eps_;
  std::vector<EquilibriumState> partial_;
};

/// h(x) = sqrt(0.41 - x^2) - 0.4 on |x| <= 0.5, zero elsewhere.
Profile initial_cap(const Grid1D& grid);

/// gamma_fv times the mean curvature over nodes with h > max(h)/2.
double lambda_guess(const Profile& p, const MaterialSystem& sys);

/// Newton iteration on (h, lambda) with Armijo backtracking on the merit
/// 0.5*||G||_2^2. When log is non-null, one line "iter,alpha,residual_inf,lambda"
/// is written per accepted step.
EquilibriumState newton_solve(const Profile& p0, double lambda0, double v_target,
                              double eps, const MaterialSystem& sys,
                              const InterpolantG& g, const NewtonConfig& cfg,
                              std::ostream* log = nullptr,
                              std::vector<IterationRecord>* history = nullptr);

/// Solves at eps_list[0] from p0 and warm-starts each following eps from the
/// previous state. eps_list must be strictly decreasing and positive.
std::vector<EquilibriumState> continuation_solve(
    const std::vector<double>& eps_list, const Profile& p0, double lambda0,
    double v_target, const MaterialSystem& sys, const InterpolantG& g,
    const NewtonConfig& cfg, std::ostream* log = nullptr);

}  // namespace wetreg
