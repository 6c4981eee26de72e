#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wetreg/asymptotics.hpp"
#include "wetreg/config.hpp"
#include "wetreg/solver.hpp"

namespace wetreg {

/// One row of an eps sweep.
struct StudyRecord {
  double eps = 0.0;
  double apparent_angle = 0.0;
  double angle_error = 0.0;
  double apparent_point = 0.0;
  double point_error = 0.0;
  double precursor_height = 0.0;
  double precursor_prediction = 0.0;
  double lambda = 0.0;
  double lambda0_oracle = 0.0;
  double energy = 0.0;
  int iterations = 0;
  double residual_norm = 0.0;
};

struct SweepFailure {
  double eps = 0.0;
  std::string message;
};

struct SweepResult {
  std::vector<StudyRecord> records;
  std::vector<EquilibriumState> states;  // parallel to records
  std::vector<SweepFailure> failures;
  double v_target = 0.0;
  CapEquilibrium oracle;
};

/// Volume used by a study: the configured v_target or the Simpson volume of
/// the initial cap on the study grid.
double study_volume(const StudyConfig& cfg);

/// Record for one converged state against the cap oracle of v_target.
StudyRecord make_record(const EquilibriumState& state, const StudyConfig& cfg,
                        const CapEquilibrium& oracle);

/// Runs the configured eps ladder from the initial cap. Warm mode is a
/// continuation; cold mode solves every eps independently (concurrently).
/// Without keep_going the first failure throws SweepAborted.
SweepResult run_sweep(const StudyConfig& cfg, std::ostream* log = nullptr);

/// Single solve at eps from the initial cap.
EquilibriumState run_solve(const StudyConfig& cfg, double eps,
                           std::ostream* log = nullptr);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-space residuals
};

/// Least-squares line through (log eps, log value); needs >= 3 positive pairs.
LogLogFit loglog_slope(const std::vector<std::pair<double, double>>& pairs);

struct RecoveryRow {
  double eps = 0.0;
  double width = 0.0;
  double f_eps = 0.0;
  double f_sharp = 0.0;
  double gap = 0.0;  // f_eps - f_sharp
};

/// Discrete convolution with the bump kernel exp(1/(r^2 - 1)) of the given
/// half-width, normalized to unit sum, with reflecting ends. Throws when
/// the half-width is below 2 dx.
Profile mollify(const Profile& p, double width);

/// Recovery-sequence probe: mollify h_sharp at width sqrt(eps)*width_scale,
/// restore its volume with a constant shift, and compare the regularized
/// energy at eps with the sharp energy of h_sharp.
std::vector<RecoveryRow> gamma_recovery_check(const Profile& h_sharp,
                                              const std::vector<double>& eps_list,
                                              const MaterialSystem& sys,
                                              const InterpolantG& g,
                                              double width_scale);

struct ProbeReport {
  std::vector<double> margins;  // energy - C0 * graph length, per profile
  int violations = 0;
  double min_margin = 0.0;
};

/// Checks F_eps(p) >= (gamma_vs - gamma_fs) * graph_length_simpson(p).
ProbeReport lower_bound_probe(const std::vector<Profile>& profiles, double eps,
                              const MaterialSystem& sys, const InterpolantG& g);

/// Smooth random profiles: offset plus a few cosine modes. With
/// allow_negative some of them dip below zero.
std::vector<Profile> random_smooth_profiles(const Grid1D& grid, int count,
                                            std::uint64_t seed, bool allow_negative);

void write_records_csv(const std::vector<StudyRecord>& records, std::ostream& os);
void write_records_json(const std::vector<StudyRecord>& records, std::ostream& os);

/// state.json body: every EquilibriumState scalar plus the config echo.
std::string state_json(const EquilibriumState& state, const StudyConfig& cfg);

std::string records_header();

}  // namespace wetreg
