#include "wetreg/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "wetreg/error.hpp"

namespace wetreg {

double study_volume(const StudyConfig& cfg) {
  if (cfg.v_target) return *cfg.v_target;
  return simpson_volume(initial_cap(cfg.grid()));
}

StudyRecord make_record(const EquilibriumState& state, const StudyConfig& cfg,
                        const CapEquilibrium& oracle) {
  const MaterialSystem sys = cfg.material();
  const InterpolantG g = InterpolantG::exp2();
  const ApparentContact fit = fit_apparent_contact(state, cfg.fit);
  StudyRecord r;
  r.eps = state.eps;
  r.apparent_angle = fit.angle;
  r.angle_error = std::abs(fit.angle - sys.theta_e());
  r.apparent_point = fit.point;
  r.point_error = std::abs(fit.point - oracle.contact_half_width);
  r.precursor_height = measure_precursor(state);
  r.precursor_prediction = precursor_height(oracle.lambda0, state.eps, sys, g);
  r.lambda = state.lambda;
  r.lambda0_oracle = oracle.lambda0;
  r.energy = state.energy;
  r.iterations = state.iterations;
  r.residual_norm = state.residual_norm;
  return r;
}

EquilibriumState run_solve(const StudyConfig& cfg, double eps, std::ostream* log) {
  cfg.validate();
  const MaterialSystem sys = cfg.material();
  const InterpolantG g = InterpolantG::exp2();
  const Profile p0 = initial_cap(cfg.grid());
  return newton_solve(p0, lambda_guess(p0, sys), study_volume(cfg), eps, sys, g,
                      cfg.newton, log);
}

SweepResult run_sweep(const StudyConfig& cfg, std::ostream* log) {
  cfg.validate();
  const MaterialSystem sys = cfg.material();
  const InterpolantG g = InterpolantG::exp2();
  const Profile p0 = initial_cap(cfg.grid());
  const double lambda0 = lambda_guess(p0, sys);

  SweepResult out;
  out.v_target = study_volume(cfg);
  out.oracle = cap_equilibrium(out.v_target, sys);

  auto accept = [&](EquilibriumState state) {
    out.records.push_back(make_record(state, cfg, out.oracle));
    out.states.push_back(std::move(state));
  };
  auto fail = [&](double eps, const std::string& message) {
    if (!cfg.keep_going) throw SweepAborted(message, eps, out.states);
    out.failures.push_back({eps, message});
  };

  if (cfg.mode == SweepMode::warm) {
    for (double eps : cfg.eps_list) {
      const Profile& start = out.states.empty() ? p0 : out.states.back().profile;
      const double lam = out.states.empty() ? lambda0 : out.states.back().lambda;
      try {
        accept(newton_solve(start, lam, out.v_target, eps, sys, g, cfg.newton, log));
      } catch (const Error& e) {
        fail(eps, e.what());
      }
    }
    return out;
  }

  struct Outcome {
    std::optional<EquilibriumState> state;
    std::string error;
    std::string log;
  };
  std::vector<std::future<Outcome>> jobs;
  jobs.reserve(cfg.eps_list.size());
  for (double eps : cfg.eps_list) {
    jobs.push_back(std::async(std::launch::async, [&, eps] {
      Outcome o;
      std::ostringstream local;
      try {
        o.state = newton_solve(p0, lambda0, out.v_target, eps, sys, g, cfg.newton,
                               log ? &local : nullptr);
      } catch (const Error& e) {
        o.error = e.what();
      }
      o.log = local.str();
      return o;
    }));
  }
  // Collected in eps_list order so output does not depend on scheduling.
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    Outcome o = jobs[i].get();
    if (log) *log << o.log;
    if (o.state) {
      try {
        accept(std::move(*o.state));
      } catch (const Error& e) {
        fail(cfg.eps_list[i], e.what());
      }
    } else {
      fail(cfg.eps_list[i], o.error);
    }
  }
  return out;
}

LogLogFit loglog_slope(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw invalid_argument("loglog_slope needs at least 3 pairs");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [e, v] : pairs) {
    if (!(e > 0.0) || !(v > 0.0)) {
      throw invalid_argument("loglog_slope needs positive entries");
    }
    sx += std::log(e);
    sy += std::log(v);
  }
  const double n = static_cast<double>(pairs.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [e, v] : pairs) {
    const double dx = std::log(e) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (!(sxx > 0.0)) throw invalid_argument("loglog_slope needs distinct eps values");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [e, v] : pairs) {
    const double r = std::log(v) - (fit.intercept + fit.slope * std::log(e));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

Profile mollify(const Profile& p, double width) {
  const Grid1D& grid = p.grid();
  const double dx = grid.dx();
  if (!(width >= 2.0 * dx)) {
    throw invalid_argument("mollifier width is below 2 dx; refine the grid");
  }
  const int half = static_cast<int>(std::floor(width / dx));
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1), 0.0);
  double total = 0.0;
  for (int k = -half; k <= half; ++k) {
    const double r = k * dx / width;
    const double v = std::abs(r) < 1.0 ? std::exp(1.0 / (r * r - 1.0)) : 0.0;
    kernel[static_cast<std::size_t>(k + half)] = v;
    total += v;
  }
  for (double& v : kernel) v /= total;

  const auto h = p.h();
  const int last = static_cast<int>(h.size()) - 1;
  auto reflect = [last](int i) {
    while (i < 0 || i > last) {
      if (i < 0) i = -i;
      if (i > last) i = 2 * last - i;
    }
    return i;
  };
  std::vector<double> out(h.size(), 0.0);
  for (int j = 0; j <= last; ++j) {
    double acc = 0.0;
    for (int k = -half; k <= half; ++k) {
      acc += kernel[static_cast<std::size_t>(k + half)] * h[static_cast<std::size_t>(reflect(j + k))];
    }
    out[static_cast<std::size_t>(j)] = acc;
  }
  return Profile(grid, std::move(out));
}

std::vector<RecoveryRow> gamma_recovery_check(const Profile& h_sharp,
                                              const std::vector<double>& eps_list,
                                              const MaterialSystem& sys,
                                              const InterpolantG& g,
                                              double width_scale) {
  if (h_sharp.min() < 0.0) throw invalid_argument("h_sharp must be nonnegative");
  if (!(width_scale > 0.0)) throw invalid_argument("width_scale must be positive");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || (i > 0 && !(eps_list[i] < eps_list[i - 1]))) {
      throw invalid_argument("eps_list must be positive and strictly decreasing");
    }
  }
  const double f_sharp = energy_sharp(h_sharp, sys);
  const double volume = simpson_volume(h_sharp);
  const double length = h_sharp.grid().length();

  std::vector<RecoveryRow> rows;
  for (double eps : eps_list) {
    const double width = std::sqrt(eps) * width_scale;
    Profile smooth = mollify(h_sharp, width);
    const double shift = (volume - simpson_volume(smooth)) / length;
    for (double& v : smooth.h_mut()) v += shift;
    RecoveryRow row;
    row.eps = eps;
    row.width = width;
    row.f_eps = energy_regularized(smooth, eps, sys, g);
    row.f_sharp = f_sharp;
    row.gap = row.f_eps - f_sharp;
    rows.push_back(row);
  }
  return rows;
}

ProbeReport lower_bound_probe(const std::vector<Profile>& profiles, double eps,
                              const MaterialSystem& sys, const InterpolantG& g) {
  ProbeReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const Profile& p : profiles) {
    const double energy = energy_regularized(p, eps, sys, g);
    const double bound = sys.substrate_density() * graph_length_simpson(p);
    const double margin = energy - bound;
    report.margins.push_back(margin);
    report.min_margin = std::min(report.min_margin, margin);
    if (margin < -1e-12 * std::max(1.0, std::abs(energy))) ++report.violations;
  }
  if (profiles.empty()) report.min_margin = 0.0;
  return report;
}

std::vector<Profile> random_smooth_profiles(const Grid1D& grid, int count,
                                            std::uint64_t seed, bool allow_negative) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Profile> out;
  out.reserve(static_cast<std::size_t>(count));
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < count; ++i) {
    const int modes = 1 + static_cast<int>(unit(rng) * 4.0);
    std::vector<double> amp(static_cast<std::size_t>(modes));
    std::vector<double> freq(static_cast<std::size_t>(modes));
    for (int k = 0; k < modes; ++k) {
      amp[static_cast<std::size_t>(k)] = 0.2 * (unit(rng) - 0.5);
      freq[static_cast<std::size_t>(k)] = 1.0 + std::floor(unit(rng) * 6.0);
    }
    std::vector<double> h(grid.nodes());
    for (std::size_t j = 0; j < h.size(); ++j) {
      const double t = (grid.x(j) - grid.a()) / grid.length();
      double v = 0.0;
      for (int k = 0; k < modes; ++k) {
        v += amp[static_cast<std::size_t>(k)] * std::cos(pi * freq[static_cast<std::size_t>(k)] * t);
      }
      h[j] = v;
    }
    const double lo = *std::min_element(h.begin(), h.end());
    // nonnegative variants sit on [0, ...); others may dip to about -0.05
    const double base = allow_negative && (i % 2 == 1) ? -lo - 0.05 * unit(rng)
                                                      : -lo + 0.1 * unit(rng);
    for (double& v : h) v += base;
    out.emplace_back(grid, std::move(h));
  }
  return out;
}

std::string records_header() {
  return "eps,apparent_angle,angle_error,apparent_point,point_error,precursor_height,"
         "precursor_prediction,lambda,lambda0_oracle,energy,iterations,residual_norm";
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_records_csv(const std::vector<StudyRecord>& records, std::ostream& os) {
  os << records_header() << '\n';
  for (const auto& r : records) {
    os << fmt17(r.eps) << ',' << fmt17(r.apparent_angle) << ',' << fmt17(r.angle_error)
       << ',' << fmt17(r.apparent_point) << ',' << fmt17(r.point_error) << ','
       << fmt17(r.precursor_height) << ',' << fmt17(r.precursor_prediction) << ','
       << fmt17(r.lambda) << ',' << fmt17(r.lambda0_oracle) << ',' << fmt17(r.energy)
       << ',' << r.iterations << ',' << fmt17(r.residual_norm) << '\n';
  }
}

void write_records_json(const std::vector<StudyRecord>& records, std::ostream& os) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    arr.push_back({{"eps", r.eps},
                   {"apparent_angle", r.apparent_angle},
                   {"angle_error", r.angle_error},
                   {"apparent_point", r.apparent_point},
                   {"point_error", r.point_error},
                   {"precursor_height", r.precursor_height},
                   {"precursor_prediction", r.precursor_prediction},
                   {"lambda", r.lambda},
                   {"lambda0_oracle", r.lambda0_oracle},
                   {"energy", r.energy},
                   {"iterations", r.iterations},
                   {"residual_norm", r.residual_norm}});
  }
  os << arr.dump(2) << '\n';
}

std::string state_json(const EquilibriumState& state, const StudyConfig& cfg) {
  nlohmann::ordered_json j;
  j["eps"] = state.eps;
  j["lambda"] = state.lambda;
  j["residual_norm"] = state.residual_norm;
  j["iterations"] = state.iterations;
  j["energy"] = state.energy;
  j["min_height"] = state.min_height;
  j["volume"] = simpson_volume(state.profile);
  j["floor_steps"] = state.floor_steps;
  j["positivity_holds"] = state.positivity_holds();
  j["nodes"] = state.profile.size();
  nlohmann::ordered_json echo;
  for (const auto& [k, v] : cfg.entries()) echo[k] = v;
  j["config"] = echo;
  return j.dump(2);
}

}  // namespace wetreg
