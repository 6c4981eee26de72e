#include "wetreg/wetreg.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "wetreg/asymptotics.hpp"
#include "wetreg/config.hpp"
#include "wetreg/error.hpp"
#include "wetreg/studies.hpp"

struct wetreg_config {
  wetreg::StudyConfig cfg;
};

struct wetreg_state {
  wetreg::EquilibriumState state;
};

struct wetreg_sweep {
  wetreg::SweepResult result;
};

struct wetreg_inner {
  wetreg::InnerProfile profile;
};

namespace {

thread_local std::string g_last_error;

wetreg_status status_of(wetreg::ErrorKind kind) {
  switch (kind) {
    case wetreg::ErrorKind::invalid_argument: return WETREG_ERR_INVALID_ARGUMENT;
    case wetreg::ErrorKind::config: return WETREG_ERR_CONFIG;
    case wetreg::ErrorKind::not_converged: return WETREG_ERR_NOT_CONVERGED;
    case wetreg::ErrorKind::linear_solve: return WETREG_ERR_LINEAR_SOLVE;
    case wetreg::ErrorKind::fit_failure: return WETREG_ERR_FIT;
    case wetreg::ErrorKind::io: return WETREG_ERR_IO;
  }
  return WETREG_ERR_INTERNAL;
}

wetreg_status fail(wetreg_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs f, translating exceptions into status codes. Nothing may escape the
// C boundary.
template <class F>
wetreg_status guarded(F&& f) {
  try {
    f();
    return WETREG_OK;
  } catch (const wetreg::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(WETREG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(WETREG_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(WETREG_ERR_INTERNAL, "unknown exception");
  }
}

wetreg::Error io_error(const std::string& what) {
  return wetreg::Error(wetreg::ErrorKind::io, what);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw io_error("cannot write " + path.string());
  return os;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create directory " + dir.string() + ": " + ec.message());
}

// Newton log sink shared by solve and sweep: header once, then one line per step.
std::unique_ptr<std::ofstream> open_log(const char* path) {
  if (path == nullptr || *path == '\0') return nullptr;
  const std::filesystem::path p(path);
  if (p.has_parent_path()) ensure_dir(p.parent_path());
  auto os = std::make_unique<std::ofstream>(path);
  if (!*os) throw io_error(std::string("cannot open log file ") + path);
  *os << "iter,alpha,residual_inf,lambda\n";
  return os;
}

#define WETREG_REQUIRE(cond, msg) \
  do {                            \
    if (!(cond)) return fail(WETREG_ERR_INVALID_ARGUMENT, msg); \
  } while (0)

}  // namespace

extern "C" {

const char* wetreg_last_error(void) { return g_last_error.c_str(); }

const char* wetreg_status_name(wetreg_status status) {
  switch (status) {
    case WETREG_OK: return "ok";
    case WETREG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WETREG_ERR_CONFIG: return "config error";
    case WETREG_ERR_NOT_CONVERGED: return "not converged";
    case WETREG_ERR_LINEAR_SOLVE: return "linear solve failure";
    case WETREG_ERR_FIT: return "fit failure";
    case WETREG_ERR_IO: return "io error";
    case WETREG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

wetreg_status wetreg_config_create(wetreg_config** out) {
  WETREG_REQUIRE(out, "out is null");
  return guarded([&] { *out = new wetreg_config{}; });
}

wetreg_status wetreg_config_load(const char* path, wetreg_config** out) {
  WETREG_REQUIRE(path && out, "null argument");
  return guarded([&] {
    auto c = std::make_unique<wetreg_config>();
    c->cfg = wetreg::StudyConfig::load(path);
    *out = c.release();
  });
}

wetreg_status wetreg_config_set(wetreg_config* cfg, const char* key, const char* value) {
  WETREG_REQUIRE(cfg && key && value, "null argument");
  return guarded([&] { cfg->cfg.set(key, value); });
}

wetreg_status wetreg_config_get(const wetreg_config* cfg, const char* key, char* buf,
                                size_t len, size_t* needed) {
  WETREG_REQUIRE(cfg && key, "null argument");
  for (const auto& [k, v] : cfg->cfg.entries()) {
    if (k != key) continue;
    if (needed) *needed = v.size() + 1;
    if (buf && len > 0) {
      const std::size_t n = std::min(len - 1, v.size());
      std::memcpy(buf, v.data(), n);
      buf[n] = '\0';
      if (n < v.size()) return fail(WETREG_ERR_INVALID_ARGUMENT, "buffer too small");
    }
    return WETREG_OK;
  }
  return fail(WETREG_ERR_CONFIG, std::string("unknown config key '") + key + "'");
}

wetreg_status wetreg_config_validate(const wetreg_config* cfg) {
  WETREG_REQUIRE(cfg, "cfg is null");
  return guarded([&] { cfg->cfg.validate(); });
}

wetreg_format wetreg_config_format(const wetreg_config* cfg) {
  if (cfg && cfg->cfg.format == wetreg::OutputFormat::json) return WETREG_FORMAT_JSON;
  return WETREG_FORMAT_CSV;
}

void wetreg_config_free(wetreg_config* cfg) { delete cfg; }

wetreg_status wetreg_solve(const wetreg_config* cfg, double eps, const char* log_path,
                           wetreg_state** out) {
  WETREG_REQUIRE(cfg && out, "null argument");
  return guarded([&] {
    auto log = open_log(log_path);
    auto s = std::make_unique<wetreg_state>(
        wetreg_state{wetreg::run_solve(cfg->cfg, eps, log.get())});
    *out = s.release();
  });
}

wetreg_status wetreg_state_info_get(const wetreg_state* state, wetreg_state_info* out) {
  WETREG_REQUIRE(state && out, "null argument");
  const auto& s = state->state;
  out->eps = s.eps;
  out->lambda = s.lambda;
  out->residual_norm = s.residual_norm;
  out->energy = s.energy;
  out->min_height = s.min_height;
  out->volume = wetreg::simpson_volume(s.profile);
  out->iterations = s.iterations;
  out->floor_steps = s.floor_steps;
  out->nodes = s.profile.size();
  return WETREG_OK;
}

wetreg_status wetreg_state_profile(const wetreg_state* state, double* x, double* h,
                                   size_t n) {
  WETREG_REQUIRE(state && h, "null argument");
  const auto& p = state->state.profile;
  const std::size_t m = std::min(n, p.size());
  for (std::size_t j = 0; j < m; ++j) {
    h[j] = p[j];
    if (x) x[j] = p.grid().x(j);
  }
  return WETREG_OK;
}

wetreg_status wetreg_state_fit(const wetreg_state* state, const wetreg_config* cfg,
                               double* angle, double* point) {
  WETREG_REQUIRE(state && cfg, "null argument");
  return guarded([&] {
    const auto fit = wetreg::fit_apparent_contact(state->state, cfg->cfg.fit);
    if (angle) *angle = fit.angle;
    if (point) *point = fit.point;
  });
}

wetreg_status wetreg_state_write(const wetreg_state* state, const wetreg_config* cfg,
                                 const char* dir) {
  WETREG_REQUIRE(state && cfg && dir, "null argument");
  return guarded([&] {
    const std::filesystem::path d(dir);
    ensure_dir(d);
    auto prof = open_out(d / "profile.csv");
    wetreg::write_profile_csv(state->state.profile, prof);
    auto js = open_out(d / "state.json");
    js << wetreg::state_json(state->state, cfg->cfg) << '\n';
  });
}

void wetreg_state_free(wetreg_state* state) { delete state; }

wetreg_status wetreg_sweep_run(const wetreg_config* cfg, const char* log_path,
                               wetreg_sweep** out) {
  WETREG_REQUIRE(cfg && out, "null argument");
  return guarded([&] {
    auto log = open_log(log_path);
    auto s = std::make_unique<wetreg_sweep>(
        wetreg_sweep{wetreg::run_sweep(cfg->cfg, log.get())});
    *out = s.release();
  });
}

size_t wetreg_sweep_count(const wetreg_sweep* sweep) {
  return sweep ? sweep->result.records.size() : 0;
}

size_t wetreg_sweep_failure_count(const wetreg_sweep* sweep) {
  return sweep ? sweep->result.failures.size() : 0;
}

wetreg_status wetreg_sweep_record(const wetreg_sweep* sweep, size_t i, wetreg_record* out) {
  WETREG_REQUIRE(sweep && out, "null argument");
  WETREG_REQUIRE(i < sweep->result.records.size(), "record index out of range");
  const auto& r = sweep->result.records[i];
  *out = wetreg_record{r.eps,
                       r.apparent_angle,
                       r.angle_error,
                       r.apparent_point,
                       r.point_error,
                       r.precursor_height,
                       r.precursor_prediction,
                       r.lambda,
                       r.lambda0_oracle,
                       r.energy,
                       r.iterations,
                       r.residual_norm};
  return WETREG_OK;
}

wetreg_status wetreg_sweep_cap(const wetreg_sweep* sweep, wetreg_cap* out) {
  WETREG_REQUIRE(sweep && out, "null argument");
  const auto& c = sweep->result.oracle;
  *out = wetreg_cap{c.radius, c.contact_half_width, c.lambda0, c.apex_height};
  return WETREG_OK;
}

wetreg_status wetreg_sweep_write(const wetreg_sweep* sweep, const char* dir,
                                 wetreg_format format) {
  WETREG_REQUIRE(sweep && dir, "null argument");
  return guarded([&] {
    const std::filesystem::path d(dir);
    ensure_dir(d);
    if (format == WETREG_FORMAT_JSON) {
      auto os = open_out(d / "records.json");
      wetreg::write_records_json(sweep->result.records, os);
    } else {
      auto os = open_out(d / "records.csv");
      wetreg::write_records_csv(sweep->result.records, os);
    }
    for (const auto& s : sweep->result.states) {
      auto os = open_out(d / ("profile_eps_" + wetreg::format_double(s.eps) + ".csv"));
      wetreg::write_profile_csv(s.profile, os);
    }
  });
}

wetreg_status wetreg_sweep_precursor_slope(const wetreg_sweep* sweep, double* slope) {
  WETREG_REQUIRE(sweep && slope, "null argument");
  return guarded([&] {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& r : sweep->result.records) pairs.emplace_back(r.eps, r.precursor_height);
    *slope = wetreg::loglog_slope(pairs).slope;
  });
}

void wetreg_sweep_free(wetreg_sweep* sweep) { delete sweep; }

wetreg_status wetreg_inner_compute(const wetreg_config* cfg, wetreg_inner** out) {
  WETREG_REQUIRE(cfg && out, "null argument");
  return guarded([&] {
    const auto& c = cfg->cfg;
    auto p = std::make_unique<wetreg_inner>(wetreg_inner{wetreg::inner_profile(
        c.inner_xi_min, c.inner_xi_max, c.inner_n_pts, c.material(),
        wetreg::InterpolantG::exp2())});
    *out = p.release();
  });
}

size_t wetreg_inner_size(const wetreg_inner* inner) {
  return inner ? inner->profile.xi.size() : 0;
}

wetreg_status wetreg_inner_samples(const wetreg_inner* inner, double* xi, double* H,
                                   size_t n) {
  WETREG_REQUIRE(inner, "inner is null");
  const std::size_t m = std::min(n, inner->profile.xi.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (xi) xi[i] = inner->profile.xi[i];
    if (H) H[i] = inner->profile.H[i];
  }
  return WETREG_OK;
}

double wetreg_inner_final_slope(const wetreg_inner* inner) {
  if (!inner || inner->profile.xi.size() < 2) return 0.0;
  const auto& xi = inner->profile.xi;
  const auto& H = inner->profile.H;
  const std::size_t k = xi.size() - 1;
  return (H[k] - H[k - 1]) / (xi[k] - xi[k - 1]);
}

wetreg_status wetreg_inner_write(const wetreg_inner* inner, const char* path) {
  WETREG_REQUIRE(inner && path, "null argument");
  return guarded([&] {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) ensure_dir(p.parent_path());
    auto os = open_out(p);
    wetreg::write_inner_csv(inner->profile, os);
  });
}

void wetreg_inner_free(wetreg_inner* inner) { delete inner; }

wetreg_status wetreg_gamma_check(const wetreg_config* cfg, wetreg_recovery_row* rows,
                                 size_t cap, size_t* count) {
  WETREG_REQUIRE(cfg && count, "null argument");
  return guarded([&] {
    const auto& c = cfg->cfg;
    c.validate();
    const auto result = wetreg::gamma_recovery_check(
        wetreg::initial_cap(c.grid()), c.gamma_eps_list, c.material(),
        wetreg::InterpolantG::exp2(), c.mollifier_width_scale());
    *count = result.size();
    for (std::size_t i = 0; rows && i < std::min(cap, result.size()); ++i) {
      const auto& r = result[i];
      rows[i] = wetreg_recovery_row{r.eps, r.width, r.f_eps, r.f_sharp, r.gap};
    }
  });
}

wetreg_status wetreg_probe(const wetreg_config* cfg, double* margins, size_t cap,
                           wetreg_probe_summary* out) {
  WETREG_REQUIRE(cfg && out, "null argument");
  return guarded([&] {
    const auto& c = cfg->cfg;
    c.validate();
    const auto profiles =
        wetreg::random_smooth_profiles(c.grid(), c.probe_count, c.probe_seed, true);
    const auto report = wetreg::lower_bound_probe(profiles, c.probe_eps, c.material(),
                                                  wetreg::InterpolantG::exp2());
    out->count = static_cast<int>(report.margins.size());
    out->violations = report.violations;
    out->min_margin = report.min_margin;
    for (std::size_t i = 0; margins && i < std::min(cap, report.margins.size()); ++i) {
      margins[i] = report.margins[i];
    }
  });
}

wetreg_status wetreg_cap_equilibrium(const wetreg_config* cfg, double volume,
                                     wetreg_cap* out) {
  WETREG_REQUIRE(cfg && out, "null argument");
  return guarded([&] {
    const auto c = wetreg::cap_equilibrium(volume, cfg->cfg.material());
    *out = wetreg_cap{c.radius, c.contact_half_width, c.lambda0, c.apex_height};
  });
}

wetreg_status wetreg_study_volume(const wetreg_config* cfg, double* out) {
  WETREG_REQUIRE(cfg && out, "null argument");
  return guarded([&] { *out = wetreg::study_volume(cfg->cfg); });
}

}  // extern "C"
