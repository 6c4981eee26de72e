// Command-line front end. Talks to the library only through wetreg.h.
//
// Exit codes: 0 success, 1 solver or numerical failure, 2 configuration or
// usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wetreg/wetreg.h"

namespace {

constexpr int kOk = 0;
constexpr int kSolverFailure = 1;
constexpr int kConfigError = 2;

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::string log;
  std::vector<std::string> overrides;
  double eps = std::nan("");
  double theta = std::nan("");
};

int exit_code(wetreg_status s) {
  if (s == WETREG_OK) return kOk;
  if (s == WETREG_ERR_CONFIG || s == WETREG_ERR_INVALID_ARGUMENT) return kConfigError;
  return kSolverFailure;
}

int report(wetreg_status s, const char* what) {
  std::cerr << "wetreg: " << what << ": " << wetreg_status_name(s) << ": "
            << wetreg_last_error() << '\n';
  return exit_code(s);
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class ConfigHandle {
 public:
  ~ConfigHandle() { wetreg_config_free(cfg_); }
  wetreg_config* get() const { return cfg_; }

  wetreg_status build(const Options& o) {
    wetreg_status s = o.config.empty() ? wetreg_config_create(&cfg_)
                                       : wetreg_config_load(o.config.c_str(), &cfg_);
    if (s != WETREG_OK) return s;
    for (const auto& kv : o.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "wetreg: --set expects key=value, got '" << kv << "'\n";
        return WETREG_ERR_CONFIG;
      }
      s = wetreg_config_set(cfg_, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
      if (s != WETREG_OK) return s;
    }
    if (!o.out.empty()) {
      if ((s = wetreg_config_set(cfg_, "output.dir", o.out.c_str())) != WETREG_OK) return s;
    }
    if (!o.format.empty()) {
      if ((s = wetreg_config_set(cfg_, "output.format", o.format.c_str())) != WETREG_OK) {
        return s;
      }
    }
    if (!o.log.empty()) {
      if ((s = wetreg_config_set(cfg_, "output.log", o.log.c_str())) != WETREG_OK) return s;
    }
    return wetreg_config_validate(cfg_);
  }

  std::string get(const char* key) const {
    size_t needed = 0;
    wetreg_config_get(cfg_, key, nullptr, 0, &needed);
    std::string v(needed, '\0');
    wetreg_config_get(cfg_, key, v.data(), v.size(), nullptr);
    if (!v.empty()) v.pop_back();
    return v;
  }

  const char* log_path() {
    log_ = get("output.log");
    return log_.empty() ? nullptr : log_.c_str();
  }

 private:
  wetreg_config* cfg_ = nullptr;
  std::string log_;
};

int cmd_solve(const Options& o) {
  ConfigHandle cfg;
  if (auto s = cfg.build(o); s != WETREG_OK) return report(s, "config");
  double eps = o.eps;
  if (std::isnan(eps)) {
    const std::string list = cfg.get("sweep.eps_list");
    eps = std::stod(list.substr(0, list.find(',')));
  }
  wetreg_state* state = nullptr;
  if (auto s = wetreg_solve(cfg.get(), eps, cfg.log_path(), &state); s != WETREG_OK) {
    return report(s, "solve");
  }
  const std::string dir = cfg.get("output.dir");
  auto s = wetreg_state_write(state, cfg.get(), dir.c_str());
  wetreg_state_info info{};
  wetreg_state_info_get(state, &info);
  wetreg_state_free(state);
  if (s != WETREG_OK) return report(s, "write");
  std::cout << "eps=" << g17(info.eps) << " lambda=" << g17(info.lambda)
            << " residual=" << g17(info.residual_norm) << " iterations=" << info.iterations
            << " min_h=" << g17(info.min_height) << '\n';
  return kOk;
}

int cmd_sweep(const Options& o) {
  ConfigHandle cfg;
  if (auto s = cfg.build(o); s != WETREG_OK) return report(s, "config");
  wetreg_sweep* sweep = nullptr;
  if (auto s = wetreg_sweep_run(cfg.get(), cfg.log_path(), &sweep); s != WETREG_OK) {
    return report(s, "sweep");
  }
  const std::string dir = cfg.get("output.dir");
  const auto s = wetreg_sweep_write(sweep, dir.c_str(), wetreg_config_format(cfg.get()));
  const size_t n = wetreg_sweep_count(sweep);
  const size_t failed = wetreg_sweep_failure_count(sweep);
  for (size_t i = 0; i < n; ++i) {
    wetreg_record r{};
    wetreg_sweep_record(sweep, i, &r);
    std::printf("eps=%-8g angle=%.6f point=%.6f precursor=%.4e iterations=%d\n", r.eps,
                r.apparent_angle, r.apparent_point, r.precursor_height, r.iterations);
  }
  wetreg_sweep_free(sweep);
  if (s != WETREG_OK) return report(s, "write");
  if (failed > 0) {
    std::cerr << "wetreg: " << failed << " eps value(s) failed to converge\n";
    return kSolverFailure;
  }
  return kOk;
}

int cmd_inner(const Options& o) {
  Options local = o;
  std::string path;
  // For this subcommand --out may name the CSV file itself.
  if (!o.out.empty() && std::filesystem::path(o.out).extension() == ".csv") {
    path = o.out;
    local.out.clear();
  }
  ConfigHandle cfg;
  if (auto s = cfg.build(local); s != WETREG_OK) return report(s, "config");
  if (!std::isnan(o.theta)) {
    if (auto s = wetreg_config_set(cfg.get(), "material.theta_e", g17(o.theta).c_str());
        s != WETREG_OK) {
      return report(s, "config");
    }
    if (auto s = wetreg_config_validate(cfg.get()); s != WETREG_OK) return report(s, "config");
  }
  if (path.empty()) path = (std::filesystem::path(cfg.get("output.dir")) / "inner.csv").string();
  wetreg_inner* inner = nullptr;
  if (auto s = wetreg_inner_compute(cfg.get(), &inner); s != WETREG_OK) {
    return report(s, "inner");
  }
  const auto s = wetreg_inner_write(inner, path.c_str());
  const double slope = wetreg_inner_final_slope(inner);
  wetreg_inner_free(inner);
  if (s != WETREG_OK) return report(s, "write");
  std::cout << "final_slope=" << g17(slope) << " written=" << path << '\n';
  return kOk;
}

bool write_table(const std::string& dir, const std::string& stem, bool json,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = std::filesystem::path(dir) / (stem + (json ? ".json" : ".csv"));
  std::ofstream os(path);
  if (!os) {
    std::cerr << "wetreg: cannot write " << path << '\n';
    return false;
  }
  if (json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json obj;
      for (size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = row[c];
      arr.push_back(obj);
    }
    os << arr.dump(2) << '\n';
    return true;
  }
  for (size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << g17(row[c]);
    os << '\n';
  }
  return true;
}

int cmd_gamma_check(const Options& o) {
  ConfigHandle cfg;
  if (auto s = cfg.build(o); s != WETREG_OK) return report(s, "config");
  size_t count = 0;
  if (auto s = wetreg_gamma_check(cfg.get(), nullptr, 0, &count); s != WETREG_OK) {
    return report(s, "gamma-check");
  }
  std::vector<wetreg_recovery_row> rows(count);
  if (auto s = wetreg_gamma_check(cfg.get(), rows.data(), rows.size(), &count);
      s != WETREG_OK) {
    return report(s, "gamma-check");
  }
  std::vector<std::vector<double>> table;
  bool monotone = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    table.push_back({r.eps, r.width, r.f_eps, r.f_sharp, r.gap});
    if (i > 0 && !(std::abs(r.gap) < std::abs(rows[i - 1].gap))) monotone = false;
    std::printf("eps=%-8g width=%.5f F_eps=%.8f F_sharp=%.8f gap=%+.3e\n", r.eps, r.width,
                r.f_eps, r.f_sharp, r.gap);
  }
  const bool json = wetreg_config_format(cfg.get()) == WETREG_FORMAT_JSON;
  if (!write_table(cfg.get("output.dir"), "gamma_check", json,
                   {"eps", "width", "f_eps", "f_sharp", "gap"}, table)) {
    return kSolverFailure;
  }
  std::cout << "gap_monotone=" << (monotone ? "yes" : "no") << '\n';
  return kOk;
}

int cmd_probe(const Options& o) {
  ConfigHandle cfg;
  if (auto s = cfg.build(o); s != WETREG_OK) return report(s, "config");
  wetreg_probe_summary sum{};
  if (auto s = wetreg_probe(cfg.get(), nullptr, 0, &sum); s != WETREG_OK) {
    return report(s, "probe");
  }
  std::vector<double> margins(static_cast<size_t>(sum.count));
  if (auto s = wetreg_probe(cfg.get(), margins.data(), margins.size(), &sum);
      s != WETREG_OK) {
    return report(s, "probe");
  }
  std::vector<std::vector<double>> table;
  for (size_t i = 0; i < margins.size(); ++i) {
    table.push_back({static_cast<double>(i), margins[i]});
  }
  const bool json = wetreg_config_format(cfg.get()) == WETREG_FORMAT_JSON;
  if (!write_table(cfg.get("output.dir"), "probe", json, {"profile", "margin"}, table)) {
    return kSolverFailure;
  }
  std::cout << "profiles=" << sum.count << " violations=" << sum.violations
            << " min_margin=" << g17(sum.min_margin) << '\n';
  return sum.violations == 0 ? kOk : kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized wetting/dewetting equilibrium solver"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory (overrides output.dir)");
  app.add_option("--format", o.format, "csv or json (overrides output.format)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--log", o.log, "Newton iteration log (CSV)");
  app.add_option("--set", o.overrides, "config override key=value (repeatable)");

  auto* solve = app.add_subcommand("solve", "single equilibrium from the initial cap");
  solve->add_option("--eps", o.eps, "regularization parameter (default: first of sweep.eps_list)")
      ->check(CLI::PositiveNumber);
  auto* sweep = app.add_subcommand("sweep", "eps sweep with fitted apparent contacts");
  auto* inner = app.add_subcommand("inner", "leading-order inner profile");
  inner->add_option("--theta", o.theta, "Young angle in radians (overrides material.theta_e)");
  auto* gamma = app.add_subcommand("gamma-check", "recovery-sequence energy gaps");
  auto* probe = app.add_subcommand("probe", "energy lower-bound probe on random profiles");
  for (auto* sub : {solve, sweep, inner, gamma, probe}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (solve->parsed()) return cmd_solve(o);
  if (sweep->parsed()) return cmd_sweep(o);
  if (inner->parsed()) return cmd_inner(o);
  if (gamma->parsed()) return cmd_gamma_check(o);
  return cmd_probe(o);
}
