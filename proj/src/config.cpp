#include "wetreg/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wetreg/error.hpp"

namespace wetreg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw config_error("invalid number for " + key + ": '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw config_error("invalid integer for " + key + ": '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw config_error("invalid boolean for " + key + ": '" + text + "'");
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

void require_decreasing(const std::vector<double>& v, const char* key) {
  if (v.empty()) throw config_error(std::string(key) + " must not be empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw config_error(std::string(key) + " entries must be positive");
    if (i > 0 && !(v[i] < v[i - 1])) {
      throw config_error(std::string(key) + " must be strictly decreasing");
    }
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double("list", item));
  }
  return out;
}

void StudyConfig::set(const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  const std::string val = trim(value);
  if (key == "domain.a") {
    domain_a = to_double(key, val);
  } else if (key == "domain.b") {
    domain_b = to_double(key, val);
  } else if (key == "grid.n") {
    grid_n = static_cast<int>(to_integer(key, val));
  } else if (key == "material.gamma_fv") {
    gamma_fv = to_double(key, val);
  } else if (key == "material.theta_e") {
    theta_e = to_double(key, val);
  } else if (key == "material.gamma_vs") {
    gamma_vs = to_double(key, val);
  } else if (key == "material.gamma_fs") {
    gamma_fs = to_double(key, val);
  } else if (key == "sweep.eps_list") {
    eps_list = parse_double_list(val);
  } else if (key == "volume.v_target") {
    if (val == "from_initial") {
      v_target.reset();
    } else {
      v_target = to_double(key, val);
    }
  } else if (key == "newton.armijo_c") {
    newton.armijo_c = to_double(key, val);
  } else if (key == "newton.backtrack") {
    newton.backtrack = to_double(key, val);
  } else if (key == "newton.min_step") {
    newton.min_step = to_double(key, val);
  } else if (key == "newton.tol_residual") {
    newton.tol_residual = to_double(key, val);
  } else if (key == "newton.max_iter") {
    newton.max_iter = static_cast<int>(to_integer(key, val));
  } else if (key == "newton.stop_rule") {
    if (val == "residual") {
      newton.stop_rule = StopRule::residual;
    } else if (val == "step") {
      newton.stop_rule = StopRule::step;
    } else {
      throw config_error("newton.stop_rule must be residual or step");
    }
  } else if (key == "fit.method") {
    if (val == "cap_l1") {
      fit.method = FitMethod::cap_l1;
    } else if (val == "kasa") {
      fit.method = FitMethod::kasa;
    } else {
      throw config_error("fit.method must be cap_l1 or kasa");
    }
  } else if (key == "fit.fraction") {
    fit.fit_fraction = to_double(key, val);
  } else if (key == "sweep.mode") {
    if (val == "warm") {
      mode = SweepMode::warm;
    } else if (val == "cold") {
      mode = SweepMode::cold;
    } else {
      throw config_error("sweep.mode must be warm or cold");
    }
  } else if (key == "sweep.keep_going") {
    keep_going = to_bool(key, val);
  } else if (key == "gamma.eps_list") {
    gamma_eps_list = parse_double_list(val);
  } else if (key == "gamma.mollifier_scale") {
    mollifier_scale = to_double(key, val);
  } else if (key == "probe.eps") {
    probe_eps = to_double(key, val);
  } else if (key == "probe.count") {
    probe_count = static_cast<int>(to_integer(key, val));
  } else if (key == "probe.seed") {
    probe_seed = static_cast<unsigned long long>(to_integer(key, val));
  } else if (key == "inner.xi_min") {
    inner_xi_min = to_double(key, val);
  } else if (key == "inner.xi_max") {
    inner_xi_max = to_double(key, val);
  } else if (key == "inner.n_pts") {
    inner_n_pts = static_cast<int>(to_integer(key, val));
  } else if (key == "output.dir") {
    output_dir = val;
  } else if (key == "output.format") {
    if (val == "csv") {
      format = OutputFormat::csv;
    } else if (val == "json") {
      format = OutputFormat::json;
    } else {
      throw config_error("output.format must be csv or json");
    }
  } else if (key == "output.log") {
    log_path = val;
  } else {
    throw config_error("unknown config key '" + key + "'");
  }
}

void StudyConfig::validate() const {
  if (!(domain_b > domain_a)) throw config_error("domain.b must exceed domain.a");
  if (grid_n < 2 || grid_n % 2 != 0) throw config_error("grid.n must be even and >= 2");
  require_decreasing(eps_list, "sweep.eps_list");
  require_decreasing(gamma_eps_list, "gamma.eps_list");
  if (v_target && !(*v_target > 0.0)) throw config_error("volume.v_target must be positive");
  if (gamma_vs.has_value() != gamma_fs.has_value()) {
    throw config_error("material.gamma_vs and material.gamma_fs must be given together");
  }
  newton.validate();
  if (!(fit.fit_fraction > 0.0 && fit.fit_fraction < 1.0)) {
    throw config_error("fit.fraction must be in (0,1)");
  }
  if (mollifier_scale && !(*mollifier_scale > 0.0)) {
    throw config_error("gamma.mollifier_scale must be positive");
  }
  if (!(probe_eps > 0.0) || probe_count < 1) throw config_error("invalid probe settings");
  if (!(inner_xi_min < 0.0 && inner_xi_max > 0.0) || inner_n_pts < 64) {
    throw config_error("invalid inner settings");
  }
  try {
    (void)material();
  } catch (const Error& e) {
    throw config_error(e.what());
  }
}

MaterialSystem StudyConfig::material() const {
  if (gamma_vs && gamma_fs) {
    return MaterialSystem::from_densities(gamma_fv, *gamma_vs, *gamma_fs);
  }
  return MaterialSystem::from_angle(gamma_fv, theta_e);
}

Grid1D StudyConfig::grid() const { return Grid1D(domain_a, domain_b, grid_n); }

double StudyConfig::mollifier_width_scale() const {
  return mollifier_scale.value_or((domain_b - domain_a) / 20.0);
}

StudyConfig StudyConfig::parse(std::istream& is) {
  StudyConfig cfg;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    cfg.set(key, line.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

StudyConfig StudyConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file " + path);
  return parse(is);
}

std::vector<std::pair<std::string, std::string>> StudyConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("domain.a", format_double(domain_a));
  e.emplace_back("domain.b", format_double(domain_b));
  e.emplace_back("grid.n", std::to_string(grid_n));
  e.emplace_back("material.gamma_fv", format_double(gamma_fv));
  e.emplace_back("material.theta_e", format_double(theta_e));
  if (gamma_vs) e.emplace_back("material.gamma_vs", format_double(*gamma_vs));
  if (gamma_fs) e.emplace_back("material.gamma_fs", format_double(*gamma_fs));
  e.emplace_back("sweep.eps_list", join(eps_list));
  e.emplace_back("volume.v_target", v_target ? format_double(*v_target) : "from_initial");
  e.emplace_back("newton.armijo_c", format_double(newton.armijo_c));
  e.emplace_back("newton.backtrack", format_double(newton.backtrack));
  e.emplace_back("newton.min_step", format_double(newton.min_step));
  e.emplace_back("newton.tol_residual", format_double(newton.tol_residual));
  e.emplace_back("newton.max_iter", std::to_string(newton.max_iter));
  e.emplace_back("newton.stop_rule",
                 newton.stop_rule == StopRule::residual ? "residual" : "step");
  e.emplace_back("fit.method", fit.method == FitMethod::cap_l1 ? "cap_l1" : "kasa");
  e.emplace_back("fit.fraction", format_double(fit.fit_fraction));
  e.emplace_back("sweep.mode", mode == SweepMode::warm ? "warm" : "cold");
  e.emplace_back("sweep.keep_going", keep_going ? "true" : "false");
  e.emplace_back("gamma.eps_list", join(gamma_eps_list));
  e.emplace_back("gamma.mollifier_scale", format_double(mollifier_width_scale()));
  e.emplace_back("probe.eps", format_double(probe_eps));
  e.emplace_back("probe.count", std::to_string(probe_count));
  e.emplace_back("probe.seed", std::to_string(probe_seed));
  e.emplace_back("inner.xi_min", format_double(inner_xi_min));
  e.emplace_back("inner.xi_max", format_double(inner_xi_max));
  e.emplace_back("inner.n_pts", std::to_string(inner_n_pts));
  e.emplace_back("output.dir", output_dir);
  e.emplace_back("output.format", format == OutputFormat::csv ? "csv" : "json");
  e.emplace_back("output.log", log_path);
  return e;
}

}  // namespace wetreg
