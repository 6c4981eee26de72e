#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wetreg/asymptotics.hpp"
#include "wetreg/model.hpp"
#include "wetreg/solver.hpp"

namespace wetreg {

enum class OutputFormat { csv, json };
enum class SweepMode { warm, cold };

/// Everything a study run needs. Loaded from a flat "key = value" file;
/// see README for the key list.
struct StudyConfig {
  double domain_a = -1.0;
  double domain_b = 1.0;
  int grid_n = 2048;

  double gamma_fv = 1.0;
  double theta_e = 1.0471975511965976;  // pi/3
  std::optional<double> gamma_vs;       // both set: build from densities
  std::optional<double> gamma_fs;

  std::vector<double> eps_list{0.01};
  std::optional<double> v_target;  // empty: volume of the initial cap

  NewtonConfig newton;
  FitOptions fit;

  SweepMode mode = SweepMode::warm;
  bool keep_going = false;

  std::vector<double> gamma_eps_list{0.04, 0.02, 0.01, 0.005, 0.0025};
  std::optional<double> mollifier_scale;  // empty: (b - a) / 20

  double probe_eps = 0.01;
  int probe_count = 100;
  unsigned long long probe_seed = 12345;

  double inner_xi_min = -5.0;
  double inner_xi_max = 20.0;
  int inner_n_pts = 2501;

  std::string output_dir = ".";
  OutputFormat format = OutputFormat::csv;
  std::string log_path;

  /// Applies one key/value pair; throws Error(config) on unknown keys or
  /// malformed values.
  void set(const std::string& key, const std::string& value);

  /// Cross-field checks (even n, decreasing eps lists, ...).
  void validate() const;

  MaterialSystem material() const;
  Grid1D grid() const;
  double mollifier_width_scale() const;

  static StudyConfig parse(std::istream& is);
  static StudyConfig load(const std::string& path);

  /// Every key with its current value, in a stable order.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

std::vector<double> parse_double_list(const std::string& text);
std::string format_double(double v);

}  // namespace wetreg
