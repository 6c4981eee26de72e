#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wetreg/config.hpp"
#include "wetreg/error.hpp"

using namespace wetreg;

namespace {

StudyConfig parse_text(const std::string& text) {
  std::istringstream is(text);
  return StudyConfig::parse(is);
}

ErrorKind kind_of(const std::string& text) {
  try {
    (void)parse_text(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a config error for: " << text);
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("defaults describe the paper setup") {
  const StudyConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.grid_n == 2048);
  CHECK(cfg.domain_a == -1.0);
  CHECK(cfg.domain_b == 1.0);
  CHECK(cfg.theta_e == doctest::Approx(std::acos(-1.0) / 3.0).epsilon(1e-15));
  CHECK(cfg.mollifier_width_scale() == doctest::Approx(0.1));
  CHECK(cfg.newton.tol_residual == 1e-8);
  CHECK(cfg.newton.min_step == 1e-4);
}

TEST_CASE("flat and sectioned keys, comments") {
  const auto cfg = parse_text(R"(
# paper run
grid.n = 1024
material.theta_e = 0.5235987755982988   # pi/6
sweep.eps_list = 0.01, 0.008,0.006
[newton]
tol_residual = 1e-9
stop_rule = step
[sweep]
mode = cold
keep_going = true
[output]
format = json
dir = out/run1
)");
  CHECK(cfg.grid_n == 1024);
  CHECK(cfg.theta_e == doctest::Approx(0.5235987755982988).epsilon(1e-15));
  REQUIRE(cfg.eps_list.size() == 3);
  CHECK(cfg.eps_list[1] == 0.008);
  CHECK(cfg.newton.tol_residual == 1e-9);
  CHECK(cfg.newton.stop_rule == StopRule::step);
  CHECK(cfg.mode == SweepMode::cold);
  CHECK(cfg.keep_going);
  CHECK(cfg.format == OutputFormat::json);
  CHECK(cfg.output_dir == "out/run1");
}

TEST_CASE("three-density material") {
  const auto cfg = parse_text("material.gamma_fv = 1\nmaterial.gamma_vs = 0.8\nmaterial.gamma_fs = 0.3\n");
  const auto sys = cfg.material();
  CHECK(sys.theta_e() == doctest::Approx(std::acos(0.5)).epsilon(1e-14));
  CHECK(kind_of("material.gamma_vs = 0.8\n") == ErrorKind::config);
  CHECK(kind_of("material.gamma_vs = 2\nmaterial.gamma_fs = 0\n") == ErrorKind::config);
}

TEST_CASE("volume target") {
  CHECK_FALSE(parse_text("volume.v_target = from_initial\n").v_target.has_value());
  CHECK(parse_text("volume.v_target = 0.2\n").v_target.value() == 0.2);
  CHECK(kind_of("volume.v_target = -1\n") == ErrorKind::config);
}

TEST_CASE("invalid configurations") {
  CHECK(kind_of("grid.n = 7\n") == ErrorKind::config);
  CHECK(kind_of("grid.n = 2.5\n") == ErrorKind::config);
  CHECK(kind_of("sweep.eps_list = 0.01, 0.02\n") == ErrorKind::config);
  CHECK(kind_of("sweep.eps_list = 0.01, -0.001\n") == ErrorKind::config);
  CHECK(kind_of("sweep.eps_list = \n") == ErrorKind::config);
  CHECK(kind_of("gamma.eps_list = 0.01, 0.01\n") == ErrorKind::config);
  CHECK(kind_of("no.such.key = 1\n") == ErrorKind::config);
  CHECK(kind_of("material.theta_e = 2\n") == ErrorKind::config);
  CHECK(kind_of("material.theta_e = abc\n") == ErrorKind::config);
  CHECK(kind_of("newton.backtrack = 1.5\n") == ErrorKind::config);
  CHECK(kind_of("newton.stop_rule = sometimes\n") == ErrorKind::config);
  CHECK(kind_of("fit.method = spline\n") == ErrorKind::config);
  CHECK(kind_of("output.format = xml\n") == ErrorKind::config);
  CHECK(kind_of("domain.a = 1\n") == ErrorKind::config);
  CHECK(kind_of("just some text\n") == ErrorKind::config);
  CHECK(kind_of("sweep.keep_going = maybe\n") == ErrorKind::config);
}

TEST_CASE("entries round trip through set") {
  auto cfg = parse_text("grid.n = 512\nsweep.eps_list = 0.02,0.01\nfit.method = kasa\nprobe.seed = 77\n");
  StudyConfig copy;
  for (const auto& [k, v] : cfg.entries()) copy.set(k, v);
  CHECK(copy.entries() == cfg.entries());
  CHECK(copy.fit.method == FitMethod::kasa);
  CHECK(copy.probe_seed == 77);
}

TEST_CASE("missing file") {
  try {
    (void)StudyConfig::load("/nonexistent/wetreg.cfg");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
}

TEST_CASE("number formatting is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(std::acos(-1.0) / 3.0)) == std::acos(-1.0) / 3.0);
  const auto list = parse_double_list(" 1e-2, 0.5 ,3");
  REQUIRE(list.size() == 3);
  CHECK(list[0] == 0.01);
}
