#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "test_support.hpp"
#include "wetreg/error.hpp"
#include "wetreg/studies.hpp"

using namespace wetreg;
using testsupport::kPi;

namespace {

StudyConfig paper_config(double theta) {
  StudyConfig cfg;
  cfg.theta_e = theta;
  cfg.eps_list = {0.01, 0.008, 0.006, 0.004, 0.002};
  return cfg;
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream os;
  write_records_csv(r.records, os);
  return os.str();
}

}  // namespace

TEST_CASE("single-eps sweep equals a direct solve and fit") {
  StudyConfig cfg;
  cfg.eps_list = {0.01};
  const auto sweep = run_sweep(cfg);
  REQUIRE(sweep.records.size() == 1);
  const auto direct = run_solve(cfg, 0.01);
  const auto fit = fit_apparent_contact(direct);
  const auto& r = sweep.records[0];
  CHECK(r.apparent_angle == fit.angle);
  CHECK(r.apparent_point == fit.point);
  CHECK(r.lambda == direct.lambda);
  CHECK(r.iterations == direct.iterations);
  CHECK(r.precursor_height == direct.profile[0]);
  CHECK(r.angle_error == doctest::Approx(std::abs(fit.angle - kPi / 3.0)).epsilon(1e-15));
  CHECK(r.lambda0_oracle == doctest::Approx(sweep.oracle.lambda0));
}

TEST_CASE("paper sweeps: tables, monotone errors, determinism") {
  const double angles3[] = {1.0349, 1.0397, 1.0432, 1.0455, 1.0469};
  const double angles6[] = {0.5105, 0.5162, 0.5198, 0.5220, 0.5232};
  for (double theta : {kPi / 3.0, kPi / 6.0}) {
    const auto cfg = paper_config(theta);
    const auto a = run_sweep(cfg);
    REQUIRE(a.records.size() == 5);
    const double* table = theta > 1.0 ? angles3 : angles6;
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& r = a.records[i];
      INFO("theta=" << theta << " eps=" << r.eps);
      CHECK(std::abs(r.apparent_angle - table[i]) <= 2e-3);
      CHECK(std::isfinite(r.energy));
      CHECK(r.angle_error >= 0.0);
      CHECK(r.point_error >= 0.0);
      if (i > 0) {
        CHECK(r.angle_error < a.records[i - 1].angle_error);
        CHECK(r.point_error < a.records[i - 1].point_error);
        // Young consistency: cos of the apparent angle approaches cos theta_e
        CHECK(std::abs(std::cos(r.apparent_angle) - std::cos(theta)) <
              std::abs(std::cos(a.records[i - 1].apparent_angle) - std::cos(theta)));
      }
    }
    const auto b = run_sweep(cfg);
    CHECK(csv_of(a) == csv_of(b));
  }
}

TEST_CASE("cold sweep matches warm sweep") {
  auto cfg = paper_config(kPi / 3.0);
  const auto warm = run_sweep(cfg);
  cfg.mode = SweepMode::cold;
  const auto cold = run_sweep(cfg);
  REQUIRE(cold.records.size() == warm.records.size());
  for (std::size_t i = 0; i < warm.records.size(); ++i) {
    CHECK(cold.records[i].eps == warm.records[i].eps);
    CHECK(cold.records[i].apparent_angle == doctest::Approx(warm.records[i].apparent_angle).epsilon(1e-7));
    CHECK(cold.records[i].lambda == doctest::Approx(warm.records[i].lambda).epsilon(1e-8));
  }
  // cold mode is concurrent but still deterministic
  CHECK(csv_of(cold) == csv_of(run_sweep(cfg)));
}

TEST_CASE("failures abort or are recorded") {
  auto cfg = paper_config(kPi / 3.0);
  cfg.newton.max_iter = 3;
  CHECK_THROWS_AS(run_sweep(cfg), SweepAborted);
  cfg.keep_going = true;
  const auto r = run_sweep(cfg);
  CHECK(r.failures.size() + r.records.size() == 5);
  CHECK_FALSE(r.failures.empty());
  for (const auto& f : r.failures) CHECK_FALSE(f.message.empty());
}

TEST_CASE("log-log slope") {
  std::vector<std::pair<double, double>> pairs;
  for (double e : {0.01, 0.008, 0.006, 0.004, 0.002}) pairs.emplace_back(e, 7.662 * e * e);
  const auto fit = loglog_slope(pairs);
  CHECK(std::abs(fit.slope - 2.0) <= 1e-10);
  CHECK(fit.intercept == doctest::Approx(std::log(7.662)).epsilon(1e-10));
  CHECK(fit.residual < 1e-12);

  for (auto& p : pairs) p.second = 3.0;
  CHECK(std::abs(loglog_slope(pairs).slope) < 1e-12);

  CHECK_THROWS_AS(loglog_slope({{0.1, 1.0}, {0.2, 2.0}}), Error);
  CHECK_THROWS_AS(loglog_slope({{0.1, 1.0}, {0.2, 0.0}, {0.3, 1.0}}), Error);
  CHECK_THROWS_AS(loglog_slope({{0.1, 1.0}, {-0.2, 1.0}, {0.3, 1.0}}), Error);
}

TEST_CASE("precursor heights follow a second-order law") {
  const auto r = run_sweep(paper_config(kPi / 3.0));
  std::vector<std::pair<double, double>> pairs;
  for (const auto& rec : r.records) {
    pairs.emplace_back(rec.eps, rec.precursor_height);
    CHECK(std::abs(rec.precursor_height / rec.precursor_prediction - 1.0) <= 0.10);
  }
  CHECK(std::abs(loglog_slope(pairs).slope - 2.0) <= 0.05);
}

TEST_CASE("mollifier") {
  const Grid1D grid(-1.0, 1.0, 256);
  const auto flat = mollify(Profile::constant(grid, 0.3), 0.05);
  for (std::size_t j = 0; j < flat.size(); ++j) CHECK(flat[j] == doctest::Approx(0.3).epsilon(1e-14));

  // interior mass is preserved by a unit-sum kernel
  const auto cap = initial_cap(grid);
  const auto smooth = mollify(cap, 0.05);
  CHECK(simpson_volume(smooth) == doctest::Approx(simpson_volume(cap)).epsilon(1e-3));
  CHECK(smooth.max() < cap.max());
  CHECK(smooth.min() >= 0.0);

  CHECK_THROWS_AS(mollify(cap, 1.5 * grid.dx()), Error);
}

TEST_CASE("recovery sequence on a strictly positive profile") {
  const Grid1D grid(-1.0, 1.0, 2048);
  std::vector<double> h(grid.nodes());
  for (std::size_t j = 0; j < h.size(); ++j) h[j] = 0.3 + 0.1 * std::cos(kPi * grid.x(j));
  const Profile p(grid, h);
  const auto sys = testsupport::material(kPi / 3.0);
  const auto g = InterpolantG::exp2();
  const auto rows = gamma_recovery_check(p, {0.04, 0.02, 0.01, 0.005, 0.0025}, sys, g, 0.1);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].f_sharp == doctest::Approx(energy_sharp(p, sys)).epsilon(1e-15));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(rows[i].gap) < std::abs(rows[i - 1].gap));
  CHECK(std::abs(rows.back().gap) < 1e-4 * rows.back().f_sharp);
}

TEST_CASE("recovery sequence on the paper's cap") {
  const Grid1D grid(-1.0, 1.0, 2048);
  const auto cap = initial_cap(grid);
  const auto sys = testsupport::material(kPi / 3.0);
  const auto g = InterpolantG::exp2();
  const std::vector<double> ladder{0.04, 0.02, 0.01, 0.005, 0.0025};
  const double scale = 2.0 / 20.0;
  const auto rows = gamma_recovery_check(cap, ladder, sys, g, scale);
  REQUIRE(rows.size() == ladder.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].width == doctest::Approx(std::sqrt(ladder[i]) * scale));
    if (i > 0) CHECK(std::abs(rows[i].gap) < std::abs(rows[i - 1].gap));
  }
  CHECK(std::abs(rows.back().gap) <= 0.05 * std::abs(rows.back().f_sharp));

  // The volume shift restores the sharp volume.
  auto smooth = mollify(cap, rows.back().width);
  const double d = simpson_volume(cap) - simpson_volume(smooth);
  for (double& v : smooth.h_mut()) v += d / grid.length();
  CHECK(std::abs(simpson_volume(smooth) - simpson_volume(cap)) <= 1e-12 * simpson_volume(cap));

  CHECK_THROWS_AS(gamma_recovery_check(cap, {0.01, 0.02}, sys, g, scale), Error);
  CHECK_THROWS_AS(gamma_recovery_check(Profile::constant(grid, -0.1), ladder, sys, g, scale), Error);
}

TEST_CASE("energy lower bound probe") {
  const Grid1D grid(-1.0, 1.0, 512);
  const auto sys = testsupport::material(kPi / 3.0);
  const auto g = InterpolantG::exp2();
  const double eps = 0.01;

  const auto zero = lower_bound_probe({Profile::constant(grid, 0.0)}, eps, sys, g);
  CHECK(std::abs(zero.margins[0]) < 1e-14);
  CHECK(zero.violations == 0);

  const auto pos = lower_bound_probe(random_smooth_profiles(grid, 30, 3, false), eps, sys, g);
  CHECK(pos.violations == 0);
  CHECK(pos.min_margin > 0.0);

  // below zero the density exceeds the floor and grows without bound
  const auto dip = lower_bound_probe(
      {Profile::constant(grid, -eps), Profile::constant(grid, -10.0 * eps)}, eps, sys, g);
  const double g_m1 = std::exp(1.0) - 2.0 * std::exp(0.5);
  CHECK(dip.margins[0] == doctest::Approx(2.0 * -sys.spreading() * (1.0 + g_m1)).epsilon(1e-12));
  CHECK(dip.margins[0] > 0.4);
  CHECK(dip.margins[1] > 1e4);

  const auto fuzz = lower_bound_probe(random_smooth_profiles(grid, 100, 12345, true), eps, sys, g);
  CHECK(fuzz.margins.size() == 100);
  CHECK(fuzz.violations == 0);
}

TEST_CASE("random profiles are reproducible") {
  const Grid1D grid(-1.0, 1.0, 64);
  const auto a = random_smooth_profiles(grid, 10, 99, true);
  const auto b = random_smooth_profiles(grid, 10, 99, true);
  bool some_negative = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) REQUIRE(a[i][j] == b[i][j]);
    some_negative = some_negative || a[i].min() < 0.0;
  }
  CHECK(some_negative);
  for (const auto& p : random_smooth_profiles(grid, 10, 99, false)) CHECK(p.min() >= 0.0);
}

TEST_CASE("record and state serialization") {
  StudyConfig cfg;
  const auto sweep = run_sweep(cfg);
  std::ostringstream csv;
  write_records_csv(sweep.records, csv);
  const std::string text = csv.str();
  CHECK(text.rfind(records_header() + "\n", 0) == 0);
  CHECK(records_header() ==
        "eps,apparent_angle,angle_error,apparent_point,point_error,precursor_height,"
        "precursor_prediction,lambda,lambda0_oracle,energy,iterations,residual_norm");

  std::ostringstream js;
  write_records_json(sweep.records, js);
  const auto arr = nlohmann::json::parse(js.str());
  REQUIRE(arr.size() == 1);
  CHECK(arr[0]["apparent_angle"].get<double>() == sweep.records[0].apparent_angle);

  const auto state = nlohmann::json::parse(state_json(sweep.states[0], cfg));
  for (const char* key : {"eps", "lambda", "residual_norm", "iterations", "energy", "min_height",
                          "floor_steps", "volume", "positivity_holds", "config"}) {
    CHECK(state.contains(key));
  }
  CHECK(state["config"]["grid.n"] == "2048");
}

TEST_CASE("study volume") {
  StudyConfig cfg;
  CHECK(std::abs(study_volume(cfg) - testsupport::initial_cap_area()) < 1e-5);
  cfg.v_target = 0.2;
  CHECK(study_volume(cfg) == 0.2);
}
