#include <doctest.h>

#include <cmath>
#include <sstream>

#include "test_support.hpp"
#include "wetreg/asymptotics.hpp"
#include "wetreg/error.hpp"

using namespace wetreg;
using testsupport::kPi;

namespace {

const double kPaperVolume = 0.167376;

// Circular cap of the given angle and half-width centered at c, zero outside.
Profile exact_cap(const Grid1D& grid, double theta, double half_width, double c) {
  const double R = half_width / std::sin(theta);
  const double drop = R * std::cos(theta);
  std::vector<double> h(grid.nodes(), 0.0);
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double x = grid.x(j) - c;
    if (std::abs(x) < half_width) h[j] = std::sqrt(R * R - x * x) - drop;
  }
  return Profile(grid, std::move(h));
}

EquilibriumState paper_state(double theta, double eps) {
  const Grid1D grid(-1.0, 1.0, 2048);
  const auto sys = testsupport::material(theta);
  const auto g = InterpolantG::exp2();
  const auto p0 = initial_cap(grid);
  return newton_solve(p0, lambda_guess(p0, sys), simpson_volume(p0), eps, sys, g, {});
}

}  // namespace

TEST_CASE("cap equilibrium against the bisection oracle") {
  for (double theta : {kPi / 3.0, kPi / 6.0, 1.2}) {
    const auto sys = testsupport::material(theta);
    const auto cap = cap_equilibrium(kPaperVolume, sys);
    const auto ref = testsupport::cap_oracle(kPaperVolume, theta);
    CHECK(cap.radius == doctest::Approx(ref.R).epsilon(1e-10));
    CHECK(cap.contact_half_width == doctest::Approx(ref.half_width).epsilon(1e-10));
    CHECK(cap.lambda0 == doctest::Approx(ref.lambda0).epsilon(1e-10));
    CHECK(cap.apex_height == doctest::Approx(ref.R * (1.0 - std::cos(theta))).epsilon(1e-10));
    CHECK(cap_segment_area(cap.radius, theta) == doctest::Approx(kPaperVolume).epsilon(1e-12));
  }
  CHECK(std::abs(cap_equilibrium(kPaperVolume, testsupport::material(kPi / 3.0)).contact_half_width -
                 0.45210) <= 5e-5);
  CHECK(std::abs(cap_equilibrium(kPaperVolume, testsupport::material(kPi / 6.0)).contact_half_width -
                 0.67966) <= 5e-5);
  CHECK(std::abs(cap_equilibrium(kPaperVolume, testsupport::material(kPi / 3.0)).lambda0 - 1.91557) <=
        1e-4);
  CHECK_THROWS_AS(cap_equilibrium(0.0, testsupport::material(kPi / 3.0)), Error);
}

TEST_CASE("precursor height prediction") {
  const auto sys = testsupport::material(kPi / 3.0);
  const auto g = InterpolantG::exp2();
  // -lambda0 eps^2 / (S g''(0)) with S = -0.5, g''(0) = 0.5
  CHECK(std::abs(precursor_height(1.91557, 0.01, sys, g) - 7.662e-4) <= 1e-6);
  CHECK(precursor_height(1.91557, 0.01, sys, g) ==
        doctest::Approx(1.91557 * 1e-4 / 0.25).epsilon(1e-14));
  CHECK(precursor_height(1.3, 0.02, sys, g) ==
        doctest::Approx(4.0 * precursor_height(1.3, 0.01, sys, g)).epsilon(1e-15));
  CHECK(precursor_height(0.1, 1e-4, sys, g) > 0.0);

  auto flat = g;
  flat.deriv2 = [](double) { return 0.0; };
  CHECK_THROWS_AS(precursor_height(1.9, 0.01, sys, flat), Error);
}

TEST_CASE("inner slope") {
  const auto g = InterpolantG::exp2();
  for (double theta : {kPi / 6.0, kPi / 3.0}) {
    const auto sys = testsupport::material(theta);
    CHECK(inner_slope(0.0, sys, g) == 0.0);
    CHECK(std::abs(inner_slope(50.0, sys, g) - std::tan(theta)) <= 1e-10);
    double prev = 0.0;
    for (double H = 0.01; H < 40.0; H *= 1.3) {
      const double s = inner_slope(H, sys, g);
      CHECK(s > prev);
      prev = s;
    }
  }
  const auto sys = testsupport::material(kPi / 3.0);
  const double gt = 1.0 + 0.5 * (std::exp(-2.0) - 2.0 * std::exp(-1.0));
  CHECK(inner_slope(2.0, sys, g) == doctest::Approx(std::sqrt(gt * gt / 0.25 - 1.0)).epsilon(1e-12));
  CHECK(std::abs(inner_slope(2.0, sys, g) - 0.979190) <= 1e-6);
}

TEST_CASE("inner profile") {
  const auto g = InterpolantG::exp2();
  const auto sys = testsupport::material(kPi / 3.0);
  const auto inner = inner_profile(-5.0, 20.0, 2501, sys, g);
  REQUIRE(inner.xi.size() == 2501);
  CHECK(inner.xi.front() == doctest::Approx(-5.0));
  CHECK(inner.xi.back() == doctest::Approx(20.0));
  CHECK(inner.at(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < inner.H.size(); ++i) REQUIRE(inner.H[i] > inner.H[i - 1]);
  const std::size_t k = inner.xi.size() - 1;
  const double final_slope = (inner.H[k] - inner.H[k - 1]) / (inner.xi[k] - inner.xi[k - 1]);
  CHECK(std::abs(final_slope - std::sqrt(3.0)) <= 1e-3);
  CHECK(inner.H.front() > 0.0);

  // The ODE is autonomous: anchoring at H = 2 gives a shifted copy.
  const auto other = inner_profile(-8.0, 20.0, 2801, sys, g, 2.0);
  const double shift = other.xi_at(1.0);
  double dev = 0.0;
  for (double xi = -3.0; xi <= 10.0; xi += 0.25) {
    dev = std::max(dev, std::abs(other.at(xi + shift) - inner.at(xi)));
  }
  CHECK(dev < 1e-4);

  std::ostringstream os;
  write_inner_csv(inner, os);
  CHECK(os.str().rfind("xi,H\n", 0) == 0);

  CHECK_THROWS_AS(inner_profile(1.0, 20.0, 100, sys, g), Error);
  CHECK_THROWS_AS(inner_profile(-5.0, 20.0, 1, sys, g), Error);
}

TEST_CASE("measured precursor") {
  EquilibriumState s{Profile::constant(Grid1D(-1.0, 1.0, 8), 0.0123)};
  CHECK(measure_precursor(s) == 0.0123);
}

TEST_CASE("fits recover an exact circular cap") {
  const Grid1D grid(-1.0, 1.0, 2048);
  for (double theta : {kPi / 6.0, kPi / 3.0, 1.3}) {
    const auto cap = exact_cap(grid, theta, 0.5, 0.07);
    const auto kasa = fit_apparent_contact(cap, {FitMethod::kasa, 0.10});
    CHECK(kasa.angle == doctest::Approx(theta).epsilon(1e-6));
    CHECK(kasa.point == doctest::Approx(0.57).epsilon(1e-6));
    CHECK(kasa.center == doctest::Approx(0.07).epsilon(1e-6));

    // The cap fit works from the Simpson volume and centroid, so it is limited
    // by quadrature of the kinks at the contact points.
    const auto l1 = fit_apparent_contact(cap, {FitMethod::cap_l1, 0.10});
    CHECK(std::abs(l1.angle - theta) < 1e-4);
    CHECK(std::abs(l1.point - 0.57) < 1e-4);
  }
}

TEST_CASE("fit rejects profiles without a droplet") {
  const Grid1D grid(-1.0, 1.0, 64);
  try {
    (void)fit_apparent_contact(Profile::constant(grid, 0.1));
    FAIL("expected fit failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::fit_failure);
  }
  CHECK_THROWS_AS(fit_apparent_contact(Profile::constant(grid, 0.1), {FitMethod::kasa, 0.1}), Error);
}

TEST_CASE("fit on the paper's equilibria") {
  const auto a = fit_apparent_contact(paper_state(kPi / 3.0, 0.01));
  CHECK(std::abs(a.angle - 1.0349) <= 2e-3);
  CHECK(std::abs(a.point - 0.45568) <= 2e-3);
  const auto b = fit_apparent_contact(paper_state(kPi / 6.0, 0.01));
  CHECK(std::abs(b.angle - 0.5105) <= 2e-3);
  CHECK(std::abs(b.point - 0.68891) <= 3e-3);
}

TEST_CASE("fit is translation invariant") {
  const auto s = paper_state(kPi / 3.0, 0.01);
  const std::vector<double> h(s.profile.h().begin(), s.profile.h().end());
  for (double shift : {0.25, -0.4}) {
    const Grid1D moved(-1.0 + shift, 1.0 + shift, 2048);
    const Profile q(moved, h);
    for (auto method : {FitMethod::cap_l1, FitMethod::kasa}) {
      const auto f0 = fit_apparent_contact(s.profile, {method, 0.10});
      const auto f1 = fit_apparent_contact(q, {method, 0.10});
      CHECK(f1.angle == doctest::Approx(f0.angle).epsilon(1e-9));
      CHECK(f1.point == doctest::Approx(f0.point + shift).epsilon(1e-9));
    }
  }
}

TEST_CASE("inner comparison aligns at H = 1") {
  const auto sys = testsupport::material(kPi / 3.0);
  const auto inner = inner_profile(-5.0, 20.0, 2501, sys, InterpolantG::exp2());
  const auto s = paper_state(kPi / 3.0, 0.01);
  const auto cmp = compare_with_inner(s, inner, -5.0, 10.0);
  CHECK(cmp.eps == 0.01);
  CHECK(cmp.nodes > 100);
  CHECK(cmp.contact_x < 0.0);
  CHECK(std::isfinite(cmp.max_deviation));
  // h crosses eps at the alignment point
  const double xL = cmp.contact_x;
  const auto& grid = s.profile.grid();
  const auto j = static_cast<std::size_t>((xL - grid.a()) / grid.dx());
  CHECK(s.profile[j] <= 0.01);
  CHECK(s.profile[j + 1] >= 0.01);
}
