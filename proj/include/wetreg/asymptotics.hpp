#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wetreg/model.hpp"
#include "wetreg/solver.hpp"

namespace wetreg {

/// Sharp-interface equilibrium in 1D: a circular segment of area v_target
/// meeting the substrate at theta_e.
struct CapEquilibrium {
  double radius = 0.0;
  double contact_half_width = 0.0;
  double lambda0 = 0.0;
  double apex_height = 0.0;
};

CapEquilibrium cap_equilibrium(double v_target, const MaterialSystem& sys);

/// Area R^2 (theta - sin theta cos theta) of a circular segment.
double cap_segment_area(double radius, double theta);

/// Leading-order precursor height -lambda0 eps^2 / (S g''(0)).
double precursor_height(double lambda0, double eps, const MaterialSystem& sys,
                        const InterpolantG& g);

/// dH/dxi of the leading-order inner problem,
/// sqrt((gamma_tilde(H)/C0)^2 - 1) with C0 = gamma_vs - gamma_fs.
double inner_slope(double H, const MaterialSystem& sys, const InterpolantG& g);

/// Inner profile H0(xi) anchored at H0(0) = 1 (the profile is only defined
/// up to a shift in xi).
struct InnerProfile {
  std::vector<double> xi;
  std::vector<double> H;
  double anchor_xi = 0.0;
  double anchor_H = 1.0;

  /// Linear interpolation; clamps outside the sampled range.
  double at(double x) const;
  /// xi at which H crosses the given level (H is increasing).
  double xi_at(double level) const;
};

/// Fixed-step RK4 from the anchor to both ends, n_pts samples in total.
InnerProfile inner_profile(double xi_min, double xi_max, int n_pts,
                           const MaterialSystem& sys, const InterpolantG& g,
                           double anchor_H = 1.0);

void write_inner_csv(const InnerProfile& p, std::ostream& os);
void write_inner_csv(const InnerProfile& p, const std::string& path);

/// h at the left boundary node.
double measure_precursor(const EquilibriumState& state);

enum class FitMethod {
  cap_l1,  // volume-constrained circular cap, L1 misfit in the cap angle
  kasa,    // algebraic least-squares circle on h >= fit_fraction * max h
};

struct ApparentContact {
  double angle = 0.0;
  double point = 0.0;   // right apparent contact point
  double center = 0.0;  // x of the circle center
  double radius = 0.0;
  int fit_nodes = 0;
};

struct FitOptions {
  FitMethod method = FitMethod::cap_l1;
  double fit_fraction = 0.10;  // kasa only
};

ApparentContact fit_apparent_contact(const Profile& profile,
                                     const FitOptions& opts = {});
ApparentContact fit_apparent_contact(const EquilibriumState& state,
                                     const FitOptions& opts = {});

/// Rescaled comparison of a numerical solution with the inner profile near
/// the left contact point: xi = (x - x_L)/eps and H = h/eps, with x_L the
/// first crossing of h = eps (the H = 1 alignment). Deviation is the max
/// |H_num - H_inner| over nodes with xi in [xi_min, xi_max].
struct InnerComparison {
  double eps = 0.0;
  double contact_x = 0.0;
  double max_deviation = 0.0;
  double xi_at_max = 0.0;
  int nodes = 0;
};

InnerComparison compare_with_inner(const EquilibriumState& state,
                                   const InnerProfile& inner, double xi_min,
                                   double xi_max);

}  // namespace wetreg
