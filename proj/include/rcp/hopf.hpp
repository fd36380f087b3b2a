#ifndef RCP_HOPF_HPP
#define RCP_HOPF_HPP

#include <optional>

#include "rcp/fluid_model.hpp"

namespace rcp {

enum class Criticality { SuperCritical, SubCritical, Degenerate };

/// |mu2| below this (after normalizing away the capacity scale) is reported
/// as Degenerate rather than forced to a verdict.
inline constexpr double kCriticalityTol = 1e-10;

/// The criticality coefficient mu2 of the general first-order delay equation
///
///   du/dt = eta*( -b_lin*u_d + xi_xx*u^2 + xi_xy*u*u_d + xi_yy*u_d^2
///                 + xi_xxx*u^3 + xi_xxy*u^2*u_d + xi_xyy*u*u_d^2
///                 + xi_yyy*u_d^3 ),
///
/// evaluated when the Hopf condition eta*b_lin*tau = pi/2 is just violated.
/// Pass b_lin = -xi_y (> 0).  The expression is homogeneous of degree zero in
/// a common scaling of b_lin and all coefficients, so the kappa placement in
/// TaylorCoeffs does not affect the result.  mu2 > 0 means super-critical,
/// mu2 < 0 sub-critical.
double mu2_general(const TaylorCoeffs& c, double b_lin);

/// mu2 of the WithQueue model, computed along both routes:
///  - via_taylor substitutes the Table-style coefficients into the general
///    expression;
///  - closed_form evaluates
///      [ (3pi-2)r^4 - (22pi-8)r^3 - (4-pi)r^2 + (7pi-8)r + (3pi-2) ]
///      / ( C^2 * 5pi * r^2 * (1-r^2)^2 ),   r = rho*.
/// The two agree to machine accuracy; via_taylor is the canonical value.
struct Mu2Paths {
    double via_taylor;
    double closed_form;
};
Mu2Paths mu2_with_queue(const FluidParams& p);

/// mu2 with only the quadratic terms xi_xy, xi_yy retained (nonnegative for
/// all inputs: the underlying quadratic form is positive semidefinite).
double mu2_quadratics_only(double xi_xy, double xi_yy, double xi_y);

/// mu2 with only the cubic terms retained: 2*xi_xyy/(pi*xi_y) - 3*xi_yyy/xi_y.
double mu2_cubics_only(double xi_xyy, double xi_yyy, double xi_y);

/// Numerator polynomial of the closed-form mu2 as a function of utilization;
/// its sign alone decides the criticality.
double mu2_numerator(double rho_star);

/// The utilization at which the WithQueue bifurcation changes type: the
/// unique root of mu2_numerator in (0,1), approximately 0.6621.  Bisection to
/// 1e-10 with exact-pi coefficients.
double critical_utilization();

/// First-order amplitude of the bifurcating limit cycle for the WithoutQueue
/// variant: R* * sqrt(20*pi*(kappa - kappa_c) / (3*pi - 2)), kappa >= kappa_c
/// = pi/(2a).
double supercritical_amplitude(const FluidParams& p, double kappa);

struct HopfReport {
    double kappa_c;
    double mu2;
    double mu2_closed_form;  ///< equals mu2 for WithQueue; repeated for the record
    Criticality criticality;
    /// WithoutQueue only: the kappa-independent amplitude coefficient
    /// R* * sqrt(20*pi/(3*pi-2)).
    std::optional<double> amplitude_coefficient;
};

/// Full criticality report for either variant.  WithoutQueue is always
/// super-critical; WithQueue flips from super- to sub-critical at
/// critical_utilization().
HopfReport hopf_report(const FluidParams& p);

}  // namespace rcp

#endif
