#ifndef RCP_LINEAR_ANALYSIS_HPP
#define RCP_LINEAR_ANALYSIS_HPP

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "rcp/fluid_model.hpp"

namespace rcp {

/// Gain of the linearized model with kappa factored out:
/// a for WithoutQueue, a*(1 + rho*) for WithQueue.
double effective_gain_base(const FluidParams& p);

struct StabilityVerdict {
    bool stable;            ///< effective_gain < pi/2 (strict)
    double margin;          ///< pi/2 - effective_gain
    double kappa_c;         ///< critical bifurcation value, pi / (2 * gain base)
    double effective_gain;  ///< kappa * gain base
};

/// Local asymptotic stability of the linearization
/// du/dt = -(kappa * gain / tau) u(t - tau): stable iff kappa*gain < pi/2.
StabilityVerdict stability(const FluidParams& p);

/// One point of the Hopf boundary in the (a, b) parameter plane.
/// The boundary a*(1 + rho) = pi/2 has a solution with b in (0, inf) only for
/// a in (pi/4, pi/2); outside that band `exists` is false.
struct BoundaryPoint {
    double a = 0.0;
    bool exists = false;
    double b = 0.0;
    double rho_star = 0.0;
};

std::vector<BoundaryPoint> stability_boundary(std::span<const double> a_grid);

/// Sufficient condition for robust stability: kappa*a < 1 (WithoutQueue),
/// kappa*a*(1 + rho*) < 1 (WithQueue).  The source result labels the
/// WithQueue form necessary-and-sufficient; we expose the common sufficient
/// reading.
bool robust_stability(const FluidParams& p);

/// g(u) = (u / sin u) * exp(-u / tan u) on (0, pi), extended continuously by
/// g(0) = 1/e.  Strictly increasing, g(pi/2) = pi/2, g(u) -> inf as u -> pi.
double hayes_g(double u);

enum class Branch { Sigma1, Sigma2, Sigma3, Unstable };

struct ConvergenceReport {
    double sigma;     ///< exponential decay rate toward equilibrium; 0 if unstable
    Branch branch;    ///< which candidate attains the minimum
    /// sigma1 = 1/tau; sigma2 solves s*tau*e^{-s*tau} = a (a <= 1/e);
    /// sigma3 from g(u) = a, s*tau = u/tan u (a > 1/e).  +inf when absent.
    std::array<double, 3> candidates;
};

/// Rate of convergence of the delayed linear system with loop gain
/// effective_a (pass kappa * gain base).  sigma = min of the candidates;
/// sigma*tau <= 1 always.  Gains >= pi/2 are unstable: sigma = 0.
ConvergenceReport convergence_rate(double effective_a, double tau);

/// Principal branch of the Lambert W function, Halley iteration to 1e-12.
std::complex<double> lambert_w0(std::complex<double> z);

/// Characteristic root of lambda + (a/tau) e^{-lambda*tau} = 0 with the
/// largest real part, lambda = W0(-a) / tau.  Roots with nonzero imaginary
/// part are returned with Im > 0.  Verifies the residual to 1e-9 * a/tau.
std::complex<double> rightmost_root(double effective_a, double tau);

}  // namespace rcp

#endif
