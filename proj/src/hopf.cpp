#include "rcp/hopf.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rcp/linear_analysis.hpp"

namespace rcp {

namespace {
constexpr double kPi = std::numbers::pi;
}

double mu2_general(const TaylorCoeffs& c, double b_lin) {
    if (!(b_lin > 0.0)) throw std::invalid_argument("mu2_general: b_lin must be > 0");
    const double b = b_lin;
    const double quad = (c.xi_xx * c.xi_xx * 4.0 * (kPi - 9.0) + c.xi_xy * c.xi_xy * (3.0 * kPi - 2.0) +
                         c.xi_yy * c.xi_yy * 2.0 * (11.0 * kPi - 4.0) +
                         c.xi_xx * c.xi_xy * (7.0 * kPi - 18.0) +
                         c.xi_xx * c.xi_yy * 2.0 * (7.0 * kPi - 18.0) +
                         c.xi_xy * c.xi_yy * (7.0 * kPi - 18.0)) /
                        (5.0 * b);
    const double cubic = -6.0 * c.xi_xxx + kPi * c.xi_xxy - 2.0 * c.xi_xyy + 3.0 * kPi * c.xi_yyy;
    return (quad + cubic) / (kPi * b);
}

double mu2_numerator(double rho_star) {
    const double r = rho_star;
    const double r2 = r * r;
    return (3.0 * kPi - 2.0) * r2 * r2 - (22.0 * kPi - 8.0) * r2 * r - (4.0 - kPi) * r2 +
           (7.0 * kPi - 8.0) * r + (3.0 * kPi - 2.0);
}

Mu2Paths mu2_with_queue(const FluidParams& p) {
    if (p.variant != Variant::WithQueue)
        throw std::invalid_argument("mu2_with_queue: WithQueue variant required");
    const Equilibrium eq = equilibrium(p);
    const double r = eq.rho_star;
    if (!(r > 0.0 && r < 1.0))
        throw std::domain_error("mu2_with_queue: rho* must be in (0,1)");

    const TaylorCoeffs c = taylor_coeffs(p);
    const double via_taylor = mu2_general(c, -c.xi_y);

    const double denom = p.C * p.C * 5.0 * kPi * r * r * (1.0 - r * r) * (1.0 - r * r);
    const double closed_form = mu2_numerator(r) / denom;
    return {via_taylor, closed_form};
}

double mu2_quadratics_only(double xi_xy, double xi_yy, double xi_y) {
    if (xi_y == 0.0) throw std::invalid_argument("mu2_quadratics_only: xi_y must be nonzero");
    const double d = 5.0 * kPi * xi_y * xi_y;
    return (xi_xy * xi_xy * (3.0 * kPi - 2.0) + xi_yy * xi_yy * 2.0 * (11.0 * kPi - 4.0) +
            xi_xy * xi_yy * (7.0 * kPi - 18.0)) /
           d;
}

double mu2_cubics_only(double xi_xyy, double xi_yyy, double xi_y) {
    if (xi_y == 0.0) throw std::invalid_argument("mu2_cubics_only: xi_y must be nonzero");
    return 2.0 * xi_xyy / (kPi * xi_y) - 3.0 * xi_yyy / xi_y;
}

double critical_utilization() {
    double lo = 1e-9, hi = 1.0 - 1e-9;
    double flo = mu2_numerator(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = mu2_numerator(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double supercritical_amplitude(const FluidParams& p, double kappa) {
    if (p.variant != Variant::WithoutQueue)
        throw std::invalid_argument("supercritical_amplitude: WithoutQueue variant required");
    const double kappa_c = kPi / (2.0 * p.a);
    if (kappa < kappa_c)
        throw std::invalid_argument("supercritical_amplitude: kappa below kappa_c");
    const double r_star = equilibrium(p).R_star;
    return r_star * std::sqrt(20.0 * kPi * (kappa - kappa_c) / (3.0 * kPi - 2.0));
}

HopfReport hopf_report(const FluidParams& p) {
    HopfReport rep;
    rep.kappa_c = stability(p).kappa_c;
    if (p.variant == Variant::WithQueue) {
        const Mu2Paths m = mu2_with_queue(p);
        rep.mu2 = m.via_taylor;
        rep.mu2_closed_form = m.closed_form;
        // Classify on the capacity-free numerator so the verdict does not
        // depend on the unit of C.
        const double n = mu2_numerator(equilibrium(p).rho_star);
        rep.criticality = n > kCriticalityTol    ? Criticality::SuperCritical
                          : n < -kCriticalityTol ? Criticality::SubCritical
                                                 : Criticality::Degenerate;
        rep.amplitude_coefficient = std::nullopt;
    } else {
        const TaylorCoeffs c = taylor_coeffs(p);
        rep.mu2 = mu2_general(c, -c.xi_y);
        rep.mu2_closed_form = rep.mu2;
        const double scale_free = rep.mu2 * 5.0 * kPi * (p.gamma * p.C) * (p.gamma * p.C);
        rep.criticality = scale_free > kCriticalityTol    ? Criticality::SuperCritical
                          : scale_free < -kCriticalityTol ? Criticality::SubCritical
                                                          : Criticality::Degenerate;
        const double r_star = equilibrium(p).R_star;
        rep.amplitude_coefficient = r_star * std::sqrt(20.0 * kPi / (3.0 * kPi - 2.0));
    }
    return rep;
}

}  // namespace rcp
