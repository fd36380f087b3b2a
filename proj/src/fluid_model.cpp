#include "rcp/fluid_model.hpp"

#include <cmath>
#include <stdexcept>

namespace rcp {

void validate(const FluidParams& p) {
    if (!(p.a > 0.0)) throw std::invalid_argument("FluidParams: a must be > 0");
    if (!(p.C > 0.0)) throw std::invalid_argument("FluidParams: C must be > 0");
    if (!(p.tau > 0.0)) throw std::invalid_argument("FluidParams: tau must be > 0");
    if (!(p.kappa > 0.0)) throw std::invalid_argument("FluidParams: kappa must be > 0");
    if (!(p.sigma2 > 0.0)) throw std::invalid_argument("FluidParams: sigma2 must be > 0");
    if (p.variant == Variant::WithQueue) {
        if (!(p.b >= 0.0)) throw std::invalid_argument("FluidParams: b must be >= 0");
    } else {
        if (!(p.gamma > 0.0 && p.gamma <= 1.0))
            throw std::invalid_argument("FluidParams: gamma must be in (0,1]");
    }
}

Equilibrium equilibrium(const FluidParams& p) {
    validate(p);
    if (p.variant == Variant::WithoutQueue) {
        return {p.gamma * p.C, p.gamma};
    }
    // sigma2 enters the queue law only as b*sigma2, so the closed form for
    // sigma2 = 1 applies to the scaled gain.
    const double be = p.b * p.sigma2;
    const double rho = (be + 4.0 - std::sqrt(be * be + 8.0 * be)) / 4.0;
    return {p.C * rho, rho};
}

double b_for_utilization(double rho_star) {
    if (!(rho_star > 0.0 && rho_star < 1.0))
        throw std::invalid_argument("b_for_utilization: rho_star must be in (0,1)");
    const double d = 1.0 - rho_star;
    return 2.0 * d * d / rho_star;
}

double mean_queue(double y, double C, double sigma2) {
    if (!(C > 0.0)) throw std::invalid_argument("mean_queue: C must be > 0");
    if (!(y >= 0.0)) throw std::invalid_argument("mean_queue: y must be >= 0");
    if (y >= C) throw std::domain_error("mean_queue: y >= C (queue pole)");
    return y * sigma2 / (2.0 * (C - y));
}

double rhs(const FluidParams& p, double R_now, double R_delayed) {
    if (!(R_now > 0.0)) throw std::invalid_argument("rhs: R_now must be > 0");
    if (p.variant == Variant::WithoutQueue) {
        const double gC = p.gamma * p.C;
        return p.kappa * p.a * R_now / (gC * p.tau) * (gC - R_delayed);
    }
    if (R_delayed >= p.C)
        throw std::domain_error("rhs: R_delayed >= C crosses the queue pole");
    const double q = mean_queue(R_delayed, p.C, p.sigma2);
    return p.kappa * p.a * R_now / (p.C * p.tau) * (p.C - R_delayed - p.b * p.C * q);
}

TaylorCoeffs taylor_coeffs(const FluidParams& p) {
    const Equilibrium eq = equilibrium(p);
    TaylorCoeffs c;
    if (p.variant == Variant::WithoutQueue) {
        c.xi_y = -p.a / p.tau;
        c.xi_xy = -p.a / (p.gamma * p.C * p.tau);
        return c;
    }
    const double rho = eq.rho_star;
    if (rho >= 1.0)
        throw std::domain_error("taylor_coeffs: rho* = 1 (pole in the expansion)");
    const double C = p.C, tau = p.tau, a = p.a;
    c.xi_y = -a * (1.0 + rho) / tau;
    c.xi_xy = -a * (1.0 + rho) / (C * tau * rho);
    c.xi_yy = -a / (C * tau * (1.0 - rho));
    c.xi_xyy = -a / (C * C * tau * rho * (1.0 - rho));
    c.xi_yyy = -a / (C * C * tau * (1.0 - rho) * (1.0 - rho));
    return c;
}

}  // namespace rcp
