#include "rcp/linear_analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rcp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Scalar bisection to 1e-13 relative width or 200 iterations.  f(lo) and
// f(hi) must not have the same sign; an exact zero at either endpoint is
// accepted as the root.
template <typename F>
double bisect(F f, double lo, double hi) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::logic_error("bisect: no sign change on the bracket");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-13 * std::max({std::fabs(lo), std::fabs(hi), 1e-300})) return mid;
        const double fm = f(mid);
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

}  // namespace

double effective_gain_base(const FluidParams& p) {
    validate(p);
    if (p.variant == Variant::WithoutQueue) return p.a;
    return p.a * (1.0 + equilibrium(p).rho_star);
}

StabilityVerdict stability(const FluidParams& p) {
    const double base = effective_gain_base(p);
    const double gain = p.kappa * base;
    StabilityVerdict v;
    v.effective_gain = gain;
    v.margin = kPi / 2.0 - gain;
    v.stable = gain < kPi / 2.0;
    v.kappa_c = kPi / (2.0 * base);
    return v;
}

std::vector<BoundaryPoint> stability_boundary(std::span<const double> a_grid) {
    std::vector<BoundaryPoint> out;
    out.reserve(a_grid.size());
    for (double a : a_grid) {
        BoundaryPoint pt;
        pt.a = a;
        if (a > kPi / 4.0 && a < kPi / 2.0) {
            const double rho = kPi / (2.0 * a) - 1.0;  // in (0,1) on this band
            pt.rho_star = rho;
            pt.b = b_for_utilization(rho);
            pt.exists = true;
            const double gain = a * (pt.b + 8.0 - std::sqrt(pt.b * pt.b + 8.0 * pt.b)) / 4.0;
            if (std::fabs(gain - kPi / 2.0) > 1e-10)
                throw std::logic_error("stability_boundary: boundary residual exceeds 1e-10");
        }
        out.push_back(pt);
    }
    return out;
}

bool robust_stability(const FluidParams& p) {
    return p.kappa * effective_gain_base(p) < 1.0;
}

double hayes_g(double u) {
    if (!(u >= 0.0 && u < kPi)) throw std::invalid_argument("hayes_g: u must be in [0, pi)");
    if (u < 1e-8) return std::exp(-1.0);  // g(0+) = 1/e
    return u / std::sin(u) * std::exp(-u / std::tan(u));
}

ConvergenceReport convergence_rate(double effective_a, double tau) {
    if (!(effective_a > 0.0)) throw std::invalid_argument("convergence_rate: gain must be > 0");
    if (!(tau > 0.0)) throw std::invalid_argument("convergence_rate: tau must be > 0");
    const double a = effective_a;
    const double a_star = std::exp(-1.0);

    ConvergenceReport rep;
    rep.candidates = {1.0 / tau, kInf, kInf};

    if (a >= kPi / 2.0) {
        // Past the Hopf condition (the boundary itself is classified
        // unstable: the stability inequality is strict).
        rep.sigma = 0.0;
        rep.branch = Branch::Unstable;
        return rep;
    }
    if (a <= a_star) {
        // s*e^{-s} = a with s = sigma*tau; the admissible root lies in (0,1].
        const double s = bisect([a](double x) { return x * std::exp(-x) - a; }, 0.0, 1.0);
        rep.candidates[1] = s / tau;
    }
    if (a >= a_star) {
        // g(u) = a, then s = u / tan u.  For a < pi/2 the root has u < pi/2.
        const double u = bisect([a](double x) { return hayes_g(x) - a; }, 1e-12, kPi - 1e-9);
        const double s = u / std::tan(u);
        if (s > 0.0) rep.candidates[2] = s / tau;
    }

    // sigma2 < sigma1 for a < 1/e and sigma3 < sigma1 for a > 1/e, with all
    // three coinciding at a = 1/e; prefer the analytic branch on ties.
    rep.sigma = rep.candidates[1];
    rep.branch = Branch::Sigma2;
    if (rep.candidates[2] < rep.sigma) {
        rep.sigma = rep.candidates[2];
        rep.branch = Branch::Sigma3;
    }
    if (rep.candidates[0] < rep.sigma) {
        rep.sigma = rep.candidates[0];
        rep.branch = Branch::Sigma1;
    }
    return rep;
}

std::complex<double> lambert_w0(std::complex<double> z) {
    using C = std::complex<double>;
    if (z == C(0.0, 0.0)) return C(0.0, 0.0);

    const double e = std::exp(1.0);
    C w;
    const C p2 = 2.0 * (e * z + 1.0);
    if (std::abs(p2) < 0.8) {
        // Series about the branch point z = -1/e; the square root turns
        // complex beyond it, which puts the iterate on the correct sheet.
        const C p = std::sqrt(p2);
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (std::abs(z) < 0.3) {
        w = z * (1.0 - z + 1.5 * z * z);
    } else {
        // Asymptotic guess; the principal log keeps negative reals complex.
        const C l1 = std::log(z);
        const C l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    for (int it = 0; it < 100; ++it) {
        const C ew = std::exp(w);
        const C f = w * ew - z;
        if (std::abs(f) <= 1e-16 * (std::abs(z) + 1e-300)) return w;
        const C wp1 = w + 1.0;
        const C denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const C dw = f / denom;
        w -= dw;
        if (std::abs(dw) <= 1e-12 * (1.0 + std::abs(w))) return w;
    }
    throw std::runtime_error("lambert_w0: Halley iteration did not converge");
}

std::complex<double> rightmost_root(double effective_a, double tau) {
    if (!(effective_a > 0.0)) throw std::invalid_argument("rightmost_root: gain must be > 0");
    if (!(tau > 0.0)) throw std::invalid_argument("rightmost_root: tau must be > 0");
    std::complex<double> w = lambert_w0({-effective_a, 0.0});
    if (w.imag() < 0.0) w = std::conj(w);
    const std::complex<double> lambda = w / tau;
    const double scale = effective_a / tau;
    const std::complex<double> resid = lambda + scale * std::exp(-lambda * tau);
    if (std::abs(resid) > 1e-9 * scale)
        throw std::runtime_error("rightmost_root: residual check failed");
    return lambda;
}

}  // namespace rcp
