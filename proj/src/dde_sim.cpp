#include "rcp/dde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rcp/linear_analysis.hpp"

namespace rcp {

namespace {

// Inlined right-hand side without precondition checks; the integrator guards
// the domain itself so that leaving it marks divergence instead of throwing.
struct Rhs {
    double pref;    // kappa*a/(C_eff*tau)
    double C_eff;   // C or gamma*C
    double b_term;  // b*C*sigma2/2 (WithQueue), 0 otherwise
    double pole;    // queue pole (WithQueue), +inf otherwise
    double operator()(double x, double y) const {
        double mismatch = C_eff - y;
        if (b_term != 0.0) mismatch -= b_term * y / (pole - y);
        return pref * x * mismatch;
    }
};

Rhs make_rhs(const FluidParams& p) {
    Rhs f;
    if (p.variant == Variant::WithQueue) {
        f.C_eff = p.C;
        f.b_term = p.b * p.C * p.sigma2 / 2.0;
        f.pole = p.C;
    } else {
        f.C_eff = p.gamma * p.C;
        f.b_term = 0.0;
        f.pole = std::numeric_limits<double>::infinity();
    }
    f.pref = p.kappa * p.a / (f.C_eff * p.tau);
    return f;
}

int resolve_steps(double tau, double dt_request) {
    if (dt_request <= 0.0) return 1000;
    const long n = std::lround(tau / dt_request);
    return static_cast<int>(std::max(100L, n));
}

}  // namespace

DdeHistory DdeHistory::constant(double R0, int steps_per_delay) {
    DdeHistory h;
    h.R.assign(static_cast<std::size_t>(steps_per_delay) + 1, R0);
    h.dR.assign(static_cast<std::size_t>(steps_per_delay) + 1, 0.0);
    return h;
}

Trajectory integrate(const FluidParams& p, const DdeHistory& history, double t_end,
                     double dt_request) {
    validate(p);
    const int N = resolve_steps(p.tau, dt_request);
    const std::size_t nh = static_cast<std::size_t>(N) + 1;
    if (history.R.size() != nh || history.dR.size() != nh)
        throw std::invalid_argument("integrate: history must hold steps_per_delay+1 samples");
    const double dt = p.tau / N;
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be > 0");
    const long steps = std::lround(std::ceil(t_end / dt - 1e-9));
    if (steps < 1) throw std::invalid_argument("integrate: t_end below one step");

    const Rhs f = make_rhs(p);
    const double r_lo = 1e-9 * p.C;
    const double r_hi = 1e3 * p.C;
    const bool with_queue = p.variant == Variant::WithQueue;
    const double pole = p.C;

    // Buffer layout: indices 0..N hold the history ([-tau, 0]); index N+k is
    // time k*dt.
    std::vector<double> R(nh + steps);
    std::vector<double> dR(R.size());
    std::copy(history.R.begin(), history.R.end(), R.begin());
    std::copy(history.dR.begin(), history.dR.end(), dR.begin());

    Trajectory traj;
    traj.dt = dt;
    traj.steps_per_delay = N;
    traj.params = p;

    const double R0 = R[N];
    if (!(R0 > 0.0) || (with_queue && R0 >= pole))
        throw std::invalid_argument("integrate: invalid initial rate");

    // The initial function and the solution meet at index N with different
    // one-sided slopes.  dR[N] carries the right (new-dynamics) derivative;
    // the history's own slope is kept for interpolation within [-dt, 0].
    const double junction_left_slope = dR[N];
    dR[N] = f(R[N], R[0]);

    std::size_t last = N;
    for (long k = 0; k < steps; ++k) {
        const std::size_t i = static_cast<std::size_t>(N) + k;
        const std::size_t jd = i - N;
        const double x = R[i];
        const double y0 = R[jd];
        const double y1 = R[jd + 1];
        const double m0 = dR[jd];
        const double m1 = (jd + 1 == static_cast<std::size_t>(N)) ? junction_left_slope : dR[jd + 1];
        // Delayed value at the half step via cubic Hermite between grid nodes.
        const double ymid = 0.5 * (y0 + y1) + dt / 8.0 * (m0 - m1);

        if (!(x > r_lo && x < r_hi) ||
            (with_queue && (y0 >= pole || y1 >= pole || ymid >= pole))) {
            traj.diverged = true;
            traj.divergence_time = static_cast<double>(k) * dt;
            break;
        }

        const double k1 = f(x, y0);
        const double k2 = f(x + 0.5 * dt * k1, ymid);
        const double k3 = f(x + 0.5 * dt * k2, ymid);
        const double k4 = f(x + dt * k3, y1);
        const double xn = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        R[i + 1] = xn;
        dR[i + 1] = f(xn, y1);
        last = i + 1;
        if (!(xn > r_lo && xn < r_hi)) {
            traj.diverged = true;
            traj.divergence_time = static_cast<double>(k + 1) * dt;
            break;
        }
    }

    R.resize(last + 1);
    dR.resize(last + 1);
    traj.R = std::move(R);
    traj.dR = std::move(dR);
    return traj;
}

Trajectory integrate(const FluidParams& p, double R0, double t_end, double dt_request) {
    const int N = resolve_steps(p.tau, dt_request);
    return integrate(p, DdeHistory::constant(R0, N), t_end, dt_request);
}

DdeHistory tail_history(const Trajectory& traj) {
    const std::size_t n = static_cast<std::size_t>(traj.steps_per_delay) + 1;
    if (traj.diverged) throw std::invalid_argument("tail_history: trajectory diverged");
    if (traj.R.size() < n) throw std::invalid_argument("tail_history: trajectory shorter than tau");
    DdeHistory h;
    h.R.assign(traj.R.end() - n, traj.R.end());
    h.dR.assign(traj.dR.end() - n, traj.dR.end());
    return h;
}

double tail_amplitude(const Trajectory& traj, double tail_fraction) {
    if (traj.diverged) throw std::invalid_argument("tail_amplitude: trajectory diverged");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw std::invalid_argument("tail_amplitude: tail_fraction must be in (0,1]");
    const std::size_t n = traj.R.size();
    const std::size_t first = static_cast<std::size_t>(traj.steps_per_delay);
    if (n <= first + 1) throw std::invalid_argument("tail_amplitude: empty trajectory");
    const std::size_t span = n - 1 - first;
    const std::size_t i0 =
        n - 1 - static_cast<std::size_t>(std::floor(static_cast<double>(span) * tail_fraction));
    const double window = static_cast<double>(n - 1 - i0) * traj.dt;
    if (window < 10.0 * traj.params.tau - 1e-9)
        throw std::invalid_argument("tail_amplitude: tail window below 10 delay periods");
    double lo = traj.R[i0], hi = traj.R[i0];
    for (std::size_t i = i0; i < n; ++i) {
        lo = std::min(lo, traj.R[i]);
        hi = std::max(hi, traj.R[i]);
    }
    return 0.5 * (hi - lo);
}

double decay_rate_estimate(const Trajectory& traj) {
    const FluidParams& p = traj.params;
    if (!stability(p).stable)
        throw std::invalid_argument("decay_rate_estimate: parameters are unstable");
    if (traj.diverged) throw std::invalid_argument("decay_rate_estimate: trajectory diverged");
    const double r_star = equilibrium(p).R_star;
    const std::size_t n = traj.R.size();
    // Skip the history block plus one delay period of transient.
    const std::size_t start = static_cast<std::size_t>(traj.steps_per_delay) * 2;
    if (n < start + 3) throw std::invalid_argument("decay_rate_estimate: trajectory too short");

    const double floor = 1e-13 * r_star;
    // Envelope samples: local maxima of |R - R*|; falls back to every sample
    // when the decay is non-oscillatory.
    std::vector<double> ts, ls;
    for (std::size_t i = start + 1; i + 1 < n; ++i) {
        const double u0 = std::fabs(traj.R[i - 1] - r_star);
        const double u1 = std::fabs(traj.R[i] - r_star);
        const double u2 = std::fabs(traj.R[i + 1] - r_star);
        // Strict on the left so a quantization plateau yields one peak.
        if (u1 > u0 && u1 >= u2 && u1 > floor) {
            ts.push_back(traj.time_of(i));
            ls.push_back(std::log(u1));
        }
    }
    if (ts.size() < 5) {
        ts.clear();
        ls.clear();
        for (std::size_t i = start; i < n; ++i) {
            const double u = std::fabs(traj.R[i] - r_star);
            if (u > floor) {
                ts.push_back(traj.time_of(i));
                ls.push_back(std::log(u));
            }
        }
    }
    if (ts.size() < 3) throw std::runtime_error("decay_rate_estimate: envelope has too few points");

    // Fit the later half of the envelope; the early part still carries the
    // non-modal transient.
    const std::size_t half = ts.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double m = static_cast<double>(ts.size() - half);
    for (std::size_t i = half; i < ts.size(); ++i) {
        sx += ts[i];
        sy += ls[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * ls[i];
        syy += ls[i] * ls[i];
    }
    const double denom = m * sxx - sx * sx;
    if (denom <= 0.0) throw std::runtime_error("decay_rate_estimate: degenerate fit window");
    const double slope = (m * sxy - sx * sy) / denom;
    const double var_y = m * syy - sy * sy;
    if (var_y > 0.0) {
        const double corr = (m * sxy - sx * sy) / std::sqrt(denom * var_y);
        if (corr > -0.98)
            throw std::runtime_error("decay_rate_estimate: envelope not cleanly decaying");
    }
    if (!(slope < 0.0)) throw std::runtime_error("decay_rate_estimate: envelope does not decay");
    return -slope;
}

namespace {

DdeHistory kicked(DdeHistory h, double offset) {
    for (double& v : h.R) v += offset;
    return h;
}

}  // namespace

std::vector<SweepPoint> sweep_bifurcation(const FluidParams& p, std::span<const double> kappa_grid,
                                          SweepDirection direction, const SweepOptions& opt) {
    validate(p);
    if (kappa_grid.size() < 2) throw std::invalid_argument("sweep_bifurcation: grid too small");
    for (std::size_t i = 1; i < kappa_grid.size(); ++i)
        if (!(kappa_grid[i] > kappa_grid[i - 1]))
            throw std::invalid_argument("sweep_bifurcation: kappa grid must increase strictly");

    const double r_star = equilibrium(p).R_star;
    const double t_end = opt.t_end_per_point > 0.0 ? opt.t_end_per_point : 500.0 * p.tau;
    const double dt_req = opt.dt_request > 0.0 ? opt.dt_request : p.tau / 1000.0;
    const int N = resolve_steps(p.tau, dt_req);
    const double kick = opt.kick_fraction * r_star;
    const double amp_tol = opt.amplitude_tolerance_fraction * r_star;

    std::vector<double> order(kappa_grid.begin(), kappa_grid.end());
    if (direction == SweepDirection::Backward) std::reverse(order.begin(), order.end());

    DdeHistory state = DdeHistory::constant(r_star, N);
    if (direction == SweepDirection::Backward) {
        // Bootstrap onto the oscillatory attractor at the top of the grid.
        FluidParams q = p;
        q.kappa = order.front();
        const Trajectory boot = integrate(
            q, DdeHistory::constant(r_star * (1.0 + opt.backward_seed_fraction), N), t_end, dt_req);
        if (!boot.diverged) state = tail_history(boot);
    }

    std::vector<SweepPoint> points;
    points.reserve(order.size());
    bool fresh_needed = false;
    for (double kappa : order) {
        if (fresh_needed) state = DdeHistory::constant(r_star, N);
        FluidParams q = p;
        q.kappa = kappa;
        const Trajectory traj = integrate(q, kicked(state, kick), t_end, dt_req);
        SweepPoint pt;
        pt.kappa = kappa;
        if (traj.diverged) {
            pt.diverged = true;
            fresh_needed = true;
        } else {
            pt.amplitude = tail_amplitude(traj, opt.tail_fraction);
            pt.converged_to_equilibrium = pt.amplitude <= amp_tol;
            state = tail_history(traj);
            fresh_needed = false;
        }
        points.push_back(pt);
    }
    if (direction == SweepDirection::Backward) std::reverse(points.begin(), points.end());
    return points;
}

HysteresisReport detect_hysteresis(std::span<const SweepPoint> forward,
                                   std::span<const SweepPoint> backward, double threshold) {
    HysteresisReport rep;
    for (const SweepPoint& f : forward) {
        for (const SweepPoint& b : backward) {
            if (std::fabs(f.kappa - b.kappa) > 1e-12) continue;
            if (f.diverged || b.diverged) continue;
            const double gap = std::fabs(f.amplitude - b.amplitude);
            if (gap > rep.max_gap) {
                rep.max_gap = gap;
                rep.gap_kappa = f.kappa;
            }
        }
    }
    rep.hysteresis = rep.max_gap > threshold;
    return rep;
}

double oscillation_onset(const FluidParams& p, std::span<const double> kappa_grid,
                         const OnsetOptions& opt) {
    validate(p);
    const double r_star = equilibrium(p).R_star;
    const double t_end = opt.t_end > 0.0 ? opt.t_end : 1500.0 * p.tau;
    const double dt_req = opt.dt_request > 0.0 ? opt.dt_request : p.tau / 1000.0;
    const int N = resolve_steps(p.tau, dt_req);
    for (double kappa : kappa_grid) {
        FluidParams q = p;
        q.kappa = kappa;
        const Trajectory traj = integrate(
            q, DdeHistory::constant(r_star * (1.0 + opt.perturb_fraction), N), t_end, dt_req);
        if (traj.diverged) return kappa;
        if (tail_amplitude(traj, opt.tail_fraction) > opt.threshold_fraction * r_star) return kappa;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace rcp
