#ifndef RCP_DDE_SIM_HPP
#define RCP_DDE_SIM_HPP

#include <span>
#include <vector>

#include "rcp/fluid_model.hpp"

namespace rcp {

/// Rate samples (and their derivatives, for Hermite continuity) on a uniform
/// grid spanning [-tau, 0].  R.size() == dR.size() == steps_per_delay + 1.
struct DdeHistory {
    std::vector<double> R;
    std::vector<double> dR;

    static DdeHistory constant(double R0, int steps_per_delay);
};

/// Fixed-step trajectory of the fluid-model delay equation.  The buffer
/// includes the initial history: indices 0..steps_per_delay span [-tau, 0]
/// and index steps_per_delay + k is time k*dt.  tau is an exact integer
/// multiple of dt.
struct Trajectory {
    std::vector<double> R;
    std::vector<double> dR;
    double dt = 0.0;
    int steps_per_delay = 0;
    FluidParams params;
    bool diverged = false;
    double divergence_time = 0.0;  ///< meaningful only when diverged

    double time_of(std::size_t i) const {
        return (static_cast<double>(i) - steps_per_delay) * dt;
    }
    double t_end() const { return time_of(R.size() - 1); }
};

/// Classical RK4 over the delay equation, advancing on a grid with
/// dt = tau/N where N = max(100, round(tau/dt_request)).  Delayed values at
/// half-step stage times come from cubic Hermite interpolation between stored
/// grid samples, which preserves the 4th-order accuracy.  Integration stops
/// early (diverged = true) if R leaves (1e-9*C, 1e3*C) or, in the WithQueue
/// variant, the delayed rate reaches the queue pole at C.
Trajectory integrate(const FluidParams& p, const DdeHistory& history, double t_end,
                     double dt_request);

/// Convenience overload: constant history R0 on [-tau, 0].
Trajectory integrate(const FluidParams& p, double R0, double t_end, double dt_request);

/// The last delay-window of a trajectory, reusable as the initial history of
/// a continuation run.  Requires a non-diverged trajectory spanning >= tau.
DdeHistory tail_history(const Trajectory& traj);

/// Half of the peak-to-trough range of R over the trailing fraction of the
/// trajectory.  The window must span at least 10 delay periods.
double tail_amplitude(const Trajectory& traj, double tail_fraction = 0.25);

/// Exponential decay rate toward R*, fitted from the slope of the
/// log-envelope of |R - R*| after the first delay period.  Throws for
/// unstable parameters or when the envelope does not decay cleanly.
double decay_rate_estimate(const Trajectory& traj);

struct SweepPoint {
    double kappa = 0.0;
    double amplitude = 0.0;  ///< tail amplitude; 0 for diverged points
    bool converged_to_equilibrium = false;
    bool diverged = false;
};

enum class SweepDirection { Forward, Backward };

struct SweepOptions {
    double t_end_per_point = 0.0;  ///< 0 -> 500*tau
    double dt_request = 0.0;       ///< 0 -> tau/1000
    /// Additive offset (fraction of R*) applied to the carried-over history at
    /// each point, so that instability growth restarts from a measurable seed.
    double kick_fraction = 0.01;
    /// Tail amplitude below this fraction of R* counts as converged.
    double amplitude_tolerance_fraction = 0.005;
    /// Offset (fraction of R*) seeding the backward sweep's bootstrap run;
    /// kept small so the transient cannot overshoot the queue pole.  Past the
    /// bifurcation any offset escapes the equilibrium.
    double backward_seed_fraction = 0.02;
    double tail_fraction = 0.25;
};

/// Amplitude of the attractor along a kappa grid with warm continuation:
/// each point starts from the previous point's final delay-window (plus a
/// small kick).  Forward starts near equilibrium below kappa_c; Backward
/// walks the reversed grid starting from the oscillatory state found at the
/// top of the grid.  Divergence is recorded per point; the following point
/// restarts from a fresh near-equilibrium history.
std::vector<SweepPoint> sweep_bifurcation(const FluidParams& p, std::span<const double> kappa_grid,
                                          SweepDirection direction, const SweepOptions& opt = {});

struct HysteresisReport {
    bool hysteresis = false;
    double max_gap = 0.0;    ///< largest forward/backward amplitude gap
    double gap_kappa = 0.0;  ///< kappa at which the largest gap occurs
};

/// Compares forward and backward sweeps over their common non-diverged
/// points; a gap above `threshold` (absolute, rate units) flags coexisting
/// attractors, the signature of a sub-critical bifurcation.
HysteresisReport detect_hysteresis(std::span<const SweepPoint> forward,
                                   std::span<const SweepPoint> backward, double threshold);

struct OnsetOptions {
    double perturb_fraction = 0.05;   ///< initial offset from R*
    double threshold_fraction = 0.02; ///< tail amplitude marking oscillation
    double t_end = 0.0;               ///< 0 -> 1500*tau
    double dt_request = 0.0;          ///< 0 -> tau/1000
    double tail_fraction = 0.25;
};

/// First kappa in the (ascending) grid whose cold-start trajectory sustains a
/// tail amplitude above the threshold (divergence also counts as onset).
/// Returns NaN when no grid point oscillates.
double oscillation_onset(const FluidParams& p, std::span<const double> kappa_grid,
                         const OnsetOptions& opt = {});

}  // namespace rcp

#endif
