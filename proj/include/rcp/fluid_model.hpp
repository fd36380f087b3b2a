#ifndef RCP_FLUID_MODEL_HPP
#define RCP_FLUID_MODEL_HPP

namespace rcp {

/// Which feedback terms the router uses when computing the fair rate.
enum class Variant {
    WithQueue,    ///< rate mismatch + mean-queue feedback (gain b)
    WithoutQueue  ///< rate mismatch only, targeting utilization gamma
};

/// Parameters of the single-bottleneck fluid model
///
///   dR/dt = kappa * a * R(t) / (C * tau) * (C - y - b*C*p(y)),   y = R(t - tau)
///
/// with p(y) = y*sigma2 / (2*(C - y)).  In the WithoutQueue variant b is
/// ignored, C is replaced by gamma*C and the queue term is dropped.
struct FluidParams {
    Variant variant = Variant::WithQueue;
    double a = 1.0;       ///< dimensionless gain, > 0
    double b = 0.0;       ///< queue-feedback gain, >= 0 (WithQueue only)
    double C = 1.0;       ///< link capacity, > 0
    double tau = 1.0;     ///< round-trip delay, > 0
    double kappa = 1.0;   ///< exogenous bifurcation parameter, > 0
    double gamma = 1.0;   ///< target utilization in (0,1] (WithoutQueue only)
    double sigma2 = 1.0;  ///< traffic variability in the mean-queue law
};

/// Throws std::invalid_argument if any field is out of range.
void validate(const FluidParams& p);

struct Equilibrium {
    double R_star;    ///< equilibrium rate
    double rho_star;  ///< equilibrium utilization R_star / C
};

/// Equilibrium of the fluid model.
///
/// WithQueue:    R* = C * (b' + 4 - sqrt(b'^2 + 8 b')) / 4 with b' = b*sigma2,
///               the root in (0, C] of  C - R - b*C*p(R) = 0.
/// WithoutQueue: R* = gamma * C.
Equilibrium equilibrium(const FluidParams& p);

/// Inverse of the utilization law: the queue gain b that yields equilibrium
/// utilization rho_star (sigma2 = 1).  b = 2*(1 - rho)^2 / rho.
/// Requires 0 < rho_star < 1.
double b_for_utilization(double rho_star);

/// Mean queue size p(y) = y*sigma2 / (2*(C - y)) for load y in [0, C).
/// Strictly increasing in y and diverging as y -> C.
double mean_queue(double y, double C, double sigma2 = 1.0);

/// Right-hand side of the delay differential equation, with the current and
/// the delayed rate passed as independent arguments.  Zero at (R*, R*).
/// WithQueue requires R_delayed < C (queue pole).
double rhs(const FluidParams& p, double R_now, double R_delayed);

/// Coefficients of the cubic Taylor expansion of the model about its
/// equilibrium, u(t) = R(t) - R*:
///
///   du/dt = kappa * ( xi_y*u_d + xi_xy*u*u_d + xi_yy*u_d^2
///                     + xi_xyy*u*u_d^2 + xi_yyy*u_d^3 ),   u_d = u(t - tau).
///
/// The coefficients are stored kappa-free; consumers multiply by kappa at the
/// point of use.  They are polynomial coefficients (derivatives divided by
/// factorials).  The general-form slots xi_xx, xi_xxx, xi_xxy are identically
/// zero for this model but kept so the coefficients can be fed to the general
/// criticality formula unchanged.
struct TaylorCoeffs {
    double xi_y = 0.0;
    double xi_xy = 0.0;
    double xi_yy = 0.0;
    double xi_xyy = 0.0;
    double xi_yyy = 0.0;
    double xi_xx = 0.0;
    double xi_xxx = 0.0;
    double xi_xxy = 0.0;
};

/// Taylor coefficients at the equilibrium.  WithQueue requires rho* < 1.
/// WithoutQueue has exactly two nonzero entries: xi_y = -a/tau and
/// xi_xy = -a/(gamma*C*tau).
TaylorCoeffs taylor_coeffs(const FluidParams& p);

}  // namespace rcp

#endif
