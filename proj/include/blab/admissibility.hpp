#pragma once

#include <vector>

#include "blab/calculus.hpp"
#include "blab/geometry.hpp"

namespace blab {

/// Disk-valued measurable constraint family M(z) = closed ball B(c(z), rho(z))
/// contained in the unit disk with safety margin eps_c. Outside the declared
/// support both fields vanish, so Q_M = 1 there.
struct SetConstraint {
    ComplexField center;   // c(z)
    RealField radius;      // rho(z) >= 0
    double safety = 1e-3;  // |c| + rho <= 1 - safety everywhere
    double support_radius = 0.0;

    static SetConstraint checked(ComplexField c, RealField rho, double eps_c,
                                 double support_radius);
    void validate() const;

    /// Uniform disk B(c0, rho0) on |z - grid center| <= r_supp, degenerate to
    /// {0} outside. The workhorse constraint for experiments.
    static SetConstraint uniform_disk(GridSpec g, Complex c0, double rho0, double r_supp,
                                      double eps_c = 1e-3);
};

/// Scalar profile Q(z) >= 1.
struct QProfile {
    RealField values;
    static QProfile checked(RealField q);
};

/// q_M(z) = sup_{nu in M(z)} |nu| = |c(z)| + rho(z).
RealField q_sup(const SetConstraint& constraint);

/// Q_M = (1+q)/(1-q) pointwise; requires q < 1 everywhere.
QProfile Q_from_q(const RealField& q);

/// Mean of Q over the circle |z - z0| = t (trapezoidal rule over bilinear
/// samples, at least max(64, ceil(2 pi t / h)) points). The circle must stay
/// inside the grid and t must exceed 2h.
double circle_average(const QProfile& Q, Complex z0, double t);

enum class DivergenceVerdict { diverges, converges, inconclusive };

struct DivergenceReport {
    DivergenceVerdict verdict = DivergenceVerdict::inconclusive;
    std::vector<double> tau;       // geometric scales delta0 * 2^-j
    std::vector<double> integral;  // I(tau) = int_tau^delta0 dt/(t q(t))
    double tail_slope = 0.0;       // dI/dlog(1/tau) over the last decade
};

/// Empirical classification of int_0^delta0 dt/(t q_{z0}(t)).
/// "diverges": I keeps growing at a positive rate per log scale;
/// "converges": increments shrink geometrically. Finite-scale verdicts only.
DivergenceReport divergence_check(const QProfile& Q, Complex z0, double delta0, double t_min);

struct FmoReport {
    bool consistent = false;  // bounded deviation sequence
    double limsup_estimate = 0.0;
    std::vector<double> eps;
    std::vector<double> deviation;  // (1/(pi eps^2)) int_B |Q - mean| dm
    std::vector<double> mean;       // running means (may grow while deviations stay bounded)
};

/// Finite mean oscillation probe at z0 over the given shrinking radii.
/// Pass an empty schedule to use the default: 12 geometric steps from L/8
/// down to 4h.
FmoReport fmo_estimate(const QProfile& Q, Complex z0, std::vector<double> eps_schedule = {});

/// Cell quadrature of Q over the disk |z - z0| <= radius (or the full grid
/// when radius <= 0).
double integrability_check(const QProfile& Q, Complex z0, double radius);

struct MembershipReport {
    double violating_fraction = 0.0;
    bool verdict = false;
};

/// Fraction of nodes with |mu(z) - c(z)| > rho(z) + 1e-12; verdict true iff
/// the fraction is at most 1e-3. Grids must match.
MembershipReport membership_ae(const ComplexField& mu, const SetConstraint& constraint);

}  // namespace blab
