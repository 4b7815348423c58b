#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "blab/admissibility.hpp"
#include "blab/calculus.hpp"
#include "blab/transforms.hpp"

namespace blab {

struct SolverConfig {
    int max_iterations = 200;
    double residual_tol = 1e-12;  // L2 threshold on Neumann iterate increments
    std::shared_ptr<const TransformPlan> plan;

    void validate() const {
        if (max_iterations < 1) throw precondition_error("SolverConfig: max_iterations >= 1");
        if (residual_tol < 1e-14) throw precondition_error("SolverConfig: residual_tol >= 1e-14");
        if (!plan) throw precondition_error("SolverConfig: missing transform plan");
    }
};

struct KoebeReport {
    bool inclusion_ok = false;   // f(B(0, r0)) inside B(0, 4 r0) on nodes
    bool coverage_ok = false;    // images of {|z| >= r0} reach a fine mesh of the outer annulus
    double worst_inclusion_ratio = 0.0;  // max |f(z)|/(4 r0) over |z| < r0
    double max_coverage_gap = 0.0;
    double coverage_outer_radius = 0.0;  // outer mesh radius actually probed
    std::size_t mesh_points = 0;
    bool verdict = false;
};

struct TailReport {
    // least-squares slope of log|f(z)-z| vs log|z| on 2 r_supp <= |z| <= L/1.5;
    // -inf when the tail is numerically zero
    double decay_exponent = -std::numeric_limits<double>::infinity();
    double tail_sup = 0.0;  // sup |f(z)-z| over |z| >= 2 r_supp
    std::size_t fit_samples = 0;
};

struct ClassFlags {
    bool hydrodynamic = false;
    bool regular_proxy = false;
    bool membership = false;  // mu(z) in M(z) at >= 99.9% of nodes
    double jacobian_positive_fraction = 0.0;
    double membership_fraction_ok = 0.0;  // fraction of nodes with mu(z) in M(z)

    bool in_class() const { return hydrodynamic && regular_proxy && membership; }
};

struct SolutionReport {
    int iterations_used = 0;
    double final_residual = 0.0;
    bool converged = false;
    double k_max = 0.0;
    double tail_residual = 0.0;
    double tail_exponent = -std::numeric_limits<double>::infinity();
    double min_interior_jacobian = 0.0;
    double jacobian_positive_fraction = 0.0;
    bool koebe_verdict = false;
    bool hydrodynamic = false;
    bool homeomorphic_proxy = false;
    bool regular_proxy = false;
    std::vector<double> increments;  // Neumann increment L2 norms, per iteration
};

/// Principal (hydrodynamically normalized) solution of f_zbar = mu f_z for a
/// compactly supported coefficient: Neumann iteration h <- mu S[h] + mu, then
/// f = z + P[h]. A sub-cell quadrature correction sharpens the Cauchy
/// evaluation near the declared support circle, where the coefficient jumps.
/// Preconditions: mu.k_max <= 0.97, support strictly inside the grid.
std::pair<MapField, SolutionReport> solve_principal(const DilatationField& mu,
                                                    const SolverConfig& cfg);

/// Koebe-inclusion shadow: (a) nodes of B(0, r0_inv) land inside B(0, 4 r0_inv);
/// (b) node images of {|z| >= r0_inv} cover a fine mesh of the annulus
/// 4 r0_inv <= |w| <= L_eff within one grid cell, where L_eff backs off the
/// grid edge by the measured identity-tail. Caller guarantees supp mu is
/// inside B(0, r0_inv). Grid must be origin-centered.
KoebeReport koebe_report(const MapField& f, double r0_inv);

/// Tail decay diagnostics of f(z) - z outside the support.
TailReport tail_report(const MapField& f, double r_supp);

/// Empirical membership in the class of regular hydrodynamic solutions with
/// mu constrained by M(z): tail decay, positive-Jacobian fraction, and
/// a.e. membership, each as a measured flag.
ClassFlags class_membership_check(const MapField& f, const DilatationField& mu,
                                  const SetConstraint& constraint);

/// Inverse of a grid-sampled injective map by triangulated barycentric
/// interpolation. Nodes of target_region outside the image hull are marked
/// missing (NaN), never fabricated.
struct InverseMap {
    MapField g;
    std::vector<std::uint8_t> valid;  // per node of g, row-major
    double round_trip_error = 0.0;    // max |g(f(z)) - z| over sampled source nodes

    bool is_valid(int i, int j) const {
        return valid[std::size_t(i) * g.field.spec.resolution + j] != 0;
    }
};

InverseMap invert_map(const MapField& f, const GridSpec& target_region);

}  // namespace blab
