#pragma once

#include <functional>
#include <utility>

#include "blab/geometry.hpp"

namespace blab {

/// Sampled values of a candidate solution f on a grid.
struct MapField {
    ComplexField field;
    bool is_hydrodynamic = false;
    /// sup |f(z)-z| on nodes with |z-center| >= 2 r_supp, when claimed hydrodynamic.
    double tail_residual = 0.0;

    MapField() = default;
    explicit MapField(ComplexField f) : field(std::move(f)) {}
};

/// Compactly supported Beltrami coefficient on a grid.
/// Invariants (enforced by `checked`): |mu| <= k_max < 1 everywhere, mu = 0
/// outside |z - center| > support_radius, support_radius < half_width.
struct DilatationField {
    ComplexField field;
    double support_radius = 0.0;
    double k_max = 0.0;
    /// Circles |z - center| = r where the coefficient is known to jump; the
    /// solver sharpens its quadrature there. Defaults to the support circle.
    std::vector<double> jump_radii;
    /// Optional analytic evaluator, set by samplers and closed-form inputs.
    std::function<Complex(Complex)> analytic;

    static DilatationField checked(ComplexField f, double r_supp);

    /// Validate the stated invariants, throwing precondition_error on failure.
    void validate() const;
};

/// Build a coefficient field from a formula: cell-averaged samples (8x8 near
/// the declared jump circles, sub x sub elsewhere), evaluator attached.
DilatationField make_dilatation(GridSpec g, std::function<Complex(Complex)> fn, double r_supp,
                                std::vector<double> jump_radii = {}, int sub = 2);

/// Wirtinger derivatives from second-order differences (central in the
/// interior, one-sided at boundary rows/columns).
/// f_z = (f_x - i f_y)/2, f_zbar = (f_x + i f_y)/2.
std::pair<ComplexField, ComplexField> wirtinger_derivatives(const ComplexField& f);
inline std::pair<ComplexField, ComplexField> wirtinger_derivatives(const MapField& f) {
    return wirtinger_derivatives(f.field);
}

/// Pointwise |f_z|^2 - |f_zbar|^2.
RealField jacobian(const MapField& f);

/// Raw result of estimating mu_f = f_zbar/f_z from grid samples. Unlike
/// DilatationField this carries no support claim: estimates of solved maps
/// have small nonzero values everywhere.
struct DilatationEstimate {
    ComplexField mu;
    double k_max = 0.0;
    /// true when some node had |mu| >= 1 while J > 0 (should not happen).
    bool inconsistent = false;
};

/// mu = f_zbar/f_z where |f_z| > zero_tolerance, else 0.
/// Pass zero_tolerance <= 0 to use the scale-aware default 1e-12 * max|f|.
DilatationEstimate complex_dilatation(const MapField& f, double zero_tolerance = 0.0);

/// K_mu = (1+|mu|)/(1-|mu|); requires |mu| < 1.
double max_dilatation(Complex mu_value);

}  // namespace blab
