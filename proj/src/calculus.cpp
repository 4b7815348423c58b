#include "blab/calculus.hpp"

#include <cmath>

namespace blab {

DilatationField DilatationField::checked(ComplexField f, double r_supp) {
    DilatationField d;
    d.field = std::move(f);
    d.support_radius = r_supp;
    double km = 0.0;
    for (const auto& v : d.field.values) km = std::max(km, std::abs(v));
    d.k_max = km;
    d.validate();
    return d;
}

void DilatationField::validate() const {
    const auto& g = field.spec;
    if (!(support_radius > 0.0) || support_radius >= g.half_width)
        throw precondition_error("DilatationField: support must be strictly inside the grid");
    if (k_max >= 1.0)
        throw precondition_error("DilatationField: sup |mu| must be below 1");
    if (!field.all_finite())
        throw precondition_error("DilatationField: non-finite samples");
    for (int i = 0; i < g.resolution; ++i)
        for (int j = 0; j < g.resolution; ++j) {
            const Complex v = field.at(i, j);
            if (std::abs(v) > k_max + 1e-15)
                throw precondition_error("DilatationField: node exceeds declared k_max");
            if (std::abs(g.node(i, j) - g.center) > support_radius && v != Complex{})
                throw precondition_error("DilatationField: nonzero outside declared support");
        }
}

DilatationField make_dilatation(GridSpec g, std::function<Complex(Complex)> fn, double r_supp,
                                std::vector<double> jump_radii, int sub) {
    if (jump_radii.empty()) jump_radii.push_back(r_supp);
    const double h = g.spacing();
    const double half_diag = h * 0.7072;
    ComplexField f(g);
    for (int i = 0; i < g.resolution; ++i)
        for (int j = 0; j < g.resolution; ++j) {
            const Complex z = g.node(i, j);
            const double d = std::abs(z - g.center);
            int nsub = sub;
            for (double r : jump_radii)
                if (std::abs(d - r) <= half_diag) nsub = 8;
            Complex acc{};
            for (int a = 0; a < nsub; ++a)
                for (int b = 0; b < nsub; ++b)
                    acc += fn(z + Complex((-0.5 + (b + 0.5) / nsub) * h,
                                          (-0.5 + (a + 0.5) / nsub) * h));
            f.at(i, j) = acc / double(nsub * nsub);
            if (d > r_supp) f.at(i, j) = Complex{};  // keep the support claim exact
        }
    DilatationField out = DilatationField::checked(std::move(f), r_supp);
    out.jump_radii = std::move(jump_radii);
    out.analytic = std::move(fn);
    return out;
}

std::pair<ComplexField, ComplexField> wirtinger_derivatives(const ComplexField& f) {
    const int N = f.spec.resolution;
    if (N < 16) throw precondition_error("wirtinger_derivatives: resolution below 16");
    const double h = f.spec.spacing();
    ComplexField fz(f.spec), fzb(f.spec);
    auto dx = [&](int i, int j) -> Complex {
        if (j == 0) return (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) / (2 * h);
        if (j == N - 1)
            return (3.0 * f.at(i, N - 1) - 4.0 * f.at(i, N - 2) + f.at(i, N - 3)) / (2 * h);
        return (f.at(i, j + 1) - f.at(i, j - 1)) / (2 * h);
    };
    auto dy = [&](int i, int j) -> Complex {
        if (i == 0) return (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) / (2 * h);
        if (i == N - 1)
            return (3.0 * f.at(N - 1, j) - 4.0 * f.at(N - 2, j) + f.at(N - 3, j)) / (2 * h);
        return (f.at(i + 1, j) - f.at(i - 1, j)) / (2 * h);
    };
    const Complex I{0.0, 1.0};
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const Complex fx = dx(i, j), fy = dy(i, j);
            fz.at(i, j) = (fx - I * fy) * 0.5;
            fzb.at(i, j) = (fx + I * fy) * 0.5;
        }
    return {std::move(fz), std::move(fzb)};
}

RealField jacobian(const MapField& f) {
    auto [fz, fzb] = wirtinger_derivatives(f.field);
    RealField J(f.field.spec);
    for (std::size_t k = 0; k < J.values.size(); ++k)
        J.values[k] = std::norm(fz.values[k]) - std::norm(fzb.values[k]);
    return J;
}

DilatationEstimate complex_dilatation(const MapField& f, double zero_tolerance) {
    auto [fz, fzb] = wirtinger_derivatives(f.field);
    if (zero_tolerance <= 0.0) zero_tolerance = 1e-12 * f.field.max_abs();
    DilatationEstimate est;
    est.mu = ComplexField(f.field.spec);
    for (std::size_t k = 0; k < est.mu.values.size(); ++k) {
        const Complex a = fz.values[k], b = fzb.values[k];
        if (std::abs(a) > zero_tolerance) {
            const Complex m = b / a;
            est.mu.values[k] = m;
            const double am = std::abs(m);
            est.k_max = std::max(est.k_max, am);
            if (am >= 1.0 && std::norm(a) - std::norm(b) > 0.0) est.inconsistent = true;
        }
    }
    return est;
}

double max_dilatation(Complex mu_value) {
    const double a = std::abs(mu_value);
    if (a >= 1.0) throw precondition_error("max_dilatation: |mu| must be below 1");
    return (1.0 + a) / (1.0 - a);
}

}  // namespace blab
