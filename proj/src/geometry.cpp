#include "blab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace blab {

bool ComplexField::all_finite() const {
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

Complex ComplexField::bilinear(Complex z) const {
    const int N = spec.resolution;
    const double h = spec.spacing();
    double x = (z.real() - spec.center.real() + spec.half_width) / h - 0.5;
    double y = (z.imag() - spec.center.imag() + spec.half_width) / h - 0.5;
    int j0 = std::clamp(int(std::floor(x)), 0, N - 2);
    int i0 = std::clamp(int(std::floor(y)), 0, N - 2);
    double fx = std::clamp(x - j0, 0.0, 1.0);
    double fy = std::clamp(y - i0, 0.0, 1.0);
    return at(i0, j0) * ((1 - fx) * (1 - fy)) + at(i0, j0 + 1) * (fx * (1 - fy)) +
           at(i0 + 1, j0) * ((1 - fx) * fy) + at(i0 + 1, j0 + 1) * (fx * fy);
}

double RealField::bilinear(Complex z) const {
    const int N = spec.resolution;
    const double h = spec.spacing();
    double x = (z.real() - spec.center.real() + spec.half_width) / h - 0.5;
    double y = (z.imag() - spec.center.imag() + spec.half_width) / h - 0.5;
    int j0 = std::clamp(int(std::floor(x)), 0, N - 2);
    int i0 = std::clamp(int(std::floor(y)), 0, N - 2);
    double fx = std::clamp(x - j0, 0.0, 1.0);
    double fy = std::clamp(y - i0, 0.0, 1.0);
    return at(i0, j0) * ((1 - fx) * (1 - fy)) + at(i0, j0 + 1) * (fx * (1 - fy)) +
           at(i0 + 1, j0) * ((1 - fx) * fy) + at(i0 + 1, j0 + 1) * (fx * fy);
}

double ComplexField::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double ComplexField::l2_norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    const double h = spec.spacing();
    return std::sqrt(s * h * h);
}

double chordal_distance(const ExtendedPoint& x, const ExtendedPoint& y) {
    if (!x.is_finite() && !y.is_finite()) return 0.0;
    if (!x.is_finite()) return 1.0 / std::sqrt(1.0 + std::norm(y.value()));
    if (!y.is_finite()) return 1.0 / std::sqrt(1.0 + std::norm(x.value()));
    const Complex a = x.value(), b = y.value();
    return std::abs(a - b) / (std::sqrt(1.0 + std::norm(a)) * std::sqrt(1.0 + std::norm(b)));
}

namespace {

template <typename PointT, typename DistFn>
double diameter_impl(std::span<const PointT> pts, DistFn dist) {
    if (pts.empty()) throw precondition_error("chordal_diameter: empty point set");
    constexpr std::size_t kExactLimit = 10000;
    std::size_t stride = 1;
    if (pts.size() > kExactLimit) stride = (pts.size() + kExactLimit - 1) / kExactLimit;
    double best = 0.0;
    for (std::size_t a = 0; a < pts.size(); a += stride)
        for (std::size_t b = a + stride; b < pts.size(); b += stride)
            best = std::max(best, dist(pts[a], pts[b]));
    return best;
}

}  // namespace

double chordal_diameter(std::span<const ExtendedPoint> points) {
    return diameter_impl(points,
                         [](const ExtendedPoint& a, const ExtendedPoint& b) {
                             return chordal_distance(a, b);
                         });
}

double chordal_diameter(std::span<const Complex> points) {
    return diameter_impl(points,
                         [](Complex a, Complex b) { return chordal_distance(a, b); });
}

}  // namespace blab
