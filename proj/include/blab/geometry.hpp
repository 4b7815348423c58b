#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace blab {

using Complex = std::complex<double>;

/// Thrown when an input violates an operation's stated precondition.
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an iterative method fails to reach its tolerance.
struct convergence_error : std::runtime_error {
    double last_residual = 0.0;
    convergence_error(const std::string& msg, double residual)
        : std::runtime_error(msg), last_residual(residual) {}
};

/// Square cell-centered grid covering [center-L, center+L]^2 with N x N nodes.
/// Node (i,j) sits at center + (-L + (j+0.5)h, -L + (i+0.5)h), h = 2L/N.
/// Rows follow the imaginary axis, columns the real axis; storage is row-major.
struct GridSpec {
    Complex center{0.0, 0.0};
    double half_width = 0.0;
    int resolution = 0;

    GridSpec() = default;
    GridSpec(Complex c, double L, int N) : center(c), half_width(L), resolution(N) {
        if (N < 16 || N % 2 != 0)
            throw precondition_error("GridSpec: resolution must be even and >= 16");
        if (!(L > 0.0)) throw precondition_error("GridSpec: half_width must be positive");
    }

    double spacing() const { return 2.0 * half_width / resolution; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
    }
    Complex node(int i, int j) const {
        const double h = spacing();
        return center + Complex(-half_width + (j + 0.5) * h, -half_width + (i + 0.5) * h);
    }
    bool operator==(const GridSpec& o) const {
        return center == o.center && half_width == o.half_width && resolution == o.resolution;
    }
};

/// N x N complex samples on a GridSpec, row-major.
struct ComplexField {
    GridSpec spec;
    std::vector<Complex> values;

    ComplexField() = default;
    explicit ComplexField(GridSpec g) : spec(g), values(g.node_count(), Complex{}) {}
    ComplexField(GridSpec g, std::vector<Complex> v) : spec(g), values(std::move(v)) {
        if (values.size() != spec.node_count())
            throw precondition_error("ComplexField: sample count does not match grid");
    }

    Complex& at(int i, int j) { return values[std::size_t(i) * spec.resolution + j]; }
    const Complex& at(int i, int j) const {
        return values[std::size_t(i) * spec.resolution + j];
    }
    int n() const { return spec.resolution; }

    /// Construct by evaluating fn at every node.
    template <typename Fn>
    static ComplexField sampled(GridSpec g, Fn&& fn) {
        ComplexField f(g);
        for (int i = 0; i < g.resolution; ++i)
            for (int j = 0; j < g.resolution; ++j) f.at(i, j) = fn(g.node(i, j));
        return f;
    }

    /// Construct by cell-averaging fn with sub x sub midpoint subsamples per cell.
    template <typename Fn>
    static ComplexField cell_averaged(GridSpec g, Fn&& fn, int sub) {
        ComplexField f(g);
        const double h = g.spacing();
        for (int i = 0; i < g.resolution; ++i)
            for (int j = 0; j < g.resolution; ++j) {
                Complex acc{};
                for (int a = 0; a < sub; ++a)
                    for (int b = 0; b < sub; ++b) {
                        Complex dz{(-0.5 + (b + 0.5) / sub) * h, (-0.5 + (a + 0.5) / sub) * h};
                        acc += fn(g.node(i, j) + dz);
                    }
                f.at(i, j) = acc / double(sub * sub);
            }
        return f;
    }

    bool all_finite() const;
    /// Bilinear interpolation at an arbitrary point inside the grid hull.
    Complex bilinear(Complex z) const;
    double max_abs() const;
    /// Discrete L2 norm: sqrt(sum |v|^2 h^2).
    double l2_norm() const;
};

/// Real scalar samples on a GridSpec (Q profiles, radius fields, Jacobians).
struct RealField {
    GridSpec spec;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(GridSpec g) : spec(g), values(g.node_count(), 0.0) {}
    RealField(GridSpec g, std::vector<double> v) : spec(g), values(std::move(v)) {
        if (values.size() != spec.node_count())
            throw precondition_error("RealField: sample count does not match grid");
    }
    double& at(int i, int j) { return values[std::size_t(i) * spec.resolution + j]; }
    const double& at(int i, int j) const {
        return values[std::size_t(i) * spec.resolution + j];
    }
    int n() const { return spec.resolution; }

    template <typename Fn>
    static RealField sampled(GridSpec g, Fn&& fn) {
        RealField f(g);
        for (int i = 0; i < g.resolution; ++i)
            for (int j = 0; j < g.resolution; ++j) f.at(i, j) = fn(g.node(i, j));
        return f;
    }
    double bilinear(Complex z) const;
};

/// Point of the extended plane: finite value or the point at infinity.
class ExtendedPoint {
  public:
    ExtendedPoint() : finite_(true), value_(0.0, 0.0) {}
    ExtendedPoint(Complex v) : finite_(true), value_(v) {}
    static ExtendedPoint infinity() {
        ExtendedPoint p;
        p.finite_ = false;
        return p;
    }
    bool is_finite() const { return finite_; }
    Complex value() const {
        if (!finite_) throw std::logic_error("ExtendedPoint: infinity has no finite value");
        return value_;
    }

  private:
    bool finite_;
    Complex value_;
};

/// Chordal (spherical) distance on the extended plane; range [0, 1].
double chordal_distance(const ExtendedPoint& x, const ExtendedPoint& y);
inline double chordal_distance(Complex x, Complex y) {
    return chordal_distance(ExtendedPoint(x), ExtendedPoint(y));
}

/// Chordal diameter sup h(x,y) of a finite point set. Exact pairwise max up to
/// 10^4 points, uniform subsampling above. Empty input is an error.
double chordal_diameter(std::span<const ExtendedPoint> points);
double chordal_diameter(std::span<const Complex> points);

}  // namespace blab
