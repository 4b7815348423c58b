#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "blab/solver.hpp"

namespace blab {

namespace {

struct Tri {
    // source-grid node indices (flattened) of the three vertices
    std::array<std::uint32_t, 3> v;
};

struct BucketGrid {
    double x0, y0, cell;
    int nx, ny;
    std::vector<std::vector<std::uint32_t>> tris;

    int index(double x, double y) const {
        int bx = std::clamp(int((x - x0) / cell), 0, nx - 1);
        int by = std::clamp(int((y - y0) / cell), 0, ny - 1);
        return by * nx + bx;
    }
};

bool barycentric(Complex p, Complex a, Complex b, Complex c, double& l1, double& l2, double& l3) {
    const double d = (b.real() - a.real()) * (c.imag() - a.imag()) -
                     (c.real() - a.real()) * (b.imag() - a.imag());
    if (d == 0.0) return false;
    l2 = ((p.real() - a.real()) * (c.imag() - a.imag()) -
          (c.real() - a.real()) * (p.imag() - a.imag())) /
         d;
    l3 = ((b.real() - a.real()) * (p.imag() - a.imag()) -
          (p.real() - a.real()) * (b.imag() - a.imag())) /
         d;
    l1 = 1.0 - l2 - l3;
    const double eps = -1e-10;
    return l1 >= eps && l2 >= eps && l3 >= eps;
}

}  // namespace

InverseMap invert_map(const MapField& f, const GridSpec& target_region) {
    const GridSpec& g = f.field.spec;
    const int N = g.resolution;

    // two triangles per quad of the deformed source lattice
    std::vector<Tri> tris;
    tris.reserve(std::size_t(N - 1) * (N - 1) * 2);
    auto id = [N](int i, int j) { return std::uint32_t(i * N + j); };
    for (int i = 0; i + 1 < N; ++i)
        for (int j = 0; j + 1 < N; ++j) {
            tris.push_back({{id(i, j), id(i, j + 1), id(i + 1, j)}});
            tris.push_back({{id(i, j + 1), id(i + 1, j + 1), id(i + 1, j)}});
        }

    // bucket triangles by image-space bounding boxes
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Complex& w : f.field.values) {
        xmin = std::min(xmin, w.real());
        xmax = std::max(xmax, w.real());
        ymin = std::min(ymin, w.imag());
        ymax = std::max(ymax, w.imag());
    }
    BucketGrid bg;
    bg.cell = 2.0 * g.spacing();
    bg.x0 = xmin;
    bg.y0 = ymin;
    bg.nx = std::max(1, int((xmax - xmin) / bg.cell) + 1);
    bg.ny = std::max(1, int((ymax - ymin) / bg.cell) + 1);
    bg.tris.resize(std::size_t(bg.nx) * bg.ny);
    for (std::uint32_t t = 0; t < tris.size(); ++t) {
        double txmin = xmax, txmax = xmin, tymin = ymax, tymax = ymin;
        for (auto vi : tris[t].v) {
            const Complex w = f.field.values[vi];
            txmin = std::min(txmin, w.real());
            txmax = std::max(txmax, w.real());
            tymin = std::min(tymin, w.imag());
            tymax = std::max(tymax, w.imag());
        }
        const int bx0 = std::clamp(int((txmin - bg.x0) / bg.cell), 0, bg.nx - 1);
        const int bx1 = std::clamp(int((txmax - bg.x0) / bg.cell), 0, bg.nx - 1);
        const int by0 = std::clamp(int((tymin - bg.y0) / bg.cell), 0, bg.ny - 1);
        const int by1 = std::clamp(int((tymax - bg.y0) / bg.cell), 0, bg.ny - 1);
        for (int by = by0; by <= by1; ++by)
            for (int bx = bx0; bx <= bx1; ++bx)
                bg.tris[std::size_t(by) * bg.nx + bx].push_back(t);
    }

    auto locate = [&](Complex w, Complex& out) -> bool {
        if (w.real() < xmin || w.real() > xmax || w.imag() < ymin || w.imag() > ymax) return false;
        for (std::uint32_t t : bg.tris[bg.index(w.real(), w.imag())]) {
            const Complex a = f.field.values[tris[t].v[0]];
            const Complex b = f.field.values[tris[t].v[1]];
            const Complex cc = f.field.values[tris[t].v[2]];
            double l1, l2, l3;
            if (barycentric(w, a, b, cc, l1, l2, l3)) {
                auto src = [&](std::uint32_t vi) {
                    return g.node(int(vi) / N, int(vi) % N);
                };
                out = l1 * src(tris[t].v[0]) + l2 * src(tris[t].v[1]) + l3 * src(tris[t].v[2]);
                return true;
            }
        }
        return false;
    };

    InverseMap inv;
    inv.g.field = ComplexField(target_region);
    inv.valid.assign(target_region.node_count(), 0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < target_region.resolution; ++i)
        for (int j = 0; j < target_region.resolution; ++j) {
            Complex out;
            if (locate(target_region.node(i, j), out)) {
                inv.g.field.at(i, j) = out;
                inv.valid[std::size_t(i) * target_region.resolution + j] = 1;
            } else {
                inv.g.field.at(i, j) = Complex(nan, nan);
            }
        }

    // round trip g(f(z)) ~ z over a coarse sample of source nodes
    double rt = 0.0;
    const int stride = std::max(1, N / 64);
    for (int i = stride; i < N - stride; i += stride)
        for (int j = stride; j < N - stride; j += stride) {
            Complex back;
            if (locate(f.field.at(i, j), back)) rt = std::max(rt, std::abs(back - g.node(i, j)));
        }
    inv.round_trip_error = rt;
    return inv;
}

}  // namespace blab
