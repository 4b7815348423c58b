#include "blab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

namespace blab {

namespace {

constexpr double kPi = std::numbers::pi;

struct CutCell {
    int i, j;
    Complex center;
};

/// Cells whose square intersects the circle |z - c| = r.
std::vector<CutCell> find_cut_cells(const GridSpec& g, double r) {
    std::vector<CutCell> out;
    const double half_diag = g.spacing() * std::numbers::sqrt2 / 2.0;
    for (int i = 0; i < g.resolution; ++i)
        for (int j = 0; j < g.resolution; ++j) {
            const double d = std::abs(g.node(i, j) - g.center);
            if (std::abs(d - r) <= half_diag) out.push_back({i, j, g.node(i, j)});
        }
    return out;
}

/// Sub-cell Cauchy correction near a declared jump circle. The discrete P
/// uses one cell-averaged value per cell; across the circle the density
/// jumps, so cut cells are re-quadratured with mm x mm subcells. Subcell
/// values come from side-respecting linear reconstructions anchored 1.6h
/// radially away from the circle.
void subcell_cauchy_correction(ComplexField& f, const ComplexField& h_field, double r_jump,
                               int mm = 8, double window_cells = 24.0,
                               double source_radius_cells = 32.0) {
    const GridSpec& g = h_field.spec;
    const int N = g.resolution;
    const double h = g.spacing();
    const Complex c = g.center;
    auto cut = find_cut_cells(g, r_jump);
    if (cut.empty()) return;

    struct Recon {
        Complex anchor;
        Complex value, gx, gy;
    };
    auto make_recon = [&](Complex cell_center, double radial) {
        const Complex dir = cell_center - c;
        const double ad = std::abs(dir);
        const Complex p = c + (ad > 0 ? dir * (radial / ad) : Complex(radial, 0.0));
        int i = std::clamp(int(std::lround((p.imag() - c.imag() + g.half_width) / h - 0.5)), 1,
                           N - 2);
        int j = std::clamp(int(std::lround((p.real() - c.real() + g.half_width) / h - 0.5)), 1,
                           N - 2);
        Recon r;
        r.anchor = g.node(i, j);
        r.value = h_field.at(i, j);
        r.gx = (h_field.at(i, j + 1) - h_field.at(i, j - 1)) / (2 * h);
        r.gy = (h_field.at(i + 1, j) - h_field.at(i - 1, j)) / (2 * h);
        return r;
    };
    std::vector<Recon> rec_in(cut.size()), rec_out(cut.size());
    for (std::size_t k = 0; k < cut.size(); ++k) {
        rec_in[k] = make_recon(cut[k].center, r_jump - 1.6 * h);
        rec_out[k] = make_recon(cut[k].center, r_jump + 1.6 * h);
    }

    const double s_sub = h / (2.0 * mm);
    const double sub_area = (h / mm) * (h / mm);
    std::vector<Complex> sub_off(std::size_t(mm) * mm);
    for (int a = 0; a < mm; ++a)
        for (int b = 0; b < mm; ++b)
            sub_off[std::size_t(a) * mm + b] =
                Complex((-0.5 + (b + 0.5) / mm) * h, (-0.5 + (a + 0.5) / mm) * h);

    const double window = window_cells * h;
    const double rwin = source_radius_cells * h;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const Complex tz = g.node(i, j);
            if (std::abs(std::abs(tz - c) - r_jump) >= window) continue;
            Complex corr{};
            for (std::size_t k = 0; k < cut.size(); ++k) {
                const Complex dcc = cut[k].center - tz;
                if (std::abs(dcc) > rwin) continue;
                // remove the coarse contribution this cell made through the FFT
                corr -= cauchy_cell_weight(dcc, h / 2) * h_field.at(cut[k].i, cut[k].j);
                for (const Complex& off : sub_off) {
                    const Complex q = cut[k].center + off;
                    const bool inside = std::abs(q - c) < r_jump;
                    const Recon& r = inside ? rec_in[k] : rec_out[k];
                    const Complex d = q - r.anchor;
                    const Complex val = r.value + r.gx * d.real() + r.gy * d.imag();
                    if (val == Complex{}) continue;
                    const Complex dq = q - tz;
                    const Complex w = (std::abs(dq) > 1.5 * h)
                                          ? -(1.0 / kPi) * sub_area / dq
                                          : cauchy_cell_weight(dq, s_sub);
                    corr += w * val;
                }
            }
            f.at(i, j) += corr;
        }
}

/// Quantized-bucket injectivity proxy: no two image samples within tol.
bool samples_distinct(const ComplexField& f, double tol) {
    struct KeyHash {
        std::size_t operator()(const std::pair<long long, long long>& k) const {
            return std::hash<long long>()(k.first * 1000003LL + k.second);
        }
    };
    std::unordered_map<std::pair<long long, long long>, std::vector<std::size_t>, KeyHash> buckets;
    buckets.reserve(f.values.size());
    const double inv = 1.0 / tol;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const Complex v = f.values[k];
        buckets[{llround(v.real() * inv), llround(v.imag() * inv)}].push_back(k);
    }
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const Complex v = f.values[k];
        const long long bi = llround(v.real() * inv), bj = llround(v.imag() * inv);
        for (long long di = -1; di <= 1; ++di)
            for (long long dj = -1; dj <= 1; ++dj) {
                auto it = buckets.find({bi + di, bj + dj});
                if (it == buckets.end()) continue;
                for (std::size_t other : it->second)
                    if (other != k && std::abs(f.values[other] - v) < tol) return false;
            }
    }
    return true;
}

}  // namespace

std::pair<MapField, SolutionReport> solve_principal(const DilatationField& mu,
                                                    const SolverConfig& cfg) {
    cfg.validate();
    mu.validate();
    if (mu.k_max > 0.97)
        throw precondition_error("solve_principal: k_max above the 0.97 safety cap");
    const TransformPlan& plan = *cfg.plan;
    if (!(plan.spec() == mu.field.spec))
        throw precondition_error("solve_principal: plan grid does not match coefficient");

    const GridSpec& g = mu.field.spec;
    SolutionReport rep;
    rep.k_max = mu.k_max;

    ComplexField h_n = mu.field;  // h_0 = mu
    double inc = 0.0;
    bool converged = false;
    int used = 0;
    const bool trivial = (mu.field.max_abs() == 0.0);
    if (trivial) {
        converged = true;
        used = 1;
        rep.increments.push_back(0.0);
    } else {
        for (int it = 0; it < cfg.max_iterations; ++it) {
            ComplexField s = plan.beurling(h_n);
            ComplexField h_next(g);
            for (std::size_t k = 0; k < h_next.values.size(); ++k)
                h_next.values[k] = mu.field.values[k] * s.values[k] + mu.field.values[k];
            ComplexField diff(g);
            for (std::size_t k = 0; k < diff.values.size(); ++k)
                diff.values[k] = h_next.values[k] - h_n.values[k];
            inc = diff.l2_norm();
            rep.increments.push_back(inc);
            h_n = std::move(h_next);
            used = it + 1;
            if (inc <= cfg.residual_tol) {
                converged = true;
                break;
            }
        }
    }
    rep.iterations_used = used;
    rep.final_residual = inc;
    rep.converged = converged;
    if (!converged)
        throw convergence_error("solve_principal: no convergence within max_iterations", inc);

    MapField f;
    if (trivial) {
        f.field = ComplexField::sampled(g, [](Complex z) { return z; });
    } else {
        f.field = plan.cauchy(h_n);
        for (int i = 0; i < g.resolution; ++i)
            for (int j = 0; j < g.resolution; ++j) f.field.at(i, j) += g.node(i, j);
        subcell_cauchy_correction(f.field, h_n, mu.support_radius);
    }
    f.is_hydrodynamic = true;

    TailReport tail = tail_report(f, mu.support_radius);
    rep.tail_residual = tail.tail_sup;
    rep.tail_exponent = tail.decay_exponent;
    f.tail_residual = tail.tail_sup;

    RealField J = jacobian(f);
    const int N = g.resolution;
    double minJ = std::numeric_limits<double>::infinity();
    std::size_t pos = 0, interior = 0;
    for (int i = 1; i < N - 1; ++i)
        for (int j = 1; j < N - 1; ++j) {
            ++interior;
            minJ = std::min(minJ, J.at(i, j));
            if (J.at(i, j) > 0.0) ++pos;
        }
    rep.min_interior_jacobian = minJ;
    rep.jacobian_positive_fraction = double(pos) / double(interior);
    rep.regular_proxy = rep.jacobian_positive_fraction >= 0.99;

    rep.hydrodynamic =
        tail.tail_sup <= 0.25 * std::max(mu.support_radius, g.spacing()) &&
        (tail.decay_exponent <= -0.5 || tail.tail_sup <= 1e-10);
    rep.homeomorphic_proxy =
        rep.regular_proxy && samples_distinct(f.field, 1e-9 * std::max(1.0, f.field.max_abs()));

    if (g.center == Complex{}) {
        rep.koebe_verdict = koebe_report(f, mu.support_radius).verdict;
    }
    return {std::move(f), rep};
}

KoebeReport koebe_report(const MapField& f, double r0_inv) {
    const GridSpec& g = f.field.spec;
    if (g.center != Complex{})
        throw precondition_error("koebe_report: grid must be centered at the origin");
    if (!(r0_inv > 0.0) || r0_inv >= g.half_width)
        throw precondition_error("koebe_report: r0_inv must lie inside the grid");
    const int N = g.resolution;
    const double h = g.spacing();
    KoebeReport rep;

    // (a) inclusion
    double worst = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const Complex z = g.node(i, j);
            if (std::abs(z) < r0_inv)
                worst = std::max(worst, std::abs(f.field.at(i, j)) / (4.0 * r0_inv));
        }
    rep.worst_inclusion_ratio = worst;
    rep.inclusion_ok = worst < 1.0;

    // (b) coverage: bucket image points of {|z| >= r0_inv}
    double band_tail = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const Complex z = g.node(i, j);
            if (std::abs(z) >= 0.9 * g.half_width)
                band_tail = std::max(band_tail, std::abs(f.field.at(i, j) - z));
        }
    const double outer = g.half_width - 2.0 * h - band_tail;
    rep.coverage_outer_radius = outer;
    const double inner = 4.0 * r0_inv;
    if (inner >= outer) {
        // no representable annulus at this grid; inclusion alone decides
        rep.coverage_ok = true;
        rep.verdict = rep.inclusion_ok;
        return rep;
    }

    struct KeyHash {
        std::size_t operator()(const std::pair<int, int>& k) const {
            return std::hash<long long>()((long long)k.first * 1000003LL + k.second);
        }
    };
    std::unordered_map<std::pair<int, int>, std::vector<Complex>, KeyHash> buckets;
    auto bucket_of = [&](Complex w) {
        return std::pair<int, int>(int(std::floor(w.real() / h)), int(std::floor(w.imag() / h)));
    };
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const Complex z = g.node(i, j);
            if (std::abs(z) >= r0_inv) buckets[bucket_of(f.field.at(i, j))].push_back(f.field.at(i, j));
        }

    const double tol = std::numbers::sqrt2 * h;
    const double step = 1.5 * h;
    double max_gap = 0.0;
    std::size_t mesh = 0;
    for (double r = inner; r <= outer; r += step) {
        const int m = std::max(16, int(std::ceil(2.0 * kPi * r / step)));
        for (int k = 0; k < m; ++k) {
            const double th = 2.0 * kPi * k / m;
            const Complex w(r * std::cos(th), r * std::sin(th));
            ++mesh;
            double best = std::numeric_limits<double>::infinity();
            auto [bi, bj] = bucket_of(w);
            for (int di = -2; di <= 2; ++di)
                for (int dj = -2; dj <= 2; ++dj) {
                    auto it = buckets.find({bi + di, bj + dj});
                    if (it == buckets.end()) continue;
                    for (const Complex& p : it->second)
                        best = std::min(best, std::abs(p - w));
                }
            max_gap = std::max(max_gap, best);
            if (max_gap > tol && !std::isfinite(best)) {
                // hard miss: no image sample anywhere near this mesh point
                rep.max_coverage_gap = std::numeric_limits<double>::infinity();
                rep.coverage_ok = false;
                rep.mesh_points = mesh;
                rep.verdict = false;
                return rep;
            }
        }
    }
    rep.mesh_points = mesh;
    rep.max_coverage_gap = max_gap;
    rep.coverage_ok = max_gap <= tol;
    rep.verdict = rep.inclusion_ok && rep.coverage_ok;
    return rep;
}

TailReport tail_report(const MapField& f, double r_supp) {
    const GridSpec& g = f.field.spec;
    if (g.half_width < 4.0 * r_supp)
        throw precondition_error("tail_report: grid must extend to 4 r_supp");
    const Complex c = g.center;
    TailReport rep;
    std::vector<double> xs, ys;
    const double fit_lo = 2.0 * r_supp, fit_hi = g.half_width / 1.5;
    double scale = std::max(1.0, f.field.max_abs());
    for (int i = 0; i < g.resolution; ++i)
        for (int j = 0; j < g.resolution; ++j) {
            const Complex z = g.node(i, j);
            const double r = std::abs(z - c);
            if (r < fit_lo) continue;
            const double t = std::abs(f.field.at(i, j) - z);
            rep.tail_sup = std::max(rep.tail_sup, t);
            if (r <= fit_hi && t > 1e-14 * scale) {
                xs.push_back(std::log(r));
                ys.push_back(std::log(t));
            }
        }
    if (xs.empty()) return rep;  // exact identity tail: -inf sentinel stands
    rep.fit_samples = xs.size();
    if (xs.size() < 8)
        throw precondition_error("tail_report: insufficient annulus samples for the fit");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
    }
    const double den = double(xs.size()) * sxx - sx * sx;
    rep.decay_exponent = den != 0.0 ? (double(xs.size()) * sxy - sx * sy) / den : 0.0;
    return rep;
}

ClassFlags class_membership_check(const MapField& f, const DilatationField& mu,
                                  const SetConstraint& constraint) {
    ClassFlags flags;
    TailReport tail = tail_report(f, mu.support_radius);
    flags.hydrodynamic =
        tail.tail_sup <= 0.25 * std::max(mu.support_radius, f.field.spec.spacing()) &&
        (tail.decay_exponent <= -0.5 || tail.tail_sup <= 1e-10);

    RealField J = jacobian(f);
    const int N = f.field.spec.resolution;
    std::size_t pos = 0, interior = 0;
    for (int i = 1; i < N - 1; ++i)
        for (int j = 1; j < N - 1; ++j) {
            ++interior;
            if (J.at(i, j) > 0.0) ++pos;
        }
    flags.jacobian_positive_fraction = double(pos) / double(interior);

    MembershipReport mem = membership_ae(mu.field, constraint);
    flags.membership_fraction_ok = 1.0 - mem.violating_fraction;
    flags.membership = mem.verdict;
    flags.regular_proxy = flags.jacobian_positive_fraction >= 0.99;
    return flags;
}

}  // namespace blab
