#include "blab/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace blab {

namespace {
constexpr double kPi = std::numbers::pi;

/// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double den = n * sxx - sx * sx;
    return den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}
}  // namespace

SetConstraint SetConstraint::checked(ComplexField c, RealField rho, double eps_c,
                                     double support_radius) {
    SetConstraint sc;
    sc.center = std::move(c);
    sc.radius = std::move(rho);
    sc.safety = eps_c;
    sc.support_radius = support_radius;
    sc.validate();
    return sc;
}

void SetConstraint::validate() const {
    if (!(center.spec == radius.spec))
        throw precondition_error("SetConstraint: center and radius grids differ");
    if (!(safety > 0.0)) throw precondition_error("SetConstraint: safety margin must be positive");
    const auto& g = center.spec;
    for (int i = 0; i < g.resolution; ++i)
        for (int j = 0; j < g.resolution; ++j) {
            const double q = std::abs(center.at(i, j)) + radius.at(i, j);
            if (radius.at(i, j) < 0.0)
                throw precondition_error("SetConstraint: negative radius");
            if (q > 1.0 - safety + 1e-15)
                throw precondition_error("SetConstraint: M(z) not compactly inside the disk");
            if (std::abs(g.node(i, j) - g.center) > support_radius &&
                (center.at(i, j) != Complex{} || radius.at(i, j) != 0.0))
                throw precondition_error("SetConstraint: nonzero outside declared support");
        }
}

SetConstraint SetConstraint::uniform_disk(GridSpec g, Complex c0, double rho0, double r_supp,
                                          double eps_c) {
    ComplexField c(g);
    RealField rho(g);
    for (int i = 0; i < g.resolution; ++i)
        for (int j = 0; j < g.resolution; ++j)
            if (std::abs(g.node(i, j) - g.center) <= r_supp) {
                c.at(i, j) = c0;
                rho.at(i, j) = rho0;
            }
    return checked(std::move(c), std::move(rho), eps_c, r_supp);
}

QProfile QProfile::checked(RealField q) {
    for (double v : q.values)
        if (!(v >= 1.0) || !std::isfinite(v))
            throw precondition_error("QProfile: values must be finite and >= 1");
    return QProfile{std::move(q)};
}

RealField q_sup(const SetConstraint& constraint) {
    RealField q(constraint.center.spec);
    for (std::size_t k = 0; k < q.values.size(); ++k)
        q.values[k] = std::abs(constraint.center.values[k]) + constraint.radius.values[k];
    return q;
}

QProfile Q_from_q(const RealField& q) {
    RealField Q(q.spec);
    for (std::size_t k = 0; k < q.values.size(); ++k) {
        const double v = q.values[k];
        if (v >= 1.0) throw precondition_error("Q_from_q: q must stay below 1");
        Q.values[k] = (1.0 + v) / (1.0 - v);
    }
    return QProfile::checked(std::move(Q));
}

double circle_average(const QProfile& Q, Complex z0, double t) {
    const auto& g = Q.values.spec;
    const double h = g.spacing();
    if (t <= 2.0 * h) throw precondition_error("circle_average: radius below resolved scale");
    const double reach = std::abs(z0 - g.center) + t;
    if (reach > g.half_width - h)
        throw precondition_error("circle_average: circle exits the grid");
    const int m = std::max<int>(64, int(std::ceil(2.0 * kPi * t / h)));
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
        const double th = 2.0 * kPi * k / m;
        acc += Q.values.bilinear(z0 + t * Complex(std::cos(th), std::sin(th)));
    }
    return acc / m;
}

DivergenceReport divergence_check(const QProfile& Q, Complex z0, double delta0, double t_min) {
    const double h = Q.values.spec.spacing();
    if (!(0.0 < t_min && t_min < delta0))
        throw precondition_error("divergence_check: need 0 < t_min < delta0");
    if (t_min < 2.0 * h)
        throw precondition_error("divergence_check: t_min below resolved scale (2h)");

    DivergenceReport rep;
    // integrate in u = ln t with the trapezoid rule, 8 points per octave
    const int per_octave = 8;
    const int octaves = std::max(1, int(std::ceil(std::log2(delta0 / t_min))));
    std::vector<double> qs;  // q at u-nodes descending from delta0
    const int total = octaves * per_octave;
    const double du = std::log(2.0) / per_octave;
    for (int k = 0; k <= total; ++k) {
        const double t = delta0 * std::exp(-du * k);
        if (t < t_min - 1e-14) break;
        qs.push_back(circle_average(Q, z0, t));
    }
    double acc = 0.0;
    rep.tau.push_back(delta0);
    rep.integral.push_back(0.0);
    for (std::size_t k = 1; k < qs.size(); ++k) {
        acc += 0.5 * (1.0 / qs[k - 1] + 1.0 / qs[k]) * du;
        if (k % per_octave == 0 || k + 1 == qs.size()) {
            rep.tau.push_back(delta0 * std::exp(-du * double(k)));
            rep.integral.push_back(acc);
        }
    }
    if (rep.integral.size() < 4) {
        rep.verdict = DivergenceVerdict::inconclusive;
        return rep;
    }

    // last decade of tau (factor 10, or whatever the range allows)
    const double tau_last = rep.tau.back();
    std::vector<double> xs, ys, incs;
    for (std::size_t k = 0; k + 1 < rep.tau.size(); ++k) {
        if (rep.tau[k] <= 10.0 * tau_last * (1.0 + 1e-12)) {
            xs.push_back(std::log(delta0 / rep.tau[k]));
            ys.push_back(rep.integral[k]);
            incs.push_back(rep.integral[k + 1] - rep.integral[k]);
        }
    }
    xs.push_back(std::log(delta0 / tau_last));
    ys.push_back(rep.integral.back());
    rep.tail_slope = ls_slope(xs, ys);

    bool geometric = incs.size() >= 2;
    for (std::size_t k = 0; k + 1 < incs.size() && geometric; ++k)
        if (!(incs[k + 1] <= 0.8 * incs[k] + 1e-15)) geometric = false;
    if (geometric && incs.size() >= 2 && incs.back() <= 0.5 * incs.front() + 1e-15)
        rep.verdict = DivergenceVerdict::converges;
    else if (rep.tail_slope >= 0.02)
        rep.verdict = DivergenceVerdict::diverges;
    else
        rep.verdict = DivergenceVerdict::inconclusive;
    return rep;
}

FmoReport fmo_estimate(const QProfile& Q, Complex z0, std::vector<double> eps_schedule) {
    const auto& g = Q.values.spec;
    const double h = g.spacing();
    if (eps_schedule.empty()) {
        const double e0 = g.half_width / 8.0, e1 = 4.0 * h;
        if (e0 <= e1) throw precondition_error("fmo_estimate: grid too coarse for default schedule");
        for (int k = 0; k < 12; ++k)
            eps_schedule.push_back(e0 * std::pow(e1 / e0, double(k) / 11.0));
    }
    for (double e : eps_schedule)
        if (e < 4.0 * h - 1e-14)
            throw precondition_error("fmo_estimate: schedule radius below 4h");
    if (!std::is_sorted(eps_schedule.rbegin(), eps_schedule.rend()))
        throw precondition_error("fmo_estimate: schedule must be decreasing");

    FmoReport rep;
    rep.eps = eps_schedule;
    for (double e : eps_schedule) {
        if (std::abs(z0 - g.center) + e > g.half_width)
            throw precondition_error("fmo_estimate: disk exits the grid");
        double sum = 0.0;
        std::size_t cnt = 0;
        const double h2 = h * h;
        // cells whose centers fall in B(z0, e)
        const int i0 = std::max(0, int((z0.imag() - g.center.imag() + g.half_width - e) / h) - 1);
        const int i1 = std::min(g.resolution - 1,
                                int((z0.imag() - g.center.imag() + g.half_width + e) / h) + 1);
        std::vector<std::pair<int, int>> cells;
        for (int i = i0; i <= i1; ++i)
            for (int j = 0; j < g.resolution; ++j)
                if (std::abs(g.node(i, j) - z0) <= e) cells.emplace_back(i, j);
        for (auto [i, j] : cells) sum += Q.values.at(i, j);
        cnt = cells.size();
        if (cnt == 0) throw precondition_error("fmo_estimate: no cells in the smallest disk");
        const double mean = sum / double(cnt);
        double dev = 0.0;
        for (auto [i, j] : cells) dev += std::abs(Q.values.at(i, j) - mean) * h2;
        rep.mean.push_back(mean);
        rep.deviation.push_back(dev / (kPi * e * e));
    }
    const std::size_t n = rep.deviation.size();
    double limsup = 0.0;
    for (std::size_t k = n / 2; k < n; ++k) limsup = std::max(limsup, rep.deviation[k]);
    rep.limsup_estimate = limsup;

    // growth detector over the final half: monotone increase (2% slack) plus
    // at least a 2x ratio marks an empirical FMO violation
    bool increasing = true;
    for (std::size_t k = n / 2; k + 1 < n; ++k)
        if (rep.deviation[k + 1] < 0.98 * rep.deviation[k]) increasing = false;
    const double base = rep.deviation[n / 2];
    const double ratio = base > 1e-300 ? rep.deviation.back() / base
                                       : (rep.deviation.back() > 1e-300 ? 1e301 : 1.0);
    rep.consistent = !(increasing && ratio > 2.0);
    return rep;
}

double integrability_check(const QProfile& Q, Complex z0, double radius) {
    const auto& g = Q.values.spec;
    const double h = g.spacing();
    if (radius > 0.0 && std::abs(z0 - g.center) + radius > g.half_width + h)
        throw precondition_error("integrability_check: region exits the grid");
    double acc = 0.0;
    for (int i = 0; i < g.resolution; ++i)
        for (int j = 0; j < g.resolution; ++j)
            if (radius <= 0.0 || std::abs(g.node(i, j) - z0) <= radius)
                acc += Q.values.at(i, j);
    return acc * h * h;
}

MembershipReport membership_ae(const ComplexField& mu, const SetConstraint& constraint) {
    if (!(mu.spec == constraint.center.spec))
        throw precondition_error("membership_ae: grid mismatch");
    std::size_t bad = 0;
    for (std::size_t k = 0; k < mu.values.size(); ++k)
        if (std::abs(mu.values[k] - constraint.center.values[k]) >
            constraint.radius.values[k] + 1e-12)
            ++bad;
    MembershipReport rep;
    rep.violating_fraction = double(bad) / double(mu.values.size());
    rep.verdict = rep.violating_fraction <= 1e-3;
    return rep;
}

}  // namespace blab
