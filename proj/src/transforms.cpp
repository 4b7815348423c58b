#include "blab/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <vector>

namespace blab {

namespace {

std::mutex g_fftw_mutex;  // fftw plan creation/destruction is not thread-safe

// int_{y0}^{y1} ln(t^2 + y^2) dy
double log_integral(double t, double y0, double y1) {
    auto F = [t](double y) {
        const double r2 = t * t + y * y;
        double v = (r2 > 0.0) ? y * std::log(r2) : 0.0;
        v -= 2.0 * y;
        if (t != 0.0) v += 2.0 * t * std::atan(y / t);
        return v;
    };
    return F(y1) - F(y0);
}

struct FftBuffer {
    fftw_complex* p = nullptr;
    explicit FftBuffer(std::size_t n) {
        p = fftw_alloc_complex(n);
        if (!p) throw std::bad_alloc();
    }
    ~FftBuffer() { fftw_free(p); }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;
    Complex* c() { return reinterpret_cast<Complex*>(p); }
};

}  // namespace

Complex cauchy_cell_weight(Complex delta, double s) {
    const double a = delta.real() - s, b = delta.real() + s;
    const double c = delta.imag() - s, d = delta.imag() + s;
    const double A = 0.5 * (log_integral(b, c, d) - log_integral(a, c, d));
    const double B = 0.5 * (log_integral(d, a, b) - log_integral(c, a, b));
    return -(1.0 / M_PI) * Complex(A, -B);
}

struct TransformPlan::Impl {
    int M = 0;
    fftw_plan fwd = nullptr, bwd = nullptr;
    std::vector<Complex> cauchy_kernel_hat;   // FFT of w(-delta) on the padded torus
    std::vector<Complex> beurling_multiplier; // conj(xi)/xi, 0 at xi = 0

    ~Impl() {
        std::lock_guard<std::mutex> lk(g_fftw_mutex);
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

TransformPlan::TransformPlan(GridSpec spec, int pad_factor)
    : spec_(spec), pad_(pad_factor), impl_(std::make_unique<Impl>()) {
    if (pad_ < 2) throw precondition_error("TransformPlan: pad_factor must be >= 2");
    const int N = spec_.resolution;
    const int M = pad_ * N;
    if (M % 2 != 0) throw precondition_error("TransformPlan: padded size must be even");
    impl_->M = M;
    const double h = spec_.spacing();
    const std::size_t MM = std::size_t(M) * M;

    FftBuffer in(MM), out(MM);
    {
        std::lock_guard<std::mutex> lk(g_fftw_mutex);
        impl_->fwd = fftw_plan_dft_2d(M, M, in.p, out.p, FFTW_FORWARD, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_2d(M, M, in.p, out.p, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("TransformPlan: fftw plan failed");
    }

    // Cauchy kernel: K[d mod M] = w(-d), d in [-(N-1), N-1]^2. The 8-fold
    // dihedral symmetry of the cell integral is exploited through oddness and
    // conjugation: w(-d) = -w(d), w(conj d) = conj(w(d)).
    Complex* kin = in.c();
    std::fill(kin, kin + MM, Complex{});
    const double s = h / 2;
    for (int di = 0; di <= N - 1; ++di) {
        for (int dj = -(N - 1); dj <= N - 1; ++dj) {
            if (di == 0 && dj < 0) continue;
            const Complex delta(dj * h, di * h);
            const Complex w = (di == 0 && dj == 0) ? Complex{} : cauchy_cell_weight(delta, s);
            auto put = [&](int pi, int pj, Complex v) {
                kin[std::size_t((pi % M + M) % M) * M + ((pj % M + M) % M)] = v;
            };
            // K[d] = w(-d) = -w(d); K[-d] = w(d); mirrored rows via conjugation
            put(di, dj, -w);
            if (di != 0 || dj != 0) put(-di, -dj, w);
            if (di != 0) {
                put(-di, dj, -std::conj(w));
                put(di, -dj, std::conj(w));
            }
        }
    }
    impl_->cauchy_kernel_hat.resize(MM);
    fftw_execute_dft(impl_->fwd, in.p, out.p);
    std::copy(out.c(), out.c() + MM, impl_->cauchy_kernel_hat.begin());

    impl_->beurling_multiplier.resize(MM);
    for (int ky = 0; ky < M; ++ky) {
        const double fy = (ky <= M / 2) ? ky : ky - M;
        for (int kx = 0; kx < M; ++kx) {
            const double fx = (kx <= M / 2) ? kx : kx - M;
            Complex xi(fx, fy);
            impl_->beurling_multiplier[std::size_t(ky) * M + kx] =
                (kx == 0 && ky == 0) ? Complex{} : std::conj(xi) / xi;
        }
    }
}

TransformPlan::~TransformPlan() = default;

void TransformPlan::check_input(const ComplexField& h) const {
    if (!(h.spec == spec_)) throw precondition_error("transform: field grid does not match plan");
    const int N = spec_.resolution;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if ((i < 2 || i >= N - 2 || j < 2 || j >= N - 2) && h.at(i, j) != Complex{})
                throw precondition_error(
                    "transform: support touches the grid boundary (aliasing)");
}

ComplexField TransformPlan::cauchy(const ComplexField& h) const {
    check_input(h);
    const int N = spec_.resolution, M = impl_->M;
    const std::size_t MM = std::size_t(M) * M;
    FftBuffer a(MM), b(MM);
    Complex* ac = a.c();
    std::fill(ac, ac + MM, Complex{});
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) ac[std::size_t(i) * M + j] = h.at(i, j);
    fftw_execute_dft(impl_->fwd, a.p, b.p);
    Complex* bc = b.c();
    const double inv = 1.0 / double(MM);
    for (std::size_t k = 0; k < MM; ++k) bc[k] *= impl_->cauchy_kernel_hat[k] * inv;
    fftw_execute_dft(impl_->bwd, b.p, a.p);
    ComplexField out(spec_);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) out.at(i, j) = ac[std::size_t(i) * M + j];
    return out;
}

ComplexField TransformPlan::beurling(const ComplexField& h) const {
    check_input(h);
    const int N = spec_.resolution, M = impl_->M;
    const std::size_t MM = std::size_t(M) * M;
    FftBuffer a(MM), b(MM);
    Complex* ac = a.c();
    std::fill(ac, ac + MM, Complex{});
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) ac[std::size_t(i) * M + j] = h.at(i, j);
    fftw_execute_dft(impl_->fwd, a.p, b.p);
    Complex* bc = b.c();
    const double inv = 1.0 / double(MM);
    for (std::size_t k = 0; k < MM; ++k) bc[k] *= impl_->beurling_multiplier[k] * inv;
    fftw_execute_dft(impl_->bwd, b.p, a.p);
    ComplexField out(spec_);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) out.at(i, j) = ac[std::size_t(i) * M + j];
    return out;
}

}  // namespace blab
