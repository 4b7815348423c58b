#pragma once

#include <memory>

#include "blab/geometry.hpp"

namespace blab {

/// Exact integral of 1/u over the square of side 2s centered at delta,
/// multiplied by -(1/pi): the weight one grid cell contributes to the Cauchy
/// transform at offset delta. Odd in delta; zero at delta = 0.
Complex cauchy_cell_weight(Complex delta, double s);

/// Reusable FFT machinery for the discrete Cauchy and Beurling transforms on
/// a fixed grid. Aperiodic convolution via zero padding (pad_factor >= 2).
/// Immutable after construction; transform calls are pure and safe to run
/// concurrently on distinct fields.
class TransformPlan {
  public:
    explicit TransformPlan(GridSpec spec, int pad_factor = 2);
    ~TransformPlan();
    TransformPlan(const TransformPlan&) = delete;
    TransformPlan& operator=(const TransformPlan&) = delete;

    const GridSpec& spec() const { return spec_; }
    int pad_factor() const { return pad_; }

    /// P[h](z) = (1/pi) double-integral h(zeta)/(z - zeta) dm, discretized by
    /// exact cell integrals of the kernel. dbar(P[h]) ~ h, d(P[h]) ~ S[h].
    ComplexField cauchy(const ComplexField& h) const;

    /// S[h] via the Fourier multiplier conj(xi)/xi on the padded grid,
    /// zero at the zero frequency (principal-value convention).
    ComplexField beurling(const ComplexField& h) const;

  private:
    struct Impl;
    GridSpec spec_;
    int pad_;
    std::unique_ptr<Impl> impl_;

    void check_input(const ComplexField& h) const;
};

}  // namespace blab
