#pragma once

#include <cstddef>
#include <vector>

#include "volterra/kernel.hpp"

namespace volterra {

// phi(t) = sum_p a_p (t - origin)^p with t in samples.
struct PolynomialPhase {
    std::vector<double> coeffs;
    double origin = 0.0;

    double phase(double t) const;
    // phi'(t) / 2 pi, in cycles per sample.
    double inst_freq(double t) const;
};

// Matrix over (time row, frequency column). Column k corresponds to
// k * cycles_per_bin cycles per sample.
struct TFDGrid {
    int rows = 0;
    int cols = 0;
    double cycles_per_bin = 1.0;
    std::vector<cplx> values;

    TFDGrid() = default;
    TFDGrid(int rows, int cols, double cycles_per_bin);
    cplx& at(int n, int k) { return values[static_cast<std::size_t>(n) * cols + k]; }
    const cplx& at(int n, int k) const { return values[static_cast<std::size_t>(n) * cols + k]; }
    double max_abs() const;
};

// Parameter function over (doppler bin xi in Z_L, lag class c in Z_F). Lag
// class c stands for the symmetric lag pair x(s+m) x*(s-m) with m == c mod F,
// i.e. a full lag of 2m samples.
struct ParameterFunction {
    int doppler = 0;
    int lags = 0;
    std::vector<cplx> values;

    ParameterFunction() = default;
    ParameterFunction(int doppler, int lags, cplx fill = 0.0);
    cplx& at(int xi, int c) { return values[static_cast<std::size_t>(xi) * lags + c]; }
    const cplx& at(int xi, int c) const { return values[static_cast<std::size_t>(xi) * lags + c]; }
};

// Signed representative of c mod n in (-n/2, n/2].
int signed_rep(long c, int n);

SampledSignal analytic_signal(const SampledSignal& s);
SampledSignal chirp(const PolynomialPhase& phase, int L, double amplitude = 1.0);

// x(t + d) for real d, by a spectral phase ramp on signed bins; integer d is
// served by circular indexing.
SampledSignal fractional_shift(const SampledSignal& x, double d);

// W(n,k) = sum_{|m| <= floor(L/4)} x(n+m) x*(n-m) e^{-2 pi i (2m) k / L}, for
// k in [0, L/2).
TFDGrid wvd(const SampledSignal& x);

ParameterFunction ambiguity(const SampledSignal& h);
ParameterFunction wvd_parameter(int L);
ParameterFunction rihaczek_parameter(int L);
ParameterFunction spectrogram_parameter(const SampledSignal& h);

// 2-D smoothing of the WVD. In the transform domain the WVD is weighted by
// phi(-a,-b); in the time-frequency domain this is circular convolution with
// smoothing_kernel(phi).
TFDGrid cohen(const SampledSignal& x, const ParameterFunction& phi);
TFDGrid smoothing_kernel(const ParameterFunction& phi);

// Order-2 kernel h_f(u,v) such that eval_bilinear(h_f, conj(x), x) is
// column f of cohen(x, phi).
VolterraKernel cohen_volterra_kernel(const ParameterFunction& phi, int f);
// y(n) = sum_{u,v} h(u,v) a(n-u) b(n-v).
SampledSignal eval_bilinear(const VolterraKernel& h, const SampledSignal& a, const SampledSignal& b);
TFDGrid cohen_via_kernels(const SampledSignal& x, const ParameterFunction& phi);

// Grid over (t, f_1..f_{k-1}) with each f in Z_F, F = L / lag_step.
struct HigherOrderGrid {
    int length = 0;
    int order = 0;
    int freq_bins = 0;
    std::vector<cplx> values;

    cplx at(int t, const std::vector<int>& f) const;
    std::size_t flat(int t, const std::vector<int>& f) const;
};

HigherOrderGrid howvd(const SampledSignal& x, int k, int lag_step = 2, std::size_t max_cells = std::size_t{1} << 22);

struct LambdaSet {
    int k = 2;
    std::vector<double> lambdas;  // lambda_1..lambda_{k/2}; lambda_{-l} = -lambda_l
};

LambdaSet pwvd_lambdas(int k, double lambda3 = 0.75);

struct LambdaReport {
    double antisymmetry_residual = 0.0;
    double half_sum_residual = 0.0;
    std::vector<double> paired_odd_residuals;  // sum over +-l of lambda^m, odd m <= p
    std::vector<double> one_sided_odd_moments; // sum over l > 0 of lambda^m, odd 3 <= m <= p
    bool passed(double tol = 1e-12) const;
    // Whether the one-sided odd moments vanish, the condition under which
    // polynomial phases up to order p concentrate on their IF.
    bool concentrates(double tol = 1e-12) const;
};

LambdaReport check_lambda_constraints(const LambdaSet& ls, int p);

TFDGrid pwvd(const SampledSignal& x, const LambdaSet& ls, int lag_step = 2);

// Sparse description of the PWVD kernel at one frequency bin: one support
// point per integer lag parameter m, with delay vector
// (lambda_l q m for l = 1..k/2, then -lambda_l q m) and Fourier weight.
struct PwvdKernel {
    struct Point {
        int m;
        std::vector<double> delays;
        cplx weight;
    };

    LambdaSet lambdas;
    int f = 0;
    int length = 0;
    int lag_step = 2;
    std::vector<Point> support;

    double max_anti_pairing_residual() const;
    double max_half_sum_residual() const;
    double max_paired_odd_residual(int p) const;

    // sum over support of weight * prod_{l>0} x(n + tau_l) x*(n - tau_l) for
    // every n: column f of the PWVD.
    SampledSignal contract(const SampledSignal& x) const;
};

PwvdKernel pwvd_volterra_kernel(const LambdaSet& ls, int f, int L, int lag_step = 2);

// Argmax of the real part per row.
std::vector<int> ridge(const TFDGrid& grid);

// Mean |ridge(n) - round(IF(n) / cycles_per_bin)| over rows, skipping 10% at
// each edge.
double if_concentration(const TFDGrid& grid, const PolynomialPhase& phase);

}  // namespace volterra
