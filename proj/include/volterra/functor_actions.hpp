#pragma once

#include <optional>
#include <vector>

#include "volterra/kernel.hpp"

namespace volterra {

// Spectral weighting gamma; composition is the pointwise product.
struct Multiplier {
    std::vector<cplx> weights;

    static Multiplier identity(int L);
    int length() const { return static_cast<int>(weights.size()); }
    Spectrum apply(const Spectrum& s_hat) const;
};

// g after f.
Multiplier compose(const Multiplier& g, const Multiplier& f);

// V(m)(s_hat): the series acting on the multiplier, evaluated at s_hat.
Spectrum apply_action(const VolterraSeries& series, const Multiplier& m, const Spectrum& s_hat);

// Evaluates the series on the shifted input and verifies that the result is the
// shifted output. Throws InternalConsistencyError otherwise.
SampledSignal act_translation(const VolterraSeries& series, const SampledSignal& s, int d);

// Output spectrum for the input modulated by e^{2 pi i xi t / L}.
Spectrum act_modulation(const VolterraSeries& series, const Spectrum& s_hat, int xi);

// Keeps only bins on the lattice T*Z (a spectral comb with unit teeth).
Spectrum spectral_comb(const Spectrum& s_hat, int T);

// Output spectrum for the comb-filtered input, summed over lattice
// multicombinations only.
Spectrum act_periodization(const VolterraSeries& series, const Spectrum& s_hat, int T);

// Output for the input multiplied by the unit time comb of period T.
SampledSignal act_sampling(const VolterraSeries& series, const SampledSignal& s, int T);

struct InducedKernel {
    Multiplier kernel;
    std::vector<int> support;
    std::vector<int> cancelled;
};

// Bin-wise quotient V(l s)/V(s) on the support. Bins with |V(s)| below
// eps_rel * max|V(s)| are excluded and listed as cancelled.
InducedKernel induced_linear_kernel(const VolterraSeries& series, const Multiplier& l, const Spectrum& s_hat,
                                    std::optional<std::vector<int>> support = std::nullopt, double eps_rel = 1e-9);

}  // namespace volterra
