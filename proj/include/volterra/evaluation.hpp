#pragma once

#include <map>
#include <vector>

#include "volterra/combinatorics.hpp"
#include "volterra/kernel.hpp"

namespace volterra {

// Reference evaluator: literal nested loops over every delay vector.
SampledSignal oracle_eval(const VolterraSeries& series, const SampledSignal& s);

// Same contract as oracle_eval; contracts one delay axis at a time.
SampledSignal eval_time(const VolterraSeries& series, const SampledSignal& s);

// Homogeneous order-j part of the output only.
SampledSignal eval_order(const VolterraSeries& series, const SampledSignal& s, int j);

// Projection-slice evaluation on the spectrum.
Spectrum eval_freq(const VolterraSeries& series, const Spectrum& s_hat);

// L^{1-j} * sum over Omega in Z_L^j with sum(Omega) == w (mod L) of a tensor.
Spectrum project_slices(const Tensor& integrand);

// Tensor power s_hat^{(x)j}(Omega) = prod_q s_hat(Omega_q).
Tensor tensor_power(const std::vector<cplx>& v, int j);

using MultiInput = std::vector<SampledSignal>;

// Kernels indexed by (order, output, multicombination of the B inputs).
class MultivariateKernelBank {
public:
    explicit MultivariateKernelBank(int inputs);

    int inputs() const { return inputs_; }
    void set(int output, const Multicombination& inputs_used, VolterraKernel kernel);
    void set_constant(int output, cplx v0);
    cplx constant(int output) const;

    struct Entry {
        int output;
        Multicombination combination;
        VolterraKernel kernel;
    };
    const std::vector<Entry>& entries() const { return entries_; }

private:
    int inputs_;
    std::vector<Entry> entries_;
    std::map<int, cplx> constants_;
};

SampledSignal eval_multivariate(const MultivariateKernelBank& bank, const MultiInput& inputs, int output);

// Response to s(t) = e^{2 pi i xi t / L}.
SampledSignal response_exponential(const VolterraSeries& series, int xi, int L);

// Response to the unit comb [t == 0 mod T] on a grid of length L.
SampledSignal response_comb(const VolterraSeries& series, int T, int L);

// Unit comb and lattice helpers shared with the functor actions.
SampledSignal unit_comb(int T, int L);

}  // namespace volterra
