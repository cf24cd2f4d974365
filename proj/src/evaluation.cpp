#include "volterra/evaluation.hpp"

#include <cmath>
#include <numbers>

#include "volterra/errors.hpp"

namespace volterra {

namespace {

long wrap(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

void require_fits(const VolterraSeries& series, std::size_t L) {
    if (L == 0) throw ContractViolation("empty signal");
    for (const auto& t : series.terms())
        if (t.kernel.order > 0 && static_cast<std::size_t>(t.kernel.memory) > L)
            throw ResolutionError("kernel memory exceeds signal length");
}

// Contracts every axis of `k` against the lagged-input vector w, last axis first.
cplx contract_all(const VolterraKernel& k, const std::vector<cplx>& w, std::vector<cplx>& scratch) {
    scratch = k.coeffs.values();
    const std::size_t M = static_cast<std::size_t>(k.memory);
    std::size_t n = scratch.size();
    for (int axis = 0; axis < k.order; ++axis) {
        const std::size_t outer = n / M;
        for (std::size_t i = 0; i < outer; ++i) {
            cplx acc = 0.0;
            for (std::size_t r = 0; r < M; ++r) acc += scratch[i * M + r] * w[r];
            scratch[i] = acc;
        }
        n = outer;
    }
    return scratch[0];
}

SampledSignal eval_terms(const VolterraSeries& series, const SampledSignal& s, int only_order) {
    require_fits(series, s.size());
    const long L = static_cast<long>(s.size());
    SampledSignal y(s.size(), 0.0);
    std::vector<cplx> scratch;
    for (const auto& term : series.terms()) {
        const VolterraKernel& k = term.kernel;
        if (only_order >= 0 && k.order != only_order) continue;
        if (k.order == 0) {
            for (auto& v : y) v += k.coeffs[0];
            continue;
        }
        std::vector<cplx> w(static_cast<std::size_t>(k.memory));
        for (long t = 0; t < L; ++t) {
            for (int r = 0; r < k.memory; ++r) w[static_cast<std::size_t>(r)] = s[static_cast<std::size_t>(wrap(t - r, L))];
            y[static_cast<std::size_t>(t)] += contract_all(k, w, scratch);
        }
    }
    return y;
}

}  // namespace

SampledSignal oracle_eval(const VolterraSeries& series, const SampledSignal& s) {
    require_fits(series, s.size());
    const long L = static_cast<long>(s.size());
    SampledSignal y(s.size(), 0.0);
    std::vector<int> tau;
    for (long t = 0; t < L; ++t) {
        cplx acc = 0.0;
        for (const auto& term : series.terms()) {
            const VolterraKernel& k = term.kernel;
            for (std::size_t p = 0; p < k.coeffs.size(); ++p) {
                k.coeffs.unflatten(p, tau);
                cplx prod = k.coeffs[p];
                for (int r = 0; r < k.order; ++r) prod *= s[static_cast<std::size_t>(wrap(t - tau[r], L))];
                acc += prod;
            }
        }
        y[static_cast<std::size_t>(t)] = acc;
    }
    return y;
}

SampledSignal eval_time(const VolterraSeries& series, const SampledSignal& s) { return eval_terms(series, s, -1); }

SampledSignal eval_order(const VolterraSeries& series, const SampledSignal& s, int j) {
    if (j < 0) throw ContractViolation("eval_order: negative order");
    return eval_terms(series, s, j);
}

Tensor tensor_power(const std::vector<cplx>& v, int j) {
    const int L = static_cast<int>(v.size());
    Tensor out(j, L, 1.0);
    std::vector<int> idx;
    for (std::size_t p = 0; p < out.size(); ++p) {
        out.unflatten(p, idx);
        cplx prod = 1.0;
        for (int q = 0; q < j; ++q) prod *= v[static_cast<std::size_t>(idx[q])];
        out[p] = prod;
    }
    return out;
}

Spectrum project_slices(const Tensor& integrand) {
    const int j = integrand.rank();
    const int L = integrand.extent();
    Spectrum y(static_cast<std::size_t>(L), 0.0);
    if (j == 0) {
        y[0] = integrand[0] * static_cast<double>(L);
        return y;
    }
    std::vector<int> idx;
    for (std::size_t p = 0; p < integrand.size(); ++p) {
        integrand.unflatten(p, idx);
        long sum = 0;
        for (int q : idx) sum += q;
        y[static_cast<std::size_t>(sum % L)] += integrand[p];
    }
    const double norm = std::pow(static_cast<double>(L), 1 - j);
    for (auto& v : y) v *= norm;
    return y;
}

Spectrum eval_freq(const VolterraSeries& series, const Spectrum& s_hat) {
    const int L = static_cast<int>(s_hat.size());
    require_fits(series, s_hat.size());
    Spectrum y(s_hat.size(), 0.0);
    for (const auto& term : series.terms()) {
        const VolterraFRF frf = vfrf(term.kernel, L);
        Tensor integrand = tensor_power(s_hat, frf.order);
        for (std::size_t p = 0; p < integrand.size(); ++p) integrand[p] *= frf.bins[p];
        const Spectrum part = project_slices(integrand);
        for (std::size_t w = 0; w < y.size(); ++w) y[w] += part[w];
    }
    return y;
}

MultivariateKernelBank::MultivariateKernelBank(int inputs) : inputs_(inputs) {
    if (inputs < 1) throw ContractViolation("multivariate bank needs at least one input");
}

void MultivariateKernelBank::set(int output, const Multicombination& inputs_used, VolterraKernel kernel) {
    if (static_cast<int>(inputs_used.counts.size()) != inputs_)
        throw ContractViolation("multicombination has the wrong number of inputs");
    if (inputs_used.total() != kernel.order)
        throw ContractViolation("multicombination size differs from kernel order");
    if (kernel.order == 0) throw ContractViolation("use set_constant for zeroth-order terms");
    for (auto& e : entries_) {
        if (e.output == output && e.combination.counts == inputs_used.counts) {
            e.kernel = std::move(kernel);
            return;
        }
    }
    entries_.push_back({output, inputs_used, std::move(kernel)});
}

void MultivariateKernelBank::set_constant(int output, cplx v0) { constants_[output] = v0; }

cplx MultivariateKernelBank::constant(int output) const {
    auto it = constants_.find(output);
    return it == constants_.end() ? cplx(0.0) : it->second;
}

SampledSignal eval_multivariate(const MultivariateKernelBank& bank, const MultiInput& inputs, int output) {
    if (static_cast<int>(inputs.size()) != bank.inputs()) throw ContractViolation("input count differs from bank");
    const std::size_t Ls = inputs.front().size();
    for (const auto& u : inputs)
        if (u.size() != Ls) throw ContractViolation("inputs must share one length");
    const long L = static_cast<long>(Ls);
    SampledSignal y(Ls, bank.constant(output));
    std::vector<int> tau;
    for (const auto& e : bank.entries()) {
        if (e.output != output) continue;
        const VolterraKernel& k = e.kernel;
        if (e.combination.total() != k.order) throw ContractViolation("multicombination/order mismatch");
        if (k.memory > L) throw ResolutionError("kernel memory exceeds signal length");
        const std::vector<int> f = e.combination.representative();
        const double weight = static_cast<double>(multinomial(k.order, e.combination.counts));
        for (long t = 0; t < L; ++t) {
            cplx acc = 0.0;
            for (std::size_t p = 0; p < k.coeffs.size(); ++p) {
                k.coeffs.unflatten(p, tau);
                cplx prod = k.coeffs[p];
                for (int i = 0; i < k.order; ++i) prod *= inputs[static_cast<std::size_t>(f[i])][static_cast<std::size_t>(wrap(t - tau[i], L))];
                acc += prod;
            }
            y[static_cast<std::size_t>(t)] += weight * acc;
        }
    }
    return y;
}

SampledSignal response_exponential(const VolterraSeries& series, int xi, int L) {
    require_fits(series, static_cast<std::size_t>(L));
    SampledSignal y(static_cast<std::size_t>(L), 0.0);
    for (const auto& term : series.terms()) {
        const int j = term.kernel.order;
        const VolterraFRF frf = vfrf(term.kernel, L);
        const cplx diag = frf.at(std::vector<int>(static_cast<std::size_t>(j), static_cast<int>(wrap(xi, L))));
        for (long t = 0; t < L; ++t) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(wrap(static_cast<long>(j) * t * xi, L)) / L;
            y[static_cast<std::size_t>(t)] += diag * std::polar(1.0, phase);
        }
    }
    return y;
}

SampledSignal unit_comb(int T, int L) {
    if (T < 1 || L % T != 0) throw AliasingError("comb period " + std::to_string(T) + " does not divide " + std::to_string(L));
    SampledSignal c(static_cast<std::size_t>(L), 0.0);
    for (int t = 0; t < L; t += T) c[static_cast<std::size_t>(t)] = 1.0;
    return c;
}

SampledSignal response_comb(const VolterraSeries& series, int T, int L) {
    if (T < 1 || L % T != 0) throw AliasingError("comb period " + std::to_string(T) + " does not divide " + std::to_string(L));
    require_fits(series, static_cast<std::size_t>(L));
    const int teeth = L / T;
    SampledSignal y(static_cast<std::size_t>(L), 0.0);
    for (const auto& term : series.terms()) {
        const int j = term.kernel.order;
        if (j == 0) {
            for (auto& v : y) v += term.kernel.coeffs[0];
            continue;
        }
        const VolterraKernel sym = symmetrize_plain(term.kernel);
        const auto combos = multicombinations(teeth, j);
        std::vector<int> tau(static_cast<std::size_t>(j));
        for (long t = 0; t < L; ++t) {
            cplx acc = 0.0;
            for (const auto& c : combos) {
                const std::vector<int> k = c.representative();
                bool inside = true;
                for (int r = 0; r < j && inside; ++r) {
                    const long d = wrap(t - static_cast<long>(T) * k[r], L);
                    inside = d < sym.memory;
                    tau[r] = static_cast<int>(d);
                }
                if (inside) acc += static_cast<double>(multinomial(j, c.counts)) * sym.at(tau);
            }
            y[static_cast<std::size_t>(t)] += acc;
        }
    }
    return y;
}

}  // namespace volterra
