#include "volterra/functor_actions.hpp"

#include <algorithm>
#include <cmath>

#include "volterra/combinatorics.hpp"
#include "volterra/errors.hpp"
#include "volterra/evaluation.hpp"

namespace volterra {

namespace {

long wrap(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

void require_divides(int T, int L) {
    if (T < 1 || L % T != 0)
        throw AliasingError("period " + std::to_string(T) + " does not divide " + std::to_string(L));
}

}  // namespace

Multiplier Multiplier::identity(int L) { return Multiplier{std::vector<cplx>(static_cast<std::size_t>(L), 1.0)}; }

Spectrum Multiplier::apply(const Spectrum& s_hat) const {
    if (s_hat.size() != weights.size()) throw ContractViolation("multiplier length differs from spectrum");
    Spectrum out(s_hat.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = weights[k] * s_hat[k];
    return out;
}

Multiplier compose(const Multiplier& g, const Multiplier& f) {
    if (g.weights.size() != f.weights.size()) throw ContractViolation("multiplier lengths differ");
    Multiplier h{std::vector<cplx>(f.weights.size())};
    for (std::size_t k = 0; k < h.weights.size(); ++k) h.weights[k] = g.weights[k] * f.weights[k];
    return h;
}

Spectrum apply_action(const VolterraSeries& series, const Multiplier& m, const Spectrum& s_hat) {
    if (m.weights.size() != s_hat.size()) throw ContractViolation("multiplier length differs from spectrum");
    const int L = static_cast<int>(s_hat.size());
    Spectrum y(s_hat.size(), 0.0);
    for (const auto& term : series.terms()) {
        const VolterraFRF frf = vfrf(term.kernel, L);
        Tensor integrand = tensor_power(s_hat, frf.order);
        const Tensor weight = tensor_power(m.weights, frf.order);
        for (std::size_t p = 0; p < integrand.size(); ++p) integrand[p] = frf.bins[p] * integrand[p] * weight[p];
        const Spectrum part = project_slices(integrand);
        for (std::size_t w = 0; w < y.size(); ++w) y[w] += part[w];
    }
    return y;
}

SampledSignal act_translation(const VolterraSeries& series, const SampledSignal& s, int d) {
    const SampledSignal moved_first = eval_time(series, circular_shift(s, d));
    const SampledSignal moved_after = circular_shift(eval_time(series, s), d);
    double scale = 1.0;
    double residual = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        scale = std::max(scale, std::abs(moved_after[t]));
        residual = std::max(residual, std::abs(moved_first[t] - moved_after[t]));
    }
    if (residual > 1e-10 * scale)
        throw InternalConsistencyError("series does not commute with translation (residual " +
                                       std::to_string(residual) + ")");
    return moved_first;
}

Spectrum act_modulation(const VolterraSeries& series, const Spectrum& s_hat, int xi) {
    const long L = static_cast<long>(s_hat.size());
    Spectrum shifted(s_hat.size());
    for (long k = 0; k < L; ++k) shifted[static_cast<std::size_t>(k)] = s_hat[static_cast<std::size_t>(wrap(k - xi, L))];
    Spectrum y(s_hat.size(), 0.0);
    for (const auto& term : series.terms()) {
        const VolterraFRF frf = vfrf(term.kernel, static_cast<int>(L));
        Tensor integrand = tensor_power(shifted, frf.order);
        for (std::size_t p = 0; p < integrand.size(); ++p) integrand[p] *= frf.bins[p];
        const Spectrum part = project_slices(integrand);
        for (std::size_t w = 0; w < y.size(); ++w) y[w] += part[w];
    }
    return y;
}

Spectrum spectral_comb(const Spectrum& s_hat, int T) {
    const int L = static_cast<int>(s_hat.size());
    require_divides(T, L);
    Spectrum out(s_hat.size(), 0.0);
    for (int k = 0; k < L; k += T) out[static_cast<std::size_t>(k)] = s_hat[static_cast<std::size_t>(k)];
    return out;
}

Spectrum act_periodization(const VolterraSeries& series, const Spectrum& s_hat, int T) {
    const int L = static_cast<int>(s_hat.size());
    require_divides(T, L);
    const int teeth = L / T;
    Spectrum y(s_hat.size(), 0.0);
    for (const auto& term : series.terms()) {
        const int j = term.kernel.order;
        if (j == 0) {
            y[0] += term.kernel.coeffs[0] * static_cast<double>(L);
            continue;
        }
        const VolterraFRF frf = vfrf(symmetrize_plain(term.kernel), L);
        const double norm = std::pow(static_cast<double>(L), 1 - j);
        std::vector<int> omega(static_cast<std::size_t>(j));
        for (const auto& c : multicombinations(teeth, j)) {
            const std::vector<int> k = c.representative();
            cplx prod = static_cast<double>(multinomial(j, c.counts));
            long sum = 0;
            for (int r = 0; r < j; ++r) {
                omega[r] = T * k[r];
                prod *= s_hat[static_cast<std::size_t>(omega[r])];
                sum += omega[r];
            }
            y[static_cast<std::size_t>(sum % L)] += norm * prod * frf.at(omega);
        }
    }
    return y;
}

SampledSignal act_sampling(const VolterraSeries& series, const SampledSignal& s, int T) {
    const int L = static_cast<int>(s.size());
    require_divides(T, L);
    const int teeth = L / T;
    SampledSignal y(s.size(), 0.0);
    for (const auto& term : series.terms()) {
        const int j = term.kernel.order;
        if (j == 0) {
            for (auto& v : y) v += term.kernel.coeffs[0];
            continue;
        }
        if (term.kernel.memory > L) throw ResolutionError("kernel memory exceeds signal length");
        const VolterraKernel sym = symmetrize_plain(term.kernel);
        const auto combos = multicombinations(teeth, j);
        std::vector<int> tau(static_cast<std::size_t>(j));
        for (long t = 0; t < L; ++t) {
            cplx acc = 0.0;
            for (const auto& c : combos) {
                const std::vector<int> k = c.representative();
                cplx prod = static_cast<double>(multinomial(j, c.counts));
                bool inside = true;
                for (int r = 0; r < j && inside; ++r) {
                    const long d = wrap(t - static_cast<long>(T) * k[r], L);
                    inside = d < sym.memory;
                    tau[r] = static_cast<int>(d);
                    prod *= s[static_cast<std::size_t>(T * k[r])];
                }
                if (inside) acc += prod * sym.at(tau);
            }
            y[static_cast<std::size_t>(t)] += acc;
        }
    }
    return y;
}

InducedKernel induced_linear_kernel(const VolterraSeries& series, const Multiplier& l, const Spectrum& s_hat,
                                    std::optional<std::vector<int>> support, double eps_rel) {
    const int L = static_cast<int>(s_hat.size());
    const Spectrum den = eval_freq(series, s_hat);
    const Spectrum num = eval_freq(series, l.apply(s_hat));
    double peak = 0.0;
    for (const auto& v : den) peak = std::max(peak, std::abs(v));
    const double eps = eps_rel * peak;

    InducedKernel out{Multiplier{std::vector<cplx>(static_cast<std::size_t>(L), 0.0)}, {}, {}};
    std::vector<int> bins;
    if (support) {
        bins = *support;
    } else {
        for (int k = 0; k < L; ++k) bins.push_back(k);
    }
    for (int k : bins) {
        if (k < 0 || k >= L) throw OutOfGridError("support bin outside grid");
        const auto kk = static_cast<std::size_t>(k);
        if (std::abs(den[kk]) < eps || std::abs(den[kk]) == 0.0) {
            out.cancelled.push_back(k);
            continue;
        }
        out.kernel.weights[kk] = num[kk] / den[kk];
        out.support.push_back(k);
    }
    return out;
}

}  // namespace volterra
