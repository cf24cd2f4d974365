#pragma once

// Shared helpers for the test suites: seeded random data and slow reference
// implementations that do not reuse library code paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "volterra/kernel.hpp"

namespace testsupport {

using volterra::cplx;
using volterra::SampledSignal;
using volterra::VolterraKernel;
using volterra::VolterraSeries;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline cplx random_cplx() {
    std::normal_distribution<double> g;
    return {g(rng()), g(rng())};
}

inline double random_real() {
    std::normal_distribution<double> g;
    return g(rng());
}

inline int random_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng());
}

inline std::vector<cplx> random_vector(int n) {
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = random_cplx();
    return v;
}

inline VolterraKernel random_kernel(int order, int memory) {
    VolterraKernel k(order, memory);
    for (auto& v : k.coeffs.values()) v = random_cplx();
    return k;
}

// Random canonical series with orders drawn from [lo, hi] (each present with
// probability 3/4, at least one present).
inline VolterraSeries random_series(int max_order, int memory, bool with_constant = true, int min_order = 1) {
    VolterraSeries s(memory);
    if (with_constant) s.add("0", VolterraKernel::constant(random_cplx()));
    bool any = false;
    for (int j = min_order; j <= max_order; ++j) {
        if (j < max_order && random_int(0, 3) == 0) continue;
        s.add(std::to_string(j), random_kernel(j, memory));
        any = true;
    }
    (void)any;
    return s;
}

template <class A, class B>
double max_dev(const A& a, const B& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

template <class A>
double max_mag(const A& a) {
    double d = 0.0;
    for (const auto& x : a) d = std::max(d, std::abs(x));
    return d;
}

inline long wrap(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

// O(L^2) DFT with the e^{-2 pi i k t / L} convention.
inline std::vector<cplx> naive_dft(const std::vector<cplx>& x) {
    const std::size_t L = x.size();
    std::vector<cplx> X(L, 0.0);
    for (std::size_t k = 0; k < L; ++k)
        for (std::size_t t = 0; t < L; ++t)
            X[k] += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((k * t) % L) / static_cast<double>(L));
    return X;
}

inline std::vector<cplx> naive_idft(const std::vector<cplx>& X) {
    const std::size_t L = X.size();
    std::vector<cplx> x(L, 0.0);
    for (std::size_t t = 0; t < L; ++t) {
        for (std::size_t k = 0; k < L; ++k)
            x[t] += X[k] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((k * t) % L) / static_cast<double>(L));
        x[t] /= static_cast<double>(L);
    }
    return x;
}

// Enumerates all maps {0..n-1} -> {0..base-1} as digit vectors.
template <class F>
void for_each_tuple(int n, int base, F&& f) {
    std::vector<int> d(static_cast<std::size_t>(n), 0);
    while (true) {
        f(d);
        int r = n - 1;
        while (r >= 0 && ++d[r] == base) d[r--] = 0;
        if (r < 0) return;
    }
}

// Kernel value with out-of-range delays treated as zero.
inline cplx kernel_at(const VolterraKernel& k, const std::vector<int>& tau) {
    for (int t : tau)
        if (t < 0 || t >= k.memory) return 0.0;
    return k.at(tau);
}

}  // namespace testsupport
