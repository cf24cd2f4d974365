#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "volterra/fft.hpp"

namespace volterra {

// Signals and spectra live on a circular grid of length L. A spectrum is the
// DFT of a signal under X(k) = sum_t x(t) e^{-2 pi i k t / L}.
using SampledSignal = std::vector<cplx>;
using Spectrum = std::vector<cplx>;

inline constexpr int kDefaultOrderCap = 4;

// Dense row-major tensor with `rank` axes of equal extent. Rank 0 holds one
// scalar.
class Tensor {
public:
    Tensor() : Tensor(0, 1) {}
    Tensor(int rank, int extent, cplx fill = 0.0);
    Tensor(int rank, int extent, std::vector<cplx> values);

    int rank() const { return rank_; }
    int extent() const { return extent_; }
    std::size_t size() const { return values_.size(); }

    cplx& operator[](std::size_t i) { return values_[i]; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }
    cplx& at(const std::vector<int>& idx) { return values_[flat(idx)]; }
    const cplx& at(const std::vector<int>& idx) const { return values_[flat(idx)]; }

    std::size_t flat(const std::vector<int>& idx) const;
    // Writes the multi-index of flat position `pos` into idx (resized to rank).
    void unflatten(std::size_t pos, std::vector<int>& idx) const;

    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }

    bool operator==(const Tensor& o) const = default;

private:
    int rank_;
    int extent_;
    std::vector<cplx> values_;
};

// Order-j kernel over the delay lattice {0..M-1}^j.
struct VolterraKernel {
    int order = 0;
    int memory = 1;
    Tensor coeffs;

    VolterraKernel() = default;
    VolterraKernel(int order, int memory);
    VolterraKernel(int order, int memory, std::vector<cplx> values);
    static VolterraKernel constant(cplx v0);

    cplx& at(const std::vector<int>& tau) { return coeffs.at(tau); }
    const cplx& at(const std::vector<int>& tau) const { return coeffs.at(tau); }

    bool operator==(const VolterraKernel& o) const = default;
};

// Order-j frequency response sampled on Z_L^j.
struct VolterraFRF {
    int order = 0;
    int length = 1;
    Tensor bins;

    const cplx& at(const std::vector<int>& omega) const { return bins.at(omega); }
    // Lookup with each coordinate reduced mod L.
    cplx at_mod(const std::vector<long>& omega) const;
};

struct SeriesTerm {
    std::string index;
    VolterraKernel kernel;
};

// Finite indexed family of kernels sharing one memory length. The canonical
// form has at most one term per order, indexed by the decimal order.
class VolterraSeries {
public:
    explicit VolterraSeries(int memory = 1);

    // Adds a kernel under a fresh index. Memories are reconciled by
    // zero-padding the shorter side.
    void add(const std::string& index, VolterraKernel kernel);
    // Adds into the canonical slot of the kernel's order.
    void add_to_order(VolterraKernel kernel);

    int memory() const { return memory_; }
    int max_order() const;
    const std::vector<SeriesTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    bool has_index(const std::string& index) const;
    const VolterraKernel& kernel(const std::string& index) const;
    int order_of(const std::string& index) const;

    // Sum of all kernels of order j, or a zero kernel when there are none.
    VolterraKernel order_kernel(int j) const;
    cplx constant_term() const;

    bool is_canonical() const;
    VolterraSeries canonical() const;
    // Same kernels, memory raised to m (m must not be smaller).
    VolterraSeries padded(int m) const;

private:
    int memory_;
    std::vector<SeriesTerm> terms_;
};

std::string canonical_index(int order);

VolterraKernel pad_kernel(const VolterraKernel& k, int memory);
VolterraKernel add_kernels(const VolterraKernel& a, const VolterraKernel& b);
VolterraKernel scale_kernel(const VolterraKernel& k, cplx s);
double max_abs_diff(const VolterraKernel& a, const VolterraKernel& b);
double max_abs(const VolterraKernel& k);

VolterraKernel symmetrize_plain(const VolterraKernel& k);
VolterraKernel symmetrize_weighted(const VolterraKernel& k);
double asymmetry(const VolterraKernel& k);

VolterraFRF vfrf(const VolterraKernel& k, int L);
// Inverse transform of a response back to a kernel of memory M; entries of the
// embedded kernel outside {0..M-1}^j are discarded.
VolterraKernel kernel_from_vfrf(const VolterraFRF& frf, int memory);

VolterraSeries symmetrized(const VolterraSeries& s);
// Largest kernel deviation between the canonical forms of two series.
double series_kernel_deviation(const VolterraSeries& a, const VolterraSeries& b);
bool series_kernel_equal(const VolterraSeries& a, const VolterraSeries& b);

// Elementary systems.
VolterraSeries identity_series();
VolterraSeries delay_series(int d, int memory);
VolterraSeries differencer_series(int r);
VolterraSeries memoryless_polynomial(const std::vector<cplx>& coeffs, int max_order = kDefaultOrderCap);

SampledSignal circular_shift(const SampledSignal& s, int d);

}  // namespace volterra
