#include "volterra/kernel.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "volterra/combinatorics.hpp"
#include "volterra/errors.hpp"

namespace volterra {

namespace {

std::size_t ipow(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

long mod(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

}  // namespace

Tensor::Tensor(int rank, int extent, cplx fill) : rank_(rank), extent_(extent) {
    if (rank < 0 || extent < 1) throw ContractViolation("tensor: invalid shape");
    values_.assign(ipow(extent, rank), fill);
}

Tensor::Tensor(int rank, int extent, std::vector<cplx> values)
    : rank_(rank), extent_(extent), values_(std::move(values)) {
    if (rank < 0 || extent < 1) throw ContractViolation("tensor: invalid shape");
    if (values_.size() != ipow(extent, rank)) throw ContractViolation("tensor: value count does not match shape");
}

std::size_t Tensor::flat(const std::vector<int>& idx) const {
    std::size_t pos = 0;
    for (int r = 0; r < rank_; ++r) pos = pos * static_cast<std::size_t>(extent_) + static_cast<std::size_t>(idx[r]);
    return pos;
}

void Tensor::unflatten(std::size_t pos, std::vector<int>& idx) const {
    idx.resize(static_cast<std::size_t>(rank_));
    for (int r = rank_ - 1; r >= 0; --r) {
        idx[r] = static_cast<int>(pos % static_cast<std::size_t>(extent_));
        pos /= static_cast<std::size_t>(extent_);
    }
}

VolterraKernel::VolterraKernel(int order_, int memory_) : order(order_), memory(memory_), coeffs(order_, memory_) {}

VolterraKernel::VolterraKernel(int order_, int memory_, std::vector<cplx> values)
    : order(order_), memory(memory_), coeffs(order_, memory_, std::move(values)) {}

VolterraKernel VolterraKernel::constant(cplx v0) {
    VolterraKernel k(0, 1);
    k.coeffs[0] = v0;
    return k;
}

cplx VolterraFRF::at_mod(const std::vector<long>& omega) const {
    std::size_t pos = 0;
    for (int r = 0; r < order; ++r) pos = pos * static_cast<std::size_t>(length) + static_cast<std::size_t>(mod(omega[r], length));
    return bins[pos];
}

std::string canonical_index(int order) { return std::to_string(order); }

VolterraSeries::VolterraSeries(int memory) : memory_(memory) {
    if (memory < 1) throw ContractViolation("series memory must be >= 1");
}

void VolterraSeries::add(const std::string& index, VolterraKernel kernel) {
    if (has_index(index)) throw ContractViolation("duplicate series index '" + index + "'");
    if (kernel.order == 0) {
        // Order-0 kernels are scalars; their nominal memory follows the series.
        cplx v0 = kernel.coeffs[0];
        kernel = VolterraKernel(0, memory_);
        kernel.coeffs[0] = v0;
    }
    if (kernel.memory > memory_) {
        for (auto& t : terms_) t.kernel = pad_kernel(t.kernel, kernel.memory);
        memory_ = kernel.memory;
    } else if (kernel.memory < memory_) {
        kernel = pad_kernel(kernel, memory_);
    }
    terms_.push_back({index, std::move(kernel)});
}

void VolterraSeries::add_to_order(VolterraKernel kernel) {
    const std::string idx = canonical_index(kernel.order);
    for (auto& t : terms_) {
        if (t.index == idx) {
            if (t.kernel.order != kernel.order) throw ContractViolation("canonical index clash");
            const int m = std::max(memory_, kernel.memory);
            if (m > memory_) *this = padded(m);
            for (auto& u : terms_)
                if (u.index == idx) u.kernel = add_kernels(u.kernel, pad_kernel(kernel, memory_));
            return;
        }
    }
    add(idx, std::move(kernel));
}

int VolterraSeries::max_order() const {
    int m = -1;
    for (const auto& t : terms_) m = std::max(m, t.kernel.order);
    return m;
}

bool VolterraSeries::has_index(const std::string& index) const {
    return std::any_of(terms_.begin(), terms_.end(), [&](const SeriesTerm& t) { return t.index == index; });
}

const VolterraKernel& VolterraSeries::kernel(const std::string& index) const {
    for (const auto& t : terms_)
        if (t.index == index) return t.kernel;
    throw ContractViolation("unknown series index '" + index + "'");
}

int VolterraSeries::order_of(const std::string& index) const { return kernel(index).order; }

VolterraKernel VolterraSeries::order_kernel(int j) const {
    VolterraKernel acc(j, memory_);
    for (const auto& t : terms_)
        if (t.kernel.order == j) acc = add_kernels(acc, t.kernel);
    return acc;
}

cplx VolterraSeries::constant_term() const { return order_kernel(0).coeffs[0]; }

bool VolterraSeries::is_canonical() const {
    for (const auto& t : terms_)
        if (t.index != canonical_index(t.kernel.order)) return false;
    return true;
}

VolterraSeries VolterraSeries::canonical() const {
    std::map<int, VolterraKernel> by_order;
    for (const auto& t : terms_) {
        auto it = by_order.find(t.kernel.order);
        if (it == by_order.end())
            by_order.emplace(t.kernel.order, t.kernel);
        else
            it->second = add_kernels(it->second, t.kernel);
    }
    VolterraSeries out(memory_);
    for (auto& [j, k] : by_order) out.add(canonical_index(j), k);
    return out;
}

VolterraSeries VolterraSeries::padded(int m) const {
    if (m < memory_) throw ContractViolation("padded: cannot shrink memory");
    VolterraSeries out(m);
    for (const auto& t : terms_) out.add(t.index, pad_kernel(t.kernel, m));
    return out;
}

VolterraKernel pad_kernel(const VolterraKernel& k, int memory) {
    if (memory < k.memory) throw ContractViolation("pad_kernel: target memory smaller than kernel memory");
    if (memory == k.memory) return k;
    VolterraKernel out(k.order, memory);
    std::vector<int> idx;
    for (std::size_t p = 0; p < k.coeffs.size(); ++p) {
        k.coeffs.unflatten(p, idx);
        out.coeffs.at(idx) = k.coeffs[p];
    }
    return out;
}

VolterraKernel add_kernels(const VolterraKernel& a, const VolterraKernel& b) {
    if (a.order != b.order) throw ContractViolation("add_kernels: order mismatch");
    const int m = std::max(a.memory, b.memory);
    VolterraKernel out = pad_kernel(a, m);
    const VolterraKernel bb = pad_kernel(b, m);
    for (std::size_t p = 0; p < out.coeffs.size(); ++p) out.coeffs[p] += bb.coeffs[p];
    return out;
}

VolterraKernel scale_kernel(const VolterraKernel& k, cplx s) {
    VolterraKernel out = k;
    for (auto& v : out.coeffs.values()) v *= s;
    return out;
}

double max_abs_diff(const VolterraKernel& a, const VolterraKernel& b) {
    if (a.order != b.order) throw ContractViolation("max_abs_diff: order mismatch");
    const int m = std::max(a.memory, b.memory);
    const VolterraKernel aa = pad_kernel(a, m);
    const VolterraKernel bb = pad_kernel(b, m);
    double d = 0.0;
    for (std::size_t p = 0; p < aa.coeffs.size(); ++p) d = std::max(d, std::abs(aa.coeffs[p] - bb.coeffs[p]));
    return d;
}

double max_abs(const VolterraKernel& k) {
    double d = 0.0;
    for (const auto& v : k.coeffs.values()) d = std::max(d, std::abs(v));
    return d;
}

namespace {

// Sum over all axis permutations of k evaluated at a permuted multi-index.
// `uniform` reports whether every permuted value was identical, so callers can
// return that value untouched instead of a rounded average.
// Summation runs from the sorted representative so every member of an orbit
// accumulates in the same order and receives a bit-identical result.
cplx permutation_sum(const VolterraKernel& k, std::vector<int> tau, bool& uniform) {
    std::sort(tau.begin(), tau.end());
    std::vector<int> perm(tau.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> permuted(tau.size());
    const cplx first = k.coeffs.at(tau);
    cplx acc = 0.0;
    uniform = true;
    do {
        for (std::size_t r = 0; r < tau.size(); ++r) permuted[r] = tau[perm[r]];
        const cplx v = k.coeffs.at(permuted);
        uniform = uniform && v == first;
        acc += v;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

}  // namespace

VolterraKernel symmetrize_plain(const VolterraKernel& k) {
    if (k.order < 1) throw ContractViolation("symmetrize_plain: order must be >= 1");
    const double inv = 1.0 / static_cast<double>(factorial(k.order));
    VolterraKernel out(k.order, k.memory);
    std::vector<int> tau;
    for (std::size_t p = 0; p < k.coeffs.size(); ++p) {
        k.coeffs.unflatten(p, tau);
        bool uniform = false;
        const cplx sum = permutation_sum(k, tau, uniform);
        out.coeffs[p] = uniform ? k.coeffs[p] : sum * inv;
    }
    return out;
}

VolterraKernel symmetrize_weighted(const VolterraKernel& k) {
    if (k.order < 1) throw ContractViolation("symmetrize_weighted: order must be >= 1");
    VolterraKernel out(k.order, k.memory);
    std::vector<int> tau;
    for (std::size_t p = 0; p < k.coeffs.size(); ++p) {
        k.coeffs.unflatten(p, tau);
        std::map<int, int> multiplicity;
        for (int t : tau) ++multiplicity[t];
        std::vector<int> counts;
        for (const auto& [value, n] : multiplicity) counts.push_back(n);
        const double n_star = static_cast<double>(multinomial(k.order, counts));
        bool uniform = false;
        out.coeffs[p] = permutation_sum(k, tau, uniform) / n_star;
    }
    return out;
}

double asymmetry(const VolterraKernel& k) {
    if (k.order < 2) return 0.0;
    return max_abs_diff(k, symmetrize_plain(k));
}

VolterraFRF vfrf(const VolterraKernel& k, int L) {
    if (k.order > 0 && k.memory > L)
        throw ResolutionError("kernel memory " + std::to_string(k.memory) + " exceeds grid length " +
                              std::to_string(L));
    VolterraFRF out{k.order, L, Tensor(k.order, L)};
    if (k.order == 0) {
        out.bins[0] = k.coeffs[0];
        return out;
    }
    std::vector<int> idx;
    for (std::size_t p = 0; p < k.coeffs.size(); ++p) {
        k.coeffs.unflatten(p, idx);
        out.bins.at(idx) = k.coeffs[p];
    }
    fft_forward(out.bins.values(), cube_dims(k.order, L));
    return out;
}

VolterraKernel kernel_from_vfrf(const VolterraFRF& frf, int memory) {
    if (frf.order == 0) return VolterraKernel::constant(frf.bins[0]);
    if (memory > frf.length) throw ResolutionError("kernel_from_vfrf: memory exceeds grid length");
    std::vector<cplx> data = frf.bins.values();
    fft_inverse(data, cube_dims(frf.order, frf.length));
    const Tensor embedded(frf.order, frf.length, std::move(data));
    VolterraKernel out(frf.order, memory);
    std::vector<int> idx;
    for (std::size_t p = 0; p < out.coeffs.size(); ++p) {
        out.coeffs.unflatten(p, idx);
        out.coeffs[p] = embedded.at(idx);
    }
    return out;
}

VolterraSeries symmetrized(const VolterraSeries& s) {
    VolterraSeries out(s.memory());
    for (const auto& t : s.terms()) out.add(t.index, t.kernel.order >= 1 ? symmetrize_plain(t.kernel) : t.kernel);
    return out;
}

double series_kernel_deviation(const VolterraSeries& a, const VolterraSeries& b) {
    const int top = std::max(a.max_order(), b.max_order());
    double d = 0.0;
    for (int j = 0; j <= top; ++j) d = std::max(d, max_abs_diff(a.order_kernel(j), b.order_kernel(j)));
    return d;
}

bool series_kernel_equal(const VolterraSeries& a, const VolterraSeries& b) {
    return series_kernel_deviation(a, b) == 0.0;
}

VolterraSeries identity_series() {
    VolterraSeries s(1);
    VolterraKernel k(1, 1);
    k.coeffs[0] = 1.0;
    s.add(canonical_index(1), k);
    return s;
}

VolterraSeries delay_series(int d, int memory) {
    if (d < 0 || d >= memory)
        throw OutOfGridError("delay " + std::to_string(d) + " outside memory " + std::to_string(memory));
    VolterraSeries s(memory);
    VolterraKernel k(1, memory);
    k.coeffs[static_cast<std::size_t>(d)] = 1.0;
    s.add(canonical_index(1), k);
    return s;
}

VolterraSeries differencer_series(int r) {
    if (r < 0) throw ContractViolation("differencer: negative repetition count");
    // [1,-1] convolved with itself r times gives signed binomial coefficients.
    VolterraKernel k(1, r + 1);
    for (int i = 0; i <= r; ++i)
        k.coeffs[static_cast<std::size_t>(i)] = static_cast<double>(binomial(r, i)) * ((i % 2) ? -1.0 : 1.0);
    VolterraSeries s(r + 1);
    s.add(canonical_index(1), k);
    return s;
}

VolterraSeries memoryless_polynomial(const std::vector<cplx>& coeffs, int max_order) {
    if (static_cast<int>(coeffs.size()) - 1 > max_order)
        throw ContractViolation("memoryless polynomial degree exceeds the order cap");
    VolterraSeries s(1);
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        if (coeffs[n] == cplx(0.0)) continue;
        VolterraKernel k(static_cast<int>(n), 1);
        k.coeffs[0] = coeffs[n];
        s.add(canonical_index(static_cast<int>(n)), k);
    }
    return s;
}

SampledSignal circular_shift(const SampledSignal& s, int d) {
    const long L = static_cast<long>(s.size());
    SampledSignal out(s.size());
    for (long t = 0; t < L; ++t) out[static_cast<std::size_t>(t)] = s[static_cast<std::size_t>(mod(t - d, L))];
    return out;
}

}  // namespace volterra
