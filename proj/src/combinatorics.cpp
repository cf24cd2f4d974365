#include "volterra/combinatorics.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "volterra/errors.hpp"

namespace volterra {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("64-bit overflow in combinatorial count");
    return r;
}

int sum_of(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

// Appends every weak composition of `remaining` into `slots` parts, extending
// `prefix`, in lexicographic order.
void weak_rec(int remaining, int slots, std::vector<int>& prefix, std::vector<WeakComposition>& out) {
    if (slots == 1) {
        prefix.push_back(remaining);
        out.push_back({prefix});
        prefix.pop_back();
        return;
    }
    for (int first = 0; first <= remaining; ++first) {
        prefix.push_back(first);
        weak_rec(remaining - first, slots - 1, prefix, out);
        prefix.pop_back();
    }
}

void comp_rec(int remaining, int slots, std::vector<int>& prefix, std::vector<Composition>& out) {
    if (slots == 1) {
        prefix.push_back(remaining);
        out.push_back({prefix});
        prefix.pop_back();
        return;
    }
    for (int first = 1; first <= remaining - (slots - 1); ++first) {
        prefix.push_back(first);
        comp_rec(remaining - first, slots - 1, prefix, out);
        prefix.pop_back();
    }
}

void multi_rec(int B, int j, int lowest, std::vector<int>& seq, std::vector<Multicombination>& out) {
    if (static_cast<int>(seq.size()) == j) {
        Multicombination m{std::vector<int>(B, 0)};
        for (int s : seq) ++m.counts[s];
        out.push_back(std::move(m));
        return;
    }
    for (int s = lowest; s < B; ++s) {
        seq.push_back(s);
        multi_rec(B, j, s, seq, out);
        seq.pop_back();
    }
}

}  // namespace

int Composition::total() const { return sum_of(parts); }
int WeakComposition::total() const { return sum_of(parts); }
int Multicombination::total() const { return sum_of(counts); }

std::vector<int> Multicombination::representative() const {
    std::vector<int> rep;
    for (int s = 0; s < static_cast<int>(counts.size()); ++s)
        for (int c = 0; c < counts[s]; ++c) rep.push_back(s);
    return rep;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n - k + i) is always divisible by i at this point.
        const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        const std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
        r = checked_mul(r / g, num / (static_cast<std::uint64_t>(i) / g));
    }
    return r;
}

std::uint64_t factorial(int n) {
    if (n < 0) throw ContractViolation("factorial of negative number");
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r = checked_mul(r, static_cast<std::uint64_t>(i));
    return r;
}

std::uint64_t multinomial(int j, const std::vector<int>& parts) {
    int running = 0;
    std::uint64_t r = 1;
    for (int p : parts) {
        if (p < 0) throw ContractViolation("multinomial: negative part");
        running += p;
        r = checked_mul(r, binomial(running, p));
    }
    if (running != j)
        throw ContractViolation("multinomial: parts sum to " + std::to_string(running) + ", expected " +
                                std::to_string(j));
    return r;
}

std::vector<WeakComposition> weak_compositions(int j, int k) {
    if (j < 0 || k < 0) throw ContractViolation("weak_compositions: negative argument");
    std::vector<WeakComposition> out;
    if (k == 0) {
        if (j > 0) throw DomainError("weak_compositions: no 0-part composition of a positive integer");
        out.push_back({});
        return out;
    }
    std::vector<int> prefix;
    weak_rec(j, k, prefix, out);
    return out;
}

std::vector<Composition> compositions(int n, int m) {
    if (n < 0 || m < 0) throw ContractViolation("compositions: negative argument");
    std::vector<Composition> out;
    if (m == 0) {
        if (n == 0) out.push_back({});
        return out;
    }
    if (m > n) return out;
    std::vector<int> prefix;
    comp_rec(n, m, prefix, out);
    return out;
}

std::vector<Multicombination> multicombinations(int B, int j) {
    if (B < 1 || j < 0) throw ContractViolation("multicombinations: need B >= 1 and j >= 0");
    std::vector<Multicombination> out;
    std::vector<int> seq;
    multi_rec(B, j, 0, seq, out);
    return out;
}

std::uint64_t interference_count(int k) {
    if (k < 1 || k > 62) throw ContractViolation("interference_count: k out of range");
    return (std::uint64_t{1} << k) - 2;
}

}  // namespace volterra
