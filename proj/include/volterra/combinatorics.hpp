#pragma once

#include <cstdint>
#include <vector>

namespace volterra {

// An ordered list of parts. For compositions every part is >= 1; for weak
// compositions parts may be zero.
struct Composition {
    std::vector<int> parts;
    int total() const;
};

struct WeakComposition {
    std::vector<int> parts;
    int total() const;
    int arity() const { return static_cast<int>(parts.size()); }
};

// A multiset of size j over B symbols, stored as a count per symbol.
struct Multicombination {
    std::vector<int> counts;
    int total() const;
    // Canonical sorted representative: symbol indices in non-decreasing order.
    std::vector<int> representative() const;
};

// Exact 64-bit arithmetic; throws std::overflow_error on overflow.
std::uint64_t binomial(int n, int k);
std::uint64_t factorial(int n);
std::uint64_t multinomial(int j, const std::vector<int>& parts);

std::vector<WeakComposition> weak_compositions(int j, int k);
std::vector<Composition> compositions(int n, int m);
std::vector<Multicombination> multicombinations(int B, int j);

// Number of interference terms generated by a k-th order polynomial
// distribution on a multi-component signal.
std::uint64_t interference_count(int k);

}  // namespace volterra
