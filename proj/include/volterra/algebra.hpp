#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "volterra/combinatorics.hpp"
#include "volterra/kernel.hpp"
#include "volterra/morphism.hpp"

namespace volterra {

// An order that was dropped because it exceeded the configured cap.
struct Truncation {
    int order;
    std::string reason;
};

enum class CompositionRoute {
    Automatic,  // direct summation when cheap, spectral assembly otherwise
    Direct,     // delay-domain sum over the nonzero entries of the outer kernels
    Spectral,   // block-sum formula on the DFT grid, then inverse transform
};

struct AlgebraOptions {
    int order_cap = kDefaultOrderCap;
    CompositionRoute route = CompositionRoute::Automatic;
    // Work estimate (multiply-adds) above which Automatic switches to Spectral.
    double direct_budget = 2e7;
};

struct AlgebraResult {
    VolterraSeries series;
    std::vector<Truncation> truncations;
};

// Level-wise sum; the result is canonical.
VolterraSeries sum_series(const VolterraSeries& V, const VolterraSeries& W);

// Sum that keeps the two index sets apart ("L:" and "R:" prefixes), so that
// the injections are index maps.
VolterraSeries coproduct(const VolterraSeries& V, const VolterraSeries& W);
Morphism coproduct_injection_left(const VolterraSeries& V, const VolterraSeries& W, int L);
Morphism coproduct_injection_right(const VolterraSeries& V, const VolterraSeries& W, int L);
// The morphism V+W -> X induced by f: V -> X and g: W -> X.
Morphism copair(const Morphism& f, const Morphism& g);

AlgebraResult product_series(const VolterraSeries& A, const VolterraSeries& B, const AlgebraOptions& opts = {});

// k x j block matrix whose r-th row sums the r-th block of Omega.
struct SMatrix {
    int j = 0;
    int k = 0;
    WeakComposition p;
    IntMatrix entries;

    std::vector<long> apply(const std::vector<int>& omega) const;
};

SMatrix s_matrix(int j, int k, const WeakComposition& p);

// B after A. Requires a zero constant term in A.
AlgebraResult compose_series(const VolterraSeries& B, const VolterraSeries& A, const AlgebraOptions& opts = {});

// One term of a doubly nested composition: outer order k, the middle orders
// feeding it, and the inner orders feeding each middle kernel.
struct ContributionLabel {
    int k = 0;
    std::vector<int> middle;
    std::vector<std::vector<int>> inner;

    auto operator<=>(const ContributionLabel&) const = default;
};

// Sorted labels of the order-j terms of (C <| B) <| A and C <| (B <| A), for
// kernels present at orders 1..n_C, 1..n_B, 1..n_A.
std::vector<ContributionLabel> labels_outer_first(int n_c, int n_b, int n_a, int j);
std::vector<ContributionLabel> labels_inner_first(int n_c, int n_b, int n_a, int j);

struct AssociativityReport {
    std::vector<double> order_deviation;  // indexed by order
    std::vector<double> trial_deviation;
    bool labels_match = false;
    bool outer_middle_labels_match = false;
    std::vector<Truncation> truncations;

    double max_kernel_deviation() const;
    double max_output_deviation() const;
    bool passed(double tol = 1e-8) const;
};

AssociativityReport associativity_harness(const VolterraSeries& C, const VolterraSeries& B, const VolterraSeries& A,
                                          int trials, int L, std::uint64_t seed = 1, const AlgebraOptions& opts = {});

}  // namespace volterra
