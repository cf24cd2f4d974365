#include "volterra/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "volterra/errors.hpp"
#include "volterra/evaluation.hpp"

namespace volterra {

namespace {

struct Entry {
    std::vector<int> tau;
    cplx value;
};

std::vector<Entry> nonzeros(const VolterraKernel& k) {
    std::vector<Entry> out;
    std::vector<int> tau;
    for (std::size_t p = 0; p < k.coeffs.size(); ++p) {
        if (k.coeffs[p] == cplx(0.0)) continue;
        k.coeffs.unflatten(p, tau);
        out.push_back({tau, k.coeffs[p]});
    }
    return out;
}

// Highest order carrying a nonzero kernel, or 0.
int effective_order(const VolterraSeries& s) {
    int n = 0;
    for (const auto& t : s.terms())
        if (max_abs(t.kernel) > 0.0) n = std::max(n, t.kernel.order);
    return n;
}

std::vector<VolterraKernel> kernels_by_order(const VolterraSeries& s, int n, int memory) {
    std::vector<VolterraKernel> out;
    for (int j = 0; j <= n; ++j) out.push_back(pad_kernel(s.order_kernel(j), std::max(memory, s.memory())));
    return out;
}

bool has_zero_or_large_part(const WeakComposition& p, int limit) {
    return std::any_of(p.parts.begin(), p.parts.end(), [&](int a) { return a == 0 || a > limit; });
}

// Adds b(sigma) * prod_r a_{alpha_r}(theta_r - sigma_r 1) into v for every
// nonzero entry of the outer and inner kernels.
void accumulate_direct(VolterraKernel& v, const std::vector<Entry>& b_entries, const WeakComposition& p,
                       const std::vector<std::vector<Entry>>& a_entries) {
    const int k = p.arity();
    std::vector<int> tau(static_cast<std::size_t>(v.order));
    std::vector<int> offset(static_cast<std::size_t>(k), 0);
    for (int r = 1; r < k; ++r) offset[r] = offset[r - 1] + p.parts[r - 1];

    for (const Entry& b : b_entries) {
        // Depth-first over blocks.
        std::vector<std::size_t> choice(static_cast<std::size_t>(k), 0);
        int r = 0;
        std::vector<cplx> partial(static_cast<std::size_t>(k) + 1, 0.0);
        partial[0] = b.value;
        while (r >= 0) {
            const auto& list = a_entries[static_cast<std::size_t>(p.parts[r])];
            if (choice[r] == list.size()) {
                choice[r] = 0;
                --r;
                if (r >= 0) ++choice[r];
                continue;
            }
            const Entry& a = list[choice[r]];
            for (int q = 0; q < p.parts[r]; ++q) tau[offset[r] + q] = a.tau[q] + b.tau[r];
            partial[r + 1] = partial[r] * a.value;
            if (r + 1 == k) {
                v.at(tau) += partial[k];
                ++choice[r];
            } else {
                ++r;
            }
        }
    }
}

double direct_cost(const std::vector<VolterraKernel>& b, const std::vector<VolterraKernel>& a, int jmax) {
    std::vector<double> nnz_a(a.size()), nnz_b(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) nnz_a[i] = static_cast<double>(nonzeros(a[i]).size());
    for (std::size_t i = 0; i < b.size(); ++i) nnz_b[i] = static_cast<double>(nonzeros(b[i]).size());
    const int na = static_cast<int>(a.size()) - 1;
    double cost = 0.0;
    for (int j = 1; j <= jmax; ++j)
        for (int k = 1; k < static_cast<int>(b.size()); ++k)
            for (const auto& p : compositions(j, k)) {
                if (std::any_of(p.parts.begin(), p.parts.end(), [&](int x) { return x > na; })) continue;
                double c = nnz_b[static_cast<std::size_t>(k)];
                for (int x : p.parts) c *= nnz_a[static_cast<std::size_t>(x)];
                cost += c;
            }
    return cost;
}

VolterraKernel compose_order_direct(int j, int N, const std::vector<VolterraKernel>& b,
                                    const std::vector<std::vector<Entry>>& a_entries, int n_a) {
    VolterraKernel v(j, N);
    for (int k = 1; k < static_cast<int>(b.size()); ++k) {
        const auto b_entries = nonzeros(b[static_cast<std::size_t>(k)]);
        if (b_entries.empty()) continue;
        for (const auto& p : weak_compositions(j, k)) {
            if (has_zero_or_large_part(p, n_a)) continue;  // a_0 = 0 and a_{>n_A} = 0
            accumulate_direct(v, b_entries, p, a_entries);
        }
    }
    return v;
}

VolterraKernel compose_order_spectral(int j, int N, const std::vector<VolterraFRF>& b_hat,
                                      const std::vector<VolterraFRF>& a_hat, int n_a) {
    VolterraFRF acc{j, N, Tensor(j, N)};
    std::vector<int> omega;
    for (int k = 1; k < static_cast<int>(b_hat.size()); ++k) {
        for (const auto& p : weak_compositions(j, k)) {
            if (has_zero_or_large_part(p, n_a)) continue;
            const SMatrix S = s_matrix(j, k, p);
            for (std::size_t pos = 0; pos < acc.bins.size(); ++pos) {
                acc.bins.unflatten(pos, omega);
                cplx term = b_hat[static_cast<std::size_t>(k)].at_mod(S.apply(omega));
                int start = 0;
                for (int r = 0; r < k; ++r) {
                    const int len = p.parts[r];
                    std::vector<int> theta(omega.begin() + start, omega.begin() + start + len);
                    term *= a_hat[static_cast<std::size_t>(len)].at(theta);
                    start += len;
                }
                acc.bins[pos] += term;
            }
        }
    }
    return kernel_from_vfrf(acc, N);
}

}  // namespace

VolterraSeries sum_series(const VolterraSeries& V, const VolterraSeries& W) {
    VolterraSeries out(std::max(V.memory(), W.memory()));
    for (const auto& t : V.terms()) out.add_to_order(t.kernel);
    for (const auto& t : W.terms()) out.add_to_order(t.kernel);
    return out;
}

VolterraSeries coproduct(const VolterraSeries& V, const VolterraSeries& W) {
    VolterraSeries out(std::max(V.memory(), W.memory()));
    for (const auto& t : V.terms()) out.add("L:" + t.index, t.kernel);
    for (const auto& t : W.terms()) out.add("R:" + t.index, t.kernel);
    return out;
}

namespace {

Morphism injection(const VolterraSeries& side, const VolterraSeries& whole, const std::string& prefix, int L) {
    Morphism m;
    m.length = L;
    for (const auto& t : side.terms()) m.source_orders[t.index] = t.kernel.order;
    for (const auto& t : whole.terms()) m.target_orders[t.index] = t.kernel.order;
    for (const auto& t : side.terms())
        m.parts[t.index] = MorphismPart{prefix + t.index, identity_matrix(t.kernel.order), Tensor(t.kernel.order, L, 1.0)};
    return m;
}

}  // namespace

Morphism coproduct_injection_left(const VolterraSeries& V, const VolterraSeries& W, int L) {
    return injection(V, coproduct(V, W), "L:", L);
}

Morphism coproduct_injection_right(const VolterraSeries& V, const VolterraSeries& W, int L) {
    return injection(W, coproduct(V, W), "R:", L);
}

Morphism copair(const Morphism& f, const Morphism& g) {
    if (f.target_orders != g.target_orders || f.length != g.length)
        throw ContractViolation("copair: morphisms do not share a codomain");
    Morphism h;
    h.length = f.length;
    h.target_orders = f.target_orders;
    for (const auto& [i, j] : f.source_orders) h.source_orders["L:" + i] = j;
    for (const auto& [i, j] : g.source_orders) h.source_orders["R:" + i] = j;
    for (const auto& [i, part] : f.parts) h.parts["L:" + i] = part;
    for (const auto& [i, part] : g.parts) h.parts["R:" + i] = part;
    return h;
}

AlgebraResult product_series(const VolterraSeries& A, const VolterraSeries& B, const AlgebraOptions& opts) {
    const int n_a = std::max(0, A.max_order());
    const int n_b = std::max(0, B.max_order());
    const int M = std::max(A.memory(), B.memory());
    const auto a = kernels_by_order(A, n_a, M);
    const auto b = kernels_by_order(B, n_b, M);
    AlgebraResult res{VolterraSeries(M), {}};
    for (int j = 0; j <= n_a + n_b; ++j) {
        if (j > opts.order_cap) {
            res.truncations.push_back({j, "product order exceeds cap " + std::to_string(opts.order_cap)});
            continue;
        }
        VolterraKernel v(j, M);
        bool any = false;
        std::vector<int> tau;
        for (int a1 = std::max(0, j - n_b); a1 <= std::min(j, n_a); ++a1) {
            const VolterraKernel& ka = a[static_cast<std::size_t>(a1)];
            const VolterraKernel& kb = b[static_cast<std::size_t>(j - a1)];
            if (max_abs(ka) == 0.0 || max_abs(kb) == 0.0) continue;
            any = true;
            for (std::size_t p = 0; p < v.coeffs.size(); ++p) {
                v.coeffs.unflatten(p, tau);
                const std::vector<int> first(tau.begin(), tau.begin() + a1);
                const std::vector<int> second(tau.begin() + a1, tau.end());
                v.coeffs[p] += ka.at(first) * kb.at(second);
            }
        }
        if (any) res.series.add(canonical_index(j), v);
    }
    return res;
}

std::vector<long> SMatrix::apply(const std::vector<int>& omega) const {
    std::vector<long> out(static_cast<std::size_t>(k), 0);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < j; ++c) out[r] += static_cast<long>(entries[r][c]) * omega[c];
    return out;
}

SMatrix s_matrix(int j, int k, const WeakComposition& p) {
    if (p.arity() != k || p.total() != j) throw ContractViolation("s_matrix: p is not a weak k-composition of j");
    SMatrix S{j, k, p, IntMatrix(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(j), 0))};
    int col = 0;
    for (int r = 0; r < k; ++r)
        for (int q = 0; q < p.parts[r]; ++q) S.entries[r][col++] = 1;
    return S;
}

AlgebraResult compose_series(const VolterraSeries& B, const VolterraSeries& A, const AlgebraOptions& opts) {
    if (A.constant_term() != cplx(0.0))
        throw UnsupportedConfiguration("series composition requires the inner series to have no constant term");
    const int n_a = effective_order(A);
    const int n_b = std::max(0, B.max_order());
    const int N = A.memory() + B.memory() - 1;
    const auto a = kernels_by_order(A, n_a, A.memory());
    const auto b = kernels_by_order(B, n_b, B.memory());

    AlgebraResult res{VolterraSeries(N), {}};
    if (b[0].coeffs[0] != cplx(0.0)) res.series.add(canonical_index(0), b[0]);

    const int top = n_a * n_b;
    const int jmax = std::min(top, opts.order_cap);
    for (int j = opts.order_cap + 1; j <= top; ++j)
        res.truncations.push_back({j, "composite order exceeds cap " + std::to_string(opts.order_cap)});
    if (jmax < 1) return res;

    bool direct = opts.route == CompositionRoute::Direct;
    if (opts.route == CompositionRoute::Automatic) direct = direct_cost(b, a, jmax) <= opts.direct_budget;

    std::vector<std::vector<Entry>> a_entries;
    std::vector<VolterraFRF> a_hat, b_hat;
    if (direct) {
        for (const auto& k : a) a_entries.push_back(nonzeros(k));
    } else {
        for (const auto& k : a) a_hat.push_back(vfrf(k, N));
        for (const auto& k : b) b_hat.push_back(vfrf(k, N));
    }
    for (int j = 1; j <= jmax; ++j) {
        VolterraKernel v = direct ? compose_order_direct(j, N, b, a_entries, n_a)
                                  : compose_order_spectral(j, N, b_hat, a_hat, n_a);
        if (max_abs(v) == 0.0) continue;
        res.series.add(canonical_index(j), symmetrize_plain(v));
    }
    return res;
}

std::vector<ContributionLabel> labels_outer_first(int n_c, int n_b, int n_a, int j) {
    // (C <| B) <| A: j splits into l inner orders, l splits into k middle orders.
    std::vector<ContributionLabel> out;
    for (int l = 1; l <= j; ++l) {
        for (const auto& q : compositions(j, l)) {
            if (std::any_of(q.parts.begin(), q.parts.end(), [&](int x) { return x > n_a; })) continue;
            for (int k = 1; k <= std::min(n_c, l); ++k) {
                for (const auto& p : compositions(l, k)) {
                    if (std::any_of(p.parts.begin(), p.parts.end(), [&](int x) { return x > n_b; })) continue;
                    ContributionLabel lab{k, p.parts, {}};
                    int start = 0;
                    for (int m : p.parts) {
                        lab.inner.emplace_back(q.parts.begin() + start, q.parts.begin() + start + m);
                        start += m;
                    }
                    out.push_back(std::move(lab));
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ContributionLabel> labels_inner_first(int n_c, int n_b, int n_a, int j) {
    // C <| (B <| A): j splits into k parts, each part alpha_r splits into
    // lbar_r inner orders.
    std::vector<ContributionLabel> out;
    for (int k = 1; k <= std::min(n_c, j); ++k) {
        for (const auto& alpha : compositions(j, k)) {
            // Enumerate the per-block choices as a mixed-radix product.
            std::vector<std::vector<std::pair<int, std::vector<int>>>> options(static_cast<std::size_t>(k));
            for (int r = 0; r < k; ++r)
                for (int lbar = 1; lbar <= std::min(n_b, alpha.parts[r]); ++lbar)
                    for (const auto& q : compositions(alpha.parts[r], lbar)) {
                        if (std::any_of(q.parts.begin(), q.parts.end(), [&](int x) { return x > n_a; })) continue;
                        options[r].push_back({lbar, q.parts});
                    }
            if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); })) continue;
            std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
            while (true) {
                ContributionLabel lab{k, {}, {}};
                for (int r = 0; r < k; ++r) {
                    lab.middle.push_back(options[r][pick[r]].first);
                    lab.inner.push_back(options[r][pick[r]].second);
                }
                out.push_back(std::move(lab));
                int r = k - 1;
                while (r >= 0 && ++pick[r] == options[r].size()) pick[r--] = 0;
                if (r < 0) break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double AssociativityReport::max_kernel_deviation() const {
    double d = 0.0;
    for (double x : order_deviation) d = std::max(d, x);
    return d;
}

double AssociativityReport::max_output_deviation() const {
    double d = 0.0;
    for (double x : trial_deviation) d = std::max(d, x);
    return d;
}

bool AssociativityReport::passed(double tol) const {
    return labels_match && outer_middle_labels_match && max_kernel_deviation() <= tol && max_output_deviation() <= tol;
}

AssociativityReport associativity_harness(const VolterraSeries& C, const VolterraSeries& B, const VolterraSeries& A,
                                          int trials, int L, std::uint64_t seed, const AlgebraOptions& opts) {
    if (B.constant_term() != cplx(0.0) || A.constant_term() != cplx(0.0))
        throw UnsupportedConfiguration("associativity harness requires A and B without constant terms");
    AssociativityReport rep;
    const AlgebraResult cb = compose_series(C, B, opts);
    const AlgebraResult left = compose_series(cb.series, A, opts);
    const AlgebraResult ba = compose_series(B, A, opts);
    const AlgebraResult right = compose_series(C, ba.series, opts);
    for (const auto* r : {&cb, &left, &ba, &right})
        rep.truncations.insert(rep.truncations.end(), r->truncations.begin(), r->truncations.end());

    const int top = std::max(left.series.max_order(), right.series.max_order());
    for (int j = 0; j <= top; ++j)
        rep.order_deviation.push_back(max_abs_diff(left.series.order_kernel(j), right.series.order_kernel(j)));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < trials; ++t) {
        SampledSignal s(static_cast<std::size_t>(L));
        for (auto& x : s) x = cplx(gauss(rng), gauss(rng));
        const SampledSignal y1 = eval_time(left.series, s);
        const SampledSignal y2 = eval_time(right.series, s);
        double d = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) d = std::max(d, std::abs(y1[i] - y2[i]));
        rep.trial_deviation.push_back(d);
    }

    const int n_c = effective_order(C), n_b = effective_order(B), n_a = effective_order(A);
    rep.labels_match = true;
    rep.outer_middle_labels_match = true;
    for (int j = 1; j <= opts.order_cap; ++j) {
        const auto lhs = labels_outer_first(n_c, n_b, n_a, j);
        const auto rhs = labels_inner_first(n_c, n_b, n_a, j);
        if (lhs != rhs) rep.labels_match = false;
        auto project = [](const std::vector<ContributionLabel>& v) {
            std::vector<std::pair<int, std::vector<int>>> out;
            for (const auto& l : v) out.push_back({l.k, l.middle});
            std::sort(out.begin(), out.end());
            return out;
        };
        if (project(lhs) != project(rhs)) rep.outer_middle_labels_match = false;
    }
    return rep;
}

}  // namespace volterra
