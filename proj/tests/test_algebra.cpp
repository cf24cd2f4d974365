#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "support.hpp"
#include "volterra/algebra.hpp"
#include "volterra/errors.hpp"
#include "volterra/evaluation.hpp"

using namespace volterra;
using namespace testsupport;

namespace {

VolterraSeries zero_constant(VolterraSeries s) {
    VolterraSeries out(s.memory());
    for (const auto& t : s.terms())
        if (t.kernel.order > 0) out.add(t.index, t.kernel);
    return out;
}

VolterraKernel integer_kernel(int order, int memory) {
    VolterraKernel k(order, memory);
    for (auto& v : k.coeffs.values()) v = cplx(random_int(-3, 3), random_int(-3, 3));
    return k;
}

// Order-j composite kernel from the delay-domain formula
//   v_j(tau) = sum_k sum_p sum_sigma b_k(sigma) prod_r a_{alpha_r}(theta_r - sigma_r),
// evaluated point by point with no shared code, then averaged over S_j.
VolterraKernel composite_oracle(const VolterraSeries& B, const VolterraSeries& A, int j, int N) {
    VolterraKernel raw(j, N);
    const int n_a = A.max_order(), n_b = B.max_order();
    const int MB = B.memory();
    for_each_tuple(j, N, [&](const std::vector<int>& tau) {
        cplx acc = 0.0;
        for (int k = 1; k <= n_b; ++k) {
            const VolterraKernel bk = B.order_kernel(k);
            for (const auto& p : weak_compositions(j, k)) {
                if (std::any_of(p.parts.begin(), p.parts.end(), [&](int x) { return x == 0 || x > n_a; })) continue;
                for_each_tuple(k, MB, [&](const std::vector<int>& sigma) {
                    cplx term = kernel_at(bk, sigma);
                    if (term == cplx(0.0)) return;
                    int start = 0;
                    for (int r = 0; r < k; ++r) {
                        std::vector<int> theta;
                        for (int q = 0; q < p.parts[r]; ++q) theta.push_back(tau[start + q] - sigma[r]);
                        term *= kernel_at(A.order_kernel(p.parts[r]), theta);
                        start += p.parts[r];
                    }
                    acc += term;
                });
            }
        }
        raw.at(tau) = acc;
    });
    // Explicit S_j average.
    VolterraKernel out(j, N);
    std::vector<int> perm(static_cast<std::size_t>(j));
    for_each_tuple(j, N, [&](const std::vector<int>& tau) {
        std::iota(perm.begin(), perm.end(), 0);
        cplx acc = 0.0;
        int count = 0;
        do {
            std::vector<int> t(tau.size());
            for (int r = 0; r < j; ++r) t[r] = tau[perm[r]];
            acc += raw.at(t);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.at(tau) = acc / static_cast<double>(count);
    });
    return out;
}

}  // namespace

TEST_CASE("sum of series") {
    const VolterraSeries V = random_series(3, 3), W = random_series(2, 4);
    const SampledSignal s = random_vector(9);
    SUBCASE("adding the empty series") { CHECK(series_kernel_equal(sum_series(V, VolterraSeries(1)), V)); }
    SUBCASE("doubling") {
        const auto y = oracle_eval(V, s);
        const auto yy = oracle_eval(sum_series(V, V), s);
        for (std::size_t t = 0; t < y.size(); ++t) CHECK(std::abs(yy[t] - 2.0 * y[t]) <= 1e-10 * std::max(1.0, std::abs(y[t])));
    }
    SUBCASE("outputs add") {
        const auto a = oracle_eval(V, s), b = oracle_eval(W, s);
        SampledSignal sum(a);
        for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += b[t];
        CHECK(max_dev(eval_time(sum_series(V, W), s), sum) <= 1e-10 * std::max(1.0, max_mag(sum)));
        CHECK(sum_series(V, W).is_canonical());
        CHECK(sum_series(V, W).memory() == 4);
    }
}

TEST_CASE("product of series") {
    SUBCASE("identity times identity squares the input") {
        const AlgebraResult r = product_series(identity_series(), identity_series());
        const SampledSignal s = random_vector(6);
        const SampledSignal y = oracle_eval(r.series, s);
        for (int t = 0; t < 6; ++t) CHECK(std::abs(y[t] - s[t] * s[t]) <= 1e-14);
        CHECK(r.series.max_order() == 2);
    }
    SUBCASE("a constant factor scales") {
        VolterraSeries A(1);
        A.add("0", VolterraKernel::constant(cplx(2.0, -1.0)));
        const VolterraSeries B = random_series(2, 3);
        const AlgebraResult r = product_series(A, B);
        for (int j = 0; j <= 2; ++j)
            CHECK(max_abs_diff(r.series.order_kernel(j), scale_kernel(B.order_kernel(j), cplx(2.0, -1.0))) <= 1e-15);
    }
    SUBCASE("outputs multiply pointwise") {
        for (int trial = 0; trial < 10; ++trial) {
            const VolterraSeries A = random_series(2, 3), B = random_series(2, 2);
            const SampledSignal s = random_vector(8);
            const auto a = oracle_eval(A, s), b = oracle_eval(B, s);
            SampledSignal prod(a);
            for (std::size_t t = 0; t < prod.size(); ++t) prod[t] *= b[t];
            const AlgebraResult r = product_series(A, B);
            CHECK(r.truncations.empty());
            CHECK(max_dev(eval_time(r.series, s), prod) <= 1e-9 * std::max(1.0, max_mag(prod)));
        }
    }
    SUBCASE("order-by-order projections") {
        const VolterraSeries A = random_series(2, 3), B = random_series(2, 3);
        const SampledSignal s = random_vector(7);
        const AlgebraResult r = product_series(A, B);
        for (int j = 0; j <= 4; ++j) {
            SampledSignal expect(7, 0.0);
            for (int k = 0; k <= j; ++k) {
                const auto a = eval_order(A, s, k), b = eval_order(B, s, j - k);
                for (int t = 0; t < 7; ++t) expect[t] += a[t] * b[t];
            }
            CHECK(max_dev(eval_order(r.series, s, j), expect) <= 1e-9 * std::max(1.0, max_mag(expect)));
        }
    }
    SUBCASE("orders above the cap are recorded") {
        const AlgebraResult r = product_series(random_series(3, 2), random_series(3, 2), AlgebraOptions{4});
        REQUIRE(r.truncations.size() == 2);
        CHECK(r.truncations[0].order == 5);
        CHECK(r.truncations[1].order == 6);
        CHECK(r.series.max_order() == 4);
    }
}

TEST_CASE("block summation matrices") {
    const SMatrix S = s_matrix(3, 2, WeakComposition{{1, 2}});
    CHECK(S.entries == IntMatrix{{1, 0, 0}, {0, 1, 1}});
    CHECK(S.apply({4, 5, 6}) == std::vector<long>{4, 11});
    CHECK(s_matrix(4, 1, WeakComposition{{4}}).entries == IntMatrix{{1, 1, 1, 1}});
    CHECK(s_matrix(2, 2, WeakComposition{{0, 2}}).entries == IntMatrix{{0, 0}, {1, 1}});
    CHECK_THROWS_AS(s_matrix(3, 2, WeakComposition{{1, 1}}), ContractViolation);
}

TEST_CASE("composition unit laws are exact") {
    VolterraSeries A = zero_constant(random_series(3, 3));
    A = symmetrized(A);
    const VolterraSeries B = symmetrized(random_series(3, 3));
    CHECK(series_kernel_equal(compose_series(identity_series(), A).series, A));
    CHECK(series_kernel_equal(compose_series(B, identity_series()).series, B));
}

TEST_CASE("square after delay") {
    const int d = 2;
    const AlgebraResult r = compose_series(memoryless_polynomial({0.0, 0.0, 1.0}), delay_series(d, 3));
    const VolterraKernel k = r.series.order_kernel(2);
    for (std::size_t p = 0; p < k.coeffs.size(); ++p) {
        std::vector<int> tau;
        k.coeffs.unflatten(p, tau);
        CHECK(k.coeffs[p] == cplx(tau == std::vector<int>{d, d} ? 1.0 : 0.0));
    }
    SampledSignal imp(8, 0.0);
    imp[1] = 3.0;
    const SampledSignal y = oracle_eval(r.series, imp);
    for (int t = 0; t < 8; ++t) CHECK(y[t] == cplx(t == 1 + d ? 9.0 : 0.0));
    const SampledSignal two = {1.0, 2.0, 0.0, -1.0, 0.5, 0.0, 0.0, 3.0};
    const SampledSignal y2 = oracle_eval(r.series, two);
    for (int t = 0; t < 8; ++t) CHECK(y2[t] == two[wrap(t - d, 8)] * two[wrap(t - d, 8)]);
}

TEST_CASE("composite kernels match the delay-domain oracle") {
    for (int trial = 0; trial < 6; ++trial) {
        const VolterraSeries A = zero_constant(random_series(2, 2));
        const VolterraSeries B = random_series(2, 2);
        const AlgebraResult r = compose_series(B, A);
        const int N = A.memory() + B.memory() - 1;
        for (int j = 1; j <= 4; ++j) {
            const VolterraKernel ref = composite_oracle(B, A, j, N);
            CHECK(max_abs_diff(pad_kernel(r.series.order_kernel(j), N), ref) <= 1e-10 * std::max(1.0, max_abs(ref)));
        }
        CHECK(r.series.constant_term() == B.constant_term());
    }
}

TEST_CASE("direct and spectral routes agree") {
    for (int trial = 0; trial < 5; ++trial) {
        const VolterraSeries A = zero_constant(random_series(2, 3));
        const VolterraSeries B = random_series(2, 3);
        const auto d = compose_series(B, A, AlgebraOptions{4, CompositionRoute::Direct});
        const auto s = compose_series(B, A, AlgebraOptions{4, CompositionRoute::Spectral});
        CHECK(series_kernel_deviation(d.series, s.series) <= 1e-10);
    }
}

TEST_CASE("composite evaluates as B after A") {
    for (int trial = 0; trial < 10; ++trial) {
        const VolterraSeries A = zero_constant(random_series(2, 3));
        const VolterraSeries B = random_series(2, 3);
        const AlgebraResult r = compose_series(B, A);
        CHECK(r.truncations.empty());
        const SampledSignal s = random_vector(10);
        const auto ref = oracle_eval(B, oracle_eval(A, s));
        CHECK(max_dev(eval_time(r.series, s), ref) <= 1e-8 * std::max(1.0, max_mag(ref)));
    }
}

TEST_CASE("composition truncation and preconditions") {
    const VolterraSeries A = zero_constant(random_series(2, 2));
    VolterraSeries B(2);
    B.add("3", random_kernel(3, 2));
    const AlgebraResult r = compose_series(B, A, AlgebraOptions{4});
    REQUIRE(r.truncations.size() == 2);
    CHECK(r.truncations[0].order == 5);
    CHECK(r.truncations[1].order == 6);
    CHECK(r.series.max_order() <= 4);
    CHECK_THROWS_AS(compose_series(B, random_series(2, 2, true)), UnsupportedConfiguration);
}

TEST_CASE("associativity") {
    SUBCASE("linear triples with integer kernels agree exactly") {
        VolterraSeries A(3), B(2), C(3);
        A.add("1", integer_kernel(1, 3));
        B.add("1", integer_kernel(1, 2));
        C.add("1", integer_kernel(1, 3));
        const AssociativityReport rep = associativity_harness(C, B, A, 3, 12);
        CHECK(rep.max_kernel_deviation() == 0.0);
        CHECK(rep.passed());
    }
    SUBCASE("random triples up to order two") {
        for (int trial = 0; trial < 25; ++trial) {
            const int M = random_int(1, 3);
            const VolterraSeries A = zero_constant(random_series(2, M));
            const VolterraSeries B = zero_constant(random_series(2, M));
            const VolterraSeries C = random_series(2, M);
            const AssociativityReport rep = associativity_harness(C, B, A, 3, 12, static_cast<std::uint64_t>(trial));
            CHECK(rep.max_kernel_deviation() <= 1e-8);
            CHECK(rep.max_output_deviation() <= 1e-8);
            CHECK(rep.labels_match);
            CHECK(rep.passed());
        }
    }
    SUBCASE("contribution labels") {
        for (int j = 1; j <= 6; ++j) {
            CHECK(labels_outer_first(3, 2, 2, j) == labels_inner_first(3, 2, 2, j));
            CHECK(labels_outer_first(2, 3, 1, j) == labels_inner_first(2, 3, 1, j));
        }
        // At j = 2 with all orders up to 2: (k=1,(1),((2))), (k=1,(2),((1,1))), (k=2,(1,1),((1),(1))).
        CHECK(labels_outer_first(2, 2, 2, 2).size() == 3);
    }
    SUBCASE("constant inner terms are rejected") {
        CHECK_THROWS_AS(associativity_harness(random_series(1, 2), random_series(1, 2, true), zero_constant(random_series(1, 2)), 1, 4),
                        UnsupportedConfiguration);
    }
}

TEST_CASE("coproduct") {
    const int L = 6;
    const VolterraSeries V = zero_constant(random_series(2, 2)), W = zero_constant(random_series(2, 3));
    const VolterraSeries VW = coproduct(V, W);
    CHECK(VW.terms().size() == V.terms().size() + W.terms().size());
    SUBCASE("outputs add like the level-wise sum") {
        const SampledSignal s = random_vector(L);
        CHECK(max_dev(oracle_eval(VW, s), oracle_eval(sum_series(V, W), s)) <= 1e-10);
    }
    SUBCASE("copairing satisfies both injection laws") {
        // Trivial catalog targets depend only on the order set.
        VolterraSeries V2(2), W2(3);
        V2.add("1", random_kernel(1, 2));
        V2.add("2", random_kernel(2, 2));
        W2.add("1", random_kernel(1, 3));
        W2.add("2", random_kernel(2, 3));
        const CatalogEntry f = catalog_trivial(V2, L);
        CatalogEntry g = catalog_trivial(W2, L);
        for (auto& [i, part] : g.morphism.parts)
            for (auto& v : part.psi.values()) v = random_cplx();
        const VolterraSeries X = f.target;
        const VolterraSeries sum = coproduct(V2, W2);
        const Morphism h = copair(f.morphism, g.morphism);
        CHECK(validate(h, sum, X).ok());
        const Morphism hi = compose_morphisms(h, coproduct_injection_left(V2, W2, L));
        const Morphism hk = compose_morphisms(h, coproduct_injection_right(V2, W2, L));
        CHECK(hi == f.morphism);
        CHECK(hk == g.morphism);
        const Spectrum s_hat = random_vector(L);
        const auto ref_f = apply_component(f.morphism, V2, X, s_hat);
        const auto ref_g = apply_component(g.morphism, W2, X, s_hat);
        CHECK(max_dev(apply_component(hi, V2, X, s_hat), ref_f) <= 1e-9 * max_mag(ref_f));
        CHECK(max_dev(apply_component(hk, W2, X, s_hat), ref_g) <= 1e-9 * max_mag(ref_g));
        CHECK(check_naturality(h, sum, X, 20) <= 1e-9 * std::max(1.0, max_mag(ref_g)));
    }
}
