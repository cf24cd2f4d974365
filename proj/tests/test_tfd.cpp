#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "volterra/errors.hpp"
#include "volterra/fft.hpp"
#include "volterra/tfd.hpp"

using namespace volterra;
using namespace testsupport;

namespace {

constexpr double kPi = std::numbers::pi;

SampledSignal tone(double k0, int L, double amp = 1.0) {
    SampledSignal s(static_cast<std::size_t>(L));
    for (int t = 0; t < L; ++t) s[t] = std::polar(amp, 2.0 * kPi * k0 * t / L);
    return s;
}

cplx circ(const SampledSignal& x, long t) { return x[wrap(t, static_cast<long>(x.size()))]; }

// Symmetric-lag WVD with explicit exponentials.
std::vector<std::vector<cplx>> naive_wvd(const SampledSignal& x) {
    const int L = static_cast<int>(x.size()), F = L / 2, R = L / 4;
    std::vector<std::vector<cplx>> W(L, std::vector<cplx>(F, 0.0));
    for (int n = 0; n < L; ++n)
        for (int k = 0; k < F; ++k)
            for (int m = -R; m <= R; ++m)
                W[n][k] += circ(x, n + m) * std::conj(circ(x, n - m)) * std::polar(1.0, -2.0 * kPi * 2 * m * k / L);
    return W;
}

// Band-limited delay with signed bins and a cosine at Nyquist.
SampledSignal naive_shift(const SampledSignal& x, double d) {
    const int L = static_cast<int>(x.size());
    std::vector<cplx> X = naive_dft(x);
    for (int k = 0; k < L; ++k) {
        if (2 * k == L) {
            X[k] *= std::cos(kPi * d);
            continue;
        }
        const int ks = 2 * k < L ? k : k - L;
        X[k] *= std::polar(1.0, 2.0 * kPi * ks * d / L);
    }
    return naive_idft(X);
}

// Lattice-sum HOWVD with lag step 2: lags tau_r = 2 m_r, centre alpha = sum tau / k,
// factor r (r = 0 is the unlagged base) conjugated when r is even.
std::vector<cplx> naive_howvd(const SampledSignal& x, int k) {
    const int L = static_cast<int>(x.size()), F = L / 2, R = L / 4, dims = k - 1;
    std::size_t slice = 1;
    for (int r = 0; r < dims; ++r) slice *= F;
    std::vector<cplx> out(slice * L, 0.0);
    for_each_tuple(dims, 2 * R + 1, [&](const std::vector<int>& digits) {
        std::vector<int> m(digits.size());
        double alpha = 0.0;
        for (int r = 0; r < dims; ++r) {
            m[r] = digits[r] - R;
            alpha += 2.0 * m[r] / k;
        }
        std::vector<SampledSignal> factors{naive_shift(x, -alpha)};
        for (int r = 0; r < dims; ++r) factors.push_back(naive_shift(x, 2.0 * m[r] - alpha));
        for (int t = 0; t < L; ++t) {
            cplx prod = 1.0;
            for (int r = 0; r < k; ++r) prod *= (r % 2 == 0) ? std::conj(factors[r][t]) : factors[r][t];
            for_each_tuple(dims, F, [&](const std::vector<int>& f) {
                double ph = 0.0;
                std::size_t cell = t;
                for (int r = 0; r < dims; ++r) {
                    ph += static_cast<double>(f[r]) * m[r];
                    cell = cell * F + f[r];
                }
                out[cell] += prod * std::polar(1.0, -2.0 * kPi * ph / F);
            });
        }
    });
    return out;
}

double grid_dev(const TFDGrid& a, const TFDGrid& b) {
    REQUIRE(a.rows == b.rows);
    REQUIRE(a.cols == b.cols);
    return max_dev(a.values, b.values);
}

// Analytic pulse: Gaussian spectrum centred at `centre` with width sigma_k.
SampledSignal spectral_pulse(int L, double centre, double sigma_k, double t0) {
    std::vector<cplx> X(L, 0.0);
    for (int k = 0; k < L / 2; ++k)
        X[k] = std::exp(-(k - centre) * (k - centre) / (2 * sigma_k * sigma_k)) * std::polar(1.0, -2.0 * kPi * k * t0 / L);
    return naive_idft(X);
}

}  // namespace

TEST_CASE("analytic signal") {
    const int L = 64;
    SUBCASE("cosine becomes a complex exponential") {
        SampledSignal c(L);
        for (int t = 0; t < L; ++t) c[t] = std::cos(2.0 * kPi * 5 * t / L);
        CHECK(max_dev(analytic_signal(c), tone(5, L)) <= 1e-10);
    }
    SUBCASE("real part is recovered for noise") {
        SampledSignal s(L);
        for (auto& v : s) v = random_real();
        const SampledSignal a = analytic_signal(s);
        double d = 0.0;
        for (int t = 0; t < L; ++t) d = std::max(d, std::abs(a[t].real() - s[t].real()));
        CHECK(d <= 1e-10);
        const auto spec = naive_dft(a);
        for (int k = L / 2 + 1; k < L; ++k) CHECK(std::abs(spec[k]) <= 1e-10);
    }
    SUBCASE("constant passes through") {
        const SampledSignal one(L, 2.0);
        CHECK(max_dev(analytic_signal(one), one) <= 1e-12);
    }
    CHECK_THROWS_AS(analytic_signal(SampledSignal(7, 1.0)), ContractViolation);
}

TEST_CASE("polynomial-phase signals") {
    const int L = 64;
    SUBCASE("constant phase is DC") {
        const auto spec = naive_dft(chirp(PolynomialPhase{{0.3}}, L));
        for (int k = 1; k < L; ++k) CHECK(std::abs(spec[k]) <= 1e-10);
    }
    SUBCASE("linear phase is a tone") {
        const double beta = 2.0 * kPi * 7 / L;
        const PolynomialPhase ph{{0.0, beta}};
        CHECK(max_dev(chirp(ph, L), tone(7, L)) <= 1e-12);
        CHECK(std::abs(ph.inst_freq(10.0) - 7.0 / L) <= 1e-15);
    }
    SUBCASE("quadratic phase has a linear IF") {
        const double alpha = 0.002, beta = 0.4;
        const PolynomialPhase ph{{0.0, beta, alpha}};
        for (double t : {0.0, 5.5, 40.0}) CHECK(std::abs(ph.inst_freq(t) - (2 * alpha * t + beta) / (2 * kPi)) <= 1e-15);
        const PolynomialPhase shifted{{0.0, beta, alpha}, 10.0};
        CHECK(std::abs(shifted.phase(12.0) - (alpha * 4 + beta * 2)) <= 1e-15);
    }
}

TEST_CASE("fractional shift") {
    const int L = 32;
    // Zero Nyquist bin, where a real-valued shift cannot compose.
    std::vector<cplx> X = naive_dft(random_vector(L));
    X[L / 2] = 0.0;
    const SampledSignal x = naive_idft(X);
    CHECK(max_dev(fractional_shift(x, 3.0), circular_shift(x, -3)) == 0.0);
    CHECK(max_dev(fractional_shift(x, 0.37), naive_shift(x, 0.37)) <= 1e-12);
    CHECK(max_dev(fractional_shift(fractional_shift(x, 0.25), 0.75), fractional_shift(x, 1.0)) <= 1e-12);
    const SampledSignal t = tone(4, L);
    CHECK(max_dev(fractional_shift(t, 0.5), tone(4, L, 1.0)) > 0.1);
    SampledSignal expect(t);
    for (auto& v : expect) v *= std::polar(1.0, 2.0 * kPi * 4 * 0.5 / L);
    CHECK(max_dev(fractional_shift(t, 0.5), expect) <= 1e-12);
}

TEST_CASE("Wigner-Ville distribution") {
    SUBCASE("matches a direct lag sum") {
        const SampledSignal x = random_vector(24);
        const TFDGrid W = wvd(x);
        const auto ref = naive_wvd(x);
        CHECK(W.rows == 24);
        CHECK(W.cols == 12);
        double d = 0.0;
        for (int n = 0; n < 24; ++n)
            for (int k = 0; k < 12; ++k) d = std::max(d, std::abs(W.at(n, k) - ref[n][k]));
        CHECK(d <= 1e-10);
    }
    SUBCASE("tone rows peak at the tone bin") {
        const TFDGrid W = wvd(tone(9, 64));
        for (int r : ridge(W)) CHECK(r == 9);
        CHECK(std::abs(W.at(0, 9) - cplx(33.0)) <= 1e-10);
    }
    SUBCASE("linear chirp tracks its IF within one bin") {
        const int L = 256;
        const PolynomialPhase ph{{0.0, 2.0 * kPi * 0.08, 2.0 * kPi * 0.3 / (2.0 * L)}};
        const TFDGrid W = wvd(chirp(ph, L));
        const auto r = ridge(W);
        // Within L/8 of either end the lags that wrap across the record
        // outnumber the direct ones, so per-row tracking is asserted inside.
        for (int n = L / 8; n < L - L / 8; ++n) CHECK(std::abs(r[n] - std::round(ph.inst_freq(n) * L)) <= 1.0);
        CHECK(if_concentration(W, ph) <= 1.0);
    }
    SUBCASE("marginal and realness") {
        const int L = 64;
        const SampledSignal x = analytic_signal(random_vector(L));
        const TFDGrid W = wvd(x);
        double imag = 0.0;
        for (const auto& v : W.values) imag = std::max(imag, std::abs(v.imag()));
        CHECK(imag <= 1e-9 * W.max_abs());
        for (int n = 0; n < L; ++n) {
            cplx sum = 0.0;
            for (int k = 0; k < W.cols; ++k) sum += W.at(n, k);
            CHECK(std::abs(sum / static_cast<double>(W.cols) - std::norm(x[n])) <= 0.02 * std::norm(x[n]) + 1e-12);
        }
    }
    SUBCASE("Gaussian-envelope tone is non-negative") {
        const int L = 128;
        SampledSignal x(L);
        for (int t = 0; t < L; ++t) x[t] = std::exp(-(t - 64.0) * (t - 64.0) / (2 * 64.0)) * std::polar(1.0, 2.0 * kPi * 20 * t / L);
        const TFDGrid W = wvd(x);
        double lowest = 0.0;
        for (const auto& v : W.values) lowest = std::min(lowest, v.real());
        CHECK(lowest >= -1e-6 * W.max_abs());
    }
    SUBCASE("two tones produce an oscillating cross term at the midpoint") {
        const int L = 64, k1 = 6, k2 = 18;
        SampledSignal x = tone(k1, L);
        const SampledSignal b = tone(k2, L);
        for (int t = 0; t < L; ++t) x[t] += b[t];
        const TFDGrid W = wvd(x);
        SampledSignal mid(L);
        for (int n = 0; n < L; ++n) mid[n] = W.at(n, (k1 + k2) / 2);
        const auto spec = naive_dft(mid);
        int peak = 0;
        for (int k = 1; k < L; ++k)
            if (std::abs(spec[k]) > std::abs(spec[peak])) peak = k;
        CHECK((peak == k2 - k1 || peak == L - (k2 - k1)));
        CHECK(std::abs(spec[peak]) >= 10.0 * std::abs(spec[0]));
    }
}

TEST_CASE("ambiguity function") {
    const int L = 32;
    SUBCASE("unit impulse sits on the zero lag") {
        SampledSignal h(L, 0.0);
        h[0] = 1.0;
        const ParameterFunction A = ambiguity(h);
        for (int xi = 0; xi < L; ++xi)
            for (int c = 0; c < L / 2; ++c) CHECK(A.at(xi, c) == cplx(c == 0 ? 1.0 : 0.0));
    }
    SUBCASE("origin holds the window energy") {
        const SampledSignal h = random_vector(L);
        double energy = 0.0;
        for (const auto& v : h) energy += std::norm(v);
        CHECK(std::abs(ambiguity(h).at(0, 0) - energy) <= 1e-10 * energy);
    }
    SUBCASE("Gaussian window matches a direct computation") {
        SampledSignal h(L);
        for (int t = 0; t < L; ++t) {
            const double u = signed_rep(t, L);
            h[t] = std::exp(-u * u / (2 * 9.0));
        }
        const ParameterFunction A = ambiguity(h);
        double d = 0.0;
        for (int xi = 0; xi < L; ++xi)
            for (int m = -L / 4; m <= L / 4; ++m) {
                cplx ref = 0.0;
                for (int mm = -L / 4; mm <= L / 4; ++mm) {
                    if (wrap(mm - m, L / 2) != 0) continue;
                    for (int s = 0; s < L; ++s)
                        ref += circ(h, s + mm) * std::conj(circ(h, s - mm)) * std::polar(1.0, -2.0 * kPi * xi * s / L);
                }
                d = std::max(d, std::abs(A.at(xi, wrap(m, L / 2)) - ref));
            }
        CHECK(d <= 1e-10);
        // Gaussian in doppler along the zero lag: |A(xi, 0)| decays monotonically to L/2.
        for (int xi = 1; xi < L / 2; ++xi) CHECK(std::abs(A.at(xi, 0)) < std::abs(A.at(xi - 1, 0)));
    }
}

TEST_CASE("Cohen's class") {
    const int L = 64, F = L / 2;
    const SampledSignal x = analytic_signal(random_vector(L));
    SUBCASE("unit parameter function gives the WVD exactly") {
        CHECK(cohen(x, wvd_parameter(L)).values == wvd(x).values);
    }
    SUBCASE("2-D smoothing with the inverse-transformed parameter function") {
        ParameterFunction phi(L, F);
        for (auto& v : phi.values) v = random_cplx();
        const TFDGrid W = wvd(x);
        const TFDGrid P = smoothing_kernel(phi);
        const TFDGrid C = cohen(x, phi);
        double d = 0.0;
        for (int n = 0; n < L; n += 7)
            for (int k = 0; k < F; k += 5) {
                cplx ref = 0.0;
                for (int s = 0; s < L; ++s)
                    for (int xi = 0; xi < F; ++xi) ref += W.at(s, xi) * P.at(wrap(n - s, L), wrap(k - xi, F));
                d = std::max(d, std::abs(C.at(n, k) - ref));
            }
        CHECK(d <= 1e-9 * C.max_abs());
    }
    SUBCASE("Rihaczek closed form") {
        const int N = 128;
        const SampledSignal p = spectral_pulse(N, N / 4.0, 4.0, 40.0);
        const TFDGrid C = cohen(p, rihaczek_parameter(N));
        const auto X = naive_dft(p);
        double d = 0.0;
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < N / 2; ++k) {
                const cplx ref = 0.5 * p[n] * std::conj(X[k]) * std::polar(1.0, -2.0 * kPi * n * k / N);
                d = std::max(d, std::abs(C.at(n, k) - ref));
            }
        CHECK(d <= 1e-8 * C.max_abs());
    }
    SUBCASE("spectrogram against an independent STFT") {
        const int N = 128;
        SampledSignal h(N);
        for (int t = 0; t < N; ++t) {
            const double u = signed_rep(t, N);
            h[t] = std::exp(-u * u / (2 * 36.0));
        }
        SampledSignal s = spectral_pulse(N, 24.0, 3.0, 30.0);
        const SampledSignal s2 = spectral_pulse(N, 40.0, 2.0, 90.0);
        for (int t = 0; t < N; ++t) s[t] += s2[t];
        const TFDGrid C = cohen(s, spectrogram_parameter(h));
        auto stft = [&](int n, int k) {
            cplx acc = 0.0;
            for (int a = 0; a < N; ++a) acc += s[a] * circ(h, n - a) * std::polar(1.0, -2.0 * kPi * k * a / N);
            return acc;
        };
        double d = 0.0, peak = 0.0;
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < N / 2; ++k) {
                const double ref = 0.5 * (std::norm(stft(n, k)) + std::norm(stft(n, k + N / 2)));
                d = std::max(d, std::abs(C.at(n, k) - ref));
                peak = std::max(peak, ref);
            }
        CHECK(d <= 1e-6 * peak);
    }
}

TEST_CASE("Cohen distributions through order-2 kernels") {
    const int L = 32;
    SUBCASE("unit parameter function puts unit-modulus weights on the anti-diagonal") {
        for (int f : {0, 3, 11}) {
            const VolterraKernel h = cohen_volterra_kernel(wvd_parameter(L), f);
            int nonzeros = 0;
            for (int u = 0; u < L; ++u)
                for (int v = 0; v < L; ++v) {
                    const cplx w = h.at({u, v});
                    if (std::abs(w) <= 1e-12) continue;
                    ++nonzeros;
                    CHECK((u + v) % L == 0);
                    CHECK(std::abs(w - std::polar(1.0, -4.0 * kPi * f * u / L)) <= 1e-12);
                }
            CHECK(nonzeros == 2 * (L / 4) + 1);
        }
    }
    SUBCASE("bilinear evaluation") {
        VolterraKernel h(2, 3);
        h.at({1, 2}) = 2.0;
        const SampledSignal a = random_vector(5), b = random_vector(5);
        const SampledSignal y = eval_bilinear(h, a, b);
        for (int n = 0; n < 5; ++n) CHECK(std::abs(y[n] - 2.0 * circ(a, n - 1) * circ(b, n - 2)) <= 1e-15);
    }
    SUBCASE("kernel route agrees with smoothing for three parameter functions") {
        const SampledSignal x = analytic_signal(random_vector(L));
        SampledSignal h(L);
        for (int t = 0; t < L; ++t) {
            const double u = signed_rep(t, L);
            h[t] = std::exp(-u * u / (2 * 16.0));
        }
        for (const auto& phi : {wvd_parameter(L), rihaczek_parameter(L), spectrogram_parameter(h)}) {
            const TFDGrid direct = cohen(x, phi);
            CHECK(grid_dev(cohen_via_kernels(x, phi), direct) <= 1e-7 * std::max(1.0, direct.max_abs()));
        }
    }
}

TEST_CASE("higher-order WVD") {
    SUBCASE("order two is the WVD") {
        const SampledSignal x = analytic_signal(random_vector(32));
        const HigherOrderGrid h = howvd(x, 2);
        const TFDGrid W = wvd(x);
        CHECK(max_dev(h.values, W.values) <= 1e-8);
    }
    SUBCASE("orders three and four match a direct lattice sum") {
        const SampledSignal x = analytic_signal(random_vector(12));
        for (int k : {3, 4}) {
            const HigherOrderGrid h = howvd(x, k);
            const auto ref = naive_howvd(x, k);
            CHECK(max_dev(h.values, ref) <= 1e-9 * max_mag(ref));
        }
    }
    SUBCASE("tone peaks") {
        const int L = 24, F = 12, k0 = 3;
        const HigherOrderGrid h3 = howvd(tone(k0, L), 3);
        std::size_t best = 0;
        for (std::size_t p = 0; p < h3.values.size(); ++p)
            if (std::abs(h3.values[p]) > std::abs(h3.values[best])) best = p;
        CHECK(best % (F * F) == h3.flat(0, {4 * k0 / 3, static_cast<int>(wrap(-2 * k0 / 3, F))}));
        const HigherOrderGrid h4 = howvd(tone(2, 16), 4);
        best = 0;
        for (std::size_t p = 0; p < h4.values.size(); ++p)
            if (std::abs(h4.values[p]) > std::abs(h4.values[best])) best = p;
        CHECK(best % (8 * 8 * 8) == h4.flat(0, {2, 6, 2}));
    }
    SUBCASE("zero signal and budget") {
        for (const auto& v : howvd(SampledSignal(16, 0.0), 3).values) CHECK(v == cplx(0.0));
        CHECK_THROWS_AS(howvd(tone(3, 256), 4), ResourceError);
        CHECK_THROWS_AS(howvd(tone(3, 16), 5), ContractViolation);
    }
}

TEST_CASE("PWVD lambda sets") {
    SUBCASE("order four") {
        const LambdaSet ls = pwvd_lambdas(4);
        CHECK(ls.lambdas == std::vector<double>{0.25, 0.25});
        const LambdaReport rep = check_lambda_constraints(ls, 3);
        CHECK(rep.antisymmetry_residual <= 1e-15);
        CHECK(rep.half_sum_residual <= 1e-15);
        for (double r : rep.paired_odd_residuals) CHECK(r <= 1e-15);
        CHECK(rep.passed());
        CHECK_FALSE(rep.concentrates());
    }
    SUBCASE("order six closed form") {
        const LambdaSet ls = pwvd_lambdas(6, 0.62);
        REQUIRE(ls.lambdas.size() == 3);
        CHECK(std::abs(ls.lambdas[0] - 0.75291) <= 1e-5);
        CHECK(std::abs(ls.lambdas[1] + 0.87291) <= 1e-5);
        CHECK(ls.lambdas[2] == 0.62);
        for (double l3 : {0.55, 0.62, 0.75, 0.9}) {
            const LambdaSet s = pwvd_lambdas(6, l3);
            const LambdaReport rep = check_lambda_constraints(s, 4);
            CHECK(rep.passed(1e-12));
            CHECK(rep.concentrates(1e-12));
            double cubes = 0.0, sum = 0.0;
            for (double l : s.lambdas) {
                cubes += l * l * l;
                sum += l;
            }
            CHECK(std::abs(cubes) <= 1e-12);
            CHECK(std::abs(sum - 0.5) <= 1e-12);
        }
    }
    SUBCASE("lambda3 at or below one half is rejected") {
        CHECK_THROWS_AS(pwvd_lambdas(6, 0.4), DomainError);
        CHECK_THROWS_AS(pwvd_lambdas(6, 0.5), DomainError);
        CHECK_THROWS_AS(pwvd_lambdas(8), ContractViolation);
    }
    SUBCASE("perturbation is reported") {
        LambdaSet ls = pwvd_lambdas(6, 0.62);
        ls.lambdas[0] += 0.01;
        const LambdaReport rep = check_lambda_constraints(ls, 3);
        CHECK(std::abs(rep.half_sum_residual - 0.01) <= 1e-12);
        CHECK_FALSE(rep.passed());
    }
}

TEST_CASE("polynomial WVD") {
    SUBCASE("order two is the WVD") {
        const SampledSignal x = analytic_signal(random_vector(64));
        CHECK(grid_dev(pwvd(x, pwvd_lambdas(2)), wvd(x)) <= 1e-8);
    }
    SUBCASE("a tone gives a flat ridge at its bin") {
        for (int k : {4, 6}) {
            const TFDGrid P = pwvd(tone(13, 64), pwvd_lambdas(k));
            for (int r : ridge(P)) CHECK(r == 13);
        }
    }
    SUBCASE("time-frequency shift covariance") {
        // Band-limited FM pulse built in frequency, so that modulation keeps
        // the spectrum away from the Nyquist bin.
        const int L = 128, d = 17, xi = 5;
        std::vector<cplx> X(L, 0.0);
        for (int k = 8; k < 56; ++k) X[k] = std::exp(-(k - 32.0) * (k - 32.0) / 200.0) * std::polar(1.0, 0.1 * (k - 32.0) * (k - 32.0) - 2.0 * kPi * k * 60 / L);
        const SampledSignal x = naive_idft(X);
        SampledSignal moved = circular_shift(x, d);
        for (int t = 0; t < L; ++t) moved[t] *= std::polar(1.0, 2.0 * kPi * xi * t / L);
        const LambdaSet ls = pwvd_lambdas(6, 0.62);
        const TFDGrid P0 = pwvd(x, ls);
        const auto r0 = ridge(P0);
        const auto r1 = ridge(pwvd(moved, ls));
        int compared = 0, mismatches = 0;
        for (int n = 0; n < L; ++n) {
            const int src = static_cast<int>(wrap(n - d, L));
            if (P0.at(src, r0[src]).real() < 1e-3 * P0.max_abs()) continue;
            ++compared;
            if (r1[n] != wrap(r0[src] + xi, L / 2)) ++mismatches;
        }
        CHECK(compared >= L / 4);
        CHECK(mismatches == 0);
    }
    SUBCASE("cubic chirp concentrates better than the WVD") {
        const int L = 256;
        const PolynomialPhase ph{{0.0, 0.3, 0.0, 1.5e-4 / 3.0}, L / 2.0};
        const SampledSignal x = chirp(ph, L);
        const double e_wvd = if_concentration(wvd(x), ph);
        const double e_pwvd = if_concentration(pwvd(x, pwvd_lambdas(6, 0.62)), ph);
        CHECK(e_pwvd <= 1.0);
        CHECK(e_wvd >= 3.0 * e_pwvd);
    }
}

TEST_CASE("PWVD Volterra kernel") {
    const int L = 32;
    SUBCASE("order two reduces to the WVD kernel") {
        const SampledSignal x = analytic_signal(random_vector(L));
        const TFDGrid W = wvd(x);
        for (int f : {0, 5, 12}) {
            const PwvdKernel K = pwvd_volterra_kernel(pwvd_lambdas(2), f, L);
            CHECK(K.support.size() == static_cast<std::size_t>(2 * (L / 4) + 1));
            for (const auto& pt : K.support) {
                CHECK(pt.delays == std::vector<double>{static_cast<double>(pt.m), -static_cast<double>(pt.m)});
                CHECK(std::abs(pt.weight - std::polar(1.0, -2.0 * kPi * 2 * pt.m * f / L)) <= 1e-15);
            }
            const SampledSignal col = K.contract(x);
            for (int n = 0; n < L; ++n) CHECK(std::abs(col[n] - W.at(n, f)) <= 1e-9);
        }
    }
    SUBCASE("contractions reproduce PWVD columns") {
        const SampledSignal x = chirp(PolynomialPhase{{0.0, 1.0, 0.004}}, L);
        for (int k : {4, 6}) {
            const LambdaSet ls = pwvd_lambdas(k);
            const TFDGrid P = pwvd(x, ls);
            for (int f : {2, 9}) {
                const PwvdKernel K = pwvd_volterra_kernel(ls, f, L);
                CHECK(K.max_anti_pairing_residual() == 0.0);
                CHECK(K.max_half_sum_residual() <= 1e-12);
                CHECK(K.max_paired_odd_residual(5) <= 1e-12);
                const SampledSignal col = K.contract(x);
                double d = 0.0;
                for (int n = 0; n < L; ++n) d = std::max(d, std::abs(col[n] - P.at(n, f)));
                CHECK(d <= 1e-7);
            }
        }
    }
    SUBCASE("a lambda set off the half-sum slice gives nothing") {
        const PwvdKernel K = pwvd_volterra_kernel(LambdaSet{4, {0.3, 0.3}}, 3, L);
        CHECK(K.support.empty());
        for (const auto& v : K.contract(tone(3, L))) CHECK(v == cplx(0.0));
    }
}

TEST_CASE("IF concentration metric") {
    const int L = 256, F = 128;
    const PolynomialPhase ph{{0.0, 2.0 * kPi * 0.25}};
    SUBCASE("a grid with a delta ridge on the IF scores zero") {
        TFDGrid g(L, F, 1.0 / L);
        for (int n = 0; n < L; ++n) g.at(n, 64) = 1.0;
        CHECK(if_concentration(g, ph) == 0.0);
    }
    SUBCASE("a random grid scores about a quarter of the columns") {
        TFDGrid g(L, F, 1.0 / L);
        for (auto& v : g.values) v = random_real();
        const double e = if_concentration(g, ph);
        CHECK(e >= 0.75 * F / 4.0);
        CHECK(e <= 1.25 * F / 4.0);
    }
}
