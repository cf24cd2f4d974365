#include "volterra/tfd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "volterra/errors.hpp"

namespace volterra {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

long wrap(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

const cplx& circ(const SampledSignal& x, long t) { return x[static_cast<std::size_t>(wrap(t, static_cast<long>(x.size())))]; }

void require_even(std::size_t L, const char* what) {
    if (L < 2 || L % 2 != 0) throw ContractViolation(std::string(what) + ": signal length must be even");
}

// Shifted copies of one signal, keyed by the shift's numerator over a fixed
// denominator so that equal shifts share one transform.
class ShiftCache {
public:
    ShiftCache(const SampledSignal& x, long denominator) : x_(x), den_(denominator) {}

    const SampledSignal& get(long numerator) {
        auto it = cache_.find(numerator);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(numerator, fractional_shift(x_, static_cast<double>(numerator) / static_cast<double>(den_)))
            .first->second;
    }

private:
    const SampledSignal& x_;
    long den_;
    std::map<long, SampledSignal> cache_;
};

}  // namespace

double PolynomialPhase::phase(double t) const {
    const double u = t - origin;
    double acc = 0.0;
    for (std::size_t p = coeffs.size(); p-- > 0;) acc = acc * u + coeffs[p];
    return acc;
}

double PolynomialPhase::inst_freq(double t) const {
    const double u = t - origin;
    double acc = 0.0;
    for (std::size_t p = coeffs.size(); p-- > 1;) acc = acc * u + static_cast<double>(p) * coeffs[p];
    return acc / kTwoPi;
}

TFDGrid::TFDGrid(int rows_, int cols_, double cpb)
    : rows(rows_), cols(cols_), cycles_per_bin(cpb), values(static_cast<std::size_t>(rows_) * cols_, 0.0) {}

double TFDGrid::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

ParameterFunction::ParameterFunction(int doppler_, int lags_, cplx fill)
    : doppler(doppler_), lags(lags_), values(static_cast<std::size_t>(doppler_) * lags_, fill) {}

int signed_rep(long c, int n) {
    const long r = wrap(c, n);
    return static_cast<int>(2 * r > n ? r - n : r);
}

SampledSignal analytic_signal(const SampledSignal& s) {
    require_even(s.size(), "analytic_signal");
    const std::size_t L = s.size();
    std::vector<cplx> X(L);
    for (std::size_t t = 0; t < L; ++t) X[t] = s[t].real();
    X = dft(X);
    for (std::size_t k = 1; k < L / 2; ++k) X[k] *= 2.0;
    for (std::size_t k = L / 2 + 1; k < L; ++k) X[k] = 0.0;
    return idft(X);
}

SampledSignal chirp(const PolynomialPhase& phase, int L, double amplitude) {
    SampledSignal x(static_cast<std::size_t>(L));
    for (int t = 0; t < L; ++t) x[static_cast<std::size_t>(t)] = std::polar(amplitude, phase.phase(t));
    return x;
}

SampledSignal fractional_shift(const SampledSignal& x, double d) {
    const long L = static_cast<long>(x.size());
    const double nearest = std::round(d);
    if (std::abs(d - nearest) < 1e-12) {
        SampledSignal y(x.size());
        const long s = static_cast<long>(nearest);
        for (long t = 0; t < L; ++t) y[static_cast<std::size_t>(t)] = circ(x, t + s);
        return y;
    }
    std::vector<cplx> X = dft(x);
    for (long k = 0; k < L; ++k) {
        if (2 * k == L) {
            X[static_cast<std::size_t>(k)] *= std::cos(std::numbers::pi * d);
            continue;
        }
        const long ks = 2 * k < L ? k : k - L;
        X[static_cast<std::size_t>(k)] *= std::polar(1.0, kTwoPi * static_cast<double>(ks) * d / static_cast<double>(L));
    }
    return idft(X);
}

TFDGrid wvd(const SampledSignal& x) {
    require_even(x.size(), "wvd");
    const int L = static_cast<int>(x.size());
    const int F = L / 2;
    const int R = L / 4;
    TFDGrid g(L, F, 1.0 / L);
    std::vector<cplx> row(static_cast<std::size_t>(F));
    for (int n = 0; n < L; ++n) {
        std::fill(row.begin(), row.end(), 0.0);
        for (int m = -R; m <= R; ++m) row[static_cast<std::size_t>(wrap(m, F))] += circ(x, n + m) * std::conj(circ(x, n - m));
        fft_forward(row, {F});
        std::copy(row.begin(), row.end(), g.values.begin() + static_cast<std::ptrdiff_t>(n) * F);
    }
    return g;
}

ParameterFunction ambiguity(const SampledSignal& h) {
    require_even(h.size(), "ambiguity");
    const int L = static_cast<int>(h.size());
    const int F = L / 2;
    const int R = L / 4;
    ParameterFunction A(L, F);
    std::vector<cplx> lagged(static_cast<std::size_t>(L));
    for (int m = -R; m <= R; ++m) {
        for (int s = 0; s < L; ++s) lagged[static_cast<std::size_t>(s)] = circ(h, s + m) * std::conj(circ(h, s - m));
        const std::vector<cplx> spec = dft(lagged);
        const int c = static_cast<int>(wrap(m, F));
        for (int xi = 0; xi < L; ++xi) A.at(xi, c) += spec[static_cast<std::size_t>(xi)];
    }
    return A;
}

ParameterFunction wvd_parameter(int L) {
    if (L < 2 || L % 2) throw ContractViolation("parameter function needs an even length");
    return ParameterFunction(L, L / 2, 1.0);
}

ParameterFunction rihaczek_parameter(int L) {
    ParameterFunction phi = wvd_parameter(L);
    for (int xi = 0; xi < L; ++xi)
        for (int c = 0; c < phi.lags; ++c)
            phi.at(xi, c) = std::polar(1.0, kTwoPi * static_cast<double>(xi) * signed_rep(c, phi.lags) / L);
    return phi;
}

ParameterFunction spectrogram_parameter(const SampledSignal& h) {
    ParameterFunction phi = ambiguity(h);
    for (auto& v : phi.values) v = std::conj(v);
    return phi;
}

TFDGrid cohen(const SampledSignal& x, const ParameterFunction& phi) {
    TFDGrid g = wvd(x);
    const int L = g.rows, F = g.cols;
    if (phi.doppler != L || phi.lags != F) throw ContractViolation("parameter function shape does not match the signal");
    if (std::all_of(phi.values.begin(), phi.values.end(), [](const cplx& v) { return v == cplx(1.0); })) return g;
    fft_forward(g.values, {L, F});
    for (int a = 0; a < L; ++a)
        for (int b = 0; b < F; ++b) g.at(a, b) *= phi.at(static_cast<int>(wrap(-a, L)), static_cast<int>(wrap(-b, F)));
    fft_inverse(g.values, {L, F});
    return g;
}

TFDGrid smoothing_kernel(const ParameterFunction& phi) {
    TFDGrid pi(phi.doppler, phi.lags, 1.0 / phi.doppler);
    pi.values = phi.values;
    fft_forward(pi.values, {phi.doppler, phi.lags});
    const double norm = 1.0 / (static_cast<double>(phi.doppler) * phi.lags);
    for (auto& v : pi.values) v *= norm;
    return pi;
}

VolterraKernel cohen_volterra_kernel(const ParameterFunction& phi, int f) {
    const int L = phi.doppler;
    const int F = phi.lags;
    if (L != 2 * F) throw ContractViolation("parameter function must have L doppler bins and L/2 lag classes");
    const int R = L / 4;
    // G(d, c) = (1/L) sum_xi phi(xi, c) e^{-2 pi i xi d / L}
    std::vector<std::vector<cplx>> G(static_cast<std::size_t>(F));
    for (int c = 0; c < F; ++c) {
        std::vector<cplx> col(static_cast<std::size_t>(L));
        for (int xi = 0; xi < L; ++xi) col[static_cast<std::size_t>(xi)] = phi.at(xi, c) / static_cast<double>(L);
        G[static_cast<std::size_t>(c)] = dft(col);
    }
    VolterraKernel h(2, L);
    for (int m = -R; m <= R; ++m) {
        const cplx carrier = std::polar(1.0, -2.0 * kTwoPi * static_cast<double>(m) * f / L);
        const auto& g = G[static_cast<std::size_t>(wrap(m, F))];
        for (int d = 0; d < L; ++d)
            h.at({static_cast<int>(wrap(d + m, L)), static_cast<int>(wrap(d - m, L))}) += carrier * g[static_cast<std::size_t>(d)];
    }
    return h;
}

SampledSignal eval_bilinear(const VolterraKernel& h, const SampledSignal& a, const SampledSignal& b) {
    if (h.order != 2) throw ContractViolation("eval_bilinear needs an order-2 kernel");
    if (a.size() != b.size()) throw ContractViolation("eval_bilinear: input lengths differ");
    const long L = static_cast<long>(a.size());
    if (h.memory > L) throw ResolutionError("kernel memory exceeds signal length");
    struct NZ {
        int u, v;
        cplx w;
    };
    std::vector<NZ> nz;
    for (int u = 0; u < h.memory; ++u)
        for (int v = 0; v < h.memory; ++v)
            if (h.at({u, v}) != cplx(0.0)) nz.push_back({u, v, h.at({u, v})});
    SampledSignal y(a.size(), 0.0);
    for (long n = 0; n < L; ++n) {
        cplx acc = 0.0;
        for (const auto& e : nz) acc += e.w * circ(a, n - e.u) * circ(b, n - e.v);
        y[static_cast<std::size_t>(n)] = acc;
    }
    return y;
}

TFDGrid cohen_via_kernels(const SampledSignal& x, const ParameterFunction& phi) {
    require_even(x.size(), "cohen_via_kernels");
    const int L = static_cast<int>(x.size());
    const int F = L / 2;
    if (phi.doppler != L || phi.lags != F) throw ContractViolation("parameter function shape does not match the signal");
    SampledSignal xc(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) xc[t] = std::conj(x[t]);
    TFDGrid g(L, F, 1.0 / L);
    for (int f = 0; f < F; ++f) {
        const SampledSignal col = eval_bilinear(cohen_volterra_kernel(phi, f), xc, x);
        for (int n = 0; n < L; ++n) g.at(n, f) = col[static_cast<std::size_t>(n)];
    }
    return g;
}

std::size_t HigherOrderGrid::flat(int t, const std::vector<int>& f) const {
    std::size_t pos = static_cast<std::size_t>(t);
    for (int r = 0; r < order - 1; ++r) pos = pos * static_cast<std::size_t>(freq_bins) + static_cast<std::size_t>(f[r]);
    return pos;
}

cplx HigherOrderGrid::at(int t, const std::vector<int>& f) const { return values[flat(t, f)]; }

HigherOrderGrid howvd(const SampledSignal& x, int k, int lag_step, std::size_t max_cells) {
    if (k < 2 || k > 4) throw ContractViolation("howvd: order must be 2, 3 or 4");
    const int L = static_cast<int>(x.size());
    if (lag_step < 1 || L % lag_step != 0) throw ContractViolation("howvd: lag step must divide the signal length");
    const int F = L / lag_step;
    const int R = L / (2 * lag_step);
    const int dims = k - 1;
    std::size_t slice = 1;
    for (int r = 0; r < dims; ++r) slice *= static_cast<std::size_t>(F);
    if (slice * static_cast<std::size_t>(L) > max_cells)
        throw ResourceError("howvd grid of " + std::to_string(slice * L) + " cells exceeds the budget");

    HigherOrderGrid g{L, k, F, std::vector<cplx>(slice * static_cast<std::size_t>(L), 0.0)};
    ShiftCache cache(x, k);
    const int span = 2 * R + 1;
    std::size_t lattice = 1;
    for (int r = 0; r < dims; ++r) lattice *= static_cast<std::size_t>(span);

    std::vector<int> m(static_cast<std::size_t>(dims));
    std::vector<const SampledSignal*> factor(static_cast<std::size_t>(dims));
    for (std::size_t pos = 0; pos < lattice; ++pos) {
        std::size_t rest = pos;
        long msum = 0;
        for (int r = dims - 1; r >= 0; --r) {
            m[r] = static_cast<int>(rest % static_cast<std::size_t>(span)) - R;
            rest /= static_cast<std::size_t>(span);
            msum += m[r];
        }
        // Shifts in units of 1/k samples: x(t + tau_r - alpha) and x(t - alpha).
        const SampledSignal& base = cache.get(-static_cast<long>(lag_step) * msum);
        for (int r = 0; r < dims; ++r)
            factor[r] = &cache.get(static_cast<long>(lag_step) * (static_cast<long>(k) * m[r] - msum));
        std::size_t cell = 0;
        for (int r = 0; r < dims; ++r) cell = cell * static_cast<std::size_t>(F) + static_cast<std::size_t>(wrap(m[r], F));
        for (int t = 0; t < L; ++t) {
            cplx prod = std::conj(base[static_cast<std::size_t>(t)]);
            for (int r = 0; r < dims; ++r) {
                const cplx v = (*factor[r])[static_cast<std::size_t>(t)];
                // Lag r+1 carries conjugation pattern index r+2; odd indices conjugate.
                prod *= (r % 2 == 1) ? std::conj(v) : v;
            }
            g.values[static_cast<std::size_t>(t) * slice + cell] += prod;
        }
    }
    std::vector<cplx> buf(slice);
    for (int t = 0; t < L; ++t) {
        auto first = g.values.begin() + static_cast<std::ptrdiff_t>(t) * static_cast<std::ptrdiff_t>(slice);
        std::copy(first, first + static_cast<std::ptrdiff_t>(slice), buf.begin());
        fft_forward(buf, cube_dims(dims, F));
        std::copy(buf.begin(), buf.end(), first);
    }
    return g;
}

LambdaSet pwvd_lambdas(int k, double lambda3) {
    switch (k) {
    case 2:
        return {2, {0.5}};
    case 4:
        return {4, {0.25, 0.25}};
    case 6: {
        if (!(lambda3 > 0.5))
            throw DomainError("k=6 lambda family needs lambda3 > 1/2 (got " + std::to_string(lambda3) + ")");
        const double l3 = lambda3;
        const double radicand = 24 * l3 * l3 * l3 + 12 * l3 * l3 - 6 * l3 + 1;
        const double spread = std::sqrt(3.0) * std::sqrt(radicand) / (12.0 * std::sqrt(2 * l3 - 1));
        const double centre = 0.25 - l3 / 2;
        return {6, {centre + spread, centre - spread, l3}};
    }
    default:
        throw ContractViolation("pwvd_lambdas supports k = 2, 4 or 6");
    }
}

bool LambdaReport::passed(double tol) const {
    if (antisymmetry_residual > tol || half_sum_residual > tol) return false;
    return std::all_of(paired_odd_residuals.begin(), paired_odd_residuals.end(), [&](double r) { return r <= tol; });
}

bool LambdaReport::concentrates(double tol) const {
    return std::all_of(one_sided_odd_moments.begin(), one_sided_odd_moments.end(),
                       [&](double r) { return std::abs(r) <= tol; });
}

LambdaReport check_lambda_constraints(const LambdaSet& ls, int p) {
    if (ls.k < 2 || ls.k % 2 != 0 || static_cast<int>(ls.lambdas.size()) != ls.k / 2)
        throw ContractViolation("lambda set must hold k/2 values for even k");
    LambdaReport rep;
    // Expanded list in the order lambda_1..lambda_{k/2}, lambda_{-1}..lambda_{-k/2}.
    std::vector<double> all = ls.lambdas;
    for (double l : ls.lambdas) all.push_back(-l);
    const std::size_t h = ls.lambdas.size();
    for (std::size_t l = 0; l < h; ++l) rep.antisymmetry_residual = std::max(rep.antisymmetry_residual, std::abs(all[l] + all[l + h]));
    double sum = 0.0;
    for (double l : ls.lambdas) sum += l;
    rep.half_sum_residual = std::abs(sum - 0.5);
    for (int m = 1; m <= p; m += 2) {
        double paired = 0.0;
        for (double l : all) paired += std::pow(l, m);
        rep.paired_odd_residuals.push_back(std::abs(paired));
        if (m >= 3) {
            double one_sided = 0.0;
            for (double l : ls.lambdas) one_sided += std::pow(l, m);
            rep.one_sided_odd_moments.push_back(one_sided);
        }
    }
    return rep;
}

TFDGrid pwvd(const SampledSignal& x, const LambdaSet& ls, int lag_step) {
    const int L = static_cast<int>(x.size());
    if (lag_step < 1 || L % lag_step != 0) throw ContractViolation("pwvd: lag step must divide the signal length");
    if (static_cast<int>(ls.lambdas.size()) * 2 != ls.k) throw ContractViolation("pwvd: malformed lambda set");
    const int F = L / lag_step;
    const int R = L / (2 * lag_step);
    TFDGrid g(L, F, 1.0 / L);

    std::vector<cplx> acc(static_cast<std::size_t>(L) * F, 0.0);
    for (int m = -R; m <= R; ++m) {
        std::vector<cplx> prod(static_cast<std::size_t>(L), 1.0);
        for (double lam : ls.lambdas) {
            const double d = lam * lag_step * m;
            const SampledSignal ahead = fractional_shift(x, d);
            const SampledSignal behind = fractional_shift(x, -d);
            for (int n = 0; n < L; ++n)
                prod[static_cast<std::size_t>(n)] *= ahead[static_cast<std::size_t>(n)] * std::conj(behind[static_cast<std::size_t>(n)]);
        }
        const auto c = static_cast<std::size_t>(wrap(m, F));
        for (int n = 0; n < L; ++n) acc[static_cast<std::size_t>(n) * F + c] += prod[static_cast<std::size_t>(n)];
    }
    std::vector<cplx> row(static_cast<std::size_t>(F));
    for (int n = 0; n < L; ++n) {
        std::copy(acc.begin() + static_cast<std::ptrdiff_t>(n) * F, acc.begin() + static_cast<std::ptrdiff_t>(n + 1) * F, row.begin());
        fft_forward(row, {F});
        std::copy(row.begin(), row.end(), g.values.begin() + static_cast<std::ptrdiff_t>(n) * F);
    }
    return g;
}

double PwvdKernel::max_anti_pairing_residual() const {
    double r = 0.0;
    const std::size_t h = lambdas.lambdas.size();
    for (const auto& pt : support)
        for (std::size_t l = 0; l < h; ++l) r = std::max(r, std::abs(pt.delays[l] + pt.delays[l + h]));
    return r;
}

double PwvdKernel::max_half_sum_residual() const {
    double r = 0.0;
    const std::size_t h = lambdas.lambdas.size();
    for (const auto& pt : support) {
        double s = 0.0;
        for (std::size_t l = 0; l < h; ++l) s += pt.delays[l];
        r = std::max(r, std::abs(s - 0.5 * lag_step * pt.m));
    }
    return r;
}

double PwvdKernel::max_paired_odd_residual(int p) const {
    double r = 0.0;
    for (const auto& pt : support)
        for (int m = 1; m <= p; m += 2) {
            double s = 0.0;
            for (double d : pt.delays) s += std::pow(d, m);
            r = std::max(r, std::abs(s));
        }
    return r;
}

SampledSignal PwvdKernel::contract(const SampledSignal& x) const {
    if (static_cast<int>(x.size()) != length) throw ContractViolation("pwvd kernel: signal length mismatch");
    SampledSignal y(x.size(), 0.0);
    const std::size_t h = lambdas.lambdas.size();
    for (const auto& pt : support) {
        std::vector<cplx> prod(x.size(), pt.weight);
        for (std::size_t l = 0; l < h; ++l) {
            const SampledSignal ahead = fractional_shift(x, pt.delays[l]);
            const SampledSignal behind = fractional_shift(x, pt.delays[l + h]);
            for (std::size_t n = 0; n < x.size(); ++n) prod[n] *= ahead[n] * std::conj(behind[n]);
        }
        for (std::size_t n = 0; n < x.size(); ++n) y[n] += prod[n];
    }
    return y;
}

PwvdKernel pwvd_volterra_kernel(const LambdaSet& ls, int f, int L, int lag_step) {
    if (lag_step < 1 || L % lag_step != 0) throw ContractViolation("pwvd kernel: lag step must divide the length");
    PwvdKernel K{ls, f, L, lag_step, {}};
    // A lambda set off the half-sum slice leaves no admissible delay vectors.
    if (check_lambda_constraints(ls, 1).half_sum_residual > 1e-12) return K;
    const int R = L / (2 * lag_step);
    for (int m = -R; m <= R; ++m) {
        PwvdKernel::Point pt{m, {}, std::polar(1.0, -kTwoPi * static_cast<double>(lag_step) * m * f / L)};
        for (double lam : ls.lambdas) pt.delays.push_back(lam * lag_step * m);
        for (double lam : ls.lambdas) pt.delays.push_back(-lam * lag_step * m);
        K.support.push_back(std::move(pt));
    }
    return K;
}

std::vector<int> ridge(const TFDGrid& grid) {
    std::vector<int> out(static_cast<std::size_t>(grid.rows), 0);
    for (int n = 0; n < grid.rows; ++n) {
        int best = 0;
        for (int k = 1; k < grid.cols; ++k)
            if (grid.at(n, k).real() > grid.at(n, best).real()) best = k;
        out[static_cast<std::size_t>(n)] = best;
    }
    return out;
}

double if_concentration(const TFDGrid& grid, const PolynomialPhase& phase) {
    const int skip = grid.rows / 10;
    const auto track = ridge(grid);
    double total = 0.0;
    int count = 0;
    for (int n = skip; n < grid.rows - skip; ++n) {
        const double target = std::round(phase.inst_freq(n) / grid.cycles_per_bin);
        total += std::abs(track[static_cast<std::size_t>(n)] - target);
        ++count;
    }
    if (count == 0) throw ContractViolation("if_concentration: grid has no interior rows");
    return total / count;
}

}  // namespace volterra
