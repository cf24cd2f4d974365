#include "volterra/morphism.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "volterra/errors.hpp"
#include "volterra/evaluation.hpp"

namespace volterra {

namespace {

long wrap(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

std::vector<long> apply_matrix(const IntMatrix& phi, const std::vector<int>& omega) {
    std::vector<long> out(phi.size(), 0);
    for (std::size_t r = 0; r < phi.size(); ++r)
        for (std::size_t c = 0; c < omega.size(); ++c) out[r] += static_cast<long>(phi[r][c]) * omega[c];
    return out;
}

const MorphismPart& part_of(const Morphism& m, const std::string& i) {
    auto it = m.parts.find(i);
    if (it == m.parts.end()) throw ContractViolation("morphism has no part for index '" + i + "'");
    return it->second;
}

std::map<std::string, int> orders_of(const VolterraSeries& V) {
    std::map<std::string, int> out;
    for (const auto& t : V.terms()) out[t.index] = t.kernel.order;
    return out;
}

// Morphism skeleton sending every index of V to the same index of a target
// with identical orders.
Morphism same_index_skeleton(const VolterraSeries& V, int L) {
    Morphism m;
    m.length = L;
    m.source_orders = orders_of(V);
    m.target_orders = m.source_orders;
    for (const auto& [i, j] : m.source_orders) m.parts[i] = MorphismPart{i, identity_matrix(j), Tensor(j, L, 1.0)};
    return m;
}

}  // namespace

IntMatrix identity_matrix(int n) {
    IntMatrix m(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMatrix matmul(const IntMatrix& a, const IntMatrix& b, int inner, int cols_in) {
    const auto cols = static_cast<std::size_t>(cols_in);
    IntMatrix out(a.size(), std::vector<int>(cols, 0));
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c)
            for (int k = 0; k < inner; ++k) out[r][c] += a[r][static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)][c];
    return out;
}

ValidationReport validate(const Morphism& m, const VolterraSeries& V, const VolterraSeries& W) {
    ValidationReport rep;
    auto fail = [&](const std::string& msg) { rep.violations.push_back(msg); };
    if (orders_of(V) != m.source_orders) fail("source order map does not match the source series");
    if (orders_of(W) != m.target_orders) fail("target order map does not match the target series");
    for (const auto& [i, order] : m.source_orders) {
        auto it = m.parts.find(i);
        if (it == m.parts.end()) {
            fail("index map is not total: '" + i + "' has no image");
            continue;
        }
        const MorphismPart& part = it->second;
        auto tgt = m.target_orders.find(part.target);
        if (tgt == m.target_orders.end()) {
            fail("'" + i + "' maps to unknown target index '" + part.target + "'");
            continue;
        }
        const int rows = tgt->second;
        if (static_cast<int>(part.phi.size()) != rows) {
            fail("phi for '" + i + "' has " + std::to_string(part.phi.size()) + " rows, expected " + std::to_string(rows));
            continue;
        }
        bool shape_ok = true;
        for (const auto& row : part.phi)
            if (static_cast<int>(row.size()) != order) shape_ok = false;
        if (!shape_ok) {
            fail("phi for '" + i + "' has wrong column count");
            continue;
        }
        for (int c = 0; c < order; ++c) {
            long sum = 0;
            for (int r = 0; r < rows; ++r) sum += part.phi[r][c];
            if (sum != 1) fail("column " + std::to_string(c) + " of phi for '" + i + "' sums to " + std::to_string(sum));
        }
        if (part.psi.rank() != order || part.psi.extent() != m.length) fail("mask for '" + i + "' has wrong shape");
    }
    for (const auto& [i, part] : m.parts)
        if (!m.source_orders.count(i)) fail("part for unknown source index '" + i + "'");
    return rep;
}

Tensor weighted_pullback(const Morphism& m, const std::string& i, const VolterraFRF& w_hat) {
    const MorphismPart& part = part_of(m, i);
    if (w_hat.order != static_cast<int>(part.phi.size()) || w_hat.length != m.length)
        throw ContractViolation("weighted_pullback: target response shape mismatch");
    const int order = part.psi.rank();
    for (const auto& row : part.phi)
        if (static_cast<int>(row.size()) != order) throw ContractViolation("weighted_pullback: phi shape mismatch");
    Tensor out(order, m.length);
    std::vector<int> omega;
    for (std::size_t p = 0; p < out.size(); ++p) {
        out.unflatten(p, omega);
        out[p] = part.psi[p] * w_hat.at_mod(apply_matrix(part.phi, omega));
    }
    return out;
}

GradedIntegrand component_integrand(const Morphism& m, const VolterraSeries& V, const VolterraSeries& W,
                                    const Spectrum& s_hat) {
    if (static_cast<int>(s_hat.size()) != m.length) throw ContractViolation("spectrum length differs from morphism grid");
    GradedIntegrand out;
    for (const auto& term : V.terms()) {
        const MorphismPart& part = part_of(m, term.index);
        const VolterraFRF v_hat = vfrf(term.kernel, m.length);
        const VolterraFRF w_hat = vfrf(W.kernel(part.target), m.length);
        Tensor t = weighted_pullback(m, term.index, w_hat);
        const Tensor power = tensor_power(s_hat, term.kernel.order);
        for (std::size_t p = 0; p < t.size(); ++p) t[p] = t[p] * v_hat.bins[p] * power[p];
        out.push_back(std::move(t));
    }
    return out;
}

Spectrum project_integrand(const GradedIntegrand& g, int L) {
    Spectrum y(static_cast<std::size_t>(L), 0.0);
    for (const auto& t : g) {
        const Spectrum part = project_slices(t);
        for (std::size_t w = 0; w < y.size(); ++w) y[w] += part[w];
    }
    return y;
}

Spectrum apply_component(const Morphism& m, const VolterraSeries& V, const VolterraSeries& W, const Spectrum& s_hat) {
    return project_integrand(component_integrand(m, V, W, s_hat), m.length);
}

double check_naturality(const IntegrandFn& integrand, int L, int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    auto random_vec = [&] {
        std::vector<cplx> v(static_cast<std::size_t>(L));
        for (auto& x : v) x = cplx(gauss(rng), gauss(rng));
        return v;
    };
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const std::vector<cplx> gamma = random_vec();
        const Spectrum s_hat = random_vec();
        Spectrum moved(s_hat.size());
        for (std::size_t k = 0; k < moved.size(); ++k) moved[k] = gamma[k] * s_hat[k];
        // Path 1: act on the input first, then take the component.
        const Spectrum first = project_integrand(integrand(moved), L);
        // Path 2: take the component's integrand, then let the target act on it.
        GradedIntegrand g = integrand(s_hat);
        for (auto& t : g) {
            const Tensor weight = tensor_power(gamma, t.rank());
            for (std::size_t p = 0; p < t.size(); ++p) t[p] *= weight[p];
        }
        const Spectrum second = project_integrand(g, L);
        for (std::size_t k = 0; k < first.size(); ++k) worst = std::max(worst, std::abs(first[k] - second[k]));
    }
    return worst;
}

double check_naturality(const Morphism& m, const VolterraSeries& V, const VolterraSeries& W, int trials,
                        std::uint64_t seed) {
    return check_naturality([&](const Spectrum& s) { return component_integrand(m, V, W, s); }, m.length, trials, seed);
}

Morphism compose_morphisms(const Morphism& g, const Morphism& f) {
    if (f.target_orders != g.source_orders || f.length != g.length)
        throw ContractViolation("compose_morphisms: codomain of f is not the domain of g");
    Morphism h;
    h.length = f.length;
    h.source_orders = f.source_orders;
    h.target_orders = g.target_orders;
    for (const auto& [i, fp] : f.parts) {
        const MorphismPart& gp = part_of(g, fp.target);
        const int source_order = f.source_orders.at(i);
        const int mid_order = static_cast<int>(fp.phi.size());
        MorphismPart hp;
        hp.target = gp.target;
        hp.phi = matmul(gp.phi, fp.phi, mid_order, source_order);
        hp.psi = Tensor(source_order, f.length);
        std::vector<int> omega;
        for (std::size_t p = 0; p < hp.psi.size(); ++p) {
            hp.psi.unflatten(p, omega);
            const std::vector<long> mid = apply_matrix(fp.phi, omega);
            std::vector<int> mid_idx(mid.size());
            for (std::size_t r = 0; r < mid.size(); ++r) mid_idx[r] = static_cast<int>(wrap(mid[r], f.length));
            hp.psi[p] = fp.psi[p] * gp.psi.at(mid_idx);
        }
        h.parts[i] = std::move(hp);
    }
    return h;
}

Morphism unit_morphism(const VolterraSeries& V, int L) { return same_index_skeleton(V, L); }

CatalogEntry catalog_trivial(const VolterraSeries& V, int L) {
    VolterraSeries W(1);
    for (const auto& t : V.terms()) {
        VolterraKernel k(t.kernel.order, 1);
        k.coeffs[0] = 1.0;
        W.add(t.index, k);
    }
    return {W, same_index_skeleton(V, L)};
}

CatalogEntry catalog_autoconvolution(const VolterraSeries& V, int L) { return {V, same_index_skeleton(V, L)}; }

CatalogEntry catalog_identity(const VolterraSeries& V, int L, double eps_rel) {
    Morphism m = same_index_skeleton(V, L);
    for (const auto& t : V.terms()) {
        const VolterraFRF v_hat = vfrf(t.kernel, L);
        double peak = 0.0;
        for (const auto& v : v_hat.bins.values()) peak = std::max(peak, std::abs(v));
        Tensor& psi = m.parts[t.index].psi;
        for (std::size_t p = 0; p < psi.size(); ++p) {
            const double mag = std::abs(v_hat.bins[p]);
            psi[p] = (mag > 0.0 && mag >= eps_rel * peak) ? 1.0 / v_hat.bins[p] : cplx(0.0);
        }
    }
    return {V, m};
}

CatalogEntry catalog_translation(const VolterraSeries& V, int L, const std::map<std::string, std::vector<int>>& offsets) {
    int memory = 1;
    for (const auto& t : V.terms()) {
        auto it = offsets.find(t.index);
        if (it == offsets.end()) throw ContractViolation("no offsets for index '" + t.index + "'");
        if (static_cast<int>(it->second.size()) != t.kernel.order)
            throw ContractViolation("offset vector for '" + t.index + "' does not match its order");
        for (int d : it->second) {
            if (d < 0 || d >= L) throw OutOfGridError("translation offset outside grid");
            memory = std::max(memory, d + 1);
        }
    }
    VolterraSeries W(memory);
    for (const auto& t : V.terms()) {
        VolterraKernel k(t.kernel.order, memory);
        k.at(offsets.at(t.index)) = 1.0;
        W.add(t.index, k);
    }
    return {W, same_index_skeleton(V, L)};
}

CatalogEntry catalog_sampling(const VolterraSeries& V, int L, const std::map<std::string, int>& periods) {
    int memory = 1;
    for (const auto& t : V.terms()) {
        auto it = periods.find(t.index);
        if (it == periods.end()) throw ContractViolation("no period for index '" + t.index + "'");
        const int T = it->second;
        if (T < 1 || L % T != 0) throw AliasingError("sampling period does not divide the grid");
        if (t.kernel.order > 0) memory = std::max(memory, L - L / T + 1);
    }
    VolterraSeries W(memory);
    for (const auto& t : V.terms()) {
        const int T = periods.at(t.index);
        const int j = t.kernel.order;
        const int spacing = L / T;
        VolterraKernel k(j, memory);
        const double height = std::pow(1.0 / T, j);
        std::vector<int> tau;
        for (std::size_t p = 0; p < k.coeffs.size(); ++p) {
            k.coeffs.unflatten(p, tau);
            const bool on_lattice = std::all_of(tau.begin(), tau.end(), [&](int x) { return x % spacing == 0; });
            if (on_lattice) k.coeffs[p] = height;
        }
        W.add(t.index, k);
    }
    return {W, same_index_skeleton(V, L)};
}

VolterraKernel gaussian_kernel(const std::vector<std::vector<double>>& C, int L) {
    const int j = static_cast<int>(C.size());
    for (const auto& row : C)
        if (static_cast<int>(row.size()) != j) throw ContractViolation("covariance matrix is not square");
    // Cholesky factorization doubles as the positive-definiteness test.
    std::vector<std::vector<double>> chol(static_cast<std::size_t>(j), std::vector<double>(static_cast<std::size_t>(j), 0.0));
    for (int r = 0; r < j; ++r) {
        for (int c = 0; c <= r; ++c) {
            if (std::abs(C[r][c] - C[c][r]) > 1e-12 * (std::abs(C[r][c]) + 1.0))
                throw ContractViolation("smoothing matrix is not symmetric");
            double s = C[r][c];
            for (int k = 0; k < c; ++k) s -= chol[r][k] * chol[c][k];
            if (r == c) {
                if (s <= 0.0) throw ContractViolation("smoothing matrix is not positive definite");
                chol[r][c] = std::sqrt(s);
            } else {
                chol[r][c] = s / chol[c][c];
            }
        }
    }
    if (j == 0) return VolterraKernel::constant(1.0);
    VolterraKernel k(j, L);
    std::vector<int> tau;
    std::vector<double> x(static_cast<std::size_t>(j));
    double total = 0.0;
    for (std::size_t p = 0; p < k.coeffs.size(); ++p) {
        k.coeffs.unflatten(p, tau);
        for (int r = 0; r < j; ++r) x[r] = tau[r] <= L / 2 ? tau[r] : tau[r] - L;
        double q = 0.0;
        for (int r = 0; r < j; ++r)
            for (int c = 0; c < j; ++c) q += x[r] * C[r][c] * x[c];
        const double w = std::exp(-q);
        k.coeffs[p] = w;
        total += w;
    }
    for (auto& v : k.coeffs.values()) v /= total;
    return k;
}

CatalogEntry catalog_smoothing(const VolterraSeries& V, int L,
                               const std::map<std::string, std::vector<std::vector<double>>>& precisions) {
    VolterraSeries W(L);
    for (const auto& t : V.terms()) {
        auto it = precisions.find(t.index);
        if (it == precisions.end()) throw ContractViolation("no smoothing matrix for index '" + t.index + "'");
        if (static_cast<int>(it->second.size()) != t.kernel.order)
            throw ContractViolation("smoothing matrix for '" + t.index + "' does not match its order");
        W.add(t.index, gaussian_kernel(it->second, L));
    }
    return {W, same_index_skeleton(V, L)};
}

std::vector<CatalogEntry> translation_family(const VolterraSeries& V, int L, const std::vector<int>& shifts) {
    std::vector<CatalogEntry> out;
    for (int d : shifts) {
        std::map<std::string, std::vector<int>> offsets;
        for (const auto& t : V.terms()) offsets[t.index] = std::vector<int>(static_cast<std::size_t>(t.kernel.order), d);
        out.push_back(catalog_translation(V, L, offsets));
    }
    return out;
}

std::vector<CatalogEntry> smoothing_family(const VolterraSeries& V, int L, const std::vector<double>& precisions) {
    std::vector<CatalogEntry> out;
    for (double c : precisions) {
        std::map<std::string, std::vector<std::vector<double>>> mats;
        for (const auto& t : V.terms()) {
            const int j = t.kernel.order;
            std::vector<std::vector<double>> C(static_cast<std::size_t>(j), std::vector<double>(static_cast<std::size_t>(j), 0.0));
            for (int r = 0; r < j; ++r) C[r][r] = c;
            mats[t.index] = C;
        }
        out.push_back(catalog_smoothing(V, L, mats));
    }
    return out;
}

}  // namespace volterra
