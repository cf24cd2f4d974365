#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "volterra/kernel.hpp"

namespace volterra {

// Row-major integer matrix: rows = target order, cols = source order.
using IntMatrix = std::vector<std::vector<int>>;

IntMatrix identity_matrix(int n);
// (rows(a) x inner) times (inner x cols).
IntMatrix matmul(const IntMatrix& a, const IntMatrix& b, int inner, int cols);

// Per-source-index lens datum: where the index goes, how frequency vectors
// are pulled back, and the mask applied afterwards.
struct MorphismPart {
    std::string target;
    IntMatrix phi;
    Tensor psi;

    bool operator==(const MorphismPart&) const = default;
};

struct Morphism {
    int length = 1;
    std::map<std::string, int> source_orders;
    std::map<std::string, int> target_orders;
    std::map<std::string, MorphismPart> parts;

    bool operator==(const Morphism&) const = default;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Morphism& m, const VolterraSeries& V, const VolterraSeries& W);

// psi_i(Omega) * w_hat(phi_i Omega mod L).
Tensor weighted_pullback(const Morphism& m, const std::string& i, const VolterraFRF& w_hat);

// One integrand tensor per source index, before projection onto output bins.
using GradedIntegrand = std::vector<Tensor>;
using IntegrandFn = std::function<GradedIntegrand(const Spectrum&)>;

GradedIntegrand component_integrand(const Morphism& m, const VolterraSeries& V, const VolterraSeries& W,
                                    const Spectrum& s_hat);
Spectrum project_integrand(const GradedIntegrand& g, int L);

Spectrum apply_component(const Morphism& m, const VolterraSeries& V, const VolterraSeries& W, const Spectrum& s_hat);

// Runs `trials` random (multiplier, signal) pairs through both sides of the
// naturality square and returns the largest absolute deviation.
double check_naturality(const IntegrandFn& integrand, int L, int trials, std::uint64_t seed = 1);
double check_naturality(const Morphism& m, const VolterraSeries& V, const VolterraSeries& W, int trials,
                        std::uint64_t seed = 1);

// g after f.
Morphism compose_morphisms(const Morphism& g, const Morphism& f);

// Index map and matrices are identities and the mask is one. Neutral for
// compose_morphisms.
Morphism unit_morphism(const VolterraSeries& V, int L);

struct CatalogEntry {
    VolterraSeries target;
    Morphism morphism;
};

CatalogEntry catalog_trivial(const VolterraSeries& V, int L);
CatalogEntry catalog_autoconvolution(const VolterraSeries& V, int L);
// Mask 1/v_hat where |v_hat| >= eps_rel * max|v_hat|, zero elsewhere.
CatalogEntry catalog_identity(const VolterraSeries& V, int L, double eps_rel = 1e-12);
// Target kernels are deltas at the given offset vector per source index.
CatalogEntry catalog_translation(const VolterraSeries& V, int L, const std::map<std::string, std::vector<int>>& offsets);
// Target responses are spectral combs with teeth every T bins on each axis.
CatalogEntry catalog_sampling(const VolterraSeries& V, int L, const std::map<std::string, int>& periods);
// Target kernels are circular Gaussians exp(-tau^T C tau) with unit sum.
CatalogEntry catalog_smoothing(const VolterraSeries& V, int L,
                               const std::map<std::string, std::vector<std::vector<double>>>& precisions);

// Kernel of the smoothing target for one order, memory L.
VolterraKernel gaussian_kernel(const std::vector<std::vector<double>>& C, int L);

// Indexed families: one catalog entry per parameter value, applied uniformly
// to every index of V.
std::vector<CatalogEntry> translation_family(const VolterraSeries& V, int L, const std::vector<int>& shifts);
std::vector<CatalogEntry> smoothing_family(const VolterraSeries& V, int L, const std::vector<double>& precisions);

}  // namespace volterra
