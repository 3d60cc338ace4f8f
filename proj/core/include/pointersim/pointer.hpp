// pointer.hpp — analytic engine for the pointer-decoherence model
//
//   H = p^2/2m - g x (x) A,   initial pointer (2 pi sigma^2)^{-1/4} exp(-x^2/4 sigma^2)
//
// Each system eigenvalue a drives one pointer branch, a drifting, kicked,
// spreading Gaussian obtained in closed form from the factorized propagator
// exp(g1) exp(g2 p^2) exp(g3 p) exp(g4 x):
//
//   phi_a(x,t) = exp( C - (x - X)^2 / (4 s^2) + i K x )
//   s^2 = sigma^2 + i t/2m,  X = g a t^2/2m,  K = g a t,
//   C  = -(1/4) ln(2 pi sigma^2) + (1/2) ln(sigma^2/s^2) - i (g a)^2 t^3 / 6m.
//
// Cross moments <phi_i|phi_j>, <phi_i|x|phi_j>, <phi_i|p|phi_j> are exact
// complex-Gaussian integrals, evaluated in log domain so that extreme
// decoherence (ln F ~ -1e7) stays representable.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "pointersim/spectral.hpp"

namespace pointersim {

// Natural units, hbar = 1.
struct MeasurementConfig {
    double g = 1.0;     // coupling strength
    double t = 1.0;     // evolution time, >= 0
    double m = 1.0;     // pointer mass, > 0
    double sigma = 1.0; // initial Gaussian width, > 0

    void validate() const; // throws ConfigError

    double tau() const { return t / (2.0 * m); } // Im(s^2)
    cplx width_sq() const { return {sigma * sigma, tau()}; }
    // Free-spreading width sigma(t) = sigma (1 + t^2/4 m^2 sigma^4)^{1/2}.
    double sigma_t_sq() const;
    double sigma_t() const;
    // t / (m sigma^2); small = short-time (Zeno) side, large = long-time side.
    double regime_ratio() const { return t / (m * sigma * sigma); }
};

struct WeiNormanCoeffs {
    cplx g1, g2, g3, g4;
};

// Exponents of exp(g1) exp(g2 p^2) exp(g3 p) exp(g4 x) for the branch
// Hamiltonian H_a = p^2/2m - g a x:
//   g1 = -i (g a)^2 t^3 / 6m,  g2 = -i t/2m,  g3 = i g a t^2 / 2m,  g4 = i g a t.
WeiNormanCoeffs wei_norman_coeffs(const MeasurementConfig& cfg, double a);

struct GaussianBranch {
    cplx width_sq;       // s^2, Re(s^2) = sigma^2 > 0
    double center;       // X
    double kick;         // K (mean momentum)
    cplx log_norm_phase; // C

    cplx at(double x) const; // wavefunction value phi(x)
    double sigma0() const;   // initial width sigma
    double sigma_t() const;  // |s^2| / sigma
};

GaussianBranch evolve_branch(const MeasurementConfig& cfg, double a);

enum class CrossMoment { overlap, x, p };

// Exact closed-form <phi_i|phi_j>, <phi_i|x|phi_j> or <phi_i|p|phi_j>.
// Branches must share one complex width (same config, different eigenvalue).
cplx branch_cross_moment(const GaussianBranch& bi, const GaussianBranch& bj, CrossMoment which);

// log <phi_i|phi_j>; real part is ln F, imaginary part the overlap phase.
cplx log_branch_overlap(const GaussianBranch& bi, const GaussianBranch& bj);

// Decoherence factor F = |<phi_i(t)|phi_j(t)>| in [0,1], exact route.
double decoherence_factor(const MeasurementConfig& cfg, double ai, double aj);
double log_decoherence_factor(const MeasurementConfig& cfg, double ai, double aj); // ln F

// ── Printed closed-form diagnostics ─────────────────────────────────────────
//
// Two textbook groupings of ln F circulate for this model. Both share the
// middle term t^2 dX^2 / (32 sigma^4 m^2 sigma(t)^2), dX = g t^2 (ai-aj)/2m:
//
//   five-eighths grouping: -[ (5/8) dX^2/sigma(t)^2 + middle + 2 sigma^4 m^2 dX^2 / (t^2 sigma(t)^2) ]
//   one-eighth grouping:   -[ (1/8) dX^2/sigma(t)^2 + middle + 2 m^2 sigma^2 dX^2 / t^2 ]
//
// They are algebraically identical; both are kept as labeled diagnostics and
// the adjudication tooling discriminates them (and their cross-readings)
// against the grid oracle. The library's public F is the exact route above.
double log_factor_five_eighths_form(const MeasurementConfig& cfg, double ai, double aj);
double log_factor_one_eighth_form(const MeasurementConfig& cfg, double ai, double aj);

// Individual building blocks of the printed groupings (adjudication uses
// these to assemble hypothesis readings). All return the positive term value.
namespace factor_terms {
double leading(const MeasurementConfig& cfg, double ai, double aj, double coeff);
double middle(const MeasurementConfig& cfg, double ai, double aj);
double tail_spread(const MeasurementConfig& cfg, double ai, double aj); // 2 sigma^4 m^2 dX^2/(t^2 sigma(t)^2)
double tail_static(const MeasurementConfig& cfg, double ai, double aj); // 2 m^2 sigma^2 dX^2/t^2
} // namespace factor_terms

// ── Regime approximations ───────────────────────────────────────────────────

enum class AsymptoticRegime { long_time, short_time };

// long_time  (t >> m sigma^2): F ~ exp[-g^2 (ai-aj)^2 t^4 / (32 sigma^2 m^2)]
// short_time (t << m sigma^2): F ~ exp[-sigma^2 g^2 (ai-aj)^2 t^2 / 2] = exp(-tau_z^2 t^2)
double asymptotic_factor(const MeasurementConfig& cfg, double ai, double aj,
                         AsymptoticRegime regime);
double log_asymptotic_factor(const MeasurementConfig& cfg, double ai, double aj,
                             AsymptoticRegime regime);

// Quadratic decay rate of the Zeno window, tau_z^2 = g^2 sigma^2 (ai-aj)^2 / 2.
double zeno_rate_sq(const MeasurementConfig& cfg, double ai, double aj);

// ── Reduced system state ────────────────────────────────────────────────────

struct ReducedDensityMatrix {
    std::size_t dim = 0;
    std::vector<cplx> entries; // row-major dim x dim

    const cplx& at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
    cplx& at(std::size_t i, std::size_t j) { return entries[i * dim + j]; }

    double trace_deviation() const;      // |tr - 1|
    double hermiticity_deviation() const;
    double min_eigenvalue() const;       // for PSD checks
};

// rho_ii = |alpha_i|^2, rho_ij = alpha_i alpha_j* e^{-i(E_i-E_j)t} <phi_j|phi_i>.
ReducedDensityMatrix reduced_density_matrix(const SpectralObservable& obs,
                                            const SelectionState& pre,
                                            const MeasurementConfig& cfg);

} // namespace pointersim
