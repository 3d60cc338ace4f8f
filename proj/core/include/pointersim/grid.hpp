// grid.hpp — brute-force validation engine. Evolves each pointer branch on a
// uniform position grid with Strang-split steps (half potential, full
// kinetic via FFT, half potential) and recomputes overlaps, moments and
// shifts numerically. Branch-wise scalar propagation is exact here because
// the observable commutes with the full Hamiltonian, so the composite state
// never mixes branches.

#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "pointersim/pointer.hpp"
#include "pointersim/spectral.hpp"

namespace pointersim {

struct GridSpec {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n_points = 0; // power of two, >= 256
    std::size_t n_steps = 0;  // >= 1 when t > 0

    void validate() const;
    double dx() const { return (x_max - x_min) / static_cast<double>(n_points); }
    double x_at(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }

    // Grid sized to hold every branch (centers +- 10 sigma(t) plus padding)
    // with enough spatial resolution for the largest momentum kick. Throws
    // ConfigError when more than max_points would be required.
    static GridSpec auto_sized(const MeasurementConfig& cfg, std::span<const double> eigenvalues,
                               std::size_t max_points = std::size_t{1} << 15);
};

struct GridBranch {
    GridSpec spec;
    double a = 0.0;          // branch eigenvalue
    std::vector<cplx> psi;   // amplitudes over the grid

    double norm() const; // sum |psi|^2 dx
};

// Initial Gaussian sampled on the grid (the t = 0 branch).
GridBranch initial_state(const GridSpec& spec, const MeasurementConfig& cfg, double a);

// Split-operator propagation of one branch under H_a = p^2/2m - g a x.
GridBranch propagate(const GridSpec& spec, const MeasurementConfig& cfg, double a);

// Riemann inner product <psi1|psi2> = sum conj(psi1) psi2 dx.
cplx numeric_overlap(const GridBranch& b1, const GridBranch& b2);

// <p^2/2m - g a x> of a branch; conserved along the propagation.
double branch_energy(const GridBranch& b, const MeasurementConfig& cfg);

struct GridMoments {
    double norm = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
};

// Moments of the composite state. With a post-selection, composes
// Xi = sum_i beta_i* alpha_i e^{-i E_i t} psi_i on the grid and returns its
// normalized first moments (mean_p spectrally); without one, returns the
// mixed-state moments sum_i |alpha_i|^2 <.>_i.
GridMoments numeric_moments(std::span<const GridBranch> branches, const SpectralObservable& obs,
                            const SelectionState& pre, const SelectionState* post,
                            const MeasurementConfig& cfg);

struct ConvergenceLevel {
    std::size_t n_points = 0;
    std::size_t n_steps = 0;
    cplx overlap{0.0, 0.0};
    double diff_from_prev = 0.0; // |overlap_k - overlap_{k-1}|, 0 for the first level
};

struct ConvergenceReport {
    std::vector<ConvergenceLevel> levels;
    double observed_order = 0.0;    // log2 of successive difference ratios
    bool at_roundoff_floor = false; // differences below measurable scale
    cplx extrapolated_overlap{0.0, 0.0};
    double error_bar = 0.0; // |extrapolated - finest| floored at 1e-14
};

// Overlap <phi_ai|phi_aj> across a refinement ladder (>= 3 levels, the last
// two sharing n_points). Differences must shrink monotonically unless they
// sit at the roundoff floor; otherwise the run is rejected.
ConvergenceReport convergence_study(const MeasurementConfig& cfg, double ai, double aj,
                                    std::span<const GridSpec> ladder);

// Snapshot dump: one JSON header line (spec and config), then n_points
// little-endian float64 (Re, Im) pairs.
void write_snapshot(std::ostream& os, const GridBranch& branch, const MeasurementConfig& cfg);

} // namespace pointersim
