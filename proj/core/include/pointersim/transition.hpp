// transition.hpp — post-selection machinery: the transition value A_T, exact
// pointer shifts of the post-selected state Xi(t) = sum_i beta_i* alpha_i
// e^{-i E_i t} phi_i(t), and the four closed-form limit regimes.
//
//   A_T = <psi_f| A rho_s'(t) |psi_f> / <psi_f| rho_s'(t) |psi_f>
//       = sum_ij a_i w_ij / sum_ij w_ij,
//   w_ij = alpha_i alpha_j* beta_i* beta_j e^{-i(E_i-E_j)t} <phi_j(t)|phi_i(t)>.
//
// A_T interpolates between the weak value (all overlaps 1) and the
// conditional expectation (all distinct-pair overlaps 0).

#pragma once

#include <complex>

#include "pointersim/pointer.hpp"
#include "pointersim/spectral.hpp"

namespace pointersim {

struct PointerShifts {
    double dx = 0.0;
    double dp = 0.0;
};

cplx transition_value(const SpectralObservable& obs, const SelectionState& pre,
                      const SelectionState& post, const MeasurementConfig& cfg);

// Norm <Xi|Xi> of the unnormalized post-selected pointer state (beta^2).
double postselection_norm(const SpectralObservable& obs, const SelectionState& pre,
                          const SelectionState& post, const MeasurementConfig& cfg);

// Exact moment-sum route: dx = <Xi|x|Xi>/<Xi|Xi>, dp = <Xi|p|Xi>/<Xi|Xi>
// (the initial pointer has <x> = <p> = 0).
PointerShifts postselected_pointer_shifts(const SpectralObservable& obs,
                                          const SelectionState& pre,
                                          const SelectionState& post,
                                          const MeasurementConfig& cfg);

// Shifts of the full entangled state, no post-selection:
//   dx = (g t^2 / 2m) <A>,  dp = g t <A>,
// evaluated through the branch moment sums (cross terms vanish by system
// orthogonality, so only diagonal moments survive).
PointerShifts pointer_shifts(const SpectralObservable& obs, const SelectionState& pre,
                             const MeasurementConfig& cfg);

// Closed-form route through the transition value:
//   dx = (g t^2/2m) Re A_T + [g t^3/(4 sigma^2 m^2) - 2 g t sigma(t)^2] Im A_T
//   dp = g t Re A_T - g t^2/(4 sigma^2 m) Im A_T
// Algebraically identical to the moment-sum route; kept for cross-checking.
PointerShifts shifts_from_transition_value(const SpectralObservable& obs,
                                           const SelectionState& pre,
                                           const SelectionState& post,
                                           const MeasurementConfig& cfg);

enum class ShiftLimit { weak_F1, strong_F0, weak_F1_minf, strong_F0_minf };

// Limit-regime shift formulas:
//   weak_F1:        dx = (gt^2/2m) Re<A>_w - (gt^3 + 8 g t sigma^4 m^2)/(4 sigma^2 m^2) Im<A>_w
//                   dp = gt Re<A>_w - gt^2/(4 sigma^2 m) Im<A>_w
//   strong_F0:      dx = (gt^2/2m) <A>_c,  dp = gt <A>_c
//   weak_F1_minf:   dx = -2 g t sigma^2 Im<A>_w,  dp = gt Re<A>_w
//   strong_F0_minf: dx = 0,  dp = gt <A>_c
PointerShifts limit_shifts(const SpectralObservable& obs, const SelectionState& pre,
                           const SelectionState& post, const MeasurementConfig& cfg,
                           ShiftLimit limit);

// Regime-flag thresholds on the pairwise decoherence factors. Tooling
// constants, not model content.
inline constexpr double kNearWeakFloor = 0.99;  // f_min above this => near_weak
inline constexpr double kNearStrongCeil = 0.01; // f_max below this => near_strong

struct TransitionResult {
    cplx a_t{0.0, 0.0};
    double f_bar = 1.0; // mean pairwise decoherence factor (i < j)
    double f_min = 1.0;
    double f_max = 1.0;
    double dx = 0.0;
    double dp = 0.0;
    bool near_weak = false;
    bool near_strong = false;
};

TransitionResult analyze_transition(const SpectralObservable& obs, const SelectionState& pre,
                                    const SelectionState& post, const MeasurementConfig& cfg);

} // namespace pointersim
