// stern_gerlach.hpp — two-level specialization: a spin-1/2 particle crossing
// a field gradient, H_± = p^2/2m -+ f x with f the force mu dB/dx. Maps onto
// the generic machinery as a = ±1, g = f,
//   |psi_i> = cos(theta1)|up> + e^{i delta1} sin(theta1)|down>,
//   |psi_f> = cos(theta2)|up> + e^{i delta2} sin(theta2)|down>.
// All numerics delegate to the generic modules; this module owns only the
// angle parameterization and the printed-formula diagnostics.

#pragma once

#include <utility>

#include "pointersim/pointer.hpp"
#include "pointersim/spectral.hpp"
#include "pointersim/transition.hpp"

namespace pointersim {

struct SgScenario {
    double theta1 = 0.0;
    double delta1 = 0.0;
    double theta2 = 0.0;
    double delta2 = 0.0;
    double f = 1.0; // force mu dB/dx
    double m = 1.0;
    double sigma = 1.0;
    double t = 1.0;

    MeasurementConfig config() const { return {f, t, m, sigma}; }
    SpectralObservable observable() const; // eigenvalues (+1, -1)
    SelectionState pre() const;
    SelectionState post() const;
};

// Branches phi_+ and phi_- (centers ± f t^2/2m, kicks ± f t).
std::pair<GaussianBranch, GaussianBranch> sg_branches(const SgScenario& s);

// F'(t) = |<phi_+|phi_->| via the exact route.
double sg_decoherence(const SgScenario& s);

// Printed closed form of ln F' with gamma = f t^2 / (m sigma(t)):
//   ln F' = -[ gamma^2/8 + (t^2 / 32 m^2 sigma^4) gamma^2 + 2 sigma^2 f^2 t^2 ].
double sg_log_decoherence_printed(const SgScenario& s);

struct SgShifts {
    double dx = 0.0;
    double dp = 0.0;
    double beta_sq = 0.0; // norm of the post-selected pointer state
};

// Exact-route shifts (delegates to the transition engine).
SgShifts sg_shifts(const SgScenario& s);

// Printed shift formulas, evaluated from the angles directly:
//   beta^2 = cos^2 t1 cos^2 t2 + sin^2 t1 sin^2 t2
//            + (1/2) sin 2t1 sin 2t2 cos(d1-d2) F'(t)
//   dx = [ (ft^2/2m)(cc - ss) + ((ft^3 + 8 f t sigma^4 m^2)/(8 sigma^2 m^2))
//          sin 2t1 sin 2t2 sin(d1-d2) F'(t) ] / beta^2
//   dp = [ ft (cc - ss) + (ft^2/(8 sigma^2 m)) sin 2t1 sin 2t2 sin(d1-d2) F'(t) ] / beta^2
// with cc = cos^2 t1 cos^2 t2, ss = sin^2 t1 sin^2 t2.
SgShifts sg_shifts_printed(const SgScenario& s);

// <sigma_z>_c = (cc - ss) / (cc + ss).
double sg_conditional_sigma_z(const SgScenario& s);

// Printed strong-regime (F' -> 0) shifts: (ft^2/2m) <sigma_z>_c, ft <sigma_z>_c.
SgShifts sg_strong_shifts_printed(const SgScenario& s);

// Printed weak-regime (F' -> 1) shifts in terms of <sigma_z>_w.
SgShifts sg_weak_shifts_printed(const SgScenario& s);

} // namespace pointersim
