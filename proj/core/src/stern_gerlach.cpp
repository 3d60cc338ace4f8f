#include "pointersim/stern_gerlach.hpp"

#include <cmath>

#include "pointersim/errors.hpp"

namespace pointersim {

namespace {

struct Angles {
    double cc;   // cos^2 t1 cos^2 t2
    double ss;   // sin^2 t1 sin^2 t2
    double s2s2; // sin 2t1 sin 2t2
    double cd;   // cos(d1 - d2)
    double sd;   // sin(d1 - d2)
};

Angles angles(const SgScenario& s) {
    const double c1 = std::cos(s.theta1), s1 = std::sin(s.theta1);
    const double c2 = std::cos(s.theta2), s2 = std::sin(s.theta2);
    Angles a;
    a.cc = c1 * c1 * c2 * c2;
    a.ss = s1 * s1 * s2 * s2;
    a.s2s2 = std::sin(2.0 * s.theta1) * std::sin(2.0 * s.theta2);
    a.cd = std::cos(s.delta1 - s.delta2);
    a.sd = std::sin(s.delta1 - s.delta2);
    return a;
}

} // namespace

SpectralObservable SgScenario::observable() const { return SpectralObservable({+1.0, -1.0}); }

SelectionState SgScenario::pre() const {
    return SelectionState({std::cos(theta1), std::polar(std::sin(theta1), delta1)});
}

SelectionState SgScenario::post() const {
    return SelectionState({std::cos(theta2), std::polar(std::sin(theta2), delta2)});
}

std::pair<GaussianBranch, GaussianBranch> sg_branches(const SgScenario& s) {
    const MeasurementConfig cfg = s.config();
    return {evolve_branch(cfg, +1.0), evolve_branch(cfg, -1.0)};
}

double sg_decoherence(const SgScenario& s) {
    return decoherence_factor(s.config(), +1.0, -1.0);
}

double sg_log_decoherence_printed(const SgScenario& s) {
    const MeasurementConfig cfg = s.config();
    const double gamma_sq =
        s.f * s.f * std::pow(s.t, 4) / (s.m * s.m * cfg.sigma_t_sq()); // (f t^2 / m sigma(t))^2
    const double mid = s.t * s.t / (32.0 * s.m * s.m * std::pow(s.sigma, 4)) * gamma_sq;
    const double tail = 2.0 * s.sigma * s.sigma * s.f * s.f * s.t * s.t;
    return -(gamma_sq / 8.0 + mid + tail);
}

SgShifts sg_shifts(const SgScenario& s) {
    const SpectralObservable obs = s.observable();
    const SelectionState pre = s.pre();
    const SelectionState post = s.post();
    const MeasurementConfig cfg = s.config();
    const PointerShifts ps = postselected_pointer_shifts(obs, pre, post, cfg);
    return {ps.dx, ps.dp, postselection_norm(obs, pre, post, cfg)};
}

SgShifts sg_shifts_printed(const SgScenario& s) {
    const Angles a = angles(s);
    const double fp = sg_decoherence(s);
    const double beta_sq = a.cc + a.ss + 0.5 * a.s2s2 * a.cd * fp;
    if (beta_sq <= 1e-14)
        throw PostSelectionAnnihilationError("sg_shifts_printed: beta^2 = 0");

    const double f = s.f, t = s.t, m = s.m, s2 = s.sigma * s.sigma;
    SgShifts r;
    r.beta_sq = beta_sq;
    r.dx = (f * t * t / (2.0 * m) * (a.cc - a.ss) +
            (f * t * t * t + 8.0 * f * t * s2 * s2 * m * m) / (8.0 * s2 * m * m) * a.s2s2 * a.sd *
                fp) /
           beta_sq;
    r.dp = (f * t * (a.cc - a.ss) + f * t * t / (8.0 * s2 * m) * a.s2s2 * a.sd * fp) / beta_sq;
    return r;
}

double sg_conditional_sigma_z(const SgScenario& s) {
    const Angles a = angles(s);
    if (a.cc + a.ss <= 1e-30)
        throw DegeneratePostSelectionError("sg_conditional_sigma_z: orthogonal components");
    return (a.cc - a.ss) / (a.cc + a.ss);
}

SgShifts sg_strong_shifts_printed(const SgScenario& s) {
    const double sz = sg_conditional_sigma_z(s);
    const Angles a = angles(s);
    SgShifts r;
    r.beta_sq = a.cc + a.ss;
    r.dx = s.f * s.t * s.t / (2.0 * s.m) * sz;
    r.dp = s.f * s.t * sz;
    return r;
}

SgShifts sg_weak_shifts_printed(const SgScenario& s) {
    const Angles a = angles(s);
    const double beta1_sq = a.cc + a.ss + 0.5 * a.s2s2 * a.cd;
    if (beta1_sq <= 1e-14)
        throw PostSelectionAnnihilationError("sg_weak_shifts_printed: orthogonal selections");
    const double re_w = (a.cc - a.ss) / beta1_sq;
    const double im_w = -0.5 * a.s2s2 * a.sd / beta1_sq;

    const double f = s.f, t = s.t, m = s.m, s2 = s.sigma * s.sigma;
    SgShifts r;
    r.beta_sq = beta1_sq;
    r.dx = f * t * t / (2.0 * m) * re_w -
           (f * t * t * t + 8.0 * f * t * s2 * s2 * m * m) / (4.0 * s2 * m * m) * im_w;
    r.dp = f * t * re_w - f * t * t / (4.0 * s2 * m) * im_w;
    return r;
}

} // namespace pointersim
