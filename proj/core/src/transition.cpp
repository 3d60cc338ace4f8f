#include "pointersim/transition.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "pointersim/errors.hpp"

namespace pointersim {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_dims(const SpectralObservable& obs, const SelectionState& pre,
                const SelectionState& post, const char* who) {
    if (obs.dim() != pre.dim() || obs.dim() != post.dim())
        throw ConfigError(std::string(who) + ": dimension mismatch");
}

std::vector<GaussianBranch> make_branches(const SpectralObservable& obs,
                                          const MeasurementConfig& cfg) {
    std::vector<GaussianBranch> b;
    b.reserve(obs.dim());
    for (double a : obs.eigenvalues) b.push_back(evolve_branch(cfg, a));
    return b;
}

// c_i = beta_i* alpha_i e^{-i E_i t}, the branch weights of Xi(t).
std::vector<cplx> xi_weights(const SpectralObservable& obs, const SelectionState& pre,
                             const SelectionState& post, const MeasurementConfig& cfg) {
    std::vector<cplx> c(obs.dim());
    for (std::size_t i = 0; i < obs.dim(); ++i)
        c[i] = std::conj(post.amplitudes[i]) * pre.amplitudes[i] *
               std::exp(-kI * obs.eigenphases[i] * cfg.t);
    return c;
}

std::string point_string(const MeasurementConfig& cfg) {
    std::ostringstream os;
    os << "(g=" << cfg.g << ", t=" << cfg.t << ", m=" << cfg.m << ", sigma=" << cfg.sigma << ")";
    return os.str();
}

// Hermitian-form sums sum_ij conj(c_i) c_j <phi_i|O|phi_j> for O = 1, x, p.
struct XiMoments {
    double norm;
    double x;
    double p;
};

XiMoments xi_moments(const std::vector<cplx>& c, const std::vector<GaussianBranch>& b) {
    const std::size_t d = c.size();
    cplx n{0.0, 0.0}, mx{0.0, 0.0}, mp{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const cplx w = std::conj(c[i]) * c[j];
            if (std::abs(w) == 0.0) continue;
            n += w * branch_cross_moment(b[i], b[j], CrossMoment::overlap);
            mx += w * branch_cross_moment(b[i], b[j], CrossMoment::x);
            mp += w * branch_cross_moment(b[i], b[j], CrossMoment::p);
        }
    }
    return {n.real(), mx.real(), mp.real()};
}

} // namespace

cplx transition_value(const SpectralObservable& obs, const SelectionState& pre,
                      const SelectionState& post, const MeasurementConfig& cfg) {
    check_dims(obs, pre, post, "transition_value");
    cfg.validate();

    const std::vector<GaussianBranch> b = make_branches(obs, cfg);
    const std::size_t d = obs.dim();
    cplx num{0.0, 0.0}, den{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const cplx phase = std::exp(-kI * (obs.eigenphases[i] - obs.eigenphases[j]) * cfg.t);
            const cplx w = pre.amplitudes[i] * std::conj(pre.amplitudes[j]) *
                           std::conj(post.amplitudes[i]) * post.amplitudes[j] * phase *
                           branch_cross_moment(b[j], b[i], CrossMoment::overlap);
            num += obs.eigenvalues[i] * w;
            den += w;
        }
    }
    if (std::abs(den) < 1e-14)
        throw DegenerateTransitionError("transition_value: denominator vanished at " +
                                        point_string(cfg));
    return num / den;
}

double postselection_norm(const SpectralObservable& obs, const SelectionState& pre,
                          const SelectionState& post, const MeasurementConfig& cfg) {
    check_dims(obs, pre, post, "postselection_norm");
    cfg.validate();
    const std::vector<GaussianBranch> b = make_branches(obs, cfg);
    const std::vector<cplx> c = xi_weights(obs, pre, post, cfg);
    cplx n{0.0, 0.0};
    for (std::size_t i = 0; i < obs.dim(); ++i)
        for (std::size_t j = 0; j < obs.dim(); ++j)
            n += std::conj(c[i]) * c[j] * branch_cross_moment(b[i], b[j], CrossMoment::overlap);
    return n.real();
}

PointerShifts postselected_pointer_shifts(const SpectralObservable& obs,
                                          const SelectionState& pre,
                                          const SelectionState& post,
                                          const MeasurementConfig& cfg) {
    check_dims(obs, pre, post, "postselected_pointer_shifts");
    cfg.validate();
    const std::vector<GaussianBranch> b = make_branches(obs, cfg);
    const std::vector<cplx> c = xi_weights(obs, pre, post, cfg);
    const XiMoments m = xi_moments(c, b);
    if (m.norm < 1e-14)
        throw PostSelectionAnnihilationError(
            "postselected_pointer_shifts: <Xi|Xi> = 0 at " + point_string(cfg));
    return {m.x / m.norm, m.p / m.norm};
}

PointerShifts pointer_shifts(const SpectralObservable& obs, const SelectionState& pre,
                             const MeasurementConfig& cfg) {
    if (obs.dim() != pre.dim()) throw ConfigError("pointer_shifts: dimension mismatch");
    cfg.validate();
    const std::vector<GaussianBranch> b = make_branches(obs, cfg);
    double dx = 0.0, dp = 0.0;
    for (std::size_t i = 0; i < obs.dim(); ++i) {
        const double w = std::norm(pre.amplitudes[i]);
        dx += w * branch_cross_moment(b[i], b[i], CrossMoment::x).real();
        dp += w * branch_cross_moment(b[i], b[i], CrossMoment::p).real();
    }
    return {dx, dp};
}

PointerShifts shifts_from_transition_value(const SpectralObservable& obs,
                                           const SelectionState& pre,
                                           const SelectionState& post,
                                           const MeasurementConfig& cfg) {
    const cplx at = transition_value(obs, pre, post, cfg);
    const double g = cfg.g, t = cfg.t, m = cfg.m, s2 = cfg.sigma * cfg.sigma;
    const double cx = g * t * t * t / (4.0 * s2 * m * m) - 2.0 * g * t * cfg.sigma_t_sq();
    PointerShifts r;
    r.dx = g * t * t / (2.0 * m) * at.real() + cx * at.imag();
    r.dp = g * t * at.real() - g * t * t / (4.0 * s2 * m) * at.imag();
    return r;
}

PointerShifts limit_shifts(const SpectralObservable& obs, const SelectionState& pre,
                           const SelectionState& post, const MeasurementConfig& cfg,
                           ShiftLimit limit) {
    check_dims(obs, pre, post, "limit_shifts");
    cfg.validate();
    const double g = cfg.g, t = cfg.t, m = cfg.m, s2 = cfg.sigma * cfg.sigma;
    switch (limit) {
        case ShiftLimit::weak_F1: {
            const cplx aw = weak_value(obs, pre, post);
            PointerShifts r;
            r.dx = g * t * t / (2.0 * m) * aw.real() -
                   (g * t * t * t + 8.0 * g * t * s2 * s2 * m * m) / (4.0 * s2 * m * m) *
                       aw.imag();
            r.dp = g * t * aw.real() - g * t * t / (4.0 * s2 * m) * aw.imag();
            return r;
        }
        case ShiftLimit::weak_F1_minf: {
            const cplx aw = weak_value(obs, pre, post);
            return {-2.0 * g * t * s2 * aw.imag(), g * t * aw.real()};
        }
        case ShiftLimit::strong_F0: {
            const double ac = conditional_expectation(obs, pre, post);
            return {g * t * t / (2.0 * m) * ac, g * t * ac};
        }
        case ShiftLimit::strong_F0_minf: {
            const double ac = conditional_expectation(obs, pre, post);
            return {0.0, g * t * ac};
        }
    }
    throw ConfigError("limit_shifts: unknown limit");
}

TransitionResult analyze_transition(const SpectralObservable& obs, const SelectionState& pre,
                                    const SelectionState& post, const MeasurementConfig& cfg) {
    check_dims(obs, pre, post, "analyze_transition");
    cfg.validate();

    TransitionResult r;
    r.a_t = transition_value(obs, pre, post, cfg);
    const PointerShifts s = postselected_pointer_shifts(obs, pre, post, cfg);
    r.dx = s.dx;
    r.dp = s.dp;

    double fsum = 0.0, fmin = 1.0, fmax = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < obs.dim(); ++i) {
        for (std::size_t j = i + 1; j < obs.dim(); ++j) {
            const double f = decoherence_factor(cfg, obs.eigenvalues[i], obs.eigenvalues[j]);
            fsum += f;
            fmin = std::min(fmin, f);
            fmax = std::max(fmax, f);
            ++pairs;
        }
    }
    r.f_bar = pairs ? fsum / static_cast<double>(pairs) : 1.0;
    r.f_min = pairs ? fmin : 1.0;
    r.f_max = pairs ? fmax : 1.0;
    r.near_weak = r.f_min > kNearWeakFloor;
    r.near_strong = r.f_max < kNearStrongCeil;
    return r;
}

} // namespace pointersim
