#include "pointersim/pointer.hpp"

#include <algorithm>
#include <cmath>

#include "pointersim/errors.hpp"
#include "pointersim/linalg.hpp"

namespace pointersim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

// Shared quadratic-form data of the product integrand
//   conj(phi_i) phi_j = exp(conj(C_i) + C_j - A x^2 + B x + D).
struct PairForm {
    cplx log_prefactor; // conj(C_i) + C_j
    double A;           // sigma^2 / (2 |s^2|^2), real > 0
    cplx B;
    cplx D;
    cplx s_sq;          // shared complex width
};

PairForm pair_form(const GaussianBranch& bi, const GaussianBranch& bj) {
    const cplx si = bi.width_sq, sj = bj.width_sq;
    const double scale = std::max(std::abs(si), std::abs(sj));
    if (std::abs(si - sj) > 1e-12 * scale)
        throw IncompatibleBranchError("branch_cross_moment: branches have different complex widths");

    const cplx v = 1.0 / (2.0 * sj);        // 1/(2 s^2)
    const cplx u = std::conj(v);            // 1/(2 conj(s^2))
    PairForm f;
    f.s_sq = sj;
    f.log_prefactor = std::conj(bi.log_norm_phase) + bj.log_norm_phase;
    f.A = v.real();
    f.B = bi.center * u + bj.center * v + kI * (bj.kick - bi.kick);
    f.D = -0.5 * (bi.center * bi.center * u + bj.center * bj.center * v);
    return f;
}

cplx log_overlap(const PairForm& f) {
    // int exp(-A x^2 + B x) dx = sqrt(pi/A) exp(B^2/4A)
    return f.log_prefactor + 0.5 * std::log(kPi / f.A) + f.B * f.B / (4.0 * f.A) + f.D;
}

double delta_x(const MeasurementConfig& cfg, double ai, double aj) {
    return cfg.g * cfg.t * cfg.t * (ai - aj) / (2.0 * cfg.m);
}

} // namespace

void MeasurementConfig::validate() const {
    if (!(m > 0.0)) throw ConfigError("MeasurementConfig: m must be > 0");
    if (!(sigma > 0.0)) throw ConfigError("MeasurementConfig: sigma must be > 0");
    if (!(t >= 0.0)) throw ConfigError("MeasurementConfig: t must be >= 0");
    if (!std::isfinite(g)) throw ConfigError("MeasurementConfig: g must be finite");
}

double MeasurementConfig::sigma_t_sq() const {
    const double s2 = sigma * sigma;
    return s2 + tau() * tau() / s2; // |s^2|^2 / sigma^2
}

double MeasurementConfig::sigma_t() const { return std::sqrt(sigma_t_sq()); }

WeiNormanCoeffs wei_norman_coeffs(const MeasurementConfig& cfg, double a) {
    cfg.validate();
    const double ga = cfg.g * a;
    const double t = cfg.t, m = cfg.m;
    return {
        -kI * ga * ga * t * t * t / (6.0 * m),
        -kI * t / (2.0 * m),
        kI * ga * t * t / (2.0 * m),
        kI * ga * t,
    };
}

cplx GaussianBranch::at(double x) const {
    const double dx = x - center;
    return std::exp(log_norm_phase - dx * dx / (4.0 * width_sq) + kI * kick * x);
}

double GaussianBranch::sigma0() const { return std::sqrt(width_sq.real()); }

double GaussianBranch::sigma_t() const { return std::abs(width_sq) / sigma0(); }

GaussianBranch evolve_branch(const MeasurementConfig& cfg, double a) {
    cfg.validate();
    const double ga = cfg.g * a;
    const double s2 = cfg.sigma * cfg.sigma;
    GaussianBranch b;
    b.width_sq = cfg.width_sq();
    b.center = ga * cfg.t * cfg.t / (2.0 * cfg.m);
    b.kick = ga * cfg.t;
    const double theta = ga * ga * cfg.t * cfg.t * cfg.t / (6.0 * cfg.m);
    b.log_norm_phase = -0.25 * std::log(2.0 * kPi * s2) + 0.5 * std::log(s2 / b.width_sq) -
                       kI * theta;
    return b;
}

cplx branch_cross_moment(const GaussianBranch& bi, const GaussianBranch& bj, CrossMoment which) {
    const PairForm f = pair_form(bi, bj);
    const cplx ov = std::exp(log_overlap(f));
    switch (which) {
        case CrossMoment::overlap:
            return ov;
        case CrossMoment::x:
            // int x exp(-A x^2 + B x) = sqrt(pi/A) (B/2A) exp(B^2/4A)
            return ov * f.B / (2.0 * f.A);
        case CrossMoment::p: {
            // p phi_j = [ i (x - X_j)/(2 s^2) + K_j ] phi_j
            const cplx mu = f.B / (2.0 * f.A);
            return ov * (bj.kick + kI * (mu - bj.center) / (2.0 * f.s_sq));
        }
    }
    throw ConfigError("branch_cross_moment: unknown moment");
}

cplx log_branch_overlap(const GaussianBranch& bi, const GaussianBranch& bj) {
    return log_overlap(pair_form(bi, bj));
}

double log_decoherence_factor(const MeasurementConfig& cfg, double ai, double aj) {
    const GaussianBranch bi = evolve_branch(cfg, ai);
    const GaussianBranch bj = evolve_branch(cfg, aj);
    return std::min(0.0, log_branch_overlap(bi, bj).real());
}

double decoherence_factor(const MeasurementConfig& cfg, double ai, double aj) {
    return std::exp(log_decoherence_factor(cfg, ai, aj));
}

namespace factor_terms {

double leading(const MeasurementConfig& cfg, double ai, double aj, double coeff) {
    const double dx = delta_x(cfg, ai, aj);
    return coeff * dx * dx / cfg.sigma_t_sq();
}

double middle(const MeasurementConfig& cfg, double ai, double aj) {
    const double dx = delta_x(cfg, ai, aj);
    const double s2 = cfg.sigma * cfg.sigma;
    return cfg.t * cfg.t * dx * dx / (32.0 * s2 * s2 * cfg.m * cfg.m * cfg.sigma_t_sq());
}

// 2 sigma^4 m^2 dX^2 / (t^2 sigma(t)^2), written with dX^2/t^2 cancelled so
// that t = 0 needs no special case.
double tail_spread(const MeasurementConfig& cfg, double ai, double aj) {
    const double da = ai - aj;
    const double gs = cfg.g * cfg.sigma * cfg.sigma;
    return 0.5 * gs * gs * da * da * cfg.t * cfg.t / cfg.sigma_t_sq();
}

// 2 m^2 sigma^2 dX^2 / t^2 = g^2 sigma^2 (ai-aj)^2 t^2 / 2.
double tail_static(const MeasurementConfig& cfg, double ai, double aj) {
    const double gst = cfg.g * cfg.sigma * (ai - aj) * cfg.t;
    return 0.5 * gst * gst;
}

} // namespace factor_terms

double log_factor_five_eighths_form(const MeasurementConfig& cfg, double ai, double aj) {
    return -(factor_terms::leading(cfg, ai, aj, 5.0 / 8.0) + factor_terms::middle(cfg, ai, aj) +
             factor_terms::tail_spread(cfg, ai, aj));
}

double log_factor_one_eighth_form(const MeasurementConfig& cfg, double ai, double aj) {
    return -(factor_terms::leading(cfg, ai, aj, 1.0 / 8.0) + factor_terms::middle(cfg, ai, aj) +
             factor_terms::tail_static(cfg, ai, aj));
}

double zeno_rate_sq(const MeasurementConfig& cfg, double ai, double aj) {
    const double r = cfg.g * cfg.sigma * (ai - aj);
    return 0.5 * r * r;
}

double log_asymptotic_factor(const MeasurementConfig& cfg, double ai, double aj,
                             AsymptoticRegime regime) {
    cfg.validate();
    const double da = ai - aj;
    switch (regime) {
        case AsymptoticRegime::long_time: {
            const double t2 = cfg.t * cfg.t;
            return -cfg.g * cfg.g * da * da * t2 * t2 /
                   (32.0 * cfg.sigma * cfg.sigma * cfg.m * cfg.m);
        }
        case AsymptoticRegime::short_time:
            return -zeno_rate_sq(cfg, ai, aj) * cfg.t * cfg.t;
    }
    throw ConfigError("log_asymptotic_factor: unknown regime");
}

double asymptotic_factor(const MeasurementConfig& cfg, double ai, double aj,
                         AsymptoticRegime regime) {
    return std::exp(log_asymptotic_factor(cfg, ai, aj, regime));
}

double ReducedDensityMatrix::trace_deviation() const {
    cplx tr{0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) tr += at(i, i);
    return std::abs(tr - cplx{1.0, 0.0});
}

double ReducedDensityMatrix::hermiticity_deviation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j)
            worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
    return worst;
}

double ReducedDensityMatrix::min_eigenvalue() const {
    const std::vector<double> ev = hermitian_eigenvalues(dim, entries);
    return *std::min_element(ev.begin(), ev.end());
}

ReducedDensityMatrix reduced_density_matrix(const SpectralObservable& obs,
                                            const SelectionState& pre,
                                            const MeasurementConfig& cfg) {
    if (obs.dim() != pre.dim())
        throw ConfigError("reduced_density_matrix: selection length mismatch");
    cfg.validate();

    const std::size_t d = obs.dim();
    std::vector<GaussianBranch> branches;
    branches.reserve(d);
    for (std::size_t i = 0; i < d; ++i) branches.push_back(evolve_branch(cfg, obs.eigenvalues[i]));

    ReducedDensityMatrix rho;
    rho.dim = d;
    rho.entries.assign(d * d, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < d; ++i) {
        rho.at(i, i) = std::norm(pre.amplitudes[i]);
        for (std::size_t j = i + 1; j < d; ++j) {
            const cplx phase =
                std::exp(-kI * (obs.eigenphases[i] - obs.eigenphases[j]) * cfg.t);
            const cplx ov_ji = branch_cross_moment(branches[j], branches[i], CrossMoment::overlap);
            const cplx e = pre.amplitudes[i] * std::conj(pre.amplitudes[j]) * phase * ov_ji;
            rho.at(i, j) = e;
            rho.at(j, i) = std::conj(e);
        }
    }
    return rho;
}

} // namespace pointersim
