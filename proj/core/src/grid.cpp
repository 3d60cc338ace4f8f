#include "pointersim/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <ostream>
#include <sstream>

#include "pointersim/errors.hpp"
#include "pointersim/fft.hpp"

namespace pointersim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Mass within `window` of either edge; used to detect boundary contamination.
double edge_mass(const std::vector<cplx>& psi, const GridSpec& spec, double window) {
    const double dx = spec.dx();
    auto pts = static_cast<std::size_t>(window / dx);
    pts = std::min(pts, psi.size() / 4);
    double mass = 0.0;
    for (std::size_t i = 0; i < pts; ++i)
        mass += (std::norm(psi[i]) + std::norm(psi[psi.size() - 1 - i])) * dx;
    return mass;
}

} // namespace

void GridSpec::validate() const {
    if (!(x_max > x_min)) throw ConfigError("GridSpec: x_max must exceed x_min");
    if (n_points < 256 || (n_points & (n_points - 1)) != 0)
        throw ConfigError("GridSpec: n_points must be a power of two >= 256");
}

GridSpec GridSpec::auto_sized(const MeasurementConfig& cfg, std::span<const double> eigenvalues,
                              std::size_t max_points) {
    cfg.validate();
    if (eigenvalues.empty()) throw ConfigError("GridSpec::auto_sized: no eigenvalues");

    const double st = cfg.sigma_t();
    double c_lo = 0.0, c_hi = 0.0, k_abs = 0.0, a_abs = 0.0;
    for (double a : eigenvalues) {
        const double center = cfg.g * a * cfg.t * cfg.t / (2.0 * cfg.m);
        c_lo = std::min(c_lo, center);
        c_hi = std::max(c_hi, center);
        k_abs = std::max(k_abs, std::abs(cfg.g * a * cfg.t));
        a_abs = std::max(a_abs, std::abs(a));
    }

    const double margin = 10.0 * st + 4.0 * cfg.sigma;
    GridSpec spec;
    spec.x_min = c_lo - margin;
    spec.x_max = c_hi + margin;

    // Momentum support: kick plus the Gaussian tail (sigma_p = 1/2 sigma).
    const double k_need = k_abs + 6.0 / cfg.sigma + 2.0 / st;
    const double dx_need = kPi / k_need;
    const auto n_raw = static_cast<std::size_t>(std::ceil((spec.x_max - spec.x_min) / dx_need));
    spec.n_points = std::max<std::size_t>(256, next_pow2(n_raw));
    if (spec.n_points > max_points) {
        std::ostringstream os;
        os << "GridSpec::auto_sized: needs " << spec.n_points << " points (cap " << max_points
           << ") for g=" << cfg.g << " t=" << cfg.t << " sigma=" << cfg.sigma;
        throw ConfigError(os.str());
    }

    if (cfg.t == 0.0) {
        spec.n_steps = 1;
        return spec;
    }
    // Time step from the stiffest scale present. The splitting reproduces
    // centers, kicks and widths exactly for a linear potential, so n_steps
    // controls only the accumulated phase; the 8192 cap keeps extreme sweep
    // corners affordable at phase errors still far below test tolerances.
    const double x_abs = std::max(std::abs(spec.x_min), std::abs(spec.x_max));
    double dt_rule = cfg.m * cfg.sigma * cfg.sigma;
    const double drive = std::abs(cfg.g) * a_abs * x_abs;
    if (drive > 0.0) dt_rule = std::min(dt_rule, 1.0 / drive);
    dt_rule *= 1e-2;
    const double steps = std::ceil(cfg.t / dt_rule);
    spec.n_steps = static_cast<std::size_t>(std::clamp(steps, 256.0, 8192.0));
    return spec;
}

double GridBranch::norm() const {
    double n = 0.0;
    for (const cplx& z : psi) n += std::norm(z);
    return n * spec.dx();
}

GridBranch initial_state(const GridSpec& spec, const MeasurementConfig& cfg, double a) {
    spec.validate();
    cfg.validate();
    GridBranch b;
    b.spec = spec;
    b.a = a;
    b.psi.resize(spec.n_points);
    const double s2 = cfg.sigma * cfg.sigma;
    const double norm = std::pow(2.0 * kPi * s2, -0.25);
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        const double x = spec.x_at(i);
        b.psi[i] = norm * std::exp(-x * x / (4.0 * s2));
    }
    return b;
}

GridBranch propagate(const GridSpec& spec, const MeasurementConfig& cfg, double a) {
    spec.validate();
    cfg.validate();

    // The final-time envelope must fit with room to spare.
    const double center = cfg.g * a * cfg.t * cfg.t / (2.0 * cfg.m);
    const double reach = 8.0 * cfg.sigma_t();
    if (center - reach < spec.x_min || center + reach > spec.x_max)
        throw ConfigError("propagate: grid does not contain the branch center +- 8 sigma(t)");

    GridBranch b = initial_state(spec, cfg, a);
    if (cfg.t == 0.0 || spec.n_steps == 0) return b;

    const double dt = cfg.t / static_cast<double>(spec.n_steps);
    const detail::Fft fft(spec.n_points);
    const std::vector<double> k = detail::fft_wavenumbers(spec.n_points, spec.dx());

    // Phase tables. V(x) = -g a x, so exp(-i V dt) = exp(+i g a x dt).
    std::vector<cplx> half_v(spec.n_points), full_v(spec.n_points), kin(spec.n_points);
    const double ga = cfg.g * a;
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        const double x = spec.x_at(i);
        half_v[i] = std::exp(kI * (0.5 * ga * x * dt));
        full_v[i] = half_v[i] * half_v[i];
        kin[i] = std::exp(-kI * (k[i] * k[i] / (2.0 * cfg.m) * dt));
    }

    const double initial_norm = b.norm();
    auto kinetic_step = [&] {
        fft.forward(b.psi);
        for (std::size_t i = 0; i < spec.n_points; ++i) b.psi[i] *= kin[i];
        fft.inverse(b.psi);
    };

    for (std::size_t i = 0; i < spec.n_points; ++i) b.psi[i] *= half_v[i];
    for (std::size_t step = 0; step + 1 < spec.n_steps; ++step) {
        kinetic_step();
        for (std::size_t i = 0; i < spec.n_points; ++i) b.psi[i] *= full_v[i];
        if ((step & 63) == 63 &&
            edge_mass(b.psi, spec, 4.0 * cfg.sigma_t()) > 1e-10 * initial_norm)
            throw BoundaryContaminationError("propagate: wavepacket reached the grid boundary");
    }
    kinetic_step();
    for (std::size_t i = 0; i < spec.n_points; ++i) b.psi[i] *= half_v[i];

    if (edge_mass(b.psi, spec, 4.0 * cfg.sigma_t()) > 1e-10 * initial_norm)
        throw BoundaryContaminationError("propagate: wavepacket reached the grid boundary");
    return b;
}

cplx numeric_overlap(const GridBranch& b1, const GridBranch& b2) {
    if (b1.spec.n_points != b2.spec.n_points || b1.spec.x_min != b2.spec.x_min ||
        b1.spec.x_max != b2.spec.x_max)
        throw ConfigError("numeric_overlap: branches live on different grids");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < b1.psi.size(); ++i) s += std::conj(b1.psi[i]) * b2.psi[i];
    return s * b1.spec.dx();
}

namespace {

// First spectral moments of one grid wavefunction.
GridMoments raw_moments(const std::vector<cplx>& psi, const GridSpec& spec) {
    const double dx = spec.dx();
    double n = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double w = std::norm(psi[i]) * dx;
        n += w;
        mx += w * spec.x_at(i);
    }

    std::vector<cplx> hat = psi;
    const detail::Fft fft(spec.n_points);
    fft.forward(hat);
    const std::vector<double> k = detail::fft_wavenumbers(spec.n_points, dx);
    double nk = 0.0, mp = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double w = std::norm(hat[i]);
        nk += w;
        mp += w * k[i];
    }

    GridMoments m;
    m.norm = n;
    m.mean_x = mx / n;
    m.mean_p = mp / nk;
    return m;
}

} // namespace

double branch_energy(const GridBranch& b, const MeasurementConfig& cfg) {
    const double dx = b.spec.dx();
    double pot = 0.0, n = 0.0;
    for (std::size_t i = 0; i < b.psi.size(); ++i) {
        const double w = std::norm(b.psi[i]) * dx;
        n += w;
        pot += w * (-cfg.g * b.a * b.spec.x_at(i));
    }

    std::vector<cplx> hat = b.psi;
    const detail::Fft fft(b.spec.n_points);
    fft.forward(hat);
    const std::vector<double> k = detail::fft_wavenumbers(b.spec.n_points, dx);
    double nk = 0.0, kin = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double w = std::norm(hat[i]);
        nk += w;
        kin += w * k[i] * k[i] / (2.0 * cfg.m);
    }
    return pot / n + kin / nk;
}

GridMoments numeric_moments(std::span<const GridBranch> branches, const SpectralObservable& obs,
                            const SelectionState& pre, const SelectionState* post,
                            const MeasurementConfig& cfg) {
    if (branches.empty()) throw ConfigError("numeric_moments: no branches");
    if (branches.size() != obs.dim() || obs.dim() != pre.dim())
        throw ConfigError("numeric_moments: dimension mismatch");
    const GridSpec& spec = branches.front().spec;

    if (post == nullptr) {
        // Mixed-state moments: system orthogonality kills all cross terms.
        GridMoments total;
        for (std::size_t i = 0; i < branches.size(); ++i) {
            const double w = std::norm(pre.amplitudes[i]);
            const GridMoments m = raw_moments(branches[i].psi, spec);
            total.norm += w * m.norm;
            total.mean_x += w * m.norm * m.mean_x;
            total.mean_p += w * m.norm * m.mean_p;
        }
        total.mean_x /= total.norm;
        total.mean_p /= total.norm;
        return total;
    }

    if (post->dim() != obs.dim()) throw ConfigError("numeric_moments: post dimension mismatch");
    std::vector<cplx> xi(spec.n_points, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const cplx c = std::conj(post->amplitudes[i]) * pre.amplitudes[i] *
                       std::exp(-kI * obs.eigenphases[i] * cfg.t);
        for (std::size_t n = 0; n < spec.n_points; ++n) xi[n] += c * branches[i].psi[n];
    }
    const GridMoments m = raw_moments(xi, spec);
    if (m.norm < 1e-14)
        throw PostSelectionAnnihilationError("numeric_moments: post-selected state has zero norm");
    return m;
}

ConvergenceReport convergence_study(const MeasurementConfig& cfg, double ai, double aj,
                                    std::span<const GridSpec> ladder) {
    if (ladder.size() < 3)
        throw ConfigError("convergence_study: need at least 3 refinement levels");

    ConvergenceReport rep;
    rep.levels.reserve(ladder.size());
    for (const GridSpec& spec : ladder) {
        const GridBranch bi = propagate(spec, cfg, ai);
        const GridBranch bj = propagate(spec, cfg, aj);
        ConvergenceLevel lvl;
        lvl.n_points = spec.n_points;
        lvl.n_steps = spec.n_steps;
        lvl.overlap = numeric_overlap(bi, bj);
        if (!rep.levels.empty())
            lvl.diff_from_prev = std::abs(lvl.overlap - rep.levels.back().overlap);
        rep.levels.push_back(lvl);
    }

    const double floor = 1e-13;
    double order_sum = 0.0;
    std::size_t order_count = 0;
    for (std::size_t k = 2; k < rep.levels.size(); ++k) {
        const double d0 = rep.levels[k - 1].diff_from_prev;
        const double d1 = rep.levels[k].diff_from_prev;
        if (d0 < floor && d1 < floor) {
            rep.at_roundoff_floor = true;
            continue;
        }
        if (d1 > d0)
            throw ConvergenceError("convergence_study: differences grew between refinements");
        order_sum += std::log2(d0 / std::max(d1, 1e-300));
        ++order_count;
    }
    rep.observed_order = order_count ? order_sum / static_cast<double>(order_count) : 0.0;

    // Richardson step from the last two levels (order 2 in dt).
    const ConvergenceLevel& fine = rep.levels.back();
    const ConvergenceLevel& prev = rep.levels[rep.levels.size() - 2];
    if (fine.n_points != prev.n_points)
        throw ConfigError("convergence_study: final two levels must share n_points");
    const double r = static_cast<double>(fine.n_steps) / static_cast<double>(prev.n_steps);
    rep.extrapolated_overlap = fine.overlap + (fine.overlap - prev.overlap) / (r * r - 1.0);
    rep.error_bar = std::max(std::abs(rep.extrapolated_overlap - fine.overlap), 1e-14);
    return rep;
}

void write_snapshot(std::ostream& os, const GridBranch& b, const MeasurementConfig& cfg) {
    static_assert(std::endian::native == std::endian::little,
                  "snapshot format is little-endian");
    std::ostringstream header;
    header.precision(17);
    header << "{\"format\":\"pointersim-grid-snapshot\",\"version\":1"
           << ",\"x_min\":" << b.spec.x_min << ",\"x_max\":" << b.spec.x_max
           << ",\"n_points\":" << b.spec.n_points << ",\"n_steps\":" << b.spec.n_steps
           << ",\"a\":" << b.a << ",\"g\":" << cfg.g << ",\"t\":" << cfg.t << ",\"m\":" << cfg.m
           << ",\"sigma\":" << cfg.sigma << "}";
    os << header.str() << '\n';
    for (const cplx& z : b.psi) {
        const double re = z.real(), im = z.imag();
        char buf[16];
        std::memcpy(buf, &re, 8);
        std::memcpy(buf + 8, &im, 8);
        os.write(buf, 16);
    }
    if (!os) throw IoError("write_snapshot: stream write failed");
}

} // namespace pointersim
