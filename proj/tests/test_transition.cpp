#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pointersim/errors.hpp"
#include "pointersim/grid.hpp"
#include "pointersim/transition.hpp"

using namespace pointersim;

namespace {

constexpr double kPi = 3.14159265358979323846;

SelectionState angle_state(double theta, double delta = 0.0) {
    return SelectionState({std::cos(theta), std::polar(std::sin(theta), delta)});
}

SelectionState random_state(std::mt19937& rng, std::size_t dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<cplx> amps(dim);
    for (cplx& z : amps) z = {n(rng), n(rng)};
    return SelectionState(amps);
}

// A_T evaluated through the reduced density matrix entries built from grid
// overlaps: <psi_f|A rho|psi_f> / <psi_f|rho|psi_f>.
cplx grid_transition_value(const SpectralObservable& obs, const SelectionState& pre,
                           const SelectionState& post, const MeasurementConfig& cfg) {
    const GridSpec spec = GridSpec::auto_sized(cfg, obs.eigenvalues);
    std::vector<GridBranch> branches;
    for (double a : obs.eigenvalues) branches.push_back(propagate(spec, cfg, a));

    const std::size_t d = obs.dim();
    cplx num{0.0, 0.0}, den{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const cplx phase =
                std::exp(cplx{0.0, -(obs.eigenphases[i] - obs.eigenphases[j]) * cfg.t});
            const cplx rho_ij = pre.amplitudes[i] * std::conj(pre.amplitudes[j]) * phase *
                                numeric_overlap(branches[j], branches[i]);
            const cplx w = std::conj(post.amplitudes[i]) * rho_ij * post.amplitudes[j];
            num += obs.eigenvalues[i] * w;
            den += w;
        }
    }
    return num / den;
}

} // namespace

TEST_CASE("transition value limits") {
    SpectralObservable obs({1.0, -1.0});
    SelectionState pre = angle_state(kPi / 6);
    SelectionState post = angle_state(kPi / 3);

    SUBCASE("t = 0: all overlaps are exactly 1, A_T is the weak value") {
        MeasurementConfig cfg{5.0, 0.0, 1.0, 1.0};
        const cplx at = transition_value(obs, pre, post, cfg);
        CHECK(std::abs(at - weak_value(obs, pre, post)) < 1e-14);
    }

    SUBCASE("deep strong coupling: A_T is the real conditional value") {
        MeasurementConfig cfg{40.0, 1.0, 1.0, 1.0};
        CHECK(decoherence_factor(cfg, 1.0, -1.0) < 1e-12);
        const cplx at = transition_value(obs, pre, post, cfg);
        CHECK(std::abs(at.real() - conditional_expectation(obs, pre, post)) < 1e-10);
        CHECK(std::abs(at.imag()) < 1e-10);
    }

    SUBCASE("pointwise against the grid oracle across the transition") {
        for (double t : {0.4, 1.0, 2.0, 4.0}) {
            MeasurementConfig cfg{1.0, t, 1.0, 1.0};
            const cplx analytic = transition_value(obs, pre, post, cfg);
            const cplx grid = grid_transition_value(obs, pre, post, cfg);
            CHECK(std::abs(analytic - grid) < 1e-6);
        }
    }
}

TEST_CASE("three-level transition value against the grid oracle") {
    SpectralObservable obs({-1.0, 0.3, 1.2});
    std::mt19937 rng(23);
    SelectionState pre = random_state(rng, 3);
    SelectionState post = random_state(rng, 3);
    MeasurementConfig cfg{0.8, 1.1, 1.0, 1.0};
    const cplx analytic = transition_value(obs, pre, post, cfg);
    const cplx grid = grid_transition_value(obs, pre, post, cfg);
    CHECK(std::abs(analytic - grid) < 1e-6);
}

TEST_CASE("eigenphases thread consistently through A_T and the state") {
    SpectralObservable obs({-1.0, 0.3, 1.2}, {0.4, -0.7, 0.2});
    std::mt19937 rng(27);
    SelectionState pre = random_state(rng, 3);
    SelectionState post = random_state(rng, 3);
    MeasurementConfig cfg{0.8, 1.1, 1.0, 1.0};

    CHECK(std::abs(transition_value(obs, pre, post, cfg) -
                   grid_transition_value(obs, pre, post, cfg)) < 1e-6);

    // The pairwise-sum route equals the ratio assembled from the reduced
    // density matrix itself.
    const ReducedDensityMatrix rho = reduced_density_matrix(obs, pre, cfg);
    cplx num{0.0, 0.0}, den{0.0, 0.0};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const cplx w = std::conj(post.amplitudes[i]) * rho.at(i, j) * post.amplitudes[j];
            num += obs.eigenvalues[i] * w;
            den += w;
        }
    CHECK(std::abs(transition_value(obs, pre, post, cfg) - num / den) < 1e-12);
}

TEST_CASE("A_T interpolates with bounded rate constants") {
    // Across a coupling sweep, |A_T - <A>_w| is controlled by 1 - F_min and
    // |A_T - <A>_c| by F_max. The fitted constants are reported; the test
    // pins them to a sane magnitude so regressions in either limit show up.
    SpectralObservable obs({1.0, -1.0});
    SelectionState pre = angle_state(0.5, 0.2);
    SelectionState post = angle_state(1.0, -0.6);
    const cplx aw = weak_value(obs, pre, post);
    const double ac = conditional_expectation(obs, pre, post);

    double c_weak = 0.0, c_strong = 0.0;
    for (double lg = -2.0; lg <= 1.5; lg += 0.125) {
        MeasurementConfig cfg{std::pow(10.0, lg), 1.0, 1.0, 1.0};
        const double f = decoherence_factor(cfg, 1.0, -1.0);
        const cplx at = transition_value(obs, pre, post, cfg);
        // The bounds are meaningful only above the fp floor, where the
        // deviation has not yet bottomed out at roundoff.
        if (f > 0.5 && 1.0 - f > 1e-13)
            c_weak = std::max(c_weak, std::abs(at - aw) / (1.0 - f));
        if (f < 0.5 && f > 1e-13) c_strong = std::max(c_strong, std::abs(at - ac) / f);
    }
    INFO("fitted weak-side constant C = ", c_weak, ", strong-side C' = ", c_strong);
    CHECK(c_weak > 0.0);
    CHECK(c_weak < 100.0);
    CHECK(c_strong < 100.0);
}

TEST_CASE("moment-sum shifts equal the transition-value closed form") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> g(0.2, 2.0), t(0.1, 2.5), m(0.5, 2.0), s(0.6, 1.5);
    for (int k = 0; k < 40; ++k) {
        SpectralObservable obs({1.0, -1.0});
        SelectionState pre = random_state(rng, 2);
        SelectionState post = random_state(rng, 2);
        MeasurementConfig cfg{g(rng), t(rng), m(rng), s(rng)};
        try {
            const PointerShifts a = postselected_pointer_shifts(obs, pre, post, cfg);
            const PointerShifts b = shifts_from_transition_value(obs, pre, post, cfg);
            const double scale = 1.0 + std::abs(a.dx) + std::abs(a.dp);
            CHECK(std::abs(a.dx - b.dx) < 1e-9 * scale);
            CHECK(std::abs(a.dp - b.dp) < 1e-9 * scale);
        } catch (const SimError&) {
            // Near-annihilating draws are legitimate rejections, not failures.
        }
    }
}

TEST_CASE("post-selected shifts against grid moments") {
    SpectralObservable obs({1.0, -1.0});
    SelectionState pre = angle_state(0.5, 0.4);
    SelectionState post = angle_state(1.1, -0.3);
    MeasurementConfig cfg{1.2, 0.9, 1.3, 0.8};

    const PointerShifts s = postselected_pointer_shifts(obs, pre, post, cfg);
    const GridSpec spec = GridSpec::auto_sized(cfg, obs.eigenvalues);
    std::vector<GridBranch> branches;
    for (double a : obs.eigenvalues) branches.push_back(propagate(spec, cfg, a));
    const GridMoments m = numeric_moments(branches, obs, pre, &post, cfg);
    CHECK(s.dx == doctest::Approx(m.mean_x).epsilon(1e-6));
    CHECK(s.dp == doctest::Approx(m.mean_p).epsilon(1e-6));
    CHECK(postselection_norm(obs, pre, post, cfg) == doctest::Approx(m.norm).epsilon(1e-6));
}

TEST_CASE("unconditioned shifts read the expectation value exactly") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> g(-2.0, 2.0), t(0.0, 3.0), m(0.4, 2.0), s(0.5, 1.6);
    for (int k = 0; k < 100; ++k) {
        SpectralObservable obs({-0.7, 0.2, 1.5});
        SelectionState pre = random_state(rng, 3);
        MeasurementConfig cfg{g(rng), t(rng), m(rng), s(rng)};
        const PointerShifts ps = pointer_shifts(obs, pre, cfg);
        const double mean = expectation_value(obs, pre);
        CHECK(ps.dx == doctest::Approx(cfg.g * cfg.t * cfg.t / (2.0 * cfg.m) * mean)
                           .epsilon(1e-12));
        CHECK(ps.dp == doctest::Approx(cfg.g * cfg.t * mean).epsilon(1e-12));
    }
}

TEST_CASE("post = pre is not the unconditioned readout once branches separate") {
    // Post-selecting on the pre-selected state reweights the branches by
    // their surviving overlap: at F = 1 it reduces to the unconditioned
    // shift, at partial decoherence it does not.
    SpectralObservable obs({1.0, -1.0});
    SelectionState pre = angle_state(kPi / 6);

    MeasurementConfig weak{1e-5, 1.0, 1.0, 1.0};
    const PointerShifts w1 = postselected_pointer_shifts(obs, pre, pre, weak);
    const PointerShifts w2 = pointer_shifts(obs, pre, weak);
    CHECK(std::abs(w1.dx - w2.dx) < 1e-12);

    MeasurementConfig strong{1.0, 1.0, 1.0, 1.0};
    const double f = decoherence_factor(strong, 1.0, -1.0);
    const PointerShifts s1 = postselected_pointer_shifts(obs, pre, pre, strong);
    // Independent evaluation of the reweighted two-level form:
    // dx = X+ (w1^2 - w2^2) / (w1^2 + w2^2 + 2 F w1 w2).
    const double w_up = std::pow(std::cos(kPi / 6), 2), w_dn = 1.0 - w_up;
    const double dx_expected = 0.5 * (w_up * w_up - w_dn * w_dn) /
                               (w_up * w_up + w_dn * w_dn + 2.0 * f * w_up * w_dn);
    CHECK(s1.dx == doctest::Approx(dx_expected).epsilon(1e-12));
    CHECK(std::abs(s1.dx - pointer_shifts(obs, pre, strong).dx) > 0.05);
}

TEST_CASE("amplification point: the position shift rides the imaginary part") {
    // Quarter-phase selections with cos t1 cos t2 = sin t1 sin t2 make the
    // weak value purely imaginary (-i), so in the weak regime dx comes from
    // the -2 g t sigma(t)^2 Im(A_T) term while Re(A_T) contributes nothing.
    SpectralObservable obs({1.0, -1.0});
    const double t1 = 0.4, t2 = kPi / 2.0 - 0.4;
    SelectionState pre = angle_state(t1, kPi / 2.0);
    SelectionState post = angle_state(t2, 0.0);
    MeasurementConfig cfg{1e-3, 1.0, 1.0, 1.0};

    const cplx aw = weak_value(obs, pre, post);
    CHECK(std::abs(aw - cplx{0.0, -1.0}) < 1e-12);

    const cplx at = transition_value(obs, pre, post, cfg);
    const PointerShifts s = postselected_pointer_shifts(obs, pre, post, cfg);
    const double im_term = -2.0 * cfg.g * cfg.t * cfg.sigma_t_sq() * at.imag();
    const double re_term = cfg.g * cfg.t * cfg.t / (2.0 * cfg.m) * at.real();
    CHECK(std::abs(s.dx - im_term) / std::abs(s.dx) < 0.15);
    CHECK(std::abs(re_term) < 0.01 * std::abs(s.dx));

    const GridSpec spec = GridSpec::auto_sized(cfg, obs.eigenvalues);
    std::vector<GridBranch> branches;
    for (double a : obs.eigenvalues) branches.push_back(propagate(spec, cfg, a));
    const GridMoments m = numeric_moments(branches, obs, pre, &post, cfg);
    CHECK(s.dx == doctest::Approx(m.mean_x).epsilon(1e-5));
    CHECK(s.dp == doctest::Approx(m.mean_p).epsilon(1e-5));
}

TEST_CASE("limit shift formulas") {
    SpectralObservable obs({1.0, -1.0});
    SelectionState pre = angle_state(0.4, 0.0);
    SelectionState post = angle_state(1.0, -kPi / 2);
    MeasurementConfig cfg{0.7, 1.3, 1.2, 0.9};

    SUBCASE("strong infinite-mass position shift vanishes") {
        const PointerShifts s = limit_shifts(obs, pre, post, cfg, ShiftLimit::strong_F0_minf);
        CHECK(s.dx == 0.0);
        CHECK(s.dp == doctest::Approx(cfg.g * cfg.t * conditional_expectation(obs, pre, post)));
    }
    SUBCASE("real weak value gives no infinite-mass position shift") {
        SelectionState post_real = angle_state(1.0, 0.0);
        const PointerShifts s = limit_shifts(obs, pre, post_real, cfg, ShiftLimit::weak_F1_minf);
        CHECK(std::abs(s.dx) < 1e-14);
        CHECK(s.dp == doctest::Approx(cfg.g * cfg.t *
                                      weak_value(obs, pre, post_real).real()));
    }
    SUBCASE("heavy pointer approaches the infinite-mass formulas") {
        MeasurementConfig heavy{1.0, 1.0, 1e6, 1.0};
        const PointerShifts fin = limit_shifts(obs, pre, post, heavy, ShiftLimit::weak_F1);
        const PointerShifts inf = limit_shifts(obs, pre, post, heavy, ShiftLimit::weak_F1_minf);
        CHECK(std::abs(fin.dx - inf.dx) / std::abs(inf.dx) < 1e-5);
        CHECK(std::abs(fin.dp - inf.dp) / std::abs(inf.dp) < 1e-5);
    }
}

TEST_CASE("degenerate eigenvalues ride the same pairwise formulas") {
    SpectralObservable obs({1.0, 1.0, -1.0});
    std::mt19937 rng(37);
    SelectionState pre = random_state(rng, 3);
    SelectionState post = random_state(rng, 3);
    MeasurementConfig cfg{30.0, 1.0, 1.0, 1.0};

    // The degenerate pair keeps overlap 1 forever, so the state never fully
    // decoheres and the near-strong flag must stay off.
    const TransitionResult r = analyze_transition(obs, pre, post, cfg);
    CHECK(r.f_max == doctest::Approx(1.0));
    CHECK(r.f_min < 1e-12);
    CHECK_FALSE(r.near_strong);
    CHECK(std::isfinite(r.a_t.real()));
}

TEST_CASE("regime flags and bundle consistency") {
    SpectralObservable obs({1.0, -1.0});
    SelectionState pre = angle_state(0.4);
    SelectionState post = angle_state(0.9);

    MeasurementConfig weak{1e-4, 1.0, 1.0, 1.0};
    const TransitionResult rw = analyze_transition(obs, pre, post, weak);
    CHECK(rw.near_weak);
    CHECK_FALSE(rw.near_strong);
    CHECK(rw.f_bar == doctest::Approx(rw.f_min));

    MeasurementConfig strong{20.0, 1.0, 1.0, 1.0};
    const TransitionResult rs = analyze_transition(obs, pre, post, strong);
    CHECK(rs.near_strong);
    CHECK_FALSE(rs.near_weak);
    CHECK(rs.dx == doctest::Approx(postselected_pointer_shifts(obs, pre, post, strong).dx));
}

TEST_CASE("annihilating post-selection raises typed errors") {
    SpectralObservable obs({1.0, -1.0});
    // theta1 = theta2 = pi/4 with opposite phases: beta^2 = (1 - F)/2 -> 0 at t = 0.
    SelectionState pre = angle_state(kPi / 4, 0.0);
    SelectionState post = angle_state(kPi / 4, kPi);
    MeasurementConfig t0{1.0, 0.0, 1.0, 1.0};
    CHECK_THROWS_AS(postselected_pointer_shifts(obs, pre, post, t0),
                    PostSelectionAnnihilationError);
    CHECK_THROWS_AS(transition_value(obs, pre, post, t0), DegenerateTransitionError);
}
