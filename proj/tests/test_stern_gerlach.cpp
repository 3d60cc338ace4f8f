#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pointersim/errors.hpp"
#include "pointersim/grid.hpp"
#include "pointersim/stern_gerlach.hpp"

using namespace pointersim;

namespace {

constexpr double kPi = 3.14159265358979323846;

SgScenario random_scenario(std::mt19937& rng) {
    std::uniform_real_distribution<double> ang(0.1, 1.4), ph(-kPi, kPi), f(0.2, 2.0),
        t(0.1, 2.0), m(0.5, 2.0), s(0.6, 1.5);
    return {ang(rng), ph(rng), ang(rng), ph(rng), f(rng), m(rng), s(rng), t(rng)};
}

} // namespace

TEST_CASE("branches map onto the generic evolution") {
    SgScenario s{0.5, 0.2, 0.8, -0.4, 1.3, 1.1, 0.9, 0.7};
    const auto [plus, minus] = sg_branches(s);
    const GaussianBranch gp = evolve_branch(s.config(), +1.0);
    const GaussianBranch gm = evolve_branch(s.config(), -1.0);

    CHECK(plus.center == gp.center);
    CHECK(plus.kick == gp.kick);
    CHECK(plus.width_sq == gp.width_sq);
    CHECK(plus.log_norm_phase == gp.log_norm_phase);
    CHECK(minus.center == gm.center);
    CHECK(minus.kick == gm.kick);

    // Opposite drift and kick: x_± = ± f t^2/2m, v_± = ± f t/m.
    CHECK(plus.center == doctest::Approx(s.f * s.t * s.t / (2.0 * s.m)));
    CHECK(plus.center == doctest::Approx(-minus.center));
    CHECK(plus.kick == doctest::Approx(-minus.kick));

    SgScenario frozen = s;
    frozen.t = 0.0;
    const auto [p0, m0] = sg_branches(frozen);
    CHECK(p0.center == 0.0);
    CHECK(m0.kick == 0.0);
}

TEST_CASE("decoherence factor delegation and printed form") {
    std::mt19937 rng(41);
    for (int k = 0; k < 50; ++k) {
        const SgScenario s = random_scenario(rng);
        const double exact = sg_decoherence(s);
        CHECK(exact == decoherence_factor(s.config(), +1.0, -1.0));
        CHECK(std::log(exact) == doctest::Approx(sg_log_decoherence_printed(s)).epsilon(1e-12));
    }
    SgScenario off{0.4, 0.0, 0.7, 0.0, 0.0, 1.0, 1.0, 2.0};
    CHECK(sg_decoherence(off) == doctest::Approx(1.0));
}

TEST_CASE("decoherence factor against the grid oracle") {
    SgScenario s{0.3, 0.0, 0.9, 0.0, 1.0, 1.0, 1.0, 1.0};
    const MeasurementConfig cfg = s.config();
    const double pair[2] = {1.0, -1.0};
    const GridSpec spec = GridSpec::auto_sized(cfg, pair);
    const double grid_f =
        std::abs(numeric_overlap(propagate(spec, cfg, 1.0), propagate(spec, cfg, -1.0)));
    CHECK(sg_decoherence(s) == doctest::Approx(grid_f).epsilon(1e-6));
}

TEST_CASE("shifts: exact route equals printed formulas and the generic engine") {
    std::mt19937 rng(43);
    for (int k = 0; k < 50; ++k) {
        const SgScenario s = random_scenario(rng);
        const SgShifts exact = sg_shifts(s);
        const SgShifts printed = sg_shifts_printed(s);
        const double scale = 1.0 + std::abs(exact.dx) + std::abs(exact.dp);
        CHECK(std::abs(exact.dx - printed.dx) < 1e-12 * scale);
        CHECK(std::abs(exact.dp - printed.dp) < 1e-12 * scale);
        CHECK(std::abs(exact.beta_sq - printed.beta_sq) < 1e-12);

        const PointerShifts generic =
            postselected_pointer_shifts(s.observable(), s.pre(), s.post(), s.config());
        CHECK(exact.dx == generic.dx);
        CHECK(exact.dp == generic.dp);
    }
}

TEST_CASE("symmetric selection gives no shift") {
    SgScenario s{kPi / 4, 0.3, kPi / 4, 0.3, 1.0, 1.0, 1.0, 1.0};
    const SgShifts r = sg_shifts(s);
    CHECK(std::abs(r.dx) < 1e-12);
    CHECK(std::abs(r.dp) < 1e-12);
    CHECK(r.beta_sq == doctest::Approx(0.5 + 0.5 * sg_decoherence(s)));
}

TEST_CASE("strong regime reproduces the conditional sigma_z forms") {
    SgScenario s{0.5, 0.7, 1.0, 0.2, 4.0, 1.0, 1.0, 1.0};
    REQUIRE(sg_decoherence(s) < 1e-12);
    const SgShifts exact = sg_shifts(s);
    const SgShifts strong = sg_strong_shifts_printed(s);
    CHECK(std::abs(exact.dx - strong.dx) < 1e-6);
    CHECK(std::abs(exact.dp - strong.dp) < 1e-6);

    const double sz = sg_conditional_sigma_z(s);
    CHECK(sz == doctest::Approx(conditional_expectation(s.observable(), s.pre(), s.post()))
                    .epsilon(1e-14));
    CHECK(strong.dx == doctest::Approx(s.f * s.t * s.t / (2.0 * s.m) * sz));
    CHECK(strong.dp == doctest::Approx(s.f * s.t * sz));
}

TEST_CASE("weak regime reproduces the weak sigma_z forms") {
    SgScenario s{0.5, 0.7, 1.0, 0.2, 5e-4, 1.0, 1.0, 1.0};
    REQUIRE(sg_decoherence(s) > 1.0 - 1e-6);
    const SgShifts exact = sg_shifts(s);
    const SgShifts weak = sg_weak_shifts_printed(s);
    CHECK(std::abs(exact.dx - weak.dx) < 1e-6);
    CHECK(std::abs(exact.dp - weak.dp) < 1e-6);

    const cplx ws = weak_value(s.observable(), s.pre(), s.post());
    CHECK(weak.dp == doctest::Approx(s.f * s.t * ws.real() -
                                     s.f * s.t * s.t / (4.0 * s.sigma * s.sigma * s.m) *
                                         ws.imag())
                         .epsilon(1e-12));
}

TEST_CASE("reduced spin state has the half-sine off-diagonal form") {
    // rho_01 = (1/2) e^{-i delta1} sin(2 theta1) F'(t); the ± pair overlap
    // is real and positive, so the whole phase sits in the amplitudes.
    SgScenario s{0.7, 1.1, 0.4, 0.0, 1.2, 1.0, 0.9, 0.8};
    const ReducedDensityMatrix rho = reduced_density_matrix(s.observable(), s.pre(), s.config());
    const cplx want = 0.5 * std::sin(2.0 * s.theta1) * sg_decoherence(s) *
                      std::exp(cplx{0.0, -s.delta1});
    CHECK(std::abs(rho.at(0, 1) - want) < 1e-12);
    CHECK(std::abs(rho.at(1, 0) - std::conj(want)) < 1e-12);
}

TEST_CASE("full decoherence leaves the classical spin mixture") {
    SgScenario s{0.6, 0.9, 0.8, 0.1, 6.0, 1.0, 1.0, 1.0};
    REQUIRE(sg_decoherence(s) < 1e-12);
    const ReducedDensityMatrix rho = reduced_density_matrix(s.observable(), s.pre(), s.config());
    CHECK(rho.at(0, 0).real() == doctest::Approx(std::pow(std::cos(s.theta1), 2)).epsilon(1e-10));
    CHECK(rho.at(1, 1).real() == doctest::Approx(std::pow(std::sin(s.theta1), 2)).epsilon(1e-10));
    CHECK(std::abs(rho.at(0, 1)) < 1e-10);
}

TEST_CASE("annihilating selection is refused") {
    // Opposite-phase equal-angle selection at weak coupling: beta^2 ~ (1-F)/2.
    SgScenario s{kPi / 4, 0.0, kPi / 4, kPi, 1.0, 1.0, 1.0, 0.0};
    CHECK_THROWS_AS(sg_shifts(s), PostSelectionAnnihilationError);
    CHECK_THROWS_AS(sg_shifts_printed(s), PostSelectionAnnihilationError);
}
