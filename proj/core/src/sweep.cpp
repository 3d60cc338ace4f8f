#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "pointersim/errors.hpp"
#include "pointersim/sweep.hpp"

namespace pointersim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Everything a quantity evaluator may touch at one sweep point.
struct PointData {
    const SweepConfig* sweep = nullptr;
    MeasurementConfig cfg;
    const SpectralObservable* obs = nullptr;
    const SelectionState* pre = nullptr;
    const SelectionState* post = nullptr; // may be null

    // Oracle results; populated only when the oracle ran cleanly.
    bool oracle_ok = false;
    double oracle_f = kNaN;
    double oracle_dx = kNaN;
    double oracle_dp = kNaN;
};

// Indices of the extreme eigenvalues: the widest pair carries the fastest
// decohering overlap and is what single-F columns report.
std::pair<std::size_t, std::size_t> widest_pair(const SpectralObservable& obs) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < obs.dim(); ++i) {
        if (obs.eigenvalues[i] < obs.eigenvalues[lo]) lo = i;
        if (obs.eigenvalues[i] > obs.eigenvalues[hi]) hi = i;
    }
    return {hi, lo};
}

double pair_f_extreme(const PointData& p, bool want_min) {
    double best = want_min ? 1.0 : 0.0;
    bool any = false;
    for (std::size_t i = 0; i < p.obs->dim(); ++i) {
        for (std::size_t j = i + 1; j < p.obs->dim(); ++j) {
            const double f =
                decoherence_factor(p.cfg, p.obs->eigenvalues[i], p.obs->eigenvalues[j]);
            best = want_min ? std::min(best, f) : std::max(best, f);
            any = true;
        }
    }
    return any ? best : 1.0;
}

using Eval = double (*)(const PointData&);

struct QuantityEntry {
    QuantityInfo info;
    Eval eval;
};

double eval_widest_f(const PointData& p) {
    const auto [hi, lo] = widest_pair(*p.obs);
    return decoherence_factor(p.cfg, p.obs->eigenvalues[hi], p.obs->eigenvalues[lo]);
}

const std::vector<QuantityEntry>& entries() {
    static const std::vector<QuantityEntry> table = {
        {{"F", "decoherence factor of the widest eigenvalue pair", false, false},
         [](const PointData& p) { return eval_widest_f(p); }},
        {{"lnF", "log decoherence factor of the widest pair", false, false},
         [](const PointData& p) {
             const auto [hi, lo] = widest_pair(*p.obs);
             return log_decoherence_factor(p.cfg, p.obs->eigenvalues[hi], p.obs->eigenvalues[lo]);
         }},
        {{"F_min", "smallest pairwise decoherence factor", false, false},
         [](const PointData& p) { return pair_f_extreme(p, true); }},
        {{"F_max", "largest pairwise decoherence factor", false, false},
         [](const PointData& p) { return pair_f_extreme(p, false); }},
        {{"regime_ratio", "t / (m sigma^2)", false, false},
         [](const PointData& p) { return p.cfg.regime_ratio(); }},
        {{"expA", "expectation value of A", false, false},
         [](const PointData& p) { return expectation_value(*p.obs, *p.pre); }},
        {{"Ac", "conditional expectation value", true, false},
         [](const PointData& p) { return conditional_expectation(*p.obs, *p.pre, *p.post); }},
        {{"Aw_re", "Re of the weak value", true, false},
         [](const PointData& p) { return weak_value(*p.obs, *p.pre, *p.post).real(); }},
        {{"Aw_im", "Im of the weak value", true, false},
         [](const PointData& p) { return weak_value(*p.obs, *p.pre, *p.post).imag(); }},
        {{"AT_re", "Re of the transition value", true, false},
         [](const PointData& p) {
             return transition_value(*p.obs, *p.pre, *p.post, p.cfg).real();
         }},
        {{"AT_im", "Im of the transition value", true, false},
         [](const PointData& p) {
             return transition_value(*p.obs, *p.pre, *p.post, p.cfg).imag();
         }},
        {{"dx", "post-selected pointer position shift", true, false},
         [](const PointData& p) {
             return postselected_pointer_shifts(*p.obs, *p.pre, *p.post, p.cfg).dx;
         }},
        {{"dp", "post-selected pointer momentum shift", true, false},
         [](const PointData& p) {
             return postselected_pointer_shifts(*p.obs, *p.pre, *p.post, p.cfg).dp;
         }},
        {{"beta_sq", "norm of the post-selected pointer state", true, false},
         [](const PointData& p) { return postselection_norm(*p.obs, *p.pre, *p.post, p.cfg); }},
        {{"dx_full", "unconditioned pointer position shift", false, false},
         [](const PointData& p) { return pointer_shifts(*p.obs, *p.pre, p.cfg).dx; }},
        {{"dp_full", "unconditioned pointer momentum shift", false, false},
         [](const PointData& p) { return pointer_shifts(*p.obs, *p.pre, p.cfg).dp; }},
        {{"dx_weak", "weak-limit position shift (finite mass)", true, false},
         [](const PointData& p) {
             return limit_shifts(*p.obs, *p.pre, *p.post, p.cfg, ShiftLimit::weak_F1).dx;
         }},
        {{"dp_weak", "weak-limit momentum shift (finite mass)", true, false},
         [](const PointData& p) {
             return limit_shifts(*p.obs, *p.pre, *p.post, p.cfg, ShiftLimit::weak_F1).dp;
         }},
        {{"dx_strong", "strong-limit position shift", true, false},
         [](const PointData& p) {
             return limit_shifts(*p.obs, *p.pre, *p.post, p.cfg, ShiftLimit::strong_F0).dx;
         }},
        {{"dp_strong", "strong-limit momentum shift", true, false},
         [](const PointData& p) {
             return limit_shifts(*p.obs, *p.pre, *p.post, p.cfg, ShiftLimit::strong_F0).dp;
         }},
        {{"dx_weak_minf", "weak-limit position shift, infinite mass", true, false},
         [](const PointData& p) {
             return limit_shifts(*p.obs, *p.pre, *p.post, p.cfg, ShiftLimit::weak_F1_minf).dx;
         }},
        {{"dp_weak_minf", "weak-limit momentum shift, infinite mass", true, false},
         [](const PointData& p) {
             return limit_shifts(*p.obs, *p.pre, *p.post, p.cfg, ShiftLimit::weak_F1_minf).dp;
         }},
        {{"dx_strong_minf", "strong-limit position shift, infinite mass", true, false},
         [](const PointData& p) {
             return limit_shifts(*p.obs, *p.pre, *p.post, p.cfg, ShiftLimit::strong_F0_minf).dx;
         }},
        {{"dp_strong_minf", "strong-limit momentum shift, infinite mass", true, false},
         [](const PointData& p) {
             return limit_shifts(*p.obs, *p.pre, *p.post, p.cfg, ShiftLimit::strong_F0_minf).dp;
         }},
        {{"F_oracle", "grid-oracle decoherence factor, widest pair", false, true},
         [](const PointData& p) { return p.oracle_f; }},
        {{"dx_oracle", "grid-oracle pointer position shift", false, true},
         [](const PointData& p) { return p.oracle_dx; }},
        {{"dp_oracle", "grid-oracle pointer momentum shift", false, true},
         [](const PointData& p) { return p.oracle_dp; }},
    };
    return table;
}

const QuantityEntry& find_entry(const std::string& name) {
    for (const QuantityEntry& e : entries())
        if (e.info.name == name) return e;
    throw ConfigError("unknown quantity '" + name + "'");
}

std::size_t resolve_workers(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SWEEP_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Run the grid oracle at one point; failures land in row.error and leave the
// oracle columns NaN.
void run_oracle(PointData& p, SweepRow& row) {
    try {
        const GridSpec spec =
            GridSpec::auto_sized(p.cfg, p.obs->eigenvalues, p.sweep->oracle_max_points);
        std::vector<GridBranch> branches;
        branches.reserve(p.obs->dim());
        for (double a : p.obs->eigenvalues) branches.push_back(propagate(spec, p.cfg, a));
        const auto [hi, lo] = widest_pair(*p.obs);
        p.oracle_f = std::abs(numeric_overlap(branches[hi], branches[lo]));
        const GridMoments m = numeric_moments(branches, *p.obs, *p.pre, p.post, p.cfg);
        p.oracle_dx = m.mean_x;
        p.oracle_dp = m.mean_p;
        p.oracle_ok = true;
    } catch (const SimError& e) {
        row.error = std::string("oracle: ") + e.what();
    }
}

} // namespace

const std::vector<QuantityInfo>& quantity_registry() {
    static const std::vector<QuantityInfo> infos = [] {
        std::vector<QuantityInfo> v;
        for (const QuantityEntry& e : entries()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

bool is_known_quantity(const std::string& name) {
    for (const QuantityInfo& info : quantity_registry())
        if (info.name == name) return true;
    return false;
}

SweepResult run_sweep(const SweepConfig& sweep) {
    sweep.validate();

    const SpectralObservable obs = sweep.scenario.observable();
    const SelectionState pre = sweep.scenario.pre_state();
    const std::optional<SelectionState> post = sweep.scenario.post_state();
    const std::vector<double> values = sweep.sweep_values();

    std::vector<const QuantityEntry*> evals;
    evals.reserve(sweep.quantities.size());
    for (const std::string& q : sweep.quantities) evals.push_back(&find_entry(q));

    SweepResult result;
    result.columns.push_back(sweep.parameter);
    for (const std::string& q : sweep.quantities) result.columns.push_back(q);
    result.rows.resize(values.size());

    struct OracleTriple {
        bool ok = false;
        double f = kNaN, dx = kNaN, dp = kNaN;
    };
    std::vector<OracleTriple> oracle_data(values.size());

    // Rows are independent; workers pull indices and write into their slot,
    // so parallel and serial runs produce identical output.
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            SweepRow& row = result.rows[i];
            row.value = values[i];

            PointData p;
            p.sweep = &sweep;
            p.cfg = sweep.config_at(values[i]);
            p.obs = &obs;
            p.pre = &pre;
            p.post = post ? &*post : nullptr;
            if (sweep.oracle) {
                run_oracle(p, row);
                oracle_data[i] = {p.oracle_ok, p.oracle_f, p.oracle_dx, p.oracle_dp};
            }

            row.quantities.assign(evals.size(), kNaN);
            for (std::size_t q = 0; q < evals.size(); ++q) {
                try {
                    row.quantities[q] = evals[q]->eval(p);
                } catch (const SimError& e) {
                    if (!row.error.empty()) row.error += "; ";
                    row.error += evals[q]->info.name + ": " + e.what();
                }
            }
        }
    };

    const std::size_t workers = std::min(resolve_workers(sweep.workers), values.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread& th : pool) th.join();

    // Summary: regime flags at the endpoints, worst analytic-vs-oracle gaps.
    auto flags_at = [&](double value, bool& weak, bool& strong) {
        const MeasurementConfig cfg = sweep.config_at(value);
        double fmin = 1.0, fmax = 0.0;
        bool any = false;
        for (std::size_t i = 0; i < obs.dim(); ++i)
            for (std::size_t j = i + 1; j < obs.dim(); ++j) {
                const double f = decoherence_factor(cfg, obs.eigenvalues[i], obs.eigenvalues[j]);
                fmin = std::min(fmin, f);
                fmax = std::max(fmax, f);
                any = true;
            }
        weak = any && fmin > kNearWeakFloor;
        strong = any && fmax < kNearStrongCeil;
    };
    flags_at(values.front(), result.summary.first_near_weak, result.summary.first_near_strong);
    flags_at(values.back(), result.summary.last_near_weak, result.summary.last_near_strong);

    result.summary.max_f_deviation = kNaN;
    result.summary.max_dx_deviation = kNaN;
    result.summary.max_dp_deviation = kNaN;
    if (sweep.oracle) {
        const auto [hi, lo] = widest_pair(obs);
        double df = -1.0, dxv = -1.0, dpv = -1.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!oracle_data[i].ok) continue;
            const MeasurementConfig cfg = sweep.config_at(values[i]);
            try {
                const double fa =
                    decoherence_factor(cfg, obs.eigenvalues[hi], obs.eigenvalues[lo]);
                df = std::max(df, std::abs(oracle_data[i].f - fa));
                PointerShifts s;
                if (post)
                    s = postselected_pointer_shifts(obs, pre, *post, cfg);
                else
                    s = pointer_shifts(obs, pre, cfg);
                dxv = std::max(dxv, std::abs(oracle_data[i].dx - s.dx));
                dpv = std::max(dpv, std::abs(oracle_data[i].dp - s.dp));
            } catch (const SimError&) {
                continue;
            }
        }
        if (df >= 0.0) result.summary.max_f_deviation = df;
        if (dxv >= 0.0) result.summary.max_dx_deviation = dxv;
        if (dpv >= 0.0) result.summary.max_dp_deviation = dpv;
    }

    if (sweep.adjudicate) {
        const double mid = values[values.size() / 2];
        const auto [hi, lo] = widest_pair(obs);
        result.summary.adjudication = adjudicate_coefficient(
            sweep.config_at(mid), obs.eigenvalues[hi], obs.eigenvalues[lo]);
    }
    return result;
}

AdjudicationReport adjudicate_coefficient(const MeasurementConfig& cfg, double ai, double aj,
                                          std::size_t base_steps) {
    cfg.validate();
    const double a_pair[2] = {ai, aj};
    GridSpec base = GridSpec::auto_sized(cfg, a_pair);

    std::vector<GridSpec> ladder;
    for (std::size_t mult : {1, 2, 4}) {
        GridSpec s = base;
        s.n_steps = base_steps * mult;
        ladder.push_back(s);
    }
    const ConvergenceReport conv = convergence_study(cfg, ai, aj, ladder);

    AdjudicationReport rep;
    rep.cfg = cfg;
    rep.ai = ai;
    rep.aj = aj;
    const double f_grid = std::abs(conv.extrapolated_overlap);
    rep.grid_log_f = std::log(f_grid);
    rep.log_error_bar = std::max(conv.error_bar / f_grid, 1e-13);
    rep.exact_log_f = log_decoherence_factor(cfg, ai, aj);

    const double mid = factor_terms::middle(cfg, ai, aj);
    const double lead58 = factor_terms::leading(cfg, ai, aj, 5.0 / 8.0);
    const double lead18 = factor_terms::leading(cfg, ai, aj, 1.0 / 8.0);
    const double spread = factor_terms::tail_spread(cfg, ai, aj);
    const double fixed = factor_terms::tail_static(cfg, ai, aj);

    rep.readings = {
        {"five-eighths grouping (as printed)", -(lead58 + mid + spread), 0.0, false},
        {"one-eighth grouping (as printed)", -(lead18 + mid + fixed), 0.0, false},
        {"cross reading: five-eighths with static tail", -(lead58 + mid + fixed), 0.0, false},
        {"cross reading: one-eighth with spread tail", -(lead18 + mid + spread), 0.0, false},
    };

    const double accept_tol = std::max(10.0 * rep.log_error_bar, 1e-9);
    double max_accepted = 0.0, min_rejected = std::numeric_limits<double>::infinity();
    for (AdjudicationReading& r : rep.readings) {
        r.deviation = std::abs(r.log_f - rep.grid_log_f);
        r.accepted = r.deviation <= accept_tol;
        if (r.accepted)
            max_accepted = std::max(max_accepted, r.deviation);
        else
            min_rejected = std::min(min_rejected, r.deviation);
    }
    rep.separation = std::isinf(min_rejected) ? 0.0 : min_rejected - max_accepted;
    rep.margin_ratio = std::isinf(min_rejected) ? 0.0 : min_rejected / rep.log_error_bar;

    const bool printed58 = rep.readings[0].accepted;
    const bool printed18 = rep.readings[1].accepted;
    if (printed58 && printed18)
        rep.verdict = "equivalent";
    else if (printed58)
        rep.verdict = "five-eighths";
    else if (printed18)
        rep.verdict = "one-eighth";
    else
        rep.verdict = "inconclusive";
    return rep;
}

RandomSelection draw_random_selection(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dim_dist(2, 3);
    std::uniform_real_distribution<double> a_dist(-1.5, 1.5);
    std::normal_distribution<double> amp_dist(0.0, 1.0);

    const int d = dim_dist(rng);
    std::vector<double> a;
    while (static_cast<int>(a.size()) < d) {
        const double cand = a_dist(rng);
        bool ok = true;
        for (double prev : a)
            if (std::abs(cand - prev) < 0.4) ok = false;
        if (ok) a.push_back(cand);
    }

    auto draw_state = [&] {
        std::vector<cplx> amps(d);
        for (cplx& z : amps) z = {amp_dist(rng), amp_dist(rng)};
        return SelectionState(amps);
    };

    SpectralObservable obs(a);
    SelectionState pre = draw_state();
    for (;;) {
        SelectionState post = draw_state();
        cplx ip{0.0, 0.0};
        double cw = 0.0;
        for (int i = 0; i < d; ++i) {
            ip += pre.amplitudes[i] * std::conj(post.amplitudes[i]);
            cw += std::norm(pre.amplitudes[i] * std::conj(post.amplitudes[i]));
        }
        // Keep selections away from orthogonality so limit bounds stay tame.
        if (std::abs(ip) > 0.15 && cw > 0.02) return {obs, pre, post};
    }
}

LimitsCheckReport run_limits_check(unsigned seed, std::size_t n_selections) {
    LimitsCheckReport rep;

    // Weak side: scale g so all pairwise ln F >= -1e-8, then A_T must sit on
    // the weak value within 1e-4 of the spectral range.
    {
        double worst = 0.0;
        for (std::size_t k = 0; k < n_selections; ++k) {
            const RandomSelection sel = draw_random_selection(seed + 1000 * (unsigned)k);
            MeasurementConfig cfg{1.0, 1.0, 1.0, 1.0};
            double gamma_max = 0.0;
            for (double gap : sel.obs.pair_gaps())
                gamma_max = std::max(gamma_max, -log_decoherence_factor(cfg, gap, 0.0));
            cfg.g = std::sqrt(1e-8 / std::max(gamma_max, 1e-300));
            const cplx at = transition_value(sel.obs, sel.pre, sel.post, cfg);
            const cplx aw = weak_value(sel.obs, sel.pre, sel.post);
            worst = std::max(worst, std::abs(at - aw) / sel.obs.spectral_range());
        }
        rep.lines.push_back({"weak limit: |A_T - <A>_w| / range", worst <= 1e-4, worst, 1e-4});
    }

    // Strong side: scale g so all pairwise F <= 1e-11; A_T must reach the
    // conditional value and shed its imaginary part.
    {
        double worst = 0.0, worst_im = 0.0;
        for (std::size_t k = 0; k < n_selections; ++k) {
            const RandomSelection sel = draw_random_selection(seed + 2000 * (unsigned)k + 7);
            MeasurementConfig cfg{1.0, 1.0, 1.0, 1.0};
            double gamma_min = std::numeric_limits<double>::infinity();
            for (double gap : sel.obs.pair_gaps())
                gamma_min = std::min(gamma_min, -log_decoherence_factor(cfg, gap, 0.0));
            cfg.g = std::sqrt(std::log(1e11) / gamma_min);
            const cplx at = transition_value(sel.obs, sel.pre, sel.post, cfg);
            const double ac = conditional_expectation(sel.obs, sel.pre, sel.post);
            worst = std::max(worst, std::abs(at - ac) / sel.obs.spectral_range());
            worst_im = std::max(worst_im, std::abs(at.imag()) / sel.obs.spectral_range());
        }
        rep.lines.push_back({"strong limit: |A_T - <A>_c| / range", worst <= 1e-6, worst, 1e-6});
        rep.lines.push_back({"strong limit: |Im A_T| / range", worst_im <= 1e-8, worst_im, 1e-8});
    }

    // Heavy pointer: finite-mass weak formulas against the infinite-mass ones.
    {
        double worst = 0.0;
        const MeasurementConfig cfg{1.0, 1.0, 1e6, 1.0};
        for (std::size_t k = 0; k < n_selections; ++k) {
            RandomSelection sel = draw_random_selection(seed + 3000 * (unsigned)k + 13);
            const cplx aw = weak_value(sel.obs, sel.pre, sel.post);
            if (std::abs(aw.real()) < 0.1 || std::abs(aw.imag()) < 0.05) continue;
            const PointerShifts fin = limit_shifts(sel.obs, sel.pre, sel.post, cfg,
                                                   ShiftLimit::weak_F1);
            const PointerShifts inf = limit_shifts(sel.obs, sel.pre, sel.post, cfg,
                                                   ShiftLimit::weak_F1_minf);
            worst = std::max(worst, std::abs(fin.dx - inf.dx) / std::abs(inf.dx));
            worst = std::max(worst, std::abs(fin.dp - inf.dp) / std::abs(inf.dp));
        }
        rep.lines.push_back({"infinite mass: weak shifts, relative", worst <= 1e-5, worst, 1e-5});
    }

    // t = 0: every overlap is exactly 1, so A_T is the weak value.
    {
        double worst = 0.0;
        for (std::size_t k = 0; k < 20; ++k) {
            const RandomSelection sel = draw_random_selection(seed + 4000 * (unsigned)k + 3);
            const MeasurementConfig cfg{2.0, 0.0, 1.0, 1.0};
            const cplx at = transition_value(sel.obs, sel.pre, sel.post, cfg);
            const cplx aw = weak_value(sel.obs, sel.pre, sel.post);
            worst = std::max(worst, std::abs(at - aw));
        }
        rep.lines.push_back({"t = 0: A_T equals the weak value", worst <= 1e-12, worst, 1e-12});
    }

    // Full decoherence: the reduced state is the classical mixture.
    {
        const MeasurementConfig cfg{40.0, 1.0, 1.0, 1.0};
        const double theta1 = 0.6, delta1 = 0.9;
        const SpectralObservable obs({+1.0, -1.0});
        const SelectionState pre({std::cos(theta1), std::polar(std::sin(theta1), delta1)});
        const ReducedDensityMatrix rho = reduced_density_matrix(obs, pre, cfg);
        const double c2 = std::cos(theta1) * std::cos(theta1);
        double worst = std::abs(rho.at(0, 0).real() - c2);
        worst = std::max(worst, std::abs(rho.at(1, 1).real() - (1.0 - c2)));
        worst = std::max(worst, std::abs(rho.at(0, 1)));
        rep.lines.push_back(
            {"full decoherence: reduced state is the mixture", worst <= 1e-10, worst, 1e-10});
    }

    rep.all_pass = std::all_of(rep.lines.begin(), rep.lines.end(),
                               [](const CheckLine& l) { return l.pass; });
    return rep;
}

} // namespace pointersim
