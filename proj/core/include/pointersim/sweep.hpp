// sweep.hpp — batch front-end: parameter sweeps over the analytic engine with
// optional grid-oracle cross checks, CSV/JSON emission, the printed-form
// coefficient adjudicator, and the limit-recovery check suite.
//
// Configuration is a flat key-value file with sections; see the README for
// the full key list. One parameter is swept per run; every requested output
// quantity is validated against the registry before execution.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pointersim/grid.hpp"
#include "pointersim/pointer.hpp"
#include "pointersim/spectral.hpp"
#include "pointersim/transition.hpp"

namespace pointersim {

enum class ScenarioType { generic, stern_gerlach };
enum class SweepSpacing { linear, log };
enum class OutputFormat { csv, json };

struct ScenarioConfig {
    ScenarioType type = ScenarioType::generic;

    // generic scenario
    std::vector<double> eigenvalues;
    std::vector<double> eigenphases;   // optional, defaults to zeros
    std::vector<cplx> pre_amplitudes;
    std::vector<cplx> post_amplitudes; // empty = no post-selection

    // stern-gerlach scenario
    double theta1 = 0.0, delta1 = 0.0, theta2 = 0.0, delta2 = 0.0;

    SpectralObservable observable() const;
    SelectionState pre_state() const;
    std::optional<SelectionState> post_state() const;
    bool has_post() const;
};

struct SweepConfig {
    ScenarioConfig scenario;
    MeasurementConfig base; // fixed parameters; the swept one is overwritten

    std::string parameter = "t"; // g | t | m | sigma | f (f = g, stern-gerlach)
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 0;
    SweepSpacing spacing = SweepSpacing::linear;

    std::vector<std::string> quantities;
    bool oracle = false;
    std::size_t oracle_max_points = std::size_t{1} << 15;
    bool adjudicate = false;

    std::string out_path;
    OutputFormat format = OutputFormat::csv;
    std::size_t workers = 0; // 0 = env SWEEP_WORKERS, then hardware default

    void validate() const; // throws ConfigError
    std::vector<double> sweep_values() const;
    MeasurementConfig config_at(double value) const;
};

// Flat "[section] key = value" parser plus "section.key=value" overrides.
SweepConfig parse_sweep_config(std::istream& in, const std::vector<std::string>& overrides = {});
SweepConfig load_sweep_config(const std::string& path,
                              const std::vector<std::string>& overrides = {});

// ── Quantity registry ───────────────────────────────────────────────────────

struct QuantityInfo {
    std::string name;
    std::string description;
    bool requires_post = false;
    bool requires_oracle = false;
};

const std::vector<QuantityInfo>& quantity_registry();
bool is_known_quantity(const std::string& name);

// ── Running ─────────────────────────────────────────────────────────────────

struct SweepRow {
    double value = 0.0;             // swept parameter value
    std::vector<double> quantities; // NaN where unavailable
    std::string error;              // per-point failure note, empty when clean
};

struct AdjudicationReading {
    std::string name;
    double log_f = 0.0;
    double deviation = 0.0; // |log_f - grid log F|
    bool accepted = false;
};

struct AdjudicationReport {
    MeasurementConfig cfg;
    double ai = 1.0, aj = -1.0;
    double grid_log_f = 0.0;   // Richardson-extrapolated oracle value
    double log_error_bar = 0.0;
    double exact_log_f = 0.0;  // closed-form exact route
    std::vector<AdjudicationReading> readings;
    double separation = 0.0;   // min rejected deviation - max accepted deviation
    double margin_ratio = 0.0; // min rejected deviation / log error bar
    std::string verdict;       // equivalent | five-eighths | one-eighth | inconclusive
};

struct SweepSummary {
    bool first_near_weak = false, first_near_strong = false;
    bool last_near_weak = false, last_near_strong = false;
    // Max |analytic - oracle| over clean rows; NaN when the oracle is off.
    double max_f_deviation = 0.0;
    double max_dx_deviation = 0.0;
    double max_dp_deviation = 0.0;
    std::optional<AdjudicationReport> adjudication;
};

struct SweepResult {
    std::vector<std::string> columns;
    std::vector<SweepRow> rows;
    SweepSummary summary;
};

SweepResult run_sweep(const SweepConfig& cfg);

// ── Emission ────────────────────────────────────────────────────────────────

void emit(std::ostream& os, OutputFormat format, const SweepConfig& cfg,
          const SweepResult& result);
void emit_to_file(const std::string& path, OutputFormat format, const SweepConfig& cfg,
                  const SweepResult& result);

// ── Adjudication and limit checks ───────────────────────────────────────────

// Richardson ladder at one parameter point; tests the four printed-form
// readings (two groupings as printed, two cross readings) against the grid.
AdjudicationReport adjudicate_coefficient(const MeasurementConfig& cfg = {1.0, 1.0, 1.0, 1.0},
                                          double ai = 1.0, double aj = -1.0,
                                          std::size_t base_steps = 500);

struct CheckLine {
    std::string name;
    bool pass = false;
    double metric = 0.0; // worst observed deviation
    double bound = 0.0;
};

struct LimitsCheckReport {
    std::vector<CheckLine> lines;
    bool all_pass = false;
};

// Limit-recovery suite: weak (F -> 1) and strong (F -> 0) recovery of A_T
// over random selections, infinite-mass shift agreement, the t = 0 identity
// and the full-decoherence mixture.
LimitsCheckReport run_limits_check(unsigned seed = 20240817u, std::size_t n_selections = 100);

// Random pre/post selection fixtures shared by the checks and the test
// suites. Eigenvalues are distinct with a floored gap; selections are
// resampled until overlaps are comfortably away from orthogonality.
struct RandomSelection {
    SpectralObservable obs;
    SelectionState pre;
    SelectionState post;
};
RandomSelection draw_random_selection(unsigned seed);

} // namespace pointersim
