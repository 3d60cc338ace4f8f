#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "pointersim/errors.hpp"
#include "pointersim/sweep.hpp"
#include "pointersim/stern_gerlach.hpp"
#include "pointersim/version.hpp"

using namespace pointersim;

namespace {

const char* kSgConfig = R"(
# stern-gerlach curve, decoherence vs time
[scenario]
type = stern-gerlach
theta1 = 0.5235987755982988
delta1 = 0.0
theta2 = 1.0471975511965976
delta2 = 0.0

[parameters]
f = 1.0
t = 1.0
m = 1.0
sigma = 1.0

[sweep]
parameter = t
min = 0.0
max = 2.0
count = 9
spacing = linear

[output]
quantities = F, AT_re, AT_im, dx, dp
format = csv
)";

SweepConfig sg_config(const std::vector<std::string>& overrides = {}) {
    std::istringstream in(kSgConfig);
    return parse_sweep_config(in, overrides);
}

std::string emit_string(const SweepConfig& cfg, const SweepResult& result) {
    std::ostringstream os;
    emit(os, cfg.format, cfg, result);
    return os.str();
}

} // namespace

TEST_CASE("config parsing, overrides and rejection") {
    SweepConfig cfg = sg_config();
    CHECK(cfg.scenario.type == ScenarioType::stern_gerlach);
    CHECK(cfg.base.g == 1.0);
    CHECK(cfg.count == 9);
    CHECK(cfg.quantities.size() == 5);

    SweepConfig over = sg_config({"sweep.count=3", "parameters.sigma=0.8"});
    CHECK(over.count == 3);
    CHECK(over.base.sigma == 0.8);

    std::istringstream bad1("[scenario]\ntype = generic\nunknown = 1\n");
    CHECK_THROWS_AS(parse_sweep_config(bad1), ConfigError);

    CHECK_THROWS_AS(sg_config({"output.quantities=F, no_such_quantity"}), ConfigError);
    CHECK_THROWS_AS(sg_config({"sweep.count=0"}), ConfigError);
    CHECK_THROWS_AS(sg_config({"sweep.parameter=bogus"}), ConfigError);
    CHECK_THROWS_AS(sg_config({"sweep.parameter=sigma", "sweep.min=-1"}), ConfigError);
    // Oracle quantities need the oracle enabled.
    CHECK_THROWS_AS(sg_config({"output.quantities=F_oracle"}), ConfigError);

    // Generic scenario without a post-selection rejects post quantities.
    std::istringstream gen(R"(
[scenario]
type = generic
eigenvalues = 1, -1
pre = (0.866,0), (0.5,0)
[sweep]
parameter = g
min = 0.1
max = 1
count = 3
[output]
quantities = dx
)");
    CHECK_THROWS_AS(parse_sweep_config(gen), ConfigError);
}

TEST_CASE("registry names are unique and full-coverage on a post scenario") {
    const auto& reg = quantity_registry();
    for (std::size_t i = 0; i < reg.size(); ++i)
        for (std::size_t j = i + 1; j < reg.size(); ++j)
            CHECK(reg[i].name != reg[j].name);

    // Every registered quantity evaluates on a stern-gerlach point.
    std::string all;
    for (const QuantityInfo& q : reg) {
        if (!all.empty()) all += ", ";
        all += q.name;
    }
    SweepConfig cfg = sg_config({"output.quantities=" + all, "sweep.count=1", "sweep.min=0.8",
                                 "oracle.enabled=true"});
    const SweepResult result = run_sweep(cfg);
    REQUIRE(result.rows.size() == 1);
    CHECK(result.rows[0].error.empty());
    for (double v : result.rows[0].quantities) CHECK(std::isfinite(v));
    CHECK(is_known_quantity("F"));
    CHECK_FALSE(is_known_quantity("bogus"));
}

TEST_CASE("g = 0 sweep rows are inert") {
    std::istringstream in(R"(
[scenario]
type = generic
eigenvalues = 1, -1
pre = (0.866,0), (0.5,0)
post = (0.707,0), (0.707,0)
[parameters]
g = 0
[sweep]
parameter = t
min = 0
max = 3
count = 7
[output]
quantities = F, dx
)");
    const SweepConfig cfg = parse_sweep_config(in);
    const SweepResult result = run_sweep(cfg);
    for (const SweepRow& row : result.rows) {
        CHECK(row.quantities[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(row.quantities[1]) < 1e-14);
    }
    CHECK(result.summary.first_near_weak);
}

TEST_CASE("log sweep in g walks the transition") {
    SweepConfig cfg = sg_config({"sweep.parameter=f", "sweep.min=0.001", "sweep.max=1000",
                                 "sweep.count=25", "sweep.spacing=log"});
    const SweepResult result = run_sweep(cfg);

    double prev = 1.1;
    for (const SweepRow& row : result.rows) {
        CHECK(row.quantities[0] <= prev + 1e-12); // F monotone down g
        prev = row.quantities[0];
    }
    CHECK(result.rows.front().quantities[0] > 1.0 - 1e-5);
    CHECK(result.rows.back().quantities[0] < 1e-12);

    const SgScenario s{cfg.scenario.theta1, cfg.scenario.delta1, cfg.scenario.theta2,
                       cfg.scenario.delta2, 1.0, 1.0, 1.0, 1.0};
    const cplx aw = weak_value(s.observable(), s.pre(), s.post());
    const double ac = conditional_expectation(s.observable(), s.pre(), s.post());
    CHECK(result.rows.front().quantities[1] == doctest::Approx(aw.real()).epsilon(1e-4));
    CHECK(result.rows.back().quantities[1] == doctest::Approx(ac).epsilon(1e-6));
    CHECK(result.summary.first_near_weak);
    CHECK(result.summary.last_near_strong);
}

TEST_CASE("csv output round-trips bit-exactly and is deterministic") {
    SweepConfig cfg = sg_config();

    cfg.workers = 1;
    const std::string serial = emit_string(cfg, run_sweep(cfg));
    cfg.workers = 4;
    const SweepResult parallel = run_sweep(cfg);
    CHECK(serial == emit_string(cfg, parallel));

    // Round trip every numeric cell through text.
    std::istringstream lines(serial);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,F,AT_re,AT_im,dx,dp");
    std::size_t row = 0;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(cells, cell, ',')) {
            const double parsed = std::strtod(cell.c_str(), nullptr);
            const double original = col == 0 ? parallel.rows[row].value
                                             : parallel.rows[row].quantities[col - 1];
            CHECK(std::memcmp(&parsed, &original, sizeof(double)) == 0);
            ++col;
        }
        CHECK(col == 6);
        ++row;
    }
    CHECK(row == 9);
}

TEST_CASE("json output carries metadata, rows and summary") {
    SweepConfig cfg = sg_config({"output.format=json", "sweep.count=3"});
    const SweepResult result = run_sweep(cfg);
    std::ostringstream os;
    emit(os, cfg.format, cfg, result);
    const nlohmann::json j = nlohmann::json::parse(os.str());

    CHECK(j["metadata"]["version"] == kVersion);
    CHECK(j["metadata"]["units"] == "hbar=1");
    CHECK(j["metadata"]["config"]["scenario"]["type"] == "stern-gerlach");
    CHECK(j["metadata"]["config"]["sweep"]["parameter"] == "t");
    CHECK(j["rows"].size() == 3);
    CHECK(j["rows"][0].contains("F"));
    CHECK(j["summary"].contains("first_point"));
}

TEST_CASE("empty results are refused") {
    SweepConfig cfg = sg_config();
    SweepResult empty;
    empty.columns = {"t"};
    std::ostringstream os;
    CHECK_THROWS_AS(emit(os, OutputFormat::csv, cfg, empty), ConfigError);
}

TEST_CASE("infeasible oracle points error per-row and the run continues") {
    SweepConfig cfg = sg_config({"oracle.enabled=true", "oracle.max_points=256",
                                 "output.quantities=F, F_oracle", "sweep.min=0.2",
                                 "sweep.max=6.0", "sweep.count=4"});
    const SweepResult result = run_sweep(cfg);
    REQUIRE(result.rows.size() == 4);
    bool some_failed = false, some_passed = false;
    for (const SweepRow& row : result.rows) {
        CHECK(std::isfinite(row.quantities[0])); // analytic column always present
        if (row.error.empty()) {
            some_passed = true;
            CHECK(std::isfinite(row.quantities[1]));
        } else {
            some_failed = true;
            CHECK(!std::isfinite(row.quantities[1]));
        }
    }
    CHECK(some_passed);
    CHECK(some_failed);

    // The error column lands in the CSV as text.
    const std::string csv = emit_string(cfg, result);
    CHECK(csv.find("error") != std::string::npos);
}

TEST_CASE("oracle sweep agrees with the analytic engine") {
    SweepConfig cfg = sg_config({"oracle.enabled=true", "sweep.min=0.2", "sweep.max=1.4",
                                 "sweep.count=4"});
    const SweepResult result = run_sweep(cfg);
    for (const SweepRow& row : result.rows) CHECK(row.error.empty());
    CHECK(result.summary.max_f_deviation < 1e-6);
    CHECK(result.summary.max_dx_deviation < 1e-5);
    CHECK(result.summary.max_dp_deviation < 1e-5);
}

TEST_CASE("adjudication verdict") {
    const AdjudicationReport rep = adjudicate_coefficient();
    CHECK(rep.verdict == "equivalent");
    REQUIRE(rep.readings.size() == 4);
    CHECK(rep.readings[0].accepted);
    CHECK(rep.readings[1].accepted);
    CHECK_FALSE(rep.readings[2].accepted);
    CHECK_FALSE(rep.readings[3].accepted);
    CHECK(rep.margin_ratio >= 10.0);
    CHECK(std::abs(rep.exact_log_f - rep.grid_log_f) < 1e-9);
}

TEST_CASE("limit checks pass at reduced size") {
    const LimitsCheckReport rep = run_limits_check(20240817u, 25);
    for (const CheckLine& line : rep.lines) {
        INFO(line.name, " worst ", line.metric, " bound ", line.bound);
        CHECK(line.pass);
    }
    CHECK(rep.all_pass);
}
