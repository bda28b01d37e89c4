#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "slewsim/campaign.hpp"
#include "slewsim/errors.hpp"

using namespace slewsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

CampaignSpec small_spec(int n_runs, double duration) {
    CampaignSpec spec;
    char d[32];
    std::snprintf(d, sizeof d, "%g", duration);
    spec.base = load_config_text(default_profile_text(), {{"run.duration", d}});
    spec.n_runs = n_runs;
    spec.seed = 2024;
    return spec;
}

std::string temp_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(p);
    return p.string();
}

}  // namespace

TEST_CASE("zero ranges reproduce the base scenario") {
    CampaignSpec spec = small_spec(4, 20.0);
    spec.ranges.q0_component_frac = 0.0;
    spec.ranges.omega0_abs = 0.0;
    spec.ranges.zone_cone = 0.0;
    spec.ranges.inertia_frac = 0.0;
    spec.ranges.perturb_disturbance = false;
    const auto runs = generate_runs(spec);
    REQUIRE(runs.size() == 4);
    for (const ScenarioConfig& cfg : runs) {
        CHECK(std::fabs(cfg.q0.eta - spec.base.q0.eta) < 1e-15);
        CHECK((cfg.omega0 - spec.base.omega0).norm() == 0.0);
        CHECK(l2_induced_norm(cfg.I_actual - spec.base.I_star) < 1e-15);
        for (std::size_t z = 0; z < cfg.zones.size(); ++z)
            CHECK((cfg.zones[z].n_hat - spec.base.zones[z].n_hat).norm() < 1e-12);
    }
}

TEST_CASE("ranges respected: inertia box, omega box, zone cone") {
    CampaignSpec spec = small_spec(40, 20.0);
    const auto runs = generate_runs(spec);
    for (const ScenarioConfig& cfg : runs) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double bound = 0.2 * std::fabs(spec.base.I_star(i, j));
                CHECK(std::fabs(cfg.I_actual(i, j) - spec.base.I_star(i, j)) <=
                      bound + 1e-12);
            }
            CHECK(std::fabs(cfg.omega0[i]) <= 1e-3 + 1e-15);
        }
        CHECK(sym_eigenvalues(cfg.I_actual)[0] > 0.0);
        for (std::size_t z = 0; z < cfg.zones.size(); ++z) {
            const double ang = std::acos(std::clamp(
                cfg.zones[z].n_hat.dot(spec.base.zones[z].n_hat), -1.0, 1.0));
            CHECK(ang <= 15.0 * kPi / 180.0 + 1e-9);
        }
        // Every generated run satisfies the initial-margin precondition.
        for (const PointingMargin& pm :
             pointing_margins(cfg.q0, cfg.m_hat_body, cfg.zones))
            CHECK(!pm.violated);
    }
}

TEST_CASE("same seed reproduces the identical run list") {
    CampaignSpec spec = small_spec(10, 20.0);
    const auto a = generate_runs(spec);
    const auto b = generate_runs(spec);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].q0.eta == b[i].q0.eta);
        CHECK(a[i].omega0.x == b[i].omega0.x);
        CHECK(a[i].I_actual(0, 1) == b[i].I_actual(0, 1));
        CHECK(a[i].disturbance.phase == b[i].disturbance.phase);
    }
    CampaignSpec other = spec;
    other.seed = 99;
    const auto c = generate_runs(other);
    CHECK(c[0].q0.eta != a[0].q0.eta);
}

TEST_CASE("single nominal-range run equals the direct scenario result") {
    CampaignSpec spec = small_spec(1, 30.0);
    spec.ranges.q0_component_frac = 0.0;
    spec.ranges.omega0_abs = 0.0;
    spec.ranges.zone_cone = 0.0;
    spec.ranges.inertia_frac = 0.0;
    spec.ranges.perturb_disturbance = false;
    const CampaignReport rep = run_campaign(spec, 1);
    REQUIRE(rep.runs.size() == 1);

    ScenarioConfig direct = spec.base;
    direct.seed = spec.seed ^ 0ULL;
    const RunResult r = run_scenario(direct);
    CHECK(rep.runs[0].metrics.min_theta_global == r.metrics.min_theta_global);
    CHECK(rep.runs[0].metrics.max_abs_h_w == r.metrics.max_abs_h_w);
    CHECK(rep.summary.n_runs == 1);
}

TEST_CASE("report is identical across worker counts") {
    CampaignSpec spec = small_spec(8, 40.0);
    const CampaignReport a = run_campaign(spec, 1);
    const CampaignReport b = run_campaign(spec, 3);
    const CampaignReport c = run_campaign(spec, 8);
    for (const CampaignReport* r : {&b, &c}) {
        CHECK(r->summary.violation_count == a.summary.violation_count);
        CHECK(r->summary.max_violation_depth == a.summary.max_violation_depth);
        CHECK(r->summary.min_theta_overall == a.summary.min_theta_overall);
        REQUIRE(r->runs.size() == a.runs.size());
        for (std::size_t i = 0; i < a.runs.size(); ++i) {
            CHECK(r->runs[i].metrics.min_theta_global ==
                  a.runs[i].metrics.min_theta_global);
            CHECK(r->runs[i].metrics.steady_tracking_error ==
                  a.runs[i].metrics.steady_tracking_error);
        }
        REQUIRE(r->bands.t.size() == a.bands.t.size());
        for (std::size_t i = 0; i < a.bands.t.size(); ++i) {
            CHECK(r->bands.hw_min[i] == a.bands.hw_min[i]);
            CHECK(r->bands.hw_max[i] == a.bands.hw_max[i]);
        }
    }
}

TEST_CASE("bands contain every run on the shared grid") {
    CampaignSpec spec = small_spec(6, 30.0);
    const CampaignReport rep = run_campaign(spec, 2);
    const auto runs = generate_runs(spec);
    for (const ScenarioConfig& cfg : runs) {
        const RunResult r = run_scenario_collecting(cfg);
        if (r.metrics.faulted) continue;
        for (std::size_t i = 0; i < rep.bands.t.size(); ++i) {
            const std::size_t rec = i * 100;  // 1 Hz grid over 100 Hz records
            if (rec >= r.log.records.size()) break;
            const TelemetryRecord& tr = r.log.records[rec];
            CHECK(tr.q.eta >= rep.bands.eta_min[i] - 1e-15);
            CHECK(tr.q.eta <= rep.bands.eta_max[i] + 1e-15);
            for (int w = 0; w < 4; ++w) {
                CHECK(tr.h_w[w] >= rep.bands.hw_min[i] - 1e-15);
                CHECK(tr.h_w[w] <= rep.bands.hw_max[i] + 1e-15);
            }
        }
    }
}

TEST_CASE("csv outputs: aggregates recomputable bit-exactly, histogram sums") {
    CampaignSpec spec = small_spec(5, 25.0);
    const CampaignReport rep = run_campaign(spec, 2);
    const std::string dir = temp_dir("slewsim_campaign_csv");
    report_csv(rep, dir);
    report_svg(rep, dir);

    const auto runs_back = load_runs_csv(dir + "/runs.csv");
    REQUIRE(runs_back.size() == rep.runs.size());
    const CampaignSummary again = summarize(runs_back, rep.summary.seed);
    CHECK(again.violation_count == rep.summary.violation_count);
    CHECK(again.violation_fraction == rep.summary.violation_fraction);
    CHECK(again.max_violation_depth == rep.summary.max_violation_depth);
    CHECK(again.min_theta_overall == rep.summary.min_theta_overall);
    CHECK(again.convergence_rate == rep.summary.convergence_rate);

    int total = 0;
    for (int c : rep.summary.depth_histogram) total += c;
    CHECK(total == rep.summary.n_runs);

    // Summary file written by the recomputation path matches byte-for-byte.
    write_summary_csv(again, dir + "/summary2.csv");
    std::ifstream f1(dir + "/summary.csv"), f2(dir + "/summary2.csv");
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(std::filesystem::file_size(dir + "/band_quaternion.svg") > 500);
}

TEST_CASE("faulted runs are conservative violations") {
    std::vector<RunOutcome> runs(3);
    runs[0].counted_violated = false;
    runs[1].metrics.faulted = true;
    runs[1].counted_violated = true;
    runs[1].counted_depth = 15.0 * kPi / 180.0;
    runs[2].counted_violated = true;
    runs[2].counted_depth = 0.2 * kPi / 180.0;
    runs[2].converged = true;
    const CampaignSummary s = summarize(runs, 7);
    CHECK(s.violation_count == 2);
    CHECK(s.fault_count == 1);
    CHECK(s.max_violation_depth == doctest::Approx(15.0 * kPi / 180.0));
    CHECK(s.depth_histogram[0] == 1);
    CHECK(s.depth_histogram[2] == 1);  // 0.2 deg lands in (0.1, 0.25]
    CHECK(s.depth_histogram[5] == 1);  // 15 deg in the > 1 deg bin
}
