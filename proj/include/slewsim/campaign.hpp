#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slewsim/sim_loop.hpp"

namespace slewsim {

// Randomization ranges for the robustness campaign.
struct Perturbations {
    double q0_component_frac = 0.1;       // +/- fraction per quaternion component
    double omega0_abs = 1e-3;             // rad/s, +/- per axis
    double zone_cone = 15.0 * 3.14159265358979323846 / 180.0;  // rad
    double inertia_frac = 0.2;            // |delta_ij| <= frac |I*_ij|
    bool perturb_disturbance = true;      // random phase, per-axis signs
};

struct CampaignSpec {
    ScenarioConfig base;
    int n_runs = 100;
    std::uint64_t seed = 0;
    Perturbations ranges;
    bool rest_to_rest = false;  // keep omega0 at the base value
};

struct RunOutcome {
    int index = 0;
    std::uint64_t sub_seed = 0;
    Metrics metrics;
    bool counted_violated = false;   // includes faulted runs (conservative)
    double counted_depth = 0;        // rad
    bool converged = false;
};

// min/max envelopes over runs, sampled on a 1 Hz grid.
struct CampaignBands {
    std::vector<double> t;
    std::vector<double> eta_min, eta_max;
    std::vector<double> qx_min, qx_max, qy_min, qy_max, qz_min, qz_max;
    std::vector<double> tauw_min, tauw_max;  // over wheels and runs
    std::vector<double> hw_min, hw_max;
    std::vector<double> theta_min, theta_max;  // min over zones, banded over runs
};

struct CampaignSummary {
    int n_runs = 0;
    std::uint64_t seed = 0;
    int fault_count = 0;
    int violation_count = 0;
    double violation_fraction = 0;
    double max_violation_depth = 0;  // rad
    double min_theta_overall = 0;    // rad
    double convergence_rate = 0;
    // depth histogram [none, <=0.1deg, <=0.25deg, <=0.5deg, <=1deg, >1deg]
    std::array<int, 6> depth_histogram{};
};

struct CampaignReport {
    CampaignSummary summary;
    std::vector<RunOutcome> runs;
    CampaignBands bands;
};

// Materializes n_runs perturbed configs; deterministic in (seed, index).
// Throws RejectionExhausted if an admissible inertia sample or a valid
// initial-margin layout cannot be drawn in 100 tries.
std::vector<ScenarioConfig> generate_runs(const CampaignSpec& spec);

// Executes the campaign on a worker pool. The report is identical for any
// worker count because runs are generated up front and merged in index
// order. Individual faults become counted violations, not aborts.
CampaignReport run_campaign(const CampaignSpec& spec, int workers);

// Aggregation used by both run_campaign and the report subcommand, so
// summaries recomputed from the per-run CSV are bit-identical.
CampaignSummary summarize(const std::vector<RunOutcome>& runs, std::uint64_t seed);

// summary.csv, runs.csv and bands.csv under dir (created if needed).
void report_csv(const CampaignReport& report, const std::string& dir);

// Band plots (quaternion, wheel torque/momentum, pointing margin).
void report_svg(const CampaignReport& report, const std::string& dir);

// Reads runs.csv back for re-aggregation.
std::vector<RunOutcome> load_runs_csv(const std::string& path);

void write_summary_csv(const CampaignSummary& s, const std::string& path);

}  // namespace slewsim
