#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "slewsim/campaign.hpp"
#include "slewsim/sim_loop.hpp"

using namespace slewsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::pair<std::string, std::string>> to_overrides(
    const std::vector<std::string>& sets) {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(sets.size());
    for (const std::string& s : sets) out.push_back(parse_override(s));
    return out;
}

int cmd_envelope(const std::string& config, const std::vector<std::string>& sets) {
    const ScenarioConfig cfg = load_config_file(config, to_overrides(sets));
    const DerivedParams d = derive_params(cfg);
    std::cout << "alpha_deg,beta_deg,tau_w_max,h_w_max,H_bar,tau_bar,omega_bar,orbit_period\n";
    std::cout << fmt(cfg.alpha * 180.0 / kPi) << "," << fmt(cfg.beta * 180.0 / kPi)
              << "," << fmt(cfg.tau_w_max) << "," << fmt(cfg.h_w_max) << ","
              << fmt(d.H_bar) << "," << fmt(d.tau_bar) << "," << fmt(d.omega_bar)
              << "," << fmt(cfg.disturbance.period) << "\n";
    return 0;
}

int cmd_gains(const std::string& config, const std::vector<std::string>& sets,
              bool as_json) {
    const ScenarioConfig cfg = load_config_file(config, to_overrides(sets));
    const DerivedParams d = derive_params(cfg);
    const GainReport& g = d.gains;
    const double gamma_used = d.smc.gamma;
    if (as_json) {
        nlohmann::json j;
        j["eps_e_bar"] = g.eps_e_bar;
        j["eps_floor"] = g.eps_floor;
        j["psi"] = g.psi;
        j["delta_hat_norm"] = g.delta_hat_norm;
        j["delta_hat_I_norm1"] = g.delta_hat_I_norm1;
        j["base_gain"] = g.base_gain;
        j["gamma_closed_form"] = g.gamma;
        j["gamma_used"] = gamma_used;
        j["gamma_synthesized"] = d.gamma_synthesized;
        j["ceiling"] = g.ceiling;
        j["k"] = cfg.k;
        j["k_max"] = g.k_max;
        j["torque_feasible"] = g.torque_feasible;
        j["k_admissible"] = g.k_admissible;
        j["gamma_within_ceiling"] = gamma_used <= g.ceiling;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "eps_e_bar,eps_floor,psi,delta_hat_norm,delta_hat_I_norm1,"
                     "base_gain,gamma_closed_form,gamma_used,ceiling,k,k_max,"
                     "torque_feasible,k_admissible,gamma_within_ceiling\n";
        std::cout << fmt(g.eps_e_bar) << "," << fmt(g.eps_floor) << "," << fmt(g.psi)
                  << "," << fmt(g.delta_hat_norm) << "," << fmt(g.delta_hat_I_norm1)
                  << "," << fmt(g.base_gain) << "," << fmt(g.gamma) << ","
                  << fmt(gamma_used) << "," << fmt(g.ceiling) << "," << fmt(cfg.k)
                  << "," << fmt(g.k_max) << "," << (g.torque_feasible ? 1 : 0) << ","
                  << (g.k_admissible ? 1 : 0) << ","
                  << (gamma_used <= g.ceiling ? 1 : 0) << "\n";
    }
    return 0;
}

void print_metrics(const Metrics& m, const TelemetryLog& log) {
    std::cout << "records," << log.records.size() << "\n";
    std::cout << "reaching_time," << fmt(m.reaching_time) << "\n";
    std::cout << "max_sigma_after_reach," << fmt(m.max_sigma_after_reach) << "\n";
    std::cout << "min_theta_deg," << fmt(m.min_theta_global * 180.0 / kPi) << "\n";
    std::cout << "violated," << (m.violated ? 1 : 0) << "\n";
    std::cout << "max_abs_tau_w," << fmt(m.max_abs_tau_w) << "\n";
    std::cout << "max_abs_h_w," << fmt(m.max_abs_h_w) << "\n";
    std::cout << "steady_tracking_error," << fmt(m.steady_tracking_error) << "\n";
    std::cout << "steady_vec_error," << fmt(m.steady_vec_error) << "\n";
    std::cout << "final_eta_d," << fmt(m.final_eta_d) << "\n";
    std::cout << "max_omega," << fmt(m.max_omega) << "\n";
    std::cout << "omega_star_exceeded," << (m.omega_star_exceeded ? 1 : 0) << "\n";
}

int cmd_simulate(const std::string& config, const std::vector<std::string>& sets,
                 const std::string& out_dir) {
    const ScenarioConfig cfg = load_config_file(config, to_overrides(sets));
    const RunResult r = run_scenario(cfg);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        export_csv(r.log, out_dir + "/telemetry.csv");
        export_svg_plots(r.log, out_dir + "/fig", cfg.m_hat_body);
    }
    print_metrics(r.metrics, r.log);
    return 0;
}

int cmd_campaign(const std::string& config, const std::vector<std::string>& sets,
                 const std::string& out_dir, int runs, std::uint64_t seed,
                 bool seed_given, int workers, bool rest_to_rest) {
    CampaignSpec spec;
    spec.base = load_config_file(config, to_overrides(sets));
    spec.n_runs = runs;
    spec.seed = seed_given ? seed : spec.base.seed;
    spec.rest_to_rest = rest_to_rest;
    const CampaignReport report = run_campaign(spec, workers);
    if (!out_dir.empty()) {
        report_csv(report, out_dir);
        report_svg(report, out_dir);
    }
    const CampaignSummary& s = report.summary;
    std::cout << "n_runs," << s.n_runs << "\n";
    std::cout << "fault_count," << s.fault_count << "\n";
    std::cout << "violation_count," << s.violation_count << "\n";
    std::cout << "violation_fraction," << fmt(s.violation_fraction) << "\n";
    std::cout << "max_violation_depth_deg," << fmt(s.max_violation_depth * 180.0 / kPi)
              << "\n";
    std::cout << "min_theta_overall_deg," << fmt(s.min_theta_overall * 180.0 / kPi)
              << "\n";
    std::cout << "convergence_rate," << fmt(s.convergence_rate) << "\n";
    return 0;
}

int cmd_report(const std::string& in_dir) {
    const auto runs = load_runs_csv(in_dir + "/runs.csv");
    std::uint64_t seed = 0;
    {
        std::ifstream in(in_dir + "/summary.csv");
        if (in) {
            std::string header, row;
            std::getline(in, header);
            std::getline(in, row);
            const auto c1 = row.find(',');
            const auto c2 = row.find(',', c1 + 1);
            if (c1 != std::string::npos && c2 != std::string::npos)
                seed = std::stoull(row.substr(c1 + 1, c2 - c1 - 1));
        }
    }
    const CampaignSummary s = summarize(runs, seed);
    write_summary_csv(s, in_dir + "/summary_recomputed.csv");

    std::ifstream f1(in_dir + "/summary.csv"), f2(in_dir + "/summary_recomputed.csv");
    if (f1) {
        std::string a((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
        std::string b((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
        if (a != b) {
            std::cerr << "recomputed aggregates differ from summary.csv\n";
            return 1;
        }
        std::cout << "aggregates match summary.csv\n";
    }
    std::cout << "n_runs," << s.n_runs << "\n";
    std::cout << "violation_count," << s.violation_count << "\n";
    std::cout << "violation_fraction," << fmt(s.violation_fraction) << "\n";
    std::cout << "max_violation_depth_deg," << fmt(s.max_violation_depth * 180.0 / kPi)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained spacecraft slew simulator: potential-field guidance "
                 "with boundary-layer sliding-mode control on a reaction-wheel "
                 "pyramid"};
    app.require_subcommand(1);

    std::string config = "default";
    std::vector<std::string> sets;
    std::string out_dir;
    std::string in_dir;
    int runs = 100;
    std::uint64_t seed = 0;
    int workers = 4;
    bool rest_to_rest = false;
    bool as_json = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config,
                        "Scenario file path, or 'default' for the bundled profile");
        sub->add_option("--set", sets,
                        "Override a config value as section.key=value (repeatable)");
    };

    CLI::App* envelope = app.add_subcommand(
        "envelope", "Print cluster capability radii and the safe rate ceiling");
    add_common(envelope);

    CLI::App* gains = app.add_subcommand(
        "gains", "Print the closed-form gain synthesis report");
    add_common(gains);
    gains->add_flag("--json", as_json, "Emit JSON instead of CSV");

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run one closed-loop scenario and export telemetry");
    add_common(simulate);
    simulate->add_option("--out", out_dir, "Output directory for CSV and SVG files");

    CLI::App* campaign = app.add_subcommand(
        "campaign", "Run a randomized robustness campaign");
    add_common(campaign);
    campaign->add_option("--out", out_dir, "Output directory for reports");
    campaign->add_option("--runs", runs, "Number of randomized runs")
        ->check(CLI::PositiveNumber);
    CLI::Option* seed_opt =
        campaign->add_option("--seed", seed, "Campaign seed (default: run.seed)");
    campaign->add_option("--workers", workers, "Worker thread count")
        ->check(CLI::PositiveNumber);
    campaign->add_flag("--rest-to-rest", rest_to_rest,
                       "Keep the initial rate at its base value");

    CLI::App* report = app.add_subcommand(
        "report", "Recompute campaign aggregates from per-run rows");
    report->add_option("--in", in_dir, "Campaign output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (envelope->parsed()) return cmd_envelope(config, sets);
        if (gains->parsed()) return cmd_gains(config, sets, as_json);
        if (simulate->parsed()) return cmd_simulate(config, sets, out_dir);
        if (campaign->parsed())
            return cmd_campaign(config, sets, out_dir, runs, seed,
                                seed_opt->count() > 0, workers, rest_to_rest);
        if (report->parsed()) return cmd_report(in_dir);
    } catch (const RunFault& f) {
        std::cerr << "run fault: " << f.what() << "\n";
        return 2;
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
