#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "slewsim/campaign.hpp"
#include "slewsim/sim_loop.hpp"

namespace py = pybind11;
using namespace slewsim;

namespace {

using Quat = std::array<double, 4>;
using V3 = std::array<double, 3>;

Quaternion to_quat(const Quat& q) {
    return Quaternion::from_parts(q[0], {q[1], q[2], q[3]});
}

Vec3 to_vec(const V3& v) { return {v[0], v[1], v[2]}; }

V3 from_vec(const Vec3& v) { return {v.x, v.y, v.z}; }

std::vector<std::pair<std::string, std::string>> to_overrides(
    const std::vector<std::pair<std::string, std::string>>& sets) {
    return sets;
}

py::dict metrics_dict(const Metrics& m, int n_zones) {
    py::dict d;
    d["reaching_time"] = m.reaching_time;
    d["max_sigma_after_reach"] = m.max_sigma_after_reach;
    d["settling_time"] = m.settling_time;
    py::list thetas;
    for (int j = 0; j < n_zones; ++j) thetas.append(m.min_theta[static_cast<std::size_t>(j)]);
    d["min_theta"] = thetas;
    d["min_theta_global"] = m.min_theta_global;
    d["min_theta_hat_margin"] = m.min_theta_hat_margin;
    d["violated"] = m.violated;
    d["max_violation_depth"] = m.max_violation_depth;
    d["max_abs_tau_w"] = m.max_abs_tau_w;
    d["max_abs_h_w"] = m.max_abs_h_w;
    d["steady_tracking_error"] = m.steady_tracking_error;
    d["steady_vec_error"] = m.steady_vec_error;
    d["final_eta_d"] = m.final_eta_d;
    d["max_omega"] = m.max_omega;
    d["max_omega_star"] = m.max_omega_star;
    d["omega_star_exceeded"] = m.omega_star_exceeded;
    d["torque_ever_saturated"] = m.torque_ever_saturated;
    d["momentum_ever_saturated"] = m.momentum_ever_saturated;
    d["faulted"] = m.faulted;
    d["fault_time"] = m.fault_time;
    d["fault_message"] = m.fault_message;
    return d;
}

py::dict derive_dict(const ScenarioConfig& cfg) {
    const DerivedParams d = derive_params(cfg);
    py::dict out;
    out["H_bar"] = d.H_bar;
    out["tau_bar"] = d.tau_bar;
    out["omega_bar"] = d.omega_bar;
    out["alpha1"] = d.apf.alpha1;
    out["alpha2"] = d.apf.alpha2;
    out["eps_e_bar"] = d.apf.eps_e_bar;
    out["psi"] = d.gains.psi;
    out["gamma_used"] = d.smc.gamma;
    out["gamma_closed_form"] = d.gains.gamma;
    out["gamma_synthesized"] = d.gamma_synthesized;
    out["ceiling"] = d.gains.ceiling;
    out["k_max"] = d.gains.k_max;
    out["torque_feasible"] = d.gains.torque_feasible;
    out["k_admissible"] = d.gains.k_admissible;
    out["delta_hat_norm"] = d.gains.delta_hat_norm;
    out["delta_hat_I_norm1"] = d.gains.delta_hat_I_norm1;
    return out;
}

}  // namespace

PYBIND11_MODULE(slewsim, m) {
    m.doc() = "Constrained spacecraft slew simulation: potential-field guidance "
              "with boundary-layer sliding-mode control on a reaction-wheel "
              "pyramid";

    py::register_exception<SimError>(m, "SimError");

    // Quaternion and vector algebra (scalar-first quaternions as 4-lists).
    m.def("quat_mul", [](const Quat& a, const Quat& b) {
        return quat_mul(to_quat(a), to_quat(b)).as_array();
    }, py::arg("a"), py::arg("b"), "Hamilton product of two unit quaternions");
    m.def("quat_conj", [](const Quat& q) { return quat_conj(to_quat(q)).as_array(); },
          py::arg("q"));
    m.def("quat_error", [](const Quat& q_ref, const Quat& q) {
        return quat_error(to_quat(q_ref), to_quat(q)).as_array();
    }, py::arg("q_ref"), py::arg("q"), "conj(q_ref) * q");
    m.def("rotation_matrix", [](const Quat& q) {
        const Mat3 r = rotation_matrix(to_quat(q));
        std::array<V3, 3> rows;
        for (int i = 0; i < 3; ++i) rows[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1), r(i, 2)};
        return rows;
    }, py::arg("q"), "Inertial-to-body attitude matrix");
    m.def("shortest_rotation", [](const V3& a, const V3& b) {
        return shortest_rotation(to_vec(a).normalized(), to_vec(b).normalized()).as_array();
    }, py::arg("m"), py::arg("n"), "Quaternion of the shortest rotation m -> n");
    m.def("sign_plus", &sign_plus, py::arg("x"));

    // Cluster capability analysis.
    m.def("z_matrix", [](double alpha, double beta) {
        const Mat3x4 z = z_matrix(alpha, beta);
        std::array<std::array<double, 4>, 3> rows;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 4; ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = z(i, j);
        return rows;
    }, py::arg("alpha"), py::arg("beta"));
    m.def("envelope_radius",
          [](double alpha, double beta, double tau_w_max, double h_w_max,
             const std::string& kind) {
              const RwCluster c = RwCluster::make(alpha, beta, tau_w_max, h_w_max);
              if (kind == "momentum") return envelope_radius(c, EnvelopeKind::momentum);
              if (kind == "torque") return envelope_radius(c, EnvelopeKind::torque);
              throw SimError("kind must be 'momentum' or 'torque'");
          },
          py::arg("alpha"), py::arg("beta"), py::arg("tau_w_max"),
          py::arg("h_w_max"), py::arg("kind"),
          "Inscribed-sphere radius of the cluster capability zonotope");

    // Multi-zone spacing results.
    m.def("theta_min", &theta_min, py::arg("n_zones"), py::arg("theta_floor"));
    m.def("theta_hat", &theta_hat, py::arg("theta_js"), py::arg("theta_floor"),
          py::arg("j_excluded"));

    // Scenario pipeline.
    m.def("default_profile", &default_profile_text,
          "Bundled reference scenario as config text");
    m.def("derive",
          [](const std::string& config_text,
             const std::vector<std::pair<std::string, std::string>>& overrides) {
              return derive_dict(load_config_text(config_text, to_overrides(overrides)));
          },
          py::arg("config_text"),
          py::arg("overrides") = std::vector<std::pair<std::string, std::string>>{},
          "Derived capability figures and gains for a scenario");
    m.def("simulate",
          [](const std::string& config_text,
             const std::vector<std::pair<std::string, std::string>>& overrides,
             const std::string& out_dir) {
              const ScenarioConfig cfg =
                  load_config_text(config_text, to_overrides(overrides));
              const RunResult r = run_scenario(cfg);
              if (!out_dir.empty()) {
                  export_csv(r.log, out_dir + "/telemetry.csv");
                  export_svg_plots(r.log, out_dir + "/fig", cfg.m_hat_body);
              }
              return metrics_dict(r.metrics, r.log.n_zones);
          },
          py::arg("config_text"),
          py::arg("overrides") = std::vector<std::pair<std::string, std::string>>{},
          py::arg("out_dir") = std::string{},
          "Run one closed-loop scenario and return its metrics");
    m.def("run_campaign",
          [](const std::string& config_text,
             const std::vector<std::pair<std::string, std::string>>& overrides,
             int n_runs, std::uint64_t seed, int workers, bool rest_to_rest,
             const std::string& out_dir) {
              CampaignSpec spec;
              spec.base = load_config_text(config_text, to_overrides(overrides));
              spec.n_runs = n_runs;
              spec.seed = seed;
              spec.rest_to_rest = rest_to_rest;
              const CampaignReport rep = run_campaign(spec, workers);
              if (!out_dir.empty()) {
                  report_csv(rep, out_dir);
                  report_svg(rep, out_dir);
              }
              py::dict d;
              d["n_runs"] = rep.summary.n_runs;
              d["fault_count"] = rep.summary.fault_count;
              d["violation_count"] = rep.summary.violation_count;
              d["violation_fraction"] = rep.summary.violation_fraction;
              d["max_violation_depth"] = rep.summary.max_violation_depth;
              d["min_theta_overall"] = rep.summary.min_theta_overall;
              d["convergence_rate"] = rep.summary.convergence_rate;
              py::list hist;
              for (int c : rep.summary.depth_histogram) hist.append(c);
              d["depth_histogram"] = hist;
              return d;
          },
          py::arg("config_text"),
          py::arg("overrides") = std::vector<std::pair<std::string, std::string>>{},
          py::arg("n_runs") = 100, py::arg("seed") = 0, py::arg("workers") = 4,
          py::arg("rest_to_rest") = false, py::arg("out_dir") = std::string{},
          "Randomized robustness campaign; returns the aggregate summary");
}
