#include "slewsim/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "slewsim/errors.hpp"
#include "slewsim/rng.hpp"
#include "slewsim/telemetry.hpp"

namespace slewsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 sample_in_cone(Rng& rng, const Vec3& axis, double half_angle) {
    // Uniform over the spherical cap around axis.
    const double cos_t = rng.uniform(std::cos(half_angle), 1.0);
    const double sin_t = std::sqrt(std::fmax(0.0, 1.0 - cos_t * cos_t));
    const double az = rng.uniform(0.0, 2.0 * kPi);
    // Orthonormal frame around the axis.
    const Vec3 n = axis.normalized();
    const Vec3 helper = std::fabs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 u = n.cross(helper).normalized();
    const Vec3 v = n.cross(u);
    return (n * cos_t + (u * std::cos(az) + v * std::sin(az)) * sin_t).normalized();
}

Mat3 sample_inertia(Rng& rng, const Mat3& I_star, double frac) {
    const int idx[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
    for (int attempt = 0; attempt < 100; ++attempt) {
        Mat3 delta = Mat3::zero();
        for (auto& ij : idx) {
            const double bound = frac * std::fabs(I_star(ij[0], ij[1]));
            const double v = rng.uniform(-bound, bound);
            delta(ij[0], ij[1]) = v;
            delta(ij[1], ij[0]) = v;
        }
        const Mat3 candidate = I_star + delta;
        if (sym_eigenvalues(candidate)[0] > 0.0) return candidate;
    }
    throw RejectionExhausted("no SPD inertia sample found in 100 tries");
}

ScenarioConfig perturb_one(const CampaignSpec& spec, int index) {
    Rng rng(spec.seed, static_cast<std::uint64_t>(index) + 1);
    for (int attempt = 0; attempt < 100; ++attempt) {
        ScenarioConfig cfg = spec.base;
        cfg.seed = spec.seed ^ static_cast<std::uint64_t>(index);

        // Initial state. Zero ranges leave the base values bit-identical.
        if (spec.ranges.q0_component_frac > 0.0) {
            Quaternion q0 = spec.base.q0;
            q0.eta *= 1.0 + rng.uniform(-spec.ranges.q0_component_frac,
                                        spec.ranges.q0_component_frac);
            for (int i = 0; i < 3; ++i)
                q0.eps[i] *= 1.0 + rng.uniform(-spec.ranges.q0_component_frac,
                                               spec.ranges.q0_component_frac);
            cfg.q0 = q0.normalized();
        }
        if (!spec.rest_to_rest && spec.ranges.omega0_abs > 0.0)
            for (int i = 0; i < 3; ++i)
                cfg.omega0[i] = spec.base.omega0[i] +
                                rng.uniform(-spec.ranges.omega0_abs, spec.ranges.omega0_abs);

        // Zone directions inside the cone around their nominal axes.
        if (spec.ranges.zone_cone > 0.0)
            for (ForbiddenZone& z : cfg.zones)
                z = ForbiddenZone::make(sample_in_cone(rng, z.n_hat, spec.ranges.zone_cone),
                                        z.theta_floor);

        // Inertia within the elementwise box, SPD enforced by resampling.
        cfg.I_actual = sample_inertia(rng, spec.base.I_star, spec.ranges.inertia_frac);

        if (spec.ranges.perturb_disturbance) {
            cfg.disturbance.phase = rng.uniform(0.0, 2.0 * kPi);
            for (int i = 0; i < 3; ++i) {
                const double s = rng.sign();
                cfg.disturbance.bias[i] *= s;
                cfg.disturbance.amp[i] *= s;
            }
        }

        // The guidance guarantees apply only when the boresight starts
        // outside every (perturbed) zone; redraw the layout otherwise.
        if (cfg.zones_enabled && cfg.enforce_initial_margin) {
            bool ok = true;
            for (const PointingMargin& pm :
                 pointing_margins(cfg.q0, cfg.m_hat_body, cfg.zones))
                ok = ok && !pm.violated;
            if (!ok) continue;
        }
        return cfg;
    }
    throw RejectionExhausted("no valid initial-margin layout found in 100 tries");
}

struct BandAccumulator {
    bool initialized = false;
    CampaignBands bands;

    void fold(const TelemetryLog& log, int stride) {
        std::size_t m = 0;
        for (std::size_t i = 0; i < log.records.size(); i += static_cast<std::size_t>(stride)) ++m;
        if (!initialized) {
            bands.t.reserve(m);
            for (std::size_t i = 0; i < log.records.size(); i += static_cast<std::size_t>(stride))
                bands.t.push_back(log.records[i].t);
            auto init = [m](std::vector<double>& lo, std::vector<double>& hi) {
                lo.assign(m, 1e300);
                hi.assign(m, -1e300);
            };
            init(bands.eta_min, bands.eta_max);
            init(bands.qx_min, bands.qx_max);
            init(bands.qy_min, bands.qy_max);
            init(bands.qz_min, bands.qz_max);
            init(bands.tauw_min, bands.tauw_max);
            init(bands.hw_min, bands.hw_max);
            init(bands.theta_min, bands.theta_max);
            initialized = true;
        }
        std::size_t j = 0;
        for (std::size_t i = 0; i < log.records.size() && j < bands.t.size();
             i += static_cast<std::size_t>(stride), ++j) {
            const TelemetryRecord& r = log.records[i];
            auto fold1 = [](std::vector<double>& lo, std::vector<double>& hi,
                            std::size_t at, double v) {
                lo[at] = std::fmin(lo[at], v);
                hi[at] = std::fmax(hi[at], v);
            };
            fold1(bands.eta_min, bands.eta_max, j, r.q.eta);
            fold1(bands.qx_min, bands.qx_max, j, r.q.eps.x);
            fold1(bands.qy_min, bands.qy_max, j, r.q.eps.y);
            fold1(bands.qz_min, bands.qz_max, j, r.q.eps.z);
            for (int w = 0; w < 4; ++w) {
                fold1(bands.tauw_min, bands.tauw_max, j, r.tau_w[w]);
                fold1(bands.hw_min, bands.hw_max, j, r.h_w[w]);
            }
            double th = kPi;
            for (int z = 0; z < log.n_zones; ++z)
                th = std::fmin(th, r.theta[static_cast<std::size_t>(z)]);
            fold1(bands.theta_min, bands.theta_max, j, th);
        }
    }
};

double run_floor(const ScenarioConfig& cfg) {
    double floor = 0.0;
    for (const ForbiddenZone& z : cfg.zones) floor = std::fmax(floor, z.theta_floor);
    return floor;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int depth_bin(bool violated, double depth_rad) {
    if (!violated) return 0;
    const double deg = depth_rad * 180.0 / kPi;
    if (deg <= 0.1) return 1;
    if (deg <= 0.25) return 2;
    if (deg <= 0.5) return 3;
    if (deg <= 1.0) return 4;
    return 5;
}

}  // namespace

std::vector<ScenarioConfig> generate_runs(const CampaignSpec& spec) {
    if (spec.n_runs < 1) throw SimError("campaign needs at least one run");
    std::vector<ScenarioConfig> out;
    out.reserve(static_cast<std::size_t>(spec.n_runs));
    for (int i = 0; i < spec.n_runs; ++i) out.push_back(perturb_one(spec, i));
    return out;
}

CampaignSummary summarize(const std::vector<RunOutcome>& runs, std::uint64_t seed) {
    CampaignSummary s;
    s.n_runs = static_cast<int>(runs.size());
    s.seed = seed;
    s.min_theta_overall = kPi;
    int converged = 0;
    for (const RunOutcome& r : runs) {
        if (r.metrics.faulted) ++s.fault_count;
        if (r.counted_violated) {
            ++s.violation_count;
            s.max_violation_depth = std::fmax(s.max_violation_depth, r.counted_depth);
        }
        if (!r.metrics.faulted)
            s.min_theta_overall = std::fmin(s.min_theta_overall, r.metrics.min_theta_global);
        if (r.converged) ++converged;
        ++s.depth_histogram[static_cast<std::size_t>(
            depth_bin(r.counted_violated, r.counted_depth))];
    }
    s.violation_fraction =
        runs.empty() ? 0.0 : static_cast<double>(s.violation_count) / static_cast<double>(runs.size());
    s.convergence_rate =
        runs.empty() ? 0.0 : static_cast<double>(converged) / static_cast<double>(runs.size());
    return s;
}

CampaignReport run_campaign(const CampaignSpec& spec, int workers) {
    const std::vector<ScenarioConfig> configs = generate_runs(spec);
    const int n = static_cast<int>(configs.size());
    std::vector<RunOutcome> outcomes(static_cast<std::size_t>(n));
    std::vector<TelemetryLog> logs(static_cast<std::size_t>(n));

    workers = std::max(1, workers);
    std::atomic<int> cursor{0};
    auto work = [&] {
        for (;;) {
            const int i = cursor.fetch_add(1);
            if (i >= n) return;
            const ScenarioConfig& cfg = configs[static_cast<std::size_t>(i)];
            RunResult res = run_scenario_collecting(cfg);
            RunOutcome& out = outcomes[static_cast<std::size_t>(i)];
            out.index = i;
            out.sub_seed = cfg.seed;
            out.metrics = res.metrics;
            if (res.metrics.faulted) {
                // Conservative accounting: a faulted run counts as a
                // violation at the full cone depth.
                out.counted_violated = true;
                out.counted_depth = run_floor(cfg);
                out.converged = false;
            } else {
                out.counted_violated = res.metrics.violated;
                out.counted_depth = res.metrics.max_violation_depth;
                out.converged = res.metrics.steady_tracking_error <=
                                accuracy_bound(res.derived.smc);
            }
            // Keep only the 1 Hz band samples; drop the full log.
            logs[static_cast<std::size_t>(i)] = std::move(res.log);
            const int stride = std::max(
                1, static_cast<int>(std::lround(cfg.apf_period / cfg.plant_dt)));
            TelemetryLog decimated;
            decimated.dt = cfg.plant_dt * stride;
            decimated.n_zones = logs[static_cast<std::size_t>(i)].n_zones;
            for (std::size_t r = 0; r < logs[static_cast<std::size_t>(i)].records.size();
                 r += static_cast<std::size_t>(stride))
                decimated.records.push_back(logs[static_cast<std::size_t>(i)].records[r]);
            logs[static_cast<std::size_t>(i)] = std::move(decimated);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();

    CampaignReport report;
    report.runs = std::move(outcomes);
    report.summary = summarize(report.runs, spec.seed);
    BandAccumulator acc;
    for (const TelemetryLog& log : logs)
        if (!log.records.empty()) acc.fold(log, 1);
    report.bands = std::move(acc.bands);
    return report;
}

void report_csv(const CampaignReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_summary_csv(report.summary, dir + "/summary.csv");

    {
        std::ofstream out(dir + "/runs.csv");
        if (!out) throw IoError("cannot open for writing: " + dir + "/runs.csv");
        out << "run,sub_seed,faulted,fault_time,counted_violated,depth_rad,"
               "min_theta_rad,theta_hat_margin_rad,reaching_time,"
               "max_sigma_after_reach,max_abs_tau_w,max_abs_h_w,"
               "steady_tracking_error,steady_vec_error,final_eta_d,converged\r\n";
        for (const RunOutcome& r : report.runs) {
            out << r.index << "," << r.sub_seed << "," << (r.metrics.faulted ? 1 : 0)
                << "," << fmt(r.metrics.fault_time) << ","
                << (r.counted_violated ? 1 : 0) << "," << fmt(r.counted_depth) << ","
                << fmt(r.metrics.min_theta_global) << ","
                << fmt(r.metrics.min_theta_hat_margin) << ","
                << fmt(r.metrics.reaching_time) << ","
                << fmt(r.metrics.max_sigma_after_reach) << ","
                << fmt(r.metrics.max_abs_tau_w) << "," << fmt(r.metrics.max_abs_h_w)
                << "," << fmt(r.metrics.steady_tracking_error) << ","
                << fmt(r.metrics.steady_vec_error) << "," << fmt(r.metrics.final_eta_d)
                << "," << (r.converged ? 1 : 0) << "\r\n";
        }
    }
    {
        std::ofstream out(dir + "/bands.csv");
        if (!out) throw IoError("cannot open for writing: " + dir + "/bands.csv");
        out << "t,eta_min,eta_max,qx_min,qx_max,qy_min,qy_max,qz_min,qz_max,"
               "tauw_min,tauw_max,hw_min,hw_max,theta_min,theta_max\r\n";
        const CampaignBands& b = report.bands;
        for (std::size_t i = 0; i < b.t.size(); ++i) {
            out << fmt(b.t[i]) << "," << fmt(b.eta_min[i]) << "," << fmt(b.eta_max[i])
                << "," << fmt(b.qx_min[i]) << "," << fmt(b.qx_max[i]) << ","
                << fmt(b.qy_min[i]) << "," << fmt(b.qy_max[i]) << ","
                << fmt(b.qz_min[i]) << "," << fmt(b.qz_max[i]) << ","
                << fmt(b.tauw_min[i]) << "," << fmt(b.tauw_max[i]) << ","
                << fmt(b.hw_min[i]) << "," << fmt(b.hw_max[i]) << ","
                << fmt(b.theta_min[i]) << "," << fmt(b.theta_max[i]) << "\r\n";
        }
    }
}

void write_summary_csv(const CampaignSummary& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "n_runs,seed,fault_count,violation_count,violation_fraction,"
           "max_violation_depth_rad,min_theta_overall_rad,convergence_rate,"
           "hist_none,hist_0p1deg,hist_0p25deg,hist_0p5deg,hist_1deg,hist_over1deg\r\n";
    out << s.n_runs << "," << s.seed << "," << s.fault_count << ","
        << s.violation_count << "," << fmt(s.violation_fraction) << ","
        << fmt(s.max_violation_depth) << "," << fmt(s.min_theta_overall) << ","
        << fmt(s.convergence_rate);
    for (int c : s.depth_histogram) out << "," << c;
    out << "\r\n";
    if (!out) throw IoError("write failed: " + path);
}

void report_svg(const CampaignReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const CampaignBands& b = report.bands;
    if (b.t.empty()) return;
    auto band = [&](const std::string& name, const std::vector<double>& lo,
                    const std::vector<double>& hi) {
        return std::vector<PlotSeries>{{name + " min", b.t, lo}, {name + " max", b.t, hi}};
    };
    auto quat = band("eta", b.eta_min, b.eta_max);
    auto qx = band("qx", b.qx_min, b.qx_max);
    quat.insert(quat.end(), qx.begin(), qx.end());
    auto qy = band("qy", b.qy_min, b.qy_max);
    quat.insert(quat.end(), qy.begin(), qy.end());
    auto qz = band("qz", b.qz_min, b.qz_max);
    quat.insert(quat.end(), qz.begin(), qz.end());
    write_svg_plot(dir + "/band_quaternion.svg", "Quaternion envelope over runs",
                   "t [s]", "q", quat);
    write_svg_plot(dir + "/band_wheel_torque.svg", "Wheel torque envelope over runs",
                   "t [s]", "tau_w [N m]", band("tau_w", b.tauw_min, b.tauw_max));
    write_svg_plot(dir + "/band_wheel_momentum.svg",
                   "Wheel momentum envelope over runs", "t [s]", "h_w [N m s]",
                   band("h_w", b.hw_min, b.hw_max));
    std::vector<double> lo_deg(b.theta_min.size()), hi_deg(b.theta_max.size());
    for (std::size_t i = 0; i < b.theta_min.size(); ++i) {
        lo_deg[i] = b.theta_min[i] * 180.0 / kPi;
        hi_deg[i] = b.theta_max[i] * 180.0 / kPi;
    }
    write_svg_plot(dir + "/band_pointing.svg",
                   "Minimum zone distance envelope over runs", "t [s]",
                   "min theta [deg]", band("min theta", lo_deg, hi_deg));
}

std::vector<RunOutcome> load_runs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty runs file: " + path);
    std::vector<RunOutcome> out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string item;
        std::vector<std::string> f;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (f.size() != 16) throw IoError("ragged row in " + path);
        RunOutcome r;
        r.index = std::stoi(f[0]);
        r.sub_seed = std::stoull(f[1]);
        r.metrics.faulted = f[2] == "1";
        r.metrics.fault_time = std::stod(f[3]);
        r.counted_violated = f[4] == "1";
        r.counted_depth = std::stod(f[5]);
        r.metrics.min_theta_global = std::stod(f[6]);
        r.metrics.min_theta_hat_margin = std::stod(f[7]);
        r.metrics.reaching_time = std::stod(f[8]);
        r.metrics.max_sigma_after_reach = std::stod(f[9]);
        r.metrics.max_abs_tau_w = std::stod(f[10]);
        r.metrics.max_abs_h_w = std::stod(f[11]);
        r.metrics.steady_tracking_error = std::stod(f[12]);
        r.metrics.steady_vec_error = std::stod(f[13]);
        r.metrics.final_eta_d = std::stod(f[14]);
        r.converged = f[15] == "1";
        out.push_back(r);
    }
    return out;
}

}  // namespace slewsim
