#pragma once

#include <array>
#include <string>
#include <vector>

#include "slewsim/math.hpp"

namespace slewsim {

// One plant-rate sample: the state at t plus the actuation active over
// [t, t+dt). sigma is the instantaneous sliding variable; u is the held
// controller output.
struct TelemetryRecord {
    double t = 0;
    Quaternion q;
    Vec3 omega;
    Quaternion q_star;
    Vec3 omega_star;
    Vec3 sigma;
    Vec3 u;
    Vec3 tau_body;
    Vec4 tau_w;
    Vec4 h_w;
    std::array<double, 8> theta{};  // rad, per zone
    bool torque_saturated = false;
    bool momentum_saturated = false;
    bool sigma_exceeded = false;       // |sigma| > sigma_bar
    bool omega_star_exceeded = false;  // |omega*| > omega_bar
};

struct TelemetryLog {
    double dt = 0;
    int n_zones = 0;
    double theta_floor = 0;  // rad, smallest configured floor (plot band)
    double sigma_bar = 0;
    std::vector<TelemetryRecord> records;
};

// RFC-4180 CSV, header row, one row per plant step, %.17g floats.
void export_csv(const TelemetryLog& log, const std::string& path);

// Reads back a telemetry CSV produced by export_csv (testing aid).
TelemetryLog import_csv(const std::string& path);

// Self-contained SVG line plots: wheel torque/momentum, quaternion history,
// sliding variable, pointing margins and the boresight az/el trace.
void export_svg_plots(const TelemetryLog& log, const std::string& path_prefix,
                      const Vec3& m_hat_body);

// Generic polyline plot, exposed for the campaign band plots.
struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series,
                    const std::vector<double>& h_lines = {});

}  // namespace slewsim
