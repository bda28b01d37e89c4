#include "slewsim/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slewsim/errors.hpp"

namespace slewsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

}  // namespace

void export_csv(const TelemetryLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);

    std::string header =
        "t,q_eta,q_x,q_y,q_z,omega_x,omega_y,omega_z,"
        "qs_eta,qs_x,qs_y,qs_z,omegas_x,omegas_y,omegas_z,"
        "sigma_x,sigma_y,sigma_z,u_x,u_y,u_z,tau_x,tau_y,tau_z,"
        "tauw_1,tauw_2,tauw_3,tauw_4,hw_1,hw_2,hw_3,hw_4";
    for (int j = 0; j < log.n_zones; ++j) header += ",theta_" + std::to_string(j + 1);
    header += ",torque_sat,momentum_sat,sigma_exceeded,omega_star_exceeded";
    out << header << "\r\n";

    for (const TelemetryRecord& r : log.records) {
        std::string row = fmt(r.t);
        auto push = [&row](double v) { row += "," + fmt(v); };
        push(r.q.eta); push(r.q.eps.x); push(r.q.eps.y); push(r.q.eps.z);
        push(r.omega.x); push(r.omega.y); push(r.omega.z);
        push(r.q_star.eta); push(r.q_star.eps.x); push(r.q_star.eps.y); push(r.q_star.eps.z);
        push(r.omega_star.x); push(r.omega_star.y); push(r.omega_star.z);
        push(r.sigma.x); push(r.sigma.y); push(r.sigma.z);
        push(r.u.x); push(r.u.y); push(r.u.z);
        push(r.tau_body.x); push(r.tau_body.y); push(r.tau_body.z);
        for (int i = 0; i < 4; ++i) push(r.tau_w[i]);
        for (int i = 0; i < 4; ++i) push(r.h_w[i]);
        for (int j = 0; j < log.n_zones; ++j) push(r.theta[static_cast<std::size_t>(j)]);
        row += r.torque_saturated ? ",1" : ",0";
        row += r.momentum_saturated ? ",1" : ",0";
        row += r.sigma_exceeded ? ",1" : ",0";
        row += r.omega_star_exceeded ? ",1" : ",0";
        out << row << "\r\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

TelemetryLog import_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty telemetry file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv(line);
    int n_zones = 0;
    for (const std::string& h : header)
        if (h.rfind("theta_", 0) == 0) ++n_zones;

    TelemetryLog log;
    log.n_zones = n_zones;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != header.size()) throw IoError("ragged telemetry row in " + path);
        std::size_t i = 0;
        auto next = [&] { return std::stod(f.at(i++)); };
        TelemetryRecord r;
        r.t = next();
        r.q.eta = next(); r.q.eps = {next(), next(), next()};
        r.omega = {next(), next(), next()};
        r.q_star.eta = next(); r.q_star.eps = {next(), next(), next()};
        r.omega_star = {next(), next(), next()};
        r.sigma = {next(), next(), next()};
        r.u = {next(), next(), next()};
        r.tau_body = {next(), next(), next()};
        for (int w = 0; w < 4; ++w) r.tau_w[w] = next();
        for (int w = 0; w < 4; ++w) r.h_w[w] = next();
        for (int j = 0; j < n_zones; ++j) r.theta[static_cast<std::size_t>(j)] = next();
        r.torque_saturated = next() != 0.0;
        r.momentum_saturated = next() != 0.0;
        r.sigma_exceeded = next() != 0.0;
        r.omega_star_exceeded = next() != 0.0;
        log.records.push_back(r);
    }
    if (log.records.size() >= 2) log.dt = log.records[1].t - log.records[0].t;
    return log;
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series,
                    const std::vector<double>& h_lines) {
    const int width = 960, height = 540;
    const int ml = 80, mr = 170, mt = 50, mb = 60;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const PlotSeries& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            } else {
                xmin = std::fmin(xmin, s.x[i]); xmax = std::fmax(xmax, s.x[i]);
                ymin = std::fmin(ymin, s.y[i]); ymax = std::fmax(ymax, s.y[i]);
            }
        }
    for (double h : h_lines) { ymin = std::fmin(ymin, h); ymax = std::fmax(ymax, h); }
    if (xmax - xmin < 1e-300) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-300) { ymax = ymin + 1.0; ymin -= 1.0; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad; ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // Axes box and ticks.
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        char xb[32], yb[32];
        std::snprintf(xb, sizeof xb, "%.4g", xv);
        std::snprintf(yb, sizeof yb, "%.4g", yv);
        out << "<line x1=\"" << px(xv) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(xv)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(xv) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << xb << "</text>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml
            << "\" y2=\"" << py(yv) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << yb << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << x_label << "</text>\n";
    out << "<text x=\"20\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 20 " << mt + ph / 2 << ")\">" << y_label << "</text>\n";

    for (double h : h_lines)
        out << "<line x1=\"" << ml << "\" y1=\"" << py(h) << "\" x2=\"" << ml + pw
            << "\" y2=\"" << py(h)
            << "\" stroke=\"#999999\" stroke-dasharray=\"6,4\"/>\n";

    int ci = 0;
    for (const PlotSeries& s : series) {
        const char* color = kColors[ci % 8];
        // Decimate long series; an SVG does not need 250k points.
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 4000);
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); i += stride)
            out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        if (!s.x.empty())
            out << px(s.x.back()) << "," << py(s.y.back());
        out << "\"/>\n";
        out << "<text x=\"" << ml + pw + 10 << "\" y=\"" << mt + 16 + 18 * ci
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
            << s.name << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path);
}

void export_svg_plots(const TelemetryLog& log, const std::string& path_prefix,
                      const Vec3& m_hat_body) {
    if (log.records.empty()) throw IoError("telemetry log is empty");
    const std::size_t n = log.records.size();
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = log.records[i].t;

    auto series_of = [&](const std::string& name, auto&& get) {
        PlotSeries s;
        s.name = name;
        s.x = t;
        s.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) s.y[i] = get(log.records[i]);
        return s;
    };

    {
        std::vector<PlotSeries> ss;
        for (int w = 0; w < 4; ++w)
            ss.push_back(series_of("wheel " + std::to_string(w + 1),
                                   [w](const TelemetryRecord& r) { return r.tau_w[w]; }));
        const double cap = 0.0;
        (void)cap;
        write_svg_plot(path_prefix + "_wheel_torque.svg", "Reaction wheel torques",
                       "t [s]", "tau_w [N m]", ss);
    }
    {
        std::vector<PlotSeries> ss;
        for (int w = 0; w < 4; ++w)
            ss.push_back(series_of("wheel " + std::to_string(w + 1),
                                   [w](const TelemetryRecord& r) { return r.h_w[w]; }));
        write_svg_plot(path_prefix + "_wheel_momentum.svg", "Reaction wheel momenta",
                       "t [s]", "h_w [N m s]", ss);
    }
    {
        std::vector<PlotSeries> ss{
            series_of("eta", [](const TelemetryRecord& r) { return r.q.eta; }),
            series_of("eps_x", [](const TelemetryRecord& r) { return r.q.eps.x; }),
            series_of("eps_y", [](const TelemetryRecord& r) { return r.q.eps.y; }),
            series_of("eps_z", [](const TelemetryRecord& r) { return r.q.eps.z; })};
        write_svg_plot(path_prefix + "_quaternion.svg", "Attitude quaternion", "t [s]",
                       "q", ss);
    }
    {
        std::vector<PlotSeries> ss{
            series_of("sigma_x", [](const TelemetryRecord& r) { return r.sigma.x; }),
            series_of("sigma_y", [](const TelemetryRecord& r) { return r.sigma.y; }),
            series_of("sigma_z", [](const TelemetryRecord& r) { return r.sigma.z; })};
        write_svg_plot(path_prefix + "_sigma.svg", "Sliding variable", "t [s]", "sigma",
                       ss, {log.sigma_bar, -log.sigma_bar});
    }
    if (log.n_zones > 0) {
        std::vector<PlotSeries> ss;
        for (int j = 0; j < log.n_zones; ++j)
            ss.push_back(series_of("zone " + std::to_string(j + 1),
                                   [j](const TelemetryRecord& r) {
                                       return r.theta[static_cast<std::size_t>(j)] * 180.0 / kPi;
                                   }));
        write_svg_plot(path_prefix + "_pointing.svg", "Boresight-to-zone angles",
                       "t [s]", "theta_j [deg]", ss, {log.theta_floor * 180.0 / kPi});
    }
    {
        // Azimuth/elevation trace of the boresight on the celestial sphere.
        PlotSeries trace;
        trace.name = "boresight";
        trace.x.resize(n);
        trace.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 m = rotation_matrix(log.records[i].q).transpose() * m_hat_body;
            trace.x[i] = std::atan2(m.y, m.x) * 180.0 / kPi;
            trace.y[i] = std::asin(std::clamp(m.z, -1.0, 1.0)) * 180.0 / kPi;
        }
        write_svg_plot(path_prefix + "_boresight.svg", "Boresight trace",
                       "azimuth [deg]", "elevation [deg]", {trace});
    }
}

}  // namespace slewsim
