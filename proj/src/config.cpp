#include "slewsim/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "slewsim/errors.hpp"

namespace slewsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& value, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + item + "' in " + where);
        }
        if (pos != item.size())
            throw ConfigError("bad number '" + item + "' in " + where);
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty value in " + where);
    return out;
}

// Raw key/value store with consumption tracking so unknown keys surface.
class Reader {
public:
    void set(const std::string& section, const std::string& key, const std::string& value) {
        values_[section + "." + key] = value;
    }
    bool has(const std::string& section, const std::string& key) const {
        return values_.count(section + "." + key) > 0;
    }
    std::string raw(const std::string& section, const std::string& key) {
        const std::string path = section + "." + key;
        consumed_.insert(path);
        return values_.at(path);
    }
    double number(const std::string& section, const std::string& key, double fallback) {
        if (!has(section, key)) return fallback;
        return parse_numbers(raw(section, key), section + "." + key).at(0);
    }
    bool flag(const std::string& section, const std::string& key, bool fallback) {
        if (!has(section, key)) return fallback;
        const std::string v = trim(raw(section, key));
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("bad boolean '" + v + "' in " + section + "." + key);
    }
    Vec3 vec3(const std::string& section, const std::string& key, const Vec3& fallback) {
        if (!has(section, key)) return fallback;
        const auto v = parse_numbers(raw(section, key), section + "." + key);
        if (v.size() == 1) return {v[0], v[0], v[0]};
        if (v.size() != 3)
            throw ConfigError(section + "." + key + " needs 1 or 3 numbers");
        return {v[0], v[1], v[2]};
    }
    Mat3 mat3(const std::string& section, const std::string& key) {
        const auto v = parse_numbers(raw(section, key), section + "." + key);
        if (v.size() != 9)
            throw ConfigError(section + "." + key + " needs 9 numbers (row-major)");
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.m[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
        return m;
    }
    Quaternion quat(const std::string& section, const std::string& key,
                    const Quaternion& fallback) {
        if (!has(section, key)) return fallback;
        const auto v = parse_numbers(raw(section, key), section + "." + key);
        if (v.size() != 4)
            throw ConfigError(section + "." + key + " needs 4 numbers (scalar first)");
        return Quaternion::from_parts(v[0], {v[1], v[2], v[3]});
    }
    std::vector<std::string> zone_sections() const {
        std::set<std::string> names;
        for (const auto& [path, _] : values_) {
            const auto dot = path.rfind('.');
            const std::string section = path.substr(0, dot);
            if (section.rfind("zone.", 0) == 0) names.insert(section);
        }
        return {names.begin(), names.end()};
    }
    void reject_unconsumed() const {
        for (const auto& [path, _] : values_)
            if (!consumed_.count(path))
                throw ConfigError("unknown config key: " + path);
    }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

Reader parse_ini(const std::string& text) {
    Reader r;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty() || key.empty())
            throw ConfigError("key outside a section at line " + std::to_string(lineno));
        r.set(section, key, value);
    }
    return r;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!(duration > 0.0)) throw ConfigError("run.duration must be positive");
    if (!(plant_dt > 0.0)) throw ConfigError("rates.plant_dt must be positive");
    for (const auto& [name, period] :
         {std::pair<const char*, double>{"rates.smc_period", smc_period},
          std::pair<const char*, double>{"rates.apf_period", apf_period}}) {
        const double ratio = period / plant_dt;
        if (!(period > 0.0) || std::fabs(ratio - std::lround(ratio)) > 1e-9)
            throw ConfigError(std::string(name) + " must be a positive integer multiple of plant_dt");
    }
    if (zones.size() > 8) throw ConfigError("at most 8 forbidden zones are supported");
    if (std::fabs(m_hat_body.norm() - 1.0) > 1e-6)
        throw ConfigError("target.boresight must be a unit vector");
    if (zones_enabled && enforce_initial_margin) {
        const auto margins = pointing_margins(q0, m_hat_body, zones);
        for (std::size_t j = 0; j < margins.size(); ++j)
            if (margins[j].violated)
                throw ConfigError("initial attitude starts inside forbidden zone " +
                                  std::to_string(j + 1) +
                                  " (set run.enforce_initial_margin = false to override)");
    }
}

DerivedParams derive_params(const ScenarioConfig& cfg) {
    DerivedParams d{
        InertiaModel::make(cfg.I_star, cfg.I_star.abs() * cfg.uncertainty_fraction,
                           cfg.I_actual),
        RwCluster::make(cfg.alpha, cfg.beta, cfg.tau_w_max, cfg.h_w_max),
        0, 0, 0, {}, {}, {}, false};
    d.H_bar = envelope_radius(d.cluster, EnvelopeKind::momentum);
    d.tau_bar = envelope_radius(d.cluster, EnvelopeKind::torque);
    d.omega_bar = omega_max(d.H_bar, cfg.disturbance, d.inertia);
    d.apf = apf_params(d.omega_bar, d.tau_bar, d.inertia);

    double eps_floor_min = 1.0;
    for (const ForbiddenZone& z : cfg.zones)
        eps_floor_min = std::fmin(eps_floor_min, z.eps_floor);
    d.gains = gain_report(d.inertia, d.omega_bar, d.H_bar, d.tau_bar,
                          cfg.disturbance.d_bar, cfg.lambda, cfg.k,
                          d.apf.eps_e_bar, eps_floor_min);
    if (cfg.gamma > 0.0) {
        d.smc = SmcParams::make(cfg.lambda, cfg.gamma, cfg.sigma_bar, cfg.k,
                                d.gains.psi);
    } else {
        d.smc = synthesize_gains(d.inertia, d.omega_bar, d.H_bar, d.tau_bar,
                                 cfg.disturbance.d_bar, cfg.lambda, cfg.k,
                                 cfg.sigma_bar, d.apf.eps_e_bar, eps_floor_min);
        d.gamma_synthesized = true;
    }
    return d;
}

std::string default_profile_text() {
    return R"(# DEMETER-class microsatellite reorientation scenario
[inertia]
nominal = 30, -3, 0, -3, 30, -2, 0, -2, 40   # kg m^2, row-major
uncertainty_fraction = 0.2                    # bound = fraction * |nominal|

[cluster]
alpha_deg = 45
beta_deg = 35
wheel_torque_max = 5e-3       # N m
wheel_momentum_max = 0.12     # N m s

[disturbance]
bias = 1e-6                   # N m per axis
amplitude = 5e-5              # N m per axis
frequency = 1e-3              # rad/s
phase = 0
norm_bound = 8.7e-5           # N m, clamp on |d(t)|
d1_bound = 1e-6               # N m, secular bound in the momentum budget
d2_bound = 5e-5               # N m, sinusoidal bound in the momentum budget
orbit_period = 5400           # s

[zones]
enabled = true

[zone.1]
axis = -0.497, 0.713, -0.495
half_angle_deg = 15

[zone.2]
axis = 0.033, 0.984, -0.177
half_angle_deg = 15

[zone.3]
axis = -0.116, 0.843, 0.528
half_angle_deg = 15

[initial]
q0 = -0.306, 0.530, 0.660, -0.436
omega0 = 0, 0, 0

[target]
qd = 1, 0, 0, 0
boresight = 0.57735026918962584, 0.57735026918962584, 0.57735026918962584

[controller]
lambda = 0.01
k = 1.02
sigma_bar = 5e-4
gamma = 2e-4                  # explicit gain; set to 0 to synthesize

[run]
duration = 4000               # s
seed = 1
enforce_initial_margin = true
)";
}

ScenarioConfig load_config_text(
    const std::string& text,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    Reader r = parse_ini(text);
    for (const auto& [path, value] : overrides) {
        const auto dot = path.rfind('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
            throw ConfigError("override must look like section.key=value: " + path);
        r.set(path.substr(0, dot), path.substr(dot + 1), value);
    }

    ScenarioConfig cfg;
    cfg.I_star = r.mat3("inertia", "nominal");
    cfg.uncertainty_fraction = r.number("inertia", "uncertainty_fraction", 0.2);
    if (r.has("inertia", "actual"))
        cfg.I_actual = r.mat3("inertia", "actual");
    else
        cfg.I_actual = cfg.I_star;

    cfg.alpha = r.number("cluster", "alpha_deg", 45.0) * kDeg;
    cfg.beta = r.number("cluster", "beta_deg", 35.0) * kDeg;
    cfg.tau_w_max = r.number("cluster", "wheel_torque_max", 5e-3);
    cfg.h_w_max = r.number("cluster", "wheel_momentum_max", 0.12);

    cfg.disturbance.bias = r.vec3("disturbance", "bias", {1e-6, 1e-6, 1e-6});
    cfg.disturbance.amp = r.vec3("disturbance", "amplitude", {5e-5, 5e-5, 5e-5});
    cfg.disturbance.freq = r.number("disturbance", "frequency", 1e-3);
    cfg.disturbance.phase = r.number("disturbance", "phase", 0.0);
    cfg.disturbance.d_bar = r.number("disturbance", "norm_bound", 8.7e-5);
    cfg.disturbance.d1_bar = r.number("disturbance", "d1_bound", 1e-6);
    cfg.disturbance.d2_bar = r.number("disturbance", "d2_bound", 5e-5);
    cfg.disturbance.period = r.number("disturbance", "orbit_period", 5400.0);

    cfg.zones_enabled = r.flag("zones", "enabled", true);
    for (const std::string& section : r.zone_sections()) {
        const Vec3 axis = r.vec3(section, "axis", {0, 0, 1});
        const double half = r.number(section, "half_angle_deg", 15.0) * kDeg;
        cfg.zones.push_back(ForbiddenZone::make(axis, half));
    }

    cfg.q0 = r.quat("initial", "q0", Quaternion::identity());
    cfg.omega0 = r.vec3("initial", "omega0", {});
    cfg.q_d = r.quat("target", "qd", Quaternion::identity());
    cfg.m_hat_body = r.vec3("target", "boresight", {1, 0, 0}).normalized();

    cfg.lambda = r.number("controller", "lambda", 0.01);
    cfg.k = r.number("controller", "k", 1.02);
    cfg.sigma_bar = r.number("controller", "sigma_bar", 5e-4);
    cfg.gamma = r.number("controller", "gamma", 0.0);

    cfg.plant_dt = r.number("rates", "plant_dt", 0.01);
    cfg.smc_period = r.number("rates", "smc_period", 0.05);
    cfg.apf_period = r.number("rates", "apf_period", 1.0);

    cfg.duration = r.number("run", "duration", 2500.0);
    cfg.seed = static_cast<std::uint64_t>(r.number("run", "seed", 1.0));
    cfg.enforce_initial_margin = r.flag("run", "enforce_initial_margin", true);

    r.reject_unconsumed();
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config_file(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    if (path == "default") return load_config_text(default_profile_text(), overrides);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str(), overrides);
}

std::pair<std::string, std::string> parse_override(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
        throw ConfigError("override must look like section.key=value: " + spec);
    return {trim(spec.substr(0, eq)), trim(spec.substr(eq + 1))};
}

}  // namespace slewsim
