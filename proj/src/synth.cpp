#include "grating/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace grating {

namespace {

std::vector<double> draw_normal(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = dist(rng);
    return v;
}

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::string component_name(Component c) {
    switch (c) {
        case Component::PlaneOnly: return "plane";
        case Component::EvanescentOnly: return "evanescent";
        case Component::Superposition: return "superposition";
    }
    return "superposition";
}

Component component_from_name(const std::string& s) {
    if (s == "plane") return Component::PlaneOnly;
    if (s == "evanescent") return Component::EvanescentOnly;
    if (s == "superposition") return Component::Superposition;
    throw ConfigError("measurement file: unknown components value '" + s + "'");
}

}  // namespace

NearFieldData generate(const GratingProfile& profile, const IlluminationSpec& spec, double h,
                       const SolverConfig& cfg, int n_points, DataKind kind) {
    const FieldSolution sol = solve_forward(profile, spec, h, cfg);
    const std::vector<Complex> trace = scattered_trace(sol, n_points);
    NearFieldData data;
    data.kind = kind;
    data.spec = spec;
    data.h = h;
    data.points.resize(static_cast<std::size_t>(n_points));
    for (int m = 1; m <= n_points; ++m) {
        data.points[static_cast<std::size_t>(m - 1)] = spec.period * m / n_points;
    }
    if (kind == DataKind::Phase) {
        data.values = trace;
    } else {
        data.intensities.resize(trace.size());
        for (std::size_t m = 0; m < trace.size(); ++m) {
            data.intensities[m] = std::norm(trace[m]);
        }
    }
    return data;
}

NearFieldData add_noise_phase(const NearFieldData& data, double delta, std::uint64_t seed) {
    if (data.kind != DataKind::Phase) {
        throw ConfigError("add_noise_phase: data is not phase-valued");
    }
    if (delta < 0.0) throw ConfigError("add_noise_phase: delta must be >= 0");
    NearFieldData out = data;
    out.noise_level = delta;
    out.seed = seed;
    out.noise_draw = draw_normal(data.size(), seed);
    const double norm = l2_norm(out.noise_draw);
    for (std::size_t m = 0; m < out.values.size(); ++m) {
        out.values[m] *= 1.0 + delta * out.noise_draw[m] / norm;
    }
    return out;
}

NearFieldData add_noise_phaseless(const NearFieldData& data, double delta, std::uint64_t seed) {
    if (data.kind != DataKind::Phaseless) {
        throw ConfigError("add_noise_phaseless: data is not phaseless");
    }
    if (delta < 0.0) throw ConfigError("add_noise_phaseless: delta must be >= 0");
    NearFieldData out = data;
    out.noise_level = delta;
    out.seed = seed;
    out.noise_draw = draw_normal(data.size(), seed);
    const double vnorm = l2_norm(out.noise_draw);
    double energy = 0.0;  // ||u_mes||_2^2 = sum of intensities
    for (double I : data.intensities) energy += I;
    const double scale = delta * energy / (vnorm * vnorm);
    for (std::size_t m = 0; m < out.intensities.size(); ++m) {
        out.intensities[m] += scale * out.noise_draw[m];
    }
    return out;
}

void write_measurement(const std::string& path, const NearFieldData& data) {
    std::ofstream os(path);
    if (!os) throw ConfigError("write_measurement: cannot open " + path);
    char buf[256];
    os << "# grating near-field measurement\n";
    os << "# kind = " << (data.kind == DataKind::Phase ? "phase" : "phaseless") << "\n";
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "# %s = %.17g\n", key, v);
        os << buf;
    };
    put("kappa", data.spec.kappa);
    put("theta", data.spec.theta);
    put("period", data.spec.period);
    os << "# components = " << component_name(data.spec.components) << "\n";
    os << "# n0 = " << data.spec.n0 << "\n";
    put("H", data.spec.H);
    put("h", data.h);
    os << "# N = " << data.size() << "\n";
    put("delta", data.noise_level);
    os << "# seed = " << data.seed << "\n";
    if (data.kind == DataKind::Phase) {
        os << "# columns: x re im\n";
        for (int m = 0; m < data.size(); ++m) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n",
                          data.points[static_cast<std::size_t>(m)],
                          data.values[static_cast<std::size_t>(m)].real(),
                          data.values[static_cast<std::size_t>(m)].imag());
            os << buf;
        }
    } else {
        os << "# columns: x intensity\n";
        for (int m = 0; m < data.size(); ++m) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n",
                          data.points[static_cast<std::size_t>(m)],
                          data.intensities[static_cast<std::size_t>(m)]);
            os << buf;
        }
    }
}

NearFieldData read_measurement(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("read_measurement: cannot open " + path);
    NearFieldData data;
    int n_declared = -1;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            const auto eq = body.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t");
                const auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            const std::string key = trim(body.substr(0, eq));
            const std::string val = trim(body.substr(eq + 1));
            if (key == "kind") {
                if (val == "phase") data.kind = DataKind::Phase;
                else if (val == "phaseless") data.kind = DataKind::Phaseless;
                else throw ConfigError("read_measurement: unknown kind '" + val + "'");
            } else if (key == "kappa") data.spec.kappa = std::stod(val);
            else if (key == "theta") data.spec.theta = std::stod(val);
            else if (key == "period") data.spec.period = std::stod(val);
            else if (key == "components") data.spec.components = component_from_name(val);
            else if (key == "n0") data.spec.n0 = std::stoi(val);
            else if (key == "H") data.spec.H = std::stod(val);
            else if (key == "h") data.h = std::stod(val);
            else if (key == "N") n_declared = std::stoi(val);
            else if (key == "delta") data.noise_level = std::stod(val);
            else if (key == "seed") data.seed = std::stoull(val);
            continue;
        }
        std::istringstream row(line);
        double x = 0.0;
        if (!(row >> x)) throw ConfigError("read_measurement: malformed row '" + line + "'");
        data.points.push_back(x);
        if (data.kind == DataKind::Phase) {
            double re = 0.0, im = 0.0;
            if (!(row >> re >> im)) {
                throw ConfigError("read_measurement: malformed phase row '" + line + "'");
            }
            data.values.emplace_back(re, im);
        } else {
            double intensity = 0.0;
            if (!(row >> intensity)) {
                throw ConfigError("read_measurement: malformed phaseless row '" + line + "'");
            }
            data.intensities.push_back(intensity);
        }
    }
    if (n_declared >= 0 && n_declared != data.size()) {
        throw ConfigError("read_measurement: row count does not match declared N");
    }
    return data;
}

}  // namespace grating
