#include "grating/wavefields.hpp"

#include <cmath>
#include <sstream>

namespace grating {

namespace {
constexpr Complex kI(0.0, 1.0);
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double IlluminationSpec::beta_tilde_mag() const {
    const double at = alpha_tilde();
    return std::sqrt(at * at - kappa * kappa);
}

void IlluminationSpec::validate() const {
    if (kappa <= 0.0) throw ConfigError("illumination: kappa must be positive");
    if (!(std::abs(theta) < std::numbers::pi / 2.0)) {
        throw ConfigError("illumination: theta must lie in (-pi/2, pi/2)");
    }
    if (period <= 0.0) throw ConfigError("illumination: period must be positive");
    if (has_evanescent()) {
        if (n0 < 1) throw ConfigError("illumination: n0 must be a positive integer");
        const double at = alpha_tilde();
        if (!(at * at > kappa * kappa)) {
            std::ostringstream os;
            os << "illumination: alpha_tilde^2 = " << at * at
               << " must exceed kappa^2 = " << kappa * kappa
               << " (n0 too small for this kappa)";
            throw ConfigError(os.str());
        }
    }
}

int pick_n0(double kappa, double theta, double period) {
    const double alpha = kappa * std::sin(theta);
    for (int n = 1;; ++n) {
        const double at = alpha + kTwoPi * n / period;
        if (at * at > kappa * kappa) return n;
    }
}

std::vector<RayleighMode> make_modes(const IlluminationSpec& spec, int n_min, int n_max,
                                     double wood_tolerance) {
    if (n_min > n_max) throw std::invalid_argument("make_modes: n_min > n_max");
    const double alpha = spec.alpha();
    const double kappa = spec.kappa;
    std::vector<RayleighMode> modes;
    modes.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) {
        RayleighMode m;
        m.n = n;
        m.alpha_n = alpha + kTwoPi * n / spec.period;
        if (kappa >= std::abs(m.alpha_n)) {
            m.beta_n = Complex(std::sqrt(kappa * kappa - m.alpha_n * m.alpha_n), 0.0);
            m.kind = ModeKind::Propagating;
        } else {
            m.beta_n = Complex(0.0, std::sqrt(m.alpha_n * m.alpha_n - kappa * kappa));
            m.kind = ModeKind::Evanescent;
        }
        if (std::abs(m.beta_n) <= wood_tolerance) {
            std::ostringstream os;
            os << "Wood anomaly: |beta_" << n << "| = " << std::abs(m.beta_n)
               << " <= tolerance " << wood_tolerance << " (kappa = " << kappa
               << ", theta = " << spec.theta << ")";
            throw WoodAnomalyError(os.str());
        }
        modes.push_back(m);
    }
    return modes;
}

Complex TraceExpansion::synthesize(double x) const {
    Complex sum(0.0);
    for (int n = -n_max; n <= n_max; ++n) {
        const Complex c = at(n);
        if (c == Complex(0.0)) continue;
        sum += c * std::exp(kI * alpha_n(n) * x);
    }
    return sum;
}

Complex eval_incident(const IlluminationSpec& spec, double x, double y) {
    Complex u(0.0);
    if (spec.has_plane()) {
        u += std::exp(kI * (spec.alpha() * x - spec.beta() * y));
    }
    if (spec.has_evanescent()) {
        // exp(i at x + i bt |y - H|) with bt = i*b decays away from y = H.
        const double b = spec.beta_tilde_mag();
        u += std::exp(kI * spec.alpha_tilde() * x - b * std::abs(y - spec.H));
    }
    return u;
}

IncidentTrace incident_trace(const IlluminationSpec& spec, double h, int n_dtn) {
    spec.validate();
    if (!(h < spec.H)) throw ConfigError("incident_trace: requires h < H");
    if (n_dtn < spec.n0) {
        std::ostringstream os;
        os << "incident_trace: DtN truncation n_dtn = " << n_dtn
           << " cannot represent the evanescent order n0 = " << spec.n0;
        throw ConfigError(os.str());
    }
    IncidentTrace tr{TraceExpansion(spec.alpha(), spec.period, h, n_dtn),
                     TraceExpansion(spec.alpha(), spec.period, h, n_dtn)};
    if (spec.has_plane()) {
        const double beta = spec.beta();
        const Complex d = std::exp(-kI * beta * h);
        tr.dirichlet.at(0) += d;
        tr.neumann.at(0) += -kI * beta * d;
    }
    if (spec.has_evanescent()) {
        // For y < H: u = exp(i at x) exp(i bt (H - y)), so d_y u = -i bt u.
        const Complex bt = spec.beta_tilde();
        const Complex d = std::exp(kI * bt * (spec.H - h));
        tr.dirichlet.at(spec.n0) += d;
        tr.neumann.at(spec.n0) += -kI * bt * d;
    }
    return tr;
}

TraceExpansion dtn_apply(const TraceExpansion& trace, const std::vector<RayleighMode>& modes) {
    TraceExpansion out = trace;
    for (int n = -trace.n_max; n <= trace.n_max; ++n) {
        const RayleighMode* mode = nullptr;
        for (const auto& m : modes) {
            if (m.n == n) { mode = &m; break; }
        }
        if (mode == nullptr) {
            if (trace.at(n) != Complex(0.0)) {
                std::ostringstream os;
                os << "dtn_apply: no mode supplied for nonzero coefficient n = " << n;
                throw std::invalid_argument(os.str());
            }
            continue;
        }
        out.at(n) = kI * mode->beta_n * trace.at(n);
    }
    return out;
}

TraceExpansion tbc_source(const IlluminationSpec& spec, double h,
                          const std::vector<RayleighMode>& modes) {
    int n_dtn = 0;
    for (const auto& m : modes) n_dtn = std::max(n_dtn, std::abs(m.n));
    const IncidentTrace tr = incident_trace(spec, h, n_dtn);
    const TraceExpansion t_dir = dtn_apply(tr.dirichlet, modes);
    TraceExpansion rho = tr.neumann;
    for (int n = -n_dtn; n <= n_dtn; ++n) rho.at(n) -= t_dir.at(n);
    return rho;
}

Complex flat_scatter_oracle(const IlluminationSpec& spec, double c, double x, double y) {
    Complex u(0.0);
    if (spec.has_plane()) {
        const double a = spec.alpha();
        const double b = spec.beta();
        u += -std::exp(kI * (a * x - 2.0 * b * c + b * y));
    }
    if (spec.has_evanescent()) {
        const Complex bt = spec.beta_tilde();
        u += -std::exp(kI * (spec.alpha_tilde() * x + bt * (spec.H - 2.0 * c + y)));
    }
    return u;
}

TraceExpansion propagate_up(const TraceExpansion& trace, const std::vector<RayleighMode>& modes,
                            double dy) {
    if (dy < 0.0) throw std::invalid_argument("propagate_up: dy must be nonnegative");
    TraceExpansion out = trace;
    out.height += dy;
    for (int n = -trace.n_max; n <= trace.n_max; ++n) {
        const RayleighMode* mode = nullptr;
        for (const auto& m : modes) {
            if (m.n == n) { mode = &m; break; }
        }
        if (mode == nullptr) {
            if (trace.at(n) != Complex(0.0)) {
                throw std::invalid_argument("propagate_up: missing mode for nonzero coefficient");
            }
            continue;
        }
        out.at(n) = trace.at(n) * std::exp(kI * mode->beta_n * dy);
    }
    return out;
}

}  // namespace grating
