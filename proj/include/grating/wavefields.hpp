#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "grating/errors.hpp"

namespace grating {

using Complex = std::complex<double>;

enum class Component { PlaneOnly, EvanescentOnly, Superposition };

/// Incident illumination: a downward plane wave exp(i a x - i b y) with
/// a = kappa sin(theta), b = kappa cos(theta), optionally superposed with a
/// quasi-periodic evanescent wave exp(i at x + i bt |y - H|) sourced on the
/// plane y = H, where at = a + 2*pi*n0/period and bt = i sqrt(at^2 - kappa^2).
struct IlluminationSpec {
    double kappa = 1.0;
    double theta = std::numbers::pi / 12.0;
    double period = 2.0 * std::numbers::pi;
    int n0 = 2;
    double H = 1.5;
    Component components = Component::Superposition;

    double alpha() const { return kappa * std::sin(theta); }
    double beta() const { return kappa * std::cos(theta); }
    double alpha_tilde() const { return alpha() + 2.0 * std::numbers::pi * n0 / period; }
    /// Positive decay rate sqrt(at^2 - kappa^2); beta_tilde = i * this.
    double beta_tilde_mag() const;
    Complex beta_tilde() const { return Complex(0.0, beta_tilde_mag()); }

    bool has_plane() const { return components != Component::EvanescentOnly; }
    bool has_evanescent() const { return components != Component::PlaneOnly; }

    /// Throws ConfigError unless kappa > 0, |theta| < pi/2, n0 >= 1 and
    /// alpha_tilde^2 > kappa^2.
    void validate() const;
};

/// Smallest positive integer n0 with (kappa sin(theta) + 2*pi*n0/period)^2 > kappa^2.
int pick_n0(double kappa, double theta, double period);

enum class ModeKind { Propagating, Evanescent };

/// One Rayleigh order: alpha_n = alpha + 2*pi*n/period and
/// beta_n = sqrt(kappa^2 - alpha_n^2)        (kappa >= |alpha_n|, propagating)
///        = i sqrt(alpha_n^2 - kappa^2)      (kappa <  |alpha_n|, evanescent).
struct RayleighMode {
    int n = 0;
    double alpha_n = 0.0;
    Complex beta_n = 0.0;
    ModeKind kind = ModeKind::Propagating;
};

/// Modes for n in [n_min, n_max]. Throws WoodAnomalyError if any retained
/// order has |beta_n| <= wood_tolerance.
std::vector<RayleighMode> make_modes(const IlluminationSpec& spec, int n_min, int n_max,
                                     double wood_tolerance);

inline double default_wood_tolerance(double kappa) { return 1e-8 * kappa; }

/// Truncated quasi-periodic Fourier expansion of a trace at height y:
/// g(x) = sum_{|n| <= n_max} coeff[n] exp(i (alpha + 2*pi*n/period) x).
struct TraceExpansion {
    double alpha = 0.0;
    double period = 2.0 * std::numbers::pi;
    double height = 0.0;
    int n_max = 0;
    std::vector<Complex> coeffs;  // size 2*n_max+1, order n stored at n + n_max

    TraceExpansion() = default;
    TraceExpansion(double alpha_, double period_, double height_, int n_max_)
        : alpha(alpha_), period(period_), height(height_), n_max(n_max_),
          coeffs(2 * n_max_ + 1, Complex(0.0)) {}

    Complex& at(int n) { return coeffs[static_cast<std::size_t>(n + n_max)]; }
    Complex at(int n) const { return coeffs[static_cast<std::size_t>(n + n_max)]; }
    double alpha_n(int n) const { return alpha + 2.0 * std::numbers::pi * n / period; }

    /// Direct summation of the expansion at x.
    Complex synthesize(double x) const;
};

/// Incident field of the selected components at (x, y).
Complex eval_incident(const IlluminationSpec& spec, double x, double y);

/// Fourier-mode representation of u_inc(., h) and of its y-derivative.
/// Plane wave fills order 0, evanescent wave fills order n0.
/// Requires h < H and n_dtn >= n0.
struct IncidentTrace {
    TraceExpansion dirichlet;
    TraceExpansion neumann;
};
IncidentTrace incident_trace(const IlluminationSpec& spec, double h, int n_dtn);

/// Diagonal DtN action: coefficient n of the result is i*beta_n times
/// coefficient n of the input. Every nonzero input coefficient must have a
/// matching mode.
TraceExpansion dtn_apply(const TraceExpansion& trace, const std::vector<RayleighMode>& modes);

/// Transparent-boundary source rho = d_y u_inc - T u_inc on y = h.
TraceExpansion tbc_source(const IlluminationSpec& spec, double h,
                          const std::vector<RayleighMode>& modes);

/// Analytic scattered field for the flat grating y = c: each incident
/// component is cancelled on the boundary by a single upward-bounded mode.
Complex flat_scatter_oracle(const IlluminationSpec& spec, double c, double x, double y);

/// Shift a scattered-field expansion upward by dy >= 0: coefficient n is
/// multiplied by exp(i beta_n dy).
TraceExpansion propagate_up(const TraceExpansion& trace, const std::vector<RayleighMode>& modes,
                            double dy);

}  // namespace grating
