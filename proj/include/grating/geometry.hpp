#pragma once

#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace grating {

/// Periodic grating profile y = f(x) represented by a truncated Fourier
/// series with real coefficients
///   f(x) = c[0] + sum_{k=1..M} ( c[2k-1] cos(k w x) + c[2k] sin(k w x) ),
/// where w = 2*pi/period. The coefficient vector has length 2M+1.
class GratingProfile {
public:
    GratingProfile();  // flat zero profile, period 2*pi, M = 0
    GratingProfile(double period, std::vector<double> coeffs);

    double period() const { return period_; }
    int order() const { return static_cast<int>((coeffs_.size() - 1) / 2); }
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Truncated Fourier sum at x (period-exact by construction).
    double value(double x) const;

    /// Sampled extrema over one period plus the coefficient-sum bound;
    /// used by the solver's clearance guard.
    double max_value() const;
    double min_value() const;

private:
    double period_;
    std::vector<double> coeffs_;
};

inline GratingProfile zero_profile(double period = 2.0 * std::numbers::pi) {
    return GratingProfile(period, {0.0});
}

/// Discrete relative L2 and absolute Linf differences of two profiles over a
/// uniform grid of grid_size points on [0, period). The second argument is
/// the reference for the relative norm; if it is identically zero on the
/// grid the absolute L2 difference is returned instead.
std::pair<double, double> profile_error(const GratingProfile& a,
                                        const GratingProfile& b,
                                        int grid_size);

}  // namespace grating
