#include "grating/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grating {

GratingProfile::GratingProfile() : period_(2.0 * std::numbers::pi), coeffs_{0.0} {}

GratingProfile::GratingProfile(double period, std::vector<double> coeffs)
    : period_(period), coeffs_(std::move(coeffs)) {
    if (period_ <= 0.0) {
        throw std::invalid_argument("GratingProfile: period must be positive");
    }
    if (coeffs_.empty() || coeffs_.size() % 2 == 0) {
        throw std::invalid_argument("GratingProfile: coefficient vector must have odd length 2M+1");
    }
}

double GratingProfile::value(double x) const {
    const double w = 2.0 * std::numbers::pi / period_;
    double sum = coeffs_[0];
    const int m = order();
    for (int k = 1; k <= m; ++k) {
        const double arg = static_cast<double>(k) * w * x;
        sum += coeffs_[2 * k - 1] * std::cos(arg) + coeffs_[2 * k] * std::sin(arg);
    }
    return sum;
}

namespace {
constexpr int kExtremaSamples = 4096;
}

double GratingProfile::max_value() const {
    double m = value(0.0);
    for (int i = 1; i < kExtremaSamples; ++i) {
        m = std::max(m, value(period_ * i / kExtremaSamples));
    }
    return m;
}

double GratingProfile::min_value() const {
    double m = value(0.0);
    for (int i = 1; i < kExtremaSamples; ++i) {
        m = std::min(m, value(period_ * i / kExtremaSamples));
    }
    return m;
}

std::pair<double, double> profile_error(const GratingProfile& a,
                                        const GratingProfile& b,
                                        int grid_size) {
    if (a.period() != b.period()) {
        throw std::invalid_argument("profile_error: period mismatch");
    }
    if (grid_size < 2) {
        throw std::invalid_argument("profile_error: grid_size must be >= 2");
    }
    double diff2 = 0.0, ref2 = 0.0, linf = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        const double x = a.period() * i / grid_size;
        const double fa = a.value(x);
        const double fb = b.value(x);
        const double d = fa - fb;
        diff2 += d * d;
        ref2 += fb * fb;
        linf = std::max(linf, std::abs(d));
    }
    const double l2 = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
    return {l2, linf};
}

}  // namespace grating
