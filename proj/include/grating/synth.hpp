#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grating/forward.hpp"

namespace grating {

enum class DataKind { Phase, Phaseless };

/// Near-field measurements at x_m = period*m/N, m = 1..N on the line y = h:
/// scattered-field values (Phase) or intensities |u_s|^2 (Phaseless).
/// The noise draw used to perturb the data is kept for recomputation.
struct NearFieldData {
    DataKind kind = DataKind::Phase;
    IlluminationSpec spec;
    double h = 1.0;
    std::vector<double> points;
    std::vector<Complex> values;       // Phase
    std::vector<double> intensities;   // Phaseless
    double noise_level = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> noise_draw;    // the random vector, empty when clean

    int size() const { return static_cast<int>(points.size()); }
};

/// Noise-free measurements from a forward solve.
NearFieldData generate(const GratingProfile& profile, const IlluminationSpec& spec, double h,
                       const SolverConfig& cfg, int n_points, DataKind kind);

/// Multiplicative perturbation u_m * (1 + delta * v_m / ||v||_2) with v drawn
/// i.i.d. standard normal from the seed. Deterministic given (data, delta, seed).
NearFieldData add_noise_phase(const NearFieldData& data, double delta, std::uint64_t seed);

/// Additive perturbation I_m + delta * (sum_m I_m / ||v||_2^2) * v_m. Negative
/// perturbed intensities are kept as-is.
NearFieldData add_noise_phaseless(const NearFieldData& data, double delta, std::uint64_t seed);

/// Tabular text round-trip: '# key = value' header, then one row per point.
void write_measurement(const std::string& path, const NearFieldData& data);
NearFieldData read_measurement(const std::string& path);

}  // namespace grating
