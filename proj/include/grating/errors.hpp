#pragma once

#include <stdexcept>
#include <string>

namespace grating {

// Base class for everything the forward solver can throw; the inverse loop
// catches these to surface a SolverFailed termination status.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Some retained Rayleigh order has |beta_n| at or below the resonance guard.
struct WoodAnomalyError : SolverError {
    explicit WoodAnomalyError(const std::string& msg) : SolverError(msg) {}
};

// The discrete system could not be factorized (near-resonant configuration).
struct SingularSystemError : SolverError {
    explicit SingularSystemError(const std::string& msg) : SolverError(msg) {}
};

// Measurement height too close to (or below) the profile, or the graded mesh
// degenerated (non-positive Jacobian).
struct MeshError : SolverError {
    explicit MeshError(const std::string& msg) : SolverError(msg) {}
};

// Invalid user-facing configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace grating
