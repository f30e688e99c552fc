#pragma once

#include <memory>
#include <vector>

#include "grating/geometry.hpp"
#include "grating/mesh.hpp"
#include "grating/wavefields.hpp"

namespace grating {

struct SolverConfig {
    int nx = 64;
    int ny = 64;
    int n_dtn = 0;                // 0 = auto: max(10, n0 + 5)
    int quad_order = 4;           // polynomial degree the triangle rule integrates
    int element_order = 2;        // 1 = linear, 2 = quadratic (default, see README)
    double wood_tolerance = 0.0;  // 0 = auto: 1e-8 * kappa

    int resolved_n_dtn(const IlluminationSpec& spec) const;
    double resolved_wood_tolerance(const IlluminationSpec& spec) const;
    void validate(const IlluminationSpec& spec) const;
};

/// Discrete total field on the meshed layer, with trace accessors at y = h.
class FieldSolution {
public:
    FieldSolution(std::shared_ptr<const LayerMesh> mesh, GratingProfile profile,
                  IlluminationSpec spec, double h, int n_dtn,
                  std::vector<Complex> node_values);

    const LayerMesh& mesh() const { return *mesh_; }
    const GratingProfile& profile() const { return profile_; }
    const IlluminationSpec& spec() const { return spec_; }
    double height() const { return h_; }
    int n_dtn() const { return n_dtn_; }
    Complex quasi_phase() const { return wrap_phase_; }

    /// Nodal value of the total field at master lattice node (I, J).
    Complex node_value(int I, int J) const;

    /// Total field u(x, h) on the measurement line; x may lie outside one
    /// period (quasi-periodic extension).
    Complex total_at(double x) const;
    /// Scattered field u(x, h) - u_inc(x, h).
    Complex scattered_at(double x) const;

private:
    std::shared_ptr<const LayerMesh> mesh_;
    GratingProfile profile_;
    IlluminationSpec spec_;
    double h_;
    int n_dtn_;
    Complex wrap_phase_;
    std::vector<Complex> node_values_;  // row-major (J*lx + I), J = 0..ly
};

/// Solve the layer problem: Helmholtz in f(x) < y < h, u = 0 on the profile,
/// d_y u = T u + rho on y = h with the DtN operator truncated to |n| <= n_dtn
/// and quasi-periodic coupling of the vertical edges.
FieldSolution solve_forward(const GratingProfile& profile, const IlluminationSpec& spec,
                            double h, const SolverConfig& cfg);

/// Scattered-field samples u_s(x_m, h) at x_m = period*m/n_points, m = 1..n_points.
std::vector<Complex> scattered_trace(const FieldSolution& sol, int n_points);

/// Fourier coefficients of the scattered trace for |n| <= n_dtn, integrated
/// segmentwise against exp(-i alpha_n x).
TraceExpansion trace_coefficients(const FieldSolution& sol, int n_dtn);

}  // namespace grating
