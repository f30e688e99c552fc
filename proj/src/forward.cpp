#include "grating/forward.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

namespace grating {

namespace {

constexpr Complex kI(0.0, 1.0);

struct TriQuadPoint {
    double l2, l3, w;  // barycentric point (1-l2-l3, l2, l3), weights sum to 1
};

// Dunavant rules on the reference triangle.
const std::vector<TriQuadPoint>& tri_rule(int degree) {
    static const std::vector<TriQuadPoint> deg2 = {
        {1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
        {2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
        {1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0},
    };
    static const std::vector<TriQuadPoint> deg4 = [] {
        std::vector<TriQuadPoint> pts;
        const double a1 = 0.445948490915965, w1 = 0.223381589678011;
        const double a2 = 0.091576213509771, w2 = 0.109951743655322;
        pts.push_back({a1, a1, w1});
        pts.push_back({1.0 - 2.0 * a1, a1, w1});
        pts.push_back({a1, 1.0 - 2.0 * a1, w1});
        pts.push_back({a2, a2, w2});
        pts.push_back({1.0 - 2.0 * a2, a2, w2});
        pts.push_back({a2, 1.0 - 2.0 * a2, w2});
        return pts;
    }();
    static const std::vector<TriQuadPoint> deg5 = [] {
        std::vector<TriQuadPoint> pts;
        pts.push_back({1.0 / 3.0, 1.0 / 3.0, 0.225});
        const double a1 = 0.470142064105115, w1 = 0.132394152788506;
        const double a2 = 0.101286507323456, w2 = 0.125939180544827;
        pts.push_back({a1, a1, w1});
        pts.push_back({1.0 - 2.0 * a1, a1, w1});
        pts.push_back({a1, 1.0 - 2.0 * a1, w1});
        pts.push_back({a2, a2, w2});
        pts.push_back({1.0 - 2.0 * a2, a2, w2});
        pts.push_back({a2, 1.0 - 2.0 * a2, w2});
        return pts;
    }();
    if (degree <= 2) return deg2;
    if (degree <= 4) return deg4;
    return deg5;
}

void shape_tri(int order, double l2, double l3, double N[6], double dN[6][2]) {
    const double l1 = 1.0 - l2 - l3;
    if (order == 1) {
        N[0] = l1; N[1] = l2; N[2] = l3;
        dN[0][0] = -1.0; dN[0][1] = -1.0;
        dN[1][0] = 1.0;  dN[1][1] = 0.0;
        dN[2][0] = 0.0;  dN[2][1] = 1.0;
        return;
    }
    N[0] = l1 * (2.0 * l1 - 1.0);
    N[1] = l2 * (2.0 * l2 - 1.0);
    N[2] = l3 * (2.0 * l3 - 1.0);
    N[3] = 4.0 * l1 * l2;
    N[4] = 4.0 * l2 * l3;
    N[5] = 4.0 * l3 * l1;
    // dl1 = (-1,-1), dl2 = (1,0), dl3 = (0,1)
    dN[0][0] = -(4.0 * l1 - 1.0); dN[0][1] = -(4.0 * l1 - 1.0);
    dN[1][0] = 4.0 * l2 - 1.0;    dN[1][1] = 0.0;
    dN[2][0] = 0.0;               dN[2][1] = 4.0 * l3 - 1.0;
    dN[3][0] = 4.0 * (l1 - l2);   dN[3][1] = -4.0 * l2;
    dN[4][0] = 4.0 * l3;          dN[4][1] = 4.0 * l2;
    dN[5][0] = -4.0 * l3;         dN[5][1] = 4.0 * (l1 - l3);
}

// 1D shapes on [0,1] for the top-boundary trace.
void shape_line(int order, double t, double N[3]) {
    if (order == 1) {
        N[0] = 1.0 - t;
        N[1] = t;
        return;
    }
    N[0] = (1.0 - t) * (1.0 - 2.0 * t);
    N[1] = 4.0 * t * (1.0 - t);
    N[2] = t * (2.0 * t - 1.0);
}

struct GaussPoint {
    double t, w;  // on [0,1], weights sum to 1
};

// 12-point Gauss-Legendre, enough for exp(-i alpha_n x) against quadratic
// traces at the retained DtN orders.
const std::array<GaussPoint, 12>& line_rule() {
    static const std::array<GaussPoint, 12> rule = [] {
        const double xs[6] = {0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
                              0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
        const double ws[6] = {0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                              0.1600783285433462, 0.1069393259953184, 0.0471753363865118};
        std::array<GaussPoint, 12> r{};
        for (int k = 0; k < 6; ++k) {
            r[2 * k] = {0.5 * (1.0 - xs[k]), 0.5 * ws[k]};
            r[2 * k + 1] = {0.5 * (1.0 + xs[k]), 0.5 * ws[k]};
        }
        return r;
    }();
    return rule;
}

using SparseMat = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

// Fourier coefficients (1/period) * int phi_I(x) exp(-i alpha_n x) dx of the
// top-boundary basis, columns indexed by master lattice column. Wrapping
// references fold in the quasi-periodic phase.
Eigen::MatrixXcd top_fourier_matrix(const LayerMesh& mesh, double alpha, int n_dtn,
                                    Complex wrap_phase) {
    const int n_orders = 2 * n_dtn + 1;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n_orders, mesh.lx());
    const double seg = mesh.segment_length();
    const double period = mesh.period();
    const int p = mesh.order();
    for (const auto& s : mesh.top_segments()) {
        const double x0 = mesh.node_x(s.I[0]);
        for (const auto& g : line_rule()) {
            double N[3];
            shape_line(p, g.t, N);
            const double x = x0 + g.t * seg;
            for (int idx = 0; idx < n_orders; ++idx) {
                const double alpha_n = alpha + 2.0 * std::numbers::pi * (idx - n_dtn) / period;
                const Complex e = std::exp(-kI * alpha_n * x) * (g.w * seg / period);
                for (int r = 0; r <= p; ++r) {
                    const Complex q = mesh.wraps(s.I[r]) ? wrap_phase : Complex(1.0);
                    C(idx, mesh.master(s.I[r])) += q * N[r] * e;
                }
            }
        }
    }
    return C;
}

}  // namespace

int SolverConfig::resolved_n_dtn(const IlluminationSpec& spec) const {
    if (n_dtn > 0) return n_dtn;
    return std::max(10, spec.n0 + 5);
}

double SolverConfig::resolved_wood_tolerance(const IlluminationSpec& spec) const {
    return wood_tolerance > 0.0 ? wood_tolerance : default_wood_tolerance(spec.kappa);
}

void SolverConfig::validate(const IlluminationSpec& spec) const {
    if (nx < 4 || ny < 4) throw ConfigError("solver: nx and ny must be >= 4");
    if (element_order != 1 && element_order != 2) {
        throw ConfigError("solver: element_order must be 1 or 2");
    }
    if (quad_order < 1) throw ConfigError("solver: quad_order must be >= 1");
    if (spec.has_evanescent() && resolved_n_dtn(spec) < spec.n0) {
        std::ostringstream os;
        os << "solver: n_dtn = " << resolved_n_dtn(spec)
           << " must be >= the evanescent order n0 = " << spec.n0;
        throw ConfigError(os.str());
    }
}

FieldSolution::FieldSolution(std::shared_ptr<const LayerMesh> mesh, GratingProfile profile,
                             IlluminationSpec spec, double h, int n_dtn,
                             std::vector<Complex> node_values)
    : mesh_(std::move(mesh)), profile_(std::move(profile)), spec_(spec), h_(h), n_dtn_(n_dtn),
      node_values_(std::move(node_values)) {
    wrap_phase_ = std::exp(kI * spec_.alpha() * spec_.period);
}

Complex FieldSolution::node_value(int I, int J) const {
    return node_values_[static_cast<std::size_t>(mesh_->node_id(I, J))];
}

Complex FieldSolution::total_at(double x) const {
    const double period = mesh_->period();
    double xr = x;
    int k = 0;
    while (xr < 0.0) { xr += period; --k; }
    while (xr >= period) { xr -= period; ++k; }
    const double seg = mesh_->segment_length();
    int i = std::min(static_cast<int>(xr / seg), mesh_->nx() - 1);
    const double t = xr / seg - i;
    const int p = mesh_->order();
    double N[3];
    shape_line(p, t, N);
    Complex val(0.0);
    for (int r = 0; r <= p; ++r) {
        const int I = p * i + r;
        const Complex q = mesh_->wraps(I) ? wrap_phase_ : Complex(1.0);
        val += N[r] * q * node_value(I, mesh_->ly());
    }
    if (k != 0) val *= std::pow(wrap_phase_, k);
    return val;
}

Complex FieldSolution::scattered_at(double x) const {
    return total_at(x) - eval_incident(spec_, x, h_);
}

FieldSolution solve_forward(const GratingProfile& profile, const IlluminationSpec& spec,
                            double h, const SolverConfig& cfg) {
    spec.validate();
    cfg.validate(spec);
    if (std::abs(spec.period - profile.period()) > 1e-12 * profile.period()) {
        throw ConfigError("solve_forward: illumination and profile periods differ");
    }

    const double fmax = profile.max_value();
    if (h - fmax <= 1e-6 * profile.period()) {
        std::ostringstream os;
        os << "solve_forward: measurement height h = " << h
           << " does not clear the profile maximum " << fmax;
        throw MeshError(os.str());
    }
    if (spec.has_evanescent() && !(h < spec.H)) {
        throw ConfigError("solve_forward: requires h < H");
    }

    const int n_dtn = cfg.resolved_n_dtn(spec);
    const double kappa = spec.kappa;
    const auto modes = make_modes(spec, -n_dtn, n_dtn, cfg.resolved_wood_tolerance(spec));
    const TraceExpansion rho = tbc_source(spec, h, modes);

    auto mesh = std::make_shared<LayerMesh>(profile, h, cfg.nx, cfg.ny, cfg.element_order);
    const int n_dofs = mesh->n_dofs();
    const int npe = mesh->nodes_per_element();
    const Complex wrap_phase = std::exp(kI * spec.alpha() * spec.period);

    // Volume terms: K - kappa^2 M by isoparametric quadrature.
    const auto& rule = tri_rule(cfg.quad_order);
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh->elements().size()) * npe * npe +
                     static_cast<std::size_t>(mesh->lx()) * mesh->lx());

    std::vector<std::array<double, 6>> Nq(rule.size());
    std::vector<std::array<std::array<double, 2>, 6>> dNq(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        double N[6], dN[6][2];
        shape_tri(cfg.element_order, rule[q].l2, rule[q].l3, N, dN);
        for (int a = 0; a < npe; ++a) {
            Nq[q][static_cast<std::size_t>(a)] = N[a];
            dNq[q][static_cast<std::size_t>(a)] = {dN[a][0], dN[a][1]};
        }
    }

    double Ke[6][6], Me[6][6];
    for (const auto& el : mesh->elements()) {
        double px[6], py[6];
        for (int a = 0; a < npe; ++a) {
            px[a] = mesh->node_x(el.I[a]);
            py[a] = mesh->node_y(el.I[a], el.J[a]);
        }
        for (int a = 0; a < npe; ++a) {
            for (int b = 0; b < npe; ++b) { Ke[a][b] = 0.0; Me[a][b] = 0.0; }
        }
        for (std::size_t q = 0; q < rule.size(); ++q) {
            double j00 = 0.0, j01 = 0.0, j10 = 0.0, j11 = 0.0;
            for (int a = 0; a < npe; ++a) {
                j00 += px[a] * dNq[q][static_cast<std::size_t>(a)][0];
                j01 += px[a] * dNq[q][static_cast<std::size_t>(a)][1];
                j10 += py[a] * dNq[q][static_cast<std::size_t>(a)][0];
                j11 += py[a] * dNq[q][static_cast<std::size_t>(a)][1];
            }
            const double det = j00 * j11 - j01 * j10;
            if (!(det > 0.0)) {
                throw MeshError("solve_forward: degenerate element (profile too steep "
                                "for the graded mesh)");
            }
            // physical gradients: J^{-T} dN
            double gx[6], gy[6];
            for (int a = 0; a < npe; ++a) {
                const double d0 = dNq[q][static_cast<std::size_t>(a)][0];
                const double d1 = dNq[q][static_cast<std::size_t>(a)][1];
                gx[a] = (j11 * d0 - j10 * d1) / det;
                gy[a] = (-j01 * d0 + j00 * d1) / det;
            }
            const double wq = 0.5 * rule[q].w * det;
            for (int a = 0; a < npe; ++a) {
                for (int b = 0; b < npe; ++b) {
                    Ke[a][b] += wq * (gx[a] * gx[b] + gy[a] * gy[b]);
                    Me[a][b] += wq * Nq[q][static_cast<std::size_t>(a)] *
                                Nq[q][static_cast<std::size_t>(b)];
                }
            }
        }
        for (int a = 0; a < npe; ++a) {
            const int r = mesh->dof(el.I[a], el.J[a]);
            if (r < 0) continue;
            const Complex qa = mesh->wraps(el.I[a]) ? wrap_phase : Complex(1.0);
            for (int b = 0; b < npe; ++b) {
                const int c = mesh->dof(el.I[b], el.J[b]);
                if (c < 0) continue;
                const Complex qb = mesh->wraps(el.I[b]) ? wrap_phase : Complex(1.0);
                triplets.emplace_back(r, c,
                                      std::conj(qa) * qb * (Ke[a][b] - kappa * kappa * Me[a][b]));
            }
        }
    }

    // DtN block and boundary source on the top row. The top dofs are the
    // contiguous block (ly-1)*lx .. (ly-1)*lx + lx - 1.
    const Eigen::MatrixXcd C = top_fourier_matrix(*mesh, spec.alpha(), n_dtn, wrap_phase);
    const int lx = mesh->lx();
    const int top0 = (mesh->ly() - 1) * lx;
    const double period = spec.period;
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(lx, lx);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_dofs);
    for (int idx = 0; idx < 2 * n_dtn + 1; ++idx) {
        const Complex scale = kI * modes[static_cast<std::size_t>(idx)].beta_n * period;
        D.noalias() += scale * (C.row(idx).adjoint() * C.row(idx));
        const Complex rc = rho.coeffs[static_cast<std::size_t>(idx)];
        if (rc != Complex(0.0)) {
            rhs.segment(top0, lx) += period * rc * C.row(idx).adjoint();
        }
    }
    for (int r = 0; r < lx; ++r) {
        for (int c = 0; c < lx; ++c) {
            triplets.emplace_back(top0 + r, top0 + c, -D(r, c));
        }
    }

    SparseMat A(n_dofs, n_dofs);
    A.setFromTriplets(triplets.begin(), triplets.end());
    A.makeCompressed();

    Eigen::SparseLU<SparseMat> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) {
        throw SingularSystemError("solve_forward: sparse factorization failed");
    }
    const Eigen::VectorXcd u = lu.solve(rhs);
    if (lu.info() != Eigen::Success) {
        throw SingularSystemError("solve_forward: sparse solve failed");
    }

    std::vector<Complex> values(static_cast<std::size_t>(mesh->n_nodes()), Complex(0.0));
    for (int J = 1; J <= mesh->ly(); ++J) {
        for (int I = 0; I < lx; ++I) {
            values[static_cast<std::size_t>(mesh->node_id(I, J))] =
                u[mesh->dof(I, J)];
        }
    }
    return FieldSolution(std::move(mesh), profile, spec, h, n_dtn, std::move(values));
}

std::vector<Complex> scattered_trace(const FieldSolution& sol, int n_points) {
    if (n_points < 2 * sol.n_dtn()) {
        throw ConfigError("scattered_trace: n_points must be >= 2*n_dtn to resolve "
                          "the retained orders");
    }
    const double period = sol.spec().period;
    std::vector<Complex> out(static_cast<std::size_t>(n_points));
    for (int m = 1; m <= n_points; ++m) {
        out[static_cast<std::size_t>(m - 1)] = sol.scattered_at(period * m / n_points);
    }
    return out;
}

TraceExpansion trace_coefficients(const FieldSolution& sol, int n_dtn) {
    const LayerMesh& mesh = sol.mesh();
    const IlluminationSpec& spec = sol.spec();
    TraceExpansion out(spec.alpha(), spec.period, sol.height(), n_dtn);

    const double seg = mesh.segment_length();
    const double period = mesh.period();
    const int p = mesh.order();
    for (const auto& s : mesh.top_segments()) {
        const double x0 = mesh.node_x(s.I[0]);
        // nodal values of the total field on this segment (with wrap phase)
        Complex uv[3];
        for (int r = 0; r <= p; ++r) {
            const Complex q = mesh.wraps(s.I[r]) ? sol.quasi_phase() : Complex(1.0);
            uv[r] = q * sol.node_value(s.I[r], mesh.ly());
        }
        for (const auto& g : line_rule()) {
            double N[3];
            shape_line(p, g.t, N);
            Complex u(0.0);
            for (int r = 0; r <= p; ++r) u += N[r] * uv[r];
            const double x = x0 + g.t * seg;
            for (int n = -n_dtn; n <= n_dtn; ++n) {
                out.at(n) += u * std::exp(-kI * out.alpha_n(n) * x) * (g.w * seg / period);
            }
        }
    }

    // Subtract the incident contribution to leave the scattered coefficients.
    const IncidentTrace inc = incident_trace(spec, sol.height(),
                                             std::max(n_dtn, spec.n0));
    for (int n = -n_dtn; n <= n_dtn; ++n) {
        if (std::abs(n) <= inc.dirichlet.n_max) out.at(n) -= inc.dirichlet.at(n);
    }
    return out;
}

}  // namespace grating
