#pragma once

#include <vector>

#include "grating/geometry.hpp"

namespace grating {

/// Structured triangular mesh of one period of the layer f(x) < y < h.
///
/// The parameter map (s, t) -> (s, f(s) + t*(h - f(s))) grades a uniform
/// lattice onto the layer, so the bottom node row lies exactly on the
/// profile and the top row exactly on y = h. Quads are split along the
/// up-right diagonal. For order 2 the midside nodes also sit on the mapped
/// lattice (isoparametric elements, curved along the grading).
///
/// The lattice is periodic in x: column lx aliases column 0. Elements store
/// unfolded column indices; callers fold with master() and apply the
/// quasi-periodic phase for wrapping references.
class LayerMesh {
public:
    LayerMesh(const GratingProfile& profile, double h, int nx, int ny, int order);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int order() const { return order_; }
    int lx() const { return lx_; }
    int ly() const { return ly_; }
    double period() const { return period_; }
    double height() const { return h_; }

    double node_x(int I) const { return period_ * I / lx_; }
    double node_y(int I, int J) const {
        const double f = fvals_[static_cast<std::size_t>(master(I))];
        return f + (h_ - f) * J / ly_;
    }

    int master(int I) const { return I >= lx_ ? I - lx_ : I; }
    bool wraps(int I) const { return I >= lx_; }

    /// Master nodes are numbered row-major: (I, J) -> J*lx + I, J = 0..ly.
    int node_id(int I, int J) const { return J * lx_ + master(I); }
    int n_nodes() const { return lx_ * (ly_ + 1); }

    /// Unknowns exclude the Dirichlet row J = 0.
    int dof(int I, int J) const { return J == 0 ? -1 : (J - 1) * lx_ + master(I); }
    int n_dofs() const { return lx_ * ly_; }

    struct Element {
        int I[6];
        int J[6];
    };
    int nodes_per_element() const { return order_ == 1 ? 3 : 6; }
    const std::vector<Element>& elements() const { return elements_; }

    /// Top-boundary segments at J = ly, one per x-cell; order+1 nodes each.
    struct TopSegment {
        int I[3];
    };
    const std::vector<TopSegment>& top_segments() const { return top_segments_; }
    double segment_length() const { return period_ / nx_; }

private:
    int nx_, ny_, order_, lx_, ly_;
    double period_, h_;
    std::vector<double> fvals_;  // profile at lattice abscissas, I = 0..lx-1
    std::vector<Element> elements_;
    std::vector<TopSegment> top_segments_;
};

}  // namespace grating
