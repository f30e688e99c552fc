#include "grating/mesh.hpp"

#include <stdexcept>

namespace grating {

LayerMesh::LayerMesh(const GratingProfile& profile, double h, int nx, int ny, int order)
    : nx_(nx), ny_(ny), order_(order), lx_(order * nx), ly_(order * ny),
      period_(profile.period()), h_(h) {
    if (nx < 4 || ny < 4) throw std::invalid_argument("LayerMesh: nx, ny must be >= 4");
    if (order != 1 && order != 2) throw std::invalid_argument("LayerMesh: order must be 1 or 2");

    fvals_.resize(static_cast<std::size_t>(lx_));
    for (int I = 0; I < lx_; ++I) {
        fvals_[static_cast<std::size_t>(I)] = profile.value(node_x(I));
    }

    // Two triangles per cell, diagonal from the lower-left to the upper-right
    // corner. Lattice offsets for vertices v1,v2,v3 then midsides m12,m23,m31.
    const int p = order_;
    elements_.reserve(static_cast<std::size_t>(2 * nx_ * ny_));
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const int I0 = p * i;
            const int J0 = p * j;
            Element a{};  // lower-right triangle
            const int aI[6] = {0, p, p, p / 2, p, p / 2};
            const int aJ[6] = {0, 0, p, 0, p / 2, p / 2};
            Element b{};  // upper-left triangle
            const int bI[6] = {0, p, 0, p / 2, p / 2, 0};
            const int bJ[6] = {0, p, p, p / 2, p, p / 2};
            for (int k = 0; k < 6; ++k) {
                a.I[k] = I0 + aI[k];
                a.J[k] = J0 + aJ[k];
                b.I[k] = I0 + bI[k];
                b.J[k] = J0 + bJ[k];
            }
            elements_.push_back(a);
            elements_.push_back(b);
        }
    }

    top_segments_.reserve(static_cast<std::size_t>(nx_));
    for (int i = 0; i < nx_; ++i) {
        TopSegment s{};
        for (int r = 0; r <= p; ++r) s.I[r] = p * i + r;
        top_segments_.push_back(s);
    }
}

}  // namespace grating
