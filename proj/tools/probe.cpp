// Scratch probe: end-to-end reconstruction feasibility on the two benchmark
// profiles before wiring the acceptance suite.
#include <cstdio>
#include <chrono>
#include <cmath>
#include <vector>

#include "grating/inverse.hpp"

using namespace grating;

namespace {

GratingProfile example42() {
    return GratingProfile(2.0 * std::numbers::pi, {0, 0, 0.2, 0.1, 0, 0, 0.3});
}

GratingProfile example41() {
    return GratingProfile(2.0 * std::numbers::pi,
                          {0, 0.2, 0.1, -0.2, -0.1, 0.1, -0.2, -0.1, -0.2, 0.2, -0.4});
}

void run(const char* label, const GratingProfile& truth, double kappa, double h,
         DataKind kind, Component comp, double delta, unsigned seed, int mesh_n) {
    IlluminationSpec spec;
    spec.kappa = kappa;
    spec.theta = std::numbers::pi / 12.0;
    spec.n0 = pick_n0(kappa, spec.theta, spec.period);
    spec.H = h + 0.5;
    spec.components = comp;

    SolverConfig scfg;
    scfg.nx = scfg.ny = mesh_n;

    NearFieldData data = generate(truth, spec, h, scfg, 256, kind);
    if (delta > 0.0) {
        data = kind == DataKind::Phase ? add_noise_phase(data, delta, seed)
                                       : add_noise_phaseless(data, delta, seed);
    }

    InverseConfig icfg;
    icfg.M = truth.order();

    const auto t0 = std::chrono::steady_clock::now();
    const ReconstructionResult res = reconstruct(data, spec, h, icfg, scfg);
    const auto t1 = std::chrono::steady_clock::now();
    const auto [l2, linf] = profile_error(res.profile, truth, 1024);
    std::printf(
        "%-26s kappa=%.0f h=%.1f delta=%.2f %s: %s iters=%zu cost %.3e -> %.3e  l2=%.4f linf=%.4f (%.1fs)\n",
        label, kappa, h, delta, kind == DataKind::Phase ? "phase" : "phaseless",
        to_string(res.state.termination).c_str(), res.state.iterations.size(),
        res.state.cost_history.front(), res.state.cost_history.back(), l2, linf,
        std::chrono::duration<double>(t1 - t0).count());
}

}  // namespace

int main() {
    run("4.2 superpos", example42(), 2.0, 0.8, DataKind::Phaseless, Component::Superposition,
        0.0, 1, 32);
    run("4.2 superpos", example42(), 2.0, 0.8, DataKind::Phaseless, Component::Superposition,
        0.05, 1, 32);
    run("4.1 superpos", example41(), 2.0, 1.0, DataKind::Phase, Component::Superposition,
        0.05, 1, 32);
    run("4.2 plane-only", example42(), 2.0, 0.8, DataKind::Phaseless, Component::PlaneOnly,
        0.0, 1, 32);
    run("4.2 evanescent-only", example42(), 2.0, 0.8, DataKind::Phaseless,
        Component::EvanescentOnly, 0.0, 1, 32);
    run("4.2 evanescent-only", example42(), 2.0, 0.8, DataKind::Phaseless,
        Component::EvanescentOnly, 0.05, 1, 32);
    return 0;
}
