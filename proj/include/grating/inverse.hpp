#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "grating/synth.hpp"

namespace grating {

struct LineSearchParams {
    double initial_step = 1.0;
    double shrink = 0.5;
    double c1 = 1e-4;  // sufficient-decrease constant
    int max_trials = 30;
};

struct InverseConfig {
    int M = 3;
    double epsilon = 1e-3;  // stop when ||gamma_{k+1} - gamma_k||_2 <= epsilon
    int it_max = 50;
    double phi = 0.0;  // Broyden-family parameter in [0,1]
    double fd_step = 1e-4;
    LineSearchParams ls;
    std::vector<double> initial_gamma;  // empty = zeros(2M+1)

    Eigen::VectorXd resolved_initial() const;
    void validate() const;
};

enum class Termination { Converged, MaxIterations, LineSearchFailed, SolverFailed };
std::string to_string(Termination t);

struct IterationRecord {
    int k = 0;
    double cost = 0.0;
    double grad_norm = 0.0;
    double alpha = 0.0;
    double step_norm = 0.0;
};

struct ReconstructionState {
    Eigen::VectorXd iterate;
    Eigen::MatrixXd hessian_approx;
    std::vector<double> cost_history;           // one entry per accepted iterate
    std::vector<double> gradient_norm_history;  // aligned with cost_history
    std::vector<IterationRecord> iterations;    // one row per accepted step
    Termination termination = Termination::MaxIterations;
    std::string message;
};

/// Forward model behind the objectives: coefficient vector -> scattered
/// samples at the N measurement points. Stateless and reentrant, so
/// finite-difference columns can be evaluated concurrently.
class ForwardContext {
public:
    ForwardContext(IlluminationSpec spec, double h, int n_points, SolverConfig solver_cfg);

    const IlluminationSpec& spec() const { return spec_; }
    double height() const { return h_; }
    int n_points() const { return n_points_; }
    const SolverConfig& solver_config() const { return solver_cfg_; }

    GratingProfile make_profile(const Eigen::VectorXd& gamma) const;
    std::vector<Complex> scattered_samples(const Eigen::VectorXd& gamma) const;

    /// Central-difference columns dP/dgamma_j at the sample points, evaluated
    /// concurrently; deterministic regardless of scheduling.
    std::vector<std::vector<Complex>> jacobian_columns(const Eigen::VectorXd& gamma,
                                                       double fd_step) const;

private:
    IlluminationSpec spec_;
    double h_;
    int n_points_;
    SolverConfig solver_cfg_;
};

double cost_phase(const Eigen::VectorXd& gamma, const NearFieldData& data,
                  const ForwardContext& ctx);
Eigen::VectorXd grad_phase(const Eigen::VectorXd& gamma, const NearFieldData& data,
                           const ForwardContext& ctx, double fd_step);
double cost_phaseless(const Eigen::VectorXd& gamma, const NearFieldData& data,
                      const ForwardContext& ctx);
Eigen::VectorXd grad_phaseless(const Eigen::VectorXd& gamma, const NearFieldData& data,
                               const ForwardContext& ctx, double fd_step);

/// Broyden-family update: the phi-affine blend of the rank-two update and its
/// dual. B must be symmetric; the result satisfies B+ s = y for every phi.
/// When |y's| or |s'Bs| falls below the curvature guard the update is skipped
/// and B is returned unchanged (skipped flags the caller if non-null).
Eigen::MatrixXd broyden_update(const Eigen::MatrixXd& B, const Eigen::VectorXd& s,
                               const Eigen::VectorXd& y, double phi, bool* skipped = nullptr);

struct LineSearchResult {
    bool success = false;
    double alpha = 0.0;
    double cost = 0.0;
    Eigen::VectorXd direction;  // the direction actually searched
    bool reset_to_steepest = false;
    int trials = 0;
};

/// Backtracking line search with the sufficient-decrease condition
/// C(gamma + a p) <= C(gamma) + c1 a grad'p. A non-descent p is replaced by
/// -grad before searching. Solver failures during trials reject the trial.
LineSearchResult line_search(const std::function<double(const Eigen::VectorXd&)>& cost,
                             const Eigen::VectorXd& gamma, double cost0,
                             const Eigen::VectorXd& grad, Eigen::VectorXd p,
                             const LineSearchParams& params);

struct ReconstructionResult {
    ReconstructionState state;
    GratingProfile profile;
};

/// Quasi-Newton reconstruction of the Fourier coefficients from near-field
/// data; the objective (phase / phaseless) follows data.kind.
ReconstructionResult reconstruct(const NearFieldData& data, const IlluminationSpec& spec,
                                 double h, const InverseConfig& cfg,
                                 const SolverConfig& solver_cfg);

}  // namespace grating
