#include "grating/inverse.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <sstream>

namespace grating {

Eigen::VectorXd InverseConfig::resolved_initial() const {
    const int n = 2 * M + 1;
    if (initial_gamma.empty()) return Eigen::VectorXd::Zero(n);
    if (static_cast<int>(initial_gamma.size()) != n) {
        throw ConfigError("inverse: initial_gamma must have length 2M+1");
    }
    return Eigen::Map<const Eigen::VectorXd>(initial_gamma.data(), n);
}

void InverseConfig::validate() const {
    if (M < 0) throw ConfigError("inverse: M must be >= 0");
    if (!(epsilon > 0.0)) throw ConfigError("inverse: epsilon must be positive");
    if (it_max < 1) throw ConfigError("inverse: it_max must be >= 1");
    if (phi < 0.0 || phi > 1.0) throw ConfigError("inverse: phi must lie in [0,1]");
    if (!(fd_step > 0.0)) throw ConfigError("inverse: fd_step must be positive");
    if (!initial_gamma.empty() && static_cast<int>(initial_gamma.size()) != 2 * M + 1) {
        throw ConfigError("inverse: initial_gamma must have length 2M+1");
    }
    if (!(ls.initial_step > 0.0) || !(ls.shrink > 0.0) || ls.shrink >= 1.0 ||
        !(ls.c1 > 0.0) || ls.c1 >= 1.0 || ls.max_trials < 1) {
        throw ConfigError("inverse: invalid line-search parameters");
    }
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::Converged: return "converged";
        case Termination::MaxIterations: return "max-iterations";
        case Termination::LineSearchFailed: return "line-search-failed";
        case Termination::SolverFailed: return "solver-failed";
    }
    return "unknown";
}

ForwardContext::ForwardContext(IlluminationSpec spec, double h, int n_points,
                               SolverConfig solver_cfg)
    : spec_(spec), h_(h), n_points_(n_points), solver_cfg_(solver_cfg) {}

GratingProfile ForwardContext::make_profile(const Eigen::VectorXd& gamma) const {
    return GratingProfile(spec_.period,
                          std::vector<double>(gamma.data(), gamma.data() + gamma.size()));
}

std::vector<Complex> ForwardContext::scattered_samples(const Eigen::VectorXd& gamma) const {
    const FieldSolution sol = solve_forward(make_profile(gamma), spec_, h_, solver_cfg_);
    return scattered_trace(sol, n_points_);
}

std::vector<std::vector<Complex>> ForwardContext::jacobian_columns(const Eigen::VectorXd& gamma,
                                                                   double fd_step) const {
    const int n = static_cast<int>(gamma.size());
    std::vector<std::future<std::vector<Complex>>> plus(static_cast<std::size_t>(n)),
        minus(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        plus[static_cast<std::size_t>(j)] = std::async(std::launch::async, [this, &gamma, fd_step, j] {
            Eigen::VectorXd g = gamma;
            g[j] += fd_step;
            return scattered_samples(g);
        });
        minus[static_cast<std::size_t>(j)] = std::async(std::launch::async, [this, &gamma, fd_step, j] {
            Eigen::VectorXd g = gamma;
            g[j] -= fd_step;
            return scattered_samples(g);
        });
    }
    std::vector<std::vector<Complex>> cols(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto up = plus[static_cast<std::size_t>(j)].get();
        const auto dn = minus[static_cast<std::size_t>(j)].get();
        std::vector<Complex> col(up.size());
        for (std::size_t m = 0; m < up.size(); ++m) {
            col[m] = (up[m] - dn[m]) / (2.0 * fd_step);
        }
        cols[static_cast<std::size_t>(j)] = std::move(col);
    }
    return cols;
}

namespace {

void check_phase(const NearFieldData& data) {
    if (data.kind != DataKind::Phase) throw ConfigError("objective: phase data required");
}
void check_phaseless(const NearFieldData& data) {
    if (data.kind != DataKind::Phaseless) throw ConfigError("objective: phaseless data required");
}

double cost_phase_from(const std::vector<Complex>& samples, const NearFieldData& data) {
    double c = 0.0;
    for (std::size_t m = 0; m < samples.size(); ++m) {
        c += std::norm(samples[m] - data.values[m]);
    }
    return c / static_cast<double>(samples.size());
}

double cost_phaseless_from(const std::vector<Complex>& samples, const NearFieldData& data) {
    double c = 0.0;
    for (std::size_t m = 0; m < samples.size(); ++m) {
        const double r = std::norm(samples[m]) - data.intensities[m];
        c += r * r;
    }
    return c / static_cast<double>(samples.size());
}

Eigen::VectorXd grad_phase_from(const std::vector<Complex>& samples,
                                const std::vector<std::vector<Complex>>& cols,
                                const NearFieldData& data) {
    const int n = static_cast<int>(cols.size());
    const double N = static_cast<double>(samples.size());
    Eigen::VectorXd g(n);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        const auto& dP = cols[static_cast<std::size_t>(j)];
        for (std::size_t m = 0; m < samples.size(); ++m) {
            acc += (std::conj(samples[m] - data.values[m]) * dP[m]).real();
        }
        g[j] = 2.0 * acc / N;
    }
    return g;
}

Eigen::VectorXd grad_phaseless_from(const std::vector<Complex>& samples,
                                    const std::vector<std::vector<Complex>>& cols,
                                    const NearFieldData& data) {
    const int n = static_cast<int>(cols.size());
    const double N = static_cast<double>(samples.size());
    Eigen::VectorXd g(n);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        const auto& dP = cols[static_cast<std::size_t>(j)];
        for (std::size_t m = 0; m < samples.size(); ++m) {
            const double dQ = 2.0 * (std::conj(samples[m]) * dP[m]).real();
            acc += (std::norm(samples[m]) - data.intensities[m]) * dQ;
        }
        g[j] = 2.0 * acc / N;
    }
    return g;
}

}  // namespace

double cost_phase(const Eigen::VectorXd& gamma, const NearFieldData& data,
                  const ForwardContext& ctx) {
    check_phase(data);
    return cost_phase_from(ctx.scattered_samples(gamma), data);
}

Eigen::VectorXd grad_phase(const Eigen::VectorXd& gamma, const NearFieldData& data,
                           const ForwardContext& ctx, double fd_step) {
    check_phase(data);
    const auto samples = ctx.scattered_samples(gamma);
    return grad_phase_from(samples, ctx.jacobian_columns(gamma, fd_step), data);
}

double cost_phaseless(const Eigen::VectorXd& gamma, const NearFieldData& data,
                      const ForwardContext& ctx) {
    check_phaseless(data);
    return cost_phaseless_from(ctx.scattered_samples(gamma), data);
}

Eigen::VectorXd grad_phaseless(const Eigen::VectorXd& gamma, const NearFieldData& data,
                               const ForwardContext& ctx, double fd_step) {
    check_phaseless(data);
    const auto samples = ctx.scattered_samples(gamma);
    return grad_phaseless_from(samples, ctx.jacobian_columns(gamma, fd_step), data);
}

Eigen::MatrixXd broyden_update(const Eigen::MatrixXd& B, const Eigen::VectorXd& s,
                               const Eigen::VectorXd& y, double phi, bool* skipped) {
    if (skipped != nullptr) *skipped = false;
    const double sy = y.dot(s);
    const Eigen::VectorXd Bs = B * s;
    const double sBs = s.dot(Bs);
    const double curvature_guard = 1e-12 * y.norm() * s.norm();
    const double sbs_guard = 1e-12 * s.norm() * Bs.norm();
    if (std::abs(sy) <= curvature_guard || std::abs(sBs) <= sbs_guard) {
        if (skipped != nullptr) *skipped = true;
        return B;
    }
    const int n = static_cast<int>(B.rows());
    const Eigen::MatrixXd yyT = (y * y.transpose()) / sy;
    const Eigen::MatrixXd rank_two = B + yyT - (Bs * Bs.transpose()) / sBs;
    const Eigen::MatrixXd W =
        Eigen::MatrixXd::Identity(n, n) - (y * s.transpose()) / sy;
    const Eigen::MatrixXd dual = W * B * W.transpose() + yyT;
    return (1.0 - phi) * rank_two + phi * dual;
}

LineSearchResult line_search(const std::function<double(const Eigen::VectorXd&)>& cost,
                             const Eigen::VectorXd& gamma, double cost0,
                             const Eigen::VectorXd& grad, Eigen::VectorXd p,
                             const LineSearchParams& params) {
    LineSearchResult res;
    double slope = grad.dot(p);
    if (!(slope < 0.0) && grad.squaredNorm() > 0.0) {
        p = -grad;
        slope = grad.dot(p);
        res.reset_to_steepest = true;
    }
    res.direction = p;
    double alpha = params.initial_step;
    for (int trial = 0; trial < params.max_trials; ++trial) {
        ++res.trials;
        double c;
        try {
            c = cost(gamma + alpha * p);
        } catch (const SolverError&) {
            // trial profile broke the solver (e.g. exceeded the measurement
            // height); treat as a rejected step
            alpha *= params.shrink;
            continue;
        }
        if (c <= cost0 + params.c1 * alpha * slope) {
            res.success = true;
            res.alpha = alpha;
            res.cost = c;
            return res;
        }
        alpha *= params.shrink;
    }
    return res;
}

ReconstructionResult reconstruct(const NearFieldData& data, const IlluminationSpec& spec,
                                 double h, const InverseConfig& cfg,
                                 const SolverConfig& solver_cfg) {
    cfg.validate();
    spec.validate();
    if (data.size() < 1) throw ConfigError("reconstruct: empty measurement");
    // measurements must have been taken under the illumination we invert with
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(b)); };
    if (!near(data.spec.kappa, spec.kappa) || !near(data.spec.theta, spec.theta) ||
        !near(data.spec.period, spec.period) || !near(data.h, h) ||
        data.spec.components != spec.components) {
        throw ConfigError("reconstruct: measurement metadata disagrees with the illumination");
    }
    if (spec.has_evanescent() &&
        (data.spec.n0 != spec.n0 || !near(data.spec.H, spec.H))) {
        throw ConfigError("reconstruct: measurement evanescent source (n0, H) disagrees "
                          "with the illumination");
    }

    const ForwardContext ctx(spec, h, data.size(), solver_cfg);
    const bool phase = data.kind == DataKind::Phase;
    auto cost_fn = [&](const Eigen::VectorXd& g) {
        return phase ? cost_phase(g, data, ctx) : cost_phaseless(g, data, ctx);
    };
    auto eval_cost = [&](const std::vector<Complex>& samples) {
        return phase ? cost_phase_from(samples, data) : cost_phaseless_from(samples, data);
    };
    auto eval_grad = [&](const Eigen::VectorXd& g, const std::vector<Complex>& samples) {
        const auto cols = ctx.jacobian_columns(g, cfg.fd_step);
        return phase ? grad_phase_from(samples, cols, data)
                     : grad_phaseless_from(samples, cols, data);
    };

    const int n = 2 * cfg.M + 1;
    ReconstructionState st;
    st.iterate = cfg.resolved_initial();
    st.hessian_approx = Eigen::MatrixXd::Identity(n, n);
    st.termination = Termination::MaxIterations;

    Eigen::VectorXd gamma = st.iterate;
    double current_cost;
    Eigen::VectorXd grad(n);
    try {
        const auto samples = ctx.scattered_samples(gamma);
        current_cost = eval_cost(samples);
        grad = eval_grad(gamma, samples);
    } catch (const SolverError& e) {
        st.termination = Termination::SolverFailed;
        st.message = e.what();
        return {st, ctx.make_profile(gamma)};
    }
    st.cost_history.push_back(current_cost);
    st.gradient_norm_history.push_back(grad.norm());

    bool reset_once = false;
    for (int k = 1; k <= cfg.it_max; ++k) {
        Eigen::VectorXd p = st.hessian_approx.ldlt().solve(-grad);
        if (!p.allFinite()) p = -grad;

        LineSearchResult ls = line_search(cost_fn, gamma, current_cost, grad, p, cfg.ls);
        if (!ls.success && !reset_once) {
            // one restart from scratch curvature, as a steepest-descent probe
            reset_once = true;
            st.hessian_approx = Eigen::MatrixXd::Identity(n, n);
            ls = line_search(cost_fn, gamma, current_cost, grad, -grad, cfg.ls);
        }
        if (!ls.success) {
            st.termination = Termination::LineSearchFailed;
            break;
        }

        const Eigen::VectorXd step = ls.alpha * ls.direction;
        const Eigen::VectorXd gamma_next = gamma + step;
        current_cost = ls.cost;

        Eigen::VectorXd grad_next(n);
        try {
            grad_next = eval_grad(gamma_next, ctx.scattered_samples(gamma_next));
        } catch (const SolverError& e) {
            st.termination = Termination::SolverFailed;
            st.message = e.what();
            gamma = gamma_next;
            break;
        }

        st.hessian_approx =
            broyden_update(st.hessian_approx, step, grad_next - grad, cfg.phi);
        gamma = gamma_next;
        grad = grad_next;

        st.cost_history.push_back(current_cost);
        st.gradient_norm_history.push_back(grad.norm());
        st.iterations.push_back({k, current_cost, grad.norm(), ls.alpha, step.norm()});

        if (step.norm() <= cfg.epsilon) {
            st.termination = Termination::Converged;
            break;
        }
    }

    st.iterate = gamma;
    return {st, ctx.make_profile(gamma)};
}

}  // namespace grating
