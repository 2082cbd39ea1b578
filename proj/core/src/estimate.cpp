#include "nowcast/estimate.hpp"

#include "nowcast/error.hpp"
#include "nowcast/kalman.hpp"

#include <cmath>
#include <limits>

namespace nowcast {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log_likelihood(const DfmSpec& spec, const Grid& grid, const ObservationSet& obs, const DfmParams& p) {
    try {
        const double ll = log_likelihood(build_state_space(spec, p, grid), obs);
        return std::isfinite(ll) ? ll : kNegInf;
    } catch (const ConfigError&) {
        return kNegInf;
    } catch (const NumericalError&) {
        return kNegInf;
    }
}

}  // namespace

OptimizerKind parse_optimizer_kind(std::string_view text) {
    if (text == "simplex") return OptimizerKind::simplex;
    if (text == "quasi-newton" || text == "quasi_newton" || text == "bfgs") return OptimizerKind::quasi_newton;
    throw ValidationError("unknown optimizer '" + std::string(text) + "'");
}

double model_log_likelihood(const DfmSpec& spec, const Grid& grid, const ObservationSet& observations,
                            const DfmParams& params) {
    return log_likelihood(build_state_space(spec, params, grid), observations);
}

EstimationReport estimate_mle(const DfmSpec& spec, const Grid& grid, const ObservationSet& observations,
                              const DfmParams& init, const EstimationOptions& options) {
    spec.validate();
    const ParamTransform transform(spec);
    const Vector theta0 = transform.to_theta(init);

    const double ll0 = safe_log_likelihood(spec, grid, observations, init);
    if (!std::isfinite(ll0)) throw InitializationError("log-likelihood is not finite at the initial parameters");

    const Objective negative_ll = [&](const Vector& theta) {
        return -safe_log_likelihood(spec, grid, observations, transform.to_params(theta));
    };

    const OptimizerResult opt = options.optimizer == OptimizerKind::simplex
                                    ? nelder_mead(negative_ll, theta0, options.optimizer_options)
                                    : quasi_newton(negative_ll, theta0, options.optimizer_options);

    EstimationReport report;
    report.initial_loglik = ll0;
    report.params = transform.to_params(opt.x);
    if (options.sign_convention) report.params = apply_sign_convention(spec, report.params);
    report.loglik = -opt.value;
    report.iterations = opt.iterations;
    report.evaluations = opt.evaluations;
    report.converged = opt.converged;
    report.trace.reserve(opt.trace.size());
    for (const auto& tp : opt.trace) report.trace.push_back(TracePoint{tp.x, -tp.value});
    return report;
}

std::vector<std::pair<double, double>> profile_likelihood(const DfmSpec& spec, const Grid& grid,
                                                          const ObservationSet& observations,
                                                          const DfmParams& params, std::string_view coordinate,
                                                          const std::vector<double>& values) {
    const ParamTransform transform(spec);
    const std::size_t idx = transform.index_of(coordinate);
    std::vector<std::pair<double, double>> out;
    out.reserve(values.size());
    for (double v : values) {
        const DfmParams p = transform.with_natural(params, idx, v);
        out.emplace_back(v, p.is_valid(spec) ? safe_log_likelihood(spec, grid, observations, p) : kNegInf);
    }
    return out;
}

StandardErrors standard_errors(const DfmSpec& spec, const Grid& grid, const ObservationSet& observations,
                               const DfmParams& params) {
    const ParamTransform transform(spec);
    StandardErrors se;
    se.theta = transform.to_theta(params);
    se.natural = transform.natural(params);
    const auto n = se.theta.size();
    se.theta_se = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
    se.natural_se = se.theta_se;

    const Objective negative_ll = [&](const Vector& theta) {
        return -safe_log_likelihood(spec, grid, observations, transform.to_params(theta));
    };
    const Matrix hess = numerical_hessian(negative_ll, se.theta);
    if (!hess.allFinite()) return se;
    const Eigen::LLT<Matrix> llt(hess);
    if (llt.info() != Eigen::Success) return se;
    const Matrix cov = llt.solve(Matrix::Identity(n, n));

    Matrix jac(n, n);
    Vector probe = se.theta;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(se.theta(j)));
        probe(j) = se.theta(j) + h;
        const Vector up = transform.natural(transform.to_params(probe));
        probe(j) = se.theta(j) - h;
        const Vector down = transform.natural(transform.to_params(probe));
        probe(j) = se.theta(j);
        jac.col(j) = (up - down) / (2.0 * h);
    }
    const Matrix nat_cov = jac * cov * jac.transpose();
    se.theta_se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    se.natural_se = nat_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    se.ok = true;
    return se;
}

}  // namespace nowcast
