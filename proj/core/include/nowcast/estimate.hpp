#pragma once

#include "nowcast/model.hpp"
#include "nowcast/optimizer.hpp"
#include "nowcast/transform.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace nowcast {

enum class OptimizerKind { simplex, quasi_newton };

OptimizerKind parse_optimizer_kind(std::string_view text);

struct EstimationOptions {
    OptimizerKind optimizer = OptimizerKind::simplex;
    OptimizerOptions optimizer_options;
    bool sign_convention = true;
};

struct EstimationReport {
    DfmParams params;
    double loglik = 0.0;
    double initial_loglik = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    /// Unconstrained parameter vector and log-likelihood after each iteration.
    std::vector<TracePoint> trace;
};

/// Log-likelihood of `params` on the given grid and observations.
double model_log_likelihood(const DfmSpec& spec, const Grid& grid, const ObservationSet& observations,
                            const DfmParams& params);

/// Maximizes the log-likelihood over the unconstrained reparameterization.
/// Throws InitializationError when the likelihood at `init` is not finite and
/// OptimizerError when no other trial point is finite.
EstimationReport estimate_mle(const DfmSpec& spec, const Grid& grid, const ObservationSet& observations,
                              const DfmParams& init, const EstimationOptions& options = {});

/// Log-likelihood along `values` of one natural-unit coordinate (named as in
/// ParamTransform::names()), others held fixed. Values outside the valid
/// region yield -infinity.
std::vector<std::pair<double, double>> profile_likelihood(const DfmSpec& spec, const Grid& grid,
                                                          const ObservationSet& observations,
                                                          const DfmParams& params, std::string_view coordinate,
                                                          const std::vector<double>& values);

/// Asymptotic standard errors from the numerical Hessian of the negative
/// log-likelihood in unconstrained coordinates, mapped to natural units by
/// the delta method.
struct StandardErrors {
    Vector theta;
    Vector theta_se;
    Vector natural;
    Vector natural_se;
    bool ok = false;  // false when the Hessian is not positive definite
};

StandardErrors standard_errors(const DfmSpec& spec, const Grid& grid, const ObservationSet& observations,
                               const DfmParams& params);

}  // namespace nowcast
