#pragma once

#include <nowcast/state_space.hpp>

#include <vector>

namespace nowcast::testing {

/// Moments obtained by writing every state and observation as one joint
/// Gaussian vector and conditioning with dense linear algebra. Independent of
/// the recursive filter; only usable for short grids.
struct OracleResult {
    std::vector<Vector> filtered_means;
    std::vector<Matrix> filtered_covs;
    std::vector<Vector> smoothed_means;
    std::vector<Matrix> smoothed_covs;
    double log_likelihood = 0.0;
};

OracleResult dense_oracle(const StateSpaceSystem& system, const ObservationSet& observations);

/// max|a - b| <= tol * max(1, max|b|), elementwise over matching shapes.
bool close_relative(const Matrix& a, const Matrix& b, double tol);
bool close_relative(double a, double b, double tol);

}  // namespace nowcast::testing
