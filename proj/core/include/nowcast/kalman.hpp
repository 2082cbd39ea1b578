#pragma once

#include "nowcast/state_space.hpp"

#include <cstdint>
#include <vector>

namespace nowcast {

/// Filter output for one grid day. `slots`, `prediction_errors` and
/// `error_cov` only cover the rows actually observed that day.
struct FilterStep {
    Vector predicted_mean;
    Matrix predicted_cov;
    Vector filtered_mean;
    Matrix filtered_cov;
    std::vector<std::size_t> slots;
    Vector prediction_errors;
    Matrix error_cov;
};

struct FilterResult {
    std::vector<FilterStep> steps;
    double log_likelihood = 0.0;
    std::size_t n_observations = 0;
};

struct SmootherResult {
    std::vector<Vector> means;
    std::vector<Matrix> covs;
    /// Smoothed factor coordinate per day: the extracted index.
    std::vector<double> ads;
    std::vector<double> ads_std;
};

/// Kalman filter with row deletion for missing data and Joseph-form updates.
/// Throws SchemaError for an observation on an undeclared (day, slot),
/// ContractError when the observation grid does not match the system, and
/// FilterFailure when a covariance loses positive semi-definiteness.
FilterResult filter(const StateSpaceSystem& system, const ObservationSet& observations);

/// Fixed-interval smoother run backwards over stored filter output. Works
/// from filtered moments, so the last day reproduces the filtered mean and
/// covariance bit for bit.
SmootherResult smooth(const StateSpaceSystem& system, const FilterResult& filtered);

/// Prediction-error-decomposition log-likelihood without storing per-day
/// moments. Same value as filter(...).log_likelihood.
double log_likelihood(const StateSpaceSystem& system, const ObservationSet& observations);

}  // namespace nowcast
