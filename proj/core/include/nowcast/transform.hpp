#pragma once

#include "nowcast/model.hpp"

#include <string>
#include <vector>

namespace nowcast {

/// Bijection between valid DfmParams and an unconstrained vector.
///
///   factor AR      partial autocorrelations r_i = tanh(theta_i), mapped to
///                  AR coefficients by the Durbin-Levinson recursion, so every
///                  theta gives a stationary polynomial
///   error AR       phi = tanh(theta)            (ar1 indicators only)
///   error std      sigma = exp(theta)
///   loading, mean  identity
///
/// Coordinate order: factor partials, then per indicator loading, error_ar
/// (if ar1), error_std, mean.
class ParamTransform {
public:
    explicit ParamTransform(const DfmSpec& spec);

    std::size_t size() const { return names_.size(); }
    /// Names in natural units, e.g. "factor.ar1", "payems.loading".
    const std::vector<std::string>& names() const { return names_; }
    /// Index of a named coordinate; throws ValidationError when unknown.
    std::size_t index_of(std::string_view name) const;

    DfmParams to_params(const Vector& theta) const;
    /// Throws ConfigError for parameters outside the valid region.
    Vector to_theta(const DfmParams& params) const;

    /// Natural-unit value of each coordinate (AR coefficients rather than
    /// partials, sigma rather than log sigma).
    Vector natural(const DfmParams& params) const;
    /// Returns params with one natural-unit coordinate replaced.
    DfmParams with_natural(DfmParams params, std::size_t coordinate, double value) const;

private:
    DfmSpec spec_;
    std::vector<std::string> names_;
};

/// AR coefficients from partial autocorrelations in (-1, 1).
std::vector<double> partials_to_ar(const std::vector<double>& partials);
/// Inverse of partials_to_ar; throws ConfigError for a non-stationary input.
std::vector<double> ar_to_partials(const std::vector<double>& ar);

}  // namespace nowcast
