#include "nowcast/transform.hpp"

#include "nowcast/error.hpp"

#include <cmath>

namespace nowcast {

std::vector<double> partials_to_ar(const std::vector<double>& partials) {
    std::vector<double> phi;
    for (std::size_t k = 0; k < partials.size(); ++k) {
        const double r = partials[k];
        std::vector<double> next(k + 1);
        for (std::size_t j = 0; j < k; ++j) next[j] = phi[j] - r * phi[k - 1 - j];
        next[k] = r;
        phi = std::move(next);
    }
    return phi;
}

std::vector<double> ar_to_partials(const std::vector<double>& ar) {
    std::vector<double> phi = ar;
    std::vector<double> partials(ar.size());
    for (std::size_t k = ar.size(); k-- > 0;) {
        const double r = phi[k];
        if (!(std::abs(r) < 1.0)) throw ConfigError("AR coefficients are not stationary");
        partials[k] = r;
        const double denom = 1.0 - r * r;
        std::vector<double> prev(k);
        for (std::size_t j = 0; j < k; ++j) prev[j] = (phi[j] + r * phi[k - 1 - j]) / denom;
        phi = std::move(prev);
    }
    return partials;
}

ParamTransform::ParamTransform(const DfmSpec& spec) : spec_(spec) {
    for (int i = 1; i <= spec.factor_ar_order; ++i) names_.push_back("factor.ar" + std::to_string(i));
    for (const auto& ind : spec.indicators) {
        names_.push_back(ind.id + ".loading");
        if (ind.measurement_error == ErrorDynamics::ar1) names_.push_back(ind.id + ".error_ar");
        names_.push_back(ind.id + ".error_std");
        names_.push_back(ind.id + ".mean");
    }
}

std::size_t ParamTransform::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return i;
    }
    throw ValidationError("unknown parameter coordinate '" + std::string(name) + "'");
}

DfmParams ParamTransform::to_params(const Vector& theta) const {
    if (static_cast<std::size_t>(theta.size()) != size()) throw ContractError("theta has the wrong length");
    DfmParams out;
    Eigen::Index i = 0;
    std::vector<double> partials;
    for (int k = 0; k < spec_.factor_ar_order; ++k) partials.push_back(std::tanh(theta(i++)));
    out.factor_ar = partials_to_ar(partials);
    for (const auto& ind : spec_.indicators) {
        IndicatorParams ip;
        ip.loading = theta(i++);
        if (ind.measurement_error == ErrorDynamics::ar1) ip.error_ar = std::tanh(theta(i++));
        ip.error_std = std::exp(theta(i++));
        ip.mean = theta(i++);
        out.indicators.push_back(ip);
    }
    return out;
}

Vector ParamTransform::to_theta(const DfmParams& params) const {
    params.validate(spec_);
    Vector theta(static_cast<Eigen::Index>(size()));
    Eigen::Index i = 0;
    for (double r : ar_to_partials(params.factor_ar)) theta(i++) = std::atanh(r);
    for (std::size_t k = 0; k < spec_.indicators.size(); ++k) {
        const auto& ip = params.indicators[k];
        theta(i++) = ip.loading;
        if (spec_.indicators[k].measurement_error == ErrorDynamics::ar1) theta(i++) = std::atanh(ip.error_ar);
        theta(i++) = std::log(ip.error_std);
        theta(i++) = ip.mean;
    }
    return theta;
}

Vector ParamTransform::natural(const DfmParams& params) const {
    Vector out(static_cast<Eigen::Index>(size()));
    Eigen::Index i = 0;
    for (double a : params.factor_ar) out(i++) = a;
    for (std::size_t k = 0; k < spec_.indicators.size(); ++k) {
        const auto& ip = params.indicators[k];
        out(i++) = ip.loading;
        if (spec_.indicators[k].measurement_error == ErrorDynamics::ar1) out(i++) = ip.error_ar;
        out(i++) = ip.error_std;
        out(i++) = ip.mean;
    }
    return out;
}

DfmParams ParamTransform::with_natural(DfmParams params, std::size_t coordinate, double value) const {
    if (coordinate >= size()) throw ValidationError("parameter coordinate out of range");
    std::size_t i = 0;
    for (auto& a : params.factor_ar) {
        if (i++ == coordinate) a = value;
    }
    for (std::size_t k = 0; k < spec_.indicators.size(); ++k) {
        auto& ip = params.indicators[k];
        if (i++ == coordinate) ip.loading = value;
        if (spec_.indicators[k].measurement_error == ErrorDynamics::ar1 && i++ == coordinate) ip.error_ar = value;
        if (i++ == coordinate) ip.error_std = value;
        if (i++ == coordinate) ip.mean = value;
    }
    return params;
}

}  // namespace nowcast
