#include "nowcast/kalman.hpp"

#include "nowcast/error.hpp"

#include <cmath>
#include <numbers>

namespace nowcast {

namespace {

constexpr double kPsdTolerance = 1e-8;

void symmetrize(Matrix& p) { p = 0.5 * (p + p.transpose()).eval(); }

void check_psd(const Matrix& p, std::int64_t day, const char* what) {
    const double scale = std::max(1.0, p.diagonal().cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        const double d = p(i, i);
        if (!std::isfinite(d) || d < -kPsdTolerance * scale) {
            throw FilterFailure(day, std::string(what) + " covariance is not positive semi-definite");
        }
    }
}

// One pass of the filter. When `out` is non-null every step is recorded.
double run_filter(const StateSpaceSystem& sys, const ObservationSet& obs, FilterResult* out,
                  std::size_t* n_obs) {
    if (obs.n_days() != sys.n_days()) {
        throw ContractError("observation set covers " + std::to_string(obs.n_days()) +
                            " days but the system has " + std::to_string(sys.n_days()));
    }
    const auto n = static_cast<Eigen::Index>(sys.state_dim());
    constexpr double log_2pi = 1.8378770664093454835606594728112;  // ln(2 pi)

    Vector a = sys.initial_mean();
    Matrix p = sys.initial_cov();
    Vector a_pred(n);
    Matrix p_pred(n, n);
    double loglik = 0.0;
    std::size_t count = 0;

    if (out != nullptr) out->steps.resize(static_cast<std::size_t>(sys.n_days()));

    std::vector<Eigen::Index> rows;
    for (std::int64_t t = 0; t < sys.n_days(); ++t) {
        const TransitionBlock& tr = sys.transition(t);
        a_pred.noalias() = tr.transition * a;
        p_pred.noalias() = tr.transition * p * tr.transition.transpose();
        p_pred += tr.shock_cov;
        symmetrize(p_pred);
        check_psd(p_pred, t, "predicted");

        const auto present = obs.at(t);
        FilterStep* step = out != nullptr ? &out->steps[static_cast<std::size_t>(t)] : nullptr;
        if (step != nullptr) {
            step->predicted_mean = a_pred;
            step->predicted_cov = p_pred;
        }

        if (present.empty()) {
            a = a_pred;
            p = p_pred;
        } else {
            const MeasurementBlock* block = sys.measurement(t);
            rows.clear();
            for (const Observation& o : present) {
                std::optional<std::size_t> row;
                if (block != nullptr) {
                    for (std::size_t r = 0; r < block->slots.size(); ++r) {
                        if (block->slots[r] == o.slot) row = r;
                    }
                }
                if (!row) {
                    throw SchemaError("observation for slot " + std::to_string(o.slot) + " on day " +
                                      std::to_string(t) + " is not declared by the system");
                }
                rows.push_back(static_cast<Eigen::Index>(*row));
            }
            const auto m = static_cast<Eigen::Index>(rows.size());
            Matrix z(m, n);
            Matrix h(m, m);
            Vector v(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                z.row(i) = block->loading.row(rows[static_cast<std::size_t>(i)]);
                v(i) = present[static_cast<std::size_t>(i)].value - block->intercept(rows[static_cast<std::size_t>(i)]);
                for (Eigen::Index j = 0; j < m; ++j) {
                    h(i, j) = block->noise_cov(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
                }
            }
            v.noalias() -= z * a_pred;

            const Matrix pzt = p_pred * z.transpose();
            Matrix f = z * pzt + h;
            symmetrize(f);
            const Eigen::LLT<Matrix> llt(f);
            if (llt.info() != Eigen::Success) {
                throw FilterFailure(t, "prediction-error covariance is not positive definite");
            }
            const Matrix gain = llt.solve(pzt.transpose()).transpose();  // n x m
            a.noalias() = a_pred + gain * v;

            Matrix ikz = Matrix::Identity(n, n);
            ikz.noalias() -= gain * z;
            p.noalias() = ikz * p_pred * ikz.transpose();
            p.noalias() += gain * h * gain.transpose();
            symmetrize(p);
            check_psd(p, t, "filtered");

            const Matrix& l = llt.matrixLLT();
            double log_det = 0.0;
            for (Eigen::Index i = 0; i < m; ++i) log_det += 2.0 * std::log(l(i, i));
            const double quad = v.dot(llt.solve(v));
            loglik += -0.5 * (static_cast<double>(m) * log_2pi + log_det + quad);
            count += static_cast<std::size_t>(m);

            if (step != nullptr) {
                step->slots.reserve(present.size());
                for (const Observation& o : present) step->slots.push_back(o.slot);
                step->prediction_errors = v;
                step->error_cov = f;
            }
        }
        if (step != nullptr) {
            step->filtered_mean = a;
            step->filtered_cov = p;
        }
    }
    if (n_obs != nullptr) *n_obs = count;
    return loglik;
}

}  // namespace

FilterResult filter(const StateSpaceSystem& system, const ObservationSet& observations) {
    FilterResult result;
    result.log_likelihood = run_filter(system, observations, &result, &result.n_observations);
    return result;
}

double log_likelihood(const StateSpaceSystem& system, const ObservationSet& observations) {
    return run_filter(system, observations, nullptr, nullptr);
}

SmootherResult smooth(const StateSpaceSystem& system, const FilterResult& filtered) {
    const auto n_days = system.n_days();
    const auto n = static_cast<Eigen::Index>(system.state_dim());
    if (static_cast<std::int64_t>(filtered.steps.size()) != n_days) {
        throw ContractError("filter result has " + std::to_string(filtered.steps.size()) +
                            " days but the system has " + std::to_string(n_days));
    }
    for (const auto& s : filtered.steps) {
        if (s.filtered_mean.size() != n || s.predicted_cov.rows() != n) {
            throw ContractError("filter result state dimension does not match the system");
        }
    }

    SmootherResult out;
    out.means.resize(static_cast<std::size_t>(n_days));
    out.covs.resize(static_cast<std::size_t>(n_days));
    out.ads.resize(static_cast<std::size_t>(n_days));
    out.ads_std.resize(static_cast<std::size_t>(n_days));

    // r and N accumulate information from days after t, expressed against the
    // predicted state of day t+1.
    Vector r = Vector::Zero(n);
    Matrix big_n = Matrix::Zero(n, n);
    Vector g(n);
    Matrix gm(n, n);
    const std::size_t factor = system.layout.factor;

    for (std::int64_t t = n_days - 1; t >= 0; --t) {
        const FilterStep& step = filtered.steps[static_cast<std::size_t>(t)];
        if (t == n_days - 1) {
            g.setZero();
            gm.setZero();
        } else {
            const Matrix& tr = system.transition(t + 1).transition;
            g.noalias() = tr.transpose() * r;
            gm.noalias() = tr.transpose() * big_n * tr;
        }

        Vector mean = step.filtered_mean;
        Matrix cov = step.filtered_cov;
        if (t != n_days - 1) {
            mean.noalias() += step.filtered_cov * g;
            cov.noalias() -= step.filtered_cov * gm * step.filtered_cov;
            symmetrize(cov);
        }

        if (step.slots.empty()) {
            r = g;
            big_n = gm;
        } else {
            const MeasurementBlock* block = system.measurement(t);
            const auto m = static_cast<Eigen::Index>(step.slots.size());
            Matrix z(m, n);
            for (Eigen::Index i = 0; i < m; ++i) {
                const auto row = system.row_of(t, step.slots[static_cast<std::size_t>(i)]);
                if (block == nullptr || !row) throw ContractError("filter result does not match the system");
                z.row(i) = block->loading.row(static_cast<Eigen::Index>(*row));
            }
            const Eigen::LLT<Matrix> llt(step.error_cov);
            const Matrix finv_z = llt.solve(z);  // F^{-1} Z
            Matrix m_mat = Matrix::Identity(n, n);
            m_mat.noalias() -= step.predicted_cov * z.transpose() * finv_z;
            r.noalias() = finv_z.transpose() * step.prediction_errors;
            r.noalias() += m_mat.transpose() * g;
            big_n.noalias() = z.transpose() * finv_z;
            big_n.noalias() += m_mat.transpose() * gm * m_mat;
            symmetrize(big_n);
        }

        out.ads[static_cast<std::size_t>(t)] = mean(static_cast<Eigen::Index>(factor));
        out.ads_std[static_cast<std::size_t>(t)] =
            std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(factor), static_cast<Eigen::Index>(factor))));
        out.means[static_cast<std::size_t>(t)] = std::move(mean);
        out.covs[static_cast<std::size_t>(t)] = std::move(cov);
    }
    return out;
}

}  // namespace nowcast
