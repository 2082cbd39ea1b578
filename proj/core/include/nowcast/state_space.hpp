#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nowcast {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Transition into day t: s_t = T s_{t-1} + e_t, e_t ~ N(0, Q).
struct TransitionBlock {
    Matrix transition;
    Matrix shock_cov;
};

/// Measurement rows available on a day: y = Z s_t + d + u, u ~ N(0, H).
/// `slots` names which observable series each row belongs to.
struct MeasurementBlock {
    std::vector<std::size_t> slots;
    Matrix loading;
    Vector intercept;
    Matrix noise_cov;
};

/// Describes what each state coordinate means.
struct StateLayout {
    std::vector<std::string> labels;
    std::size_t factor = 0;  // coordinate holding the current factor value
};

/// Time-varying linear-Gaussian system over a daily grid. Transition and
/// measurement blocks are pooled; each day references one of each (or no
/// measurement block). The initial distribution is for the state on the day
/// before the grid starts, so day 0 is reached through its own transition.
class StateSpaceSystem {
public:
    StateSpaceSystem(std::size_t state_dim, std::size_t slot_count, Vector initial_mean,
                     Matrix initial_cov);

    std::size_t add_transition(TransitionBlock block);
    std::size_t add_measurement(MeasurementBlock block);
    void append_day(std::size_t transition_id, std::optional<std::size_t> measurement_id);

    std::int64_t n_days() const { return static_cast<std::int64_t>(days_.size()); }
    std::size_t state_dim() const { return state_dim_; }
    std::size_t slot_count() const { return slot_count_; }

    const TransitionBlock& transition(std::int64_t t) const;
    /// nullptr when no series is observable on day t.
    const MeasurementBlock* measurement(std::int64_t t) const;
    /// Row of `slot` within the day's measurement block, if declared.
    std::optional<std::size_t> row_of(std::int64_t t, std::size_t slot) const;

    const Vector& initial_mean() const { return initial_mean_; }
    const Matrix& initial_cov() const { return initial_cov_; }

    std::size_t transition_pool_size() const { return transitions_.size(); }
    std::size_t measurement_pool_size() const { return measurements_.size(); }
    /// Total number of measurement rows over all days.
    std::size_t measurement_row_count() const;

    StateLayout layout;

private:
    struct DayRef {
        std::size_t transition;
        std::optional<std::size_t> measurement;
    };

    std::size_t state_dim_;
    std::size_t slot_count_;
    Vector initial_mean_;
    Matrix initial_cov_;
    std::vector<TransitionBlock> transitions_;
    std::vector<MeasurementBlock> measurements_;
    std::vector<DayRef> days_;
};

struct Observation {
    std::size_t slot;
    double value;
};

/// Sparse (day, slot) -> value map. Anything not present is missing.
class ObservationSet {
public:
    explicit ObservationSet(std::int64_t n_days = 0);

    /// Throws ValidationError on a duplicate (day, slot) or a non-finite value.
    void add(std::int64_t day, std::size_t slot, double value);
    bool remove(std::int64_t day, std::size_t slot);

    std::span<const Observation> at(std::int64_t day) const;
    std::int64_t n_days() const { return static_cast<std::int64_t>(by_day_.size()); }
    std::size_t count() const { return count_; }
    /// Last day with at least one observation.
    std::optional<std::int64_t> last_observed_day() const;

private:
    std::vector<std::vector<Observation>> by_day_;
    std::size_t count_ = 0;
};

/// Solves P = A P A' + Q for a stable A (small dimensions only).
Matrix stationary_covariance(const Matrix& a, const Matrix& q);

}  // namespace nowcast
