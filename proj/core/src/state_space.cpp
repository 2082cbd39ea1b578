#include "nowcast/state_space.hpp"

#include "nowcast/error.hpp"

#include <algorithm>
#include <cmath>

namespace nowcast {

StateSpaceSystem::StateSpaceSystem(std::size_t state_dim, std::size_t slot_count,
                                   Vector initial_mean, Matrix initial_cov)
    : state_dim_(state_dim),
      slot_count_(slot_count),
      initial_mean_(std::move(initial_mean)),
      initial_cov_(std::move(initial_cov)) {
    const auto n = static_cast<Eigen::Index>(state_dim);
    if (state_dim == 0) throw ConfigError("state dimension must be positive");
    if (initial_mean_.size() != n || initial_cov_.rows() != n || initial_cov_.cols() != n) {
        throw ConfigError("initial state distribution has inconsistent dimensions");
    }
    layout.labels.resize(state_dim);
}

std::size_t StateSpaceSystem::add_transition(TransitionBlock block) {
    const auto n = static_cast<Eigen::Index>(state_dim_);
    if (block.transition.rows() != n || block.transition.cols() != n || block.shock_cov.rows() != n ||
        block.shock_cov.cols() != n) {
        throw ConfigError("transition block has inconsistent dimensions");
    }
    transitions_.push_back(std::move(block));
    return transitions_.size() - 1;
}

std::size_t StateSpaceSystem::add_measurement(MeasurementBlock block) {
    const auto n = static_cast<Eigen::Index>(state_dim_);
    const auto m = static_cast<Eigen::Index>(block.slots.size());
    if (m == 0 || block.loading.rows() != m || block.loading.cols() != n || block.intercept.size() != m ||
        block.noise_cov.rows() != m || block.noise_cov.cols() != m) {
        throw ConfigError("measurement block has inconsistent dimensions");
    }
    for (std::size_t i = 0; i < block.slots.size(); ++i) {
        if (block.slots[i] >= slot_count_) throw ConfigError("measurement slot out of range");
        for (std::size_t j = 0; j < i; ++j) {
            if (block.slots[i] == block.slots[j]) throw ConfigError("duplicate slot in measurement block");
        }
    }
    measurements_.push_back(std::move(block));
    return measurements_.size() - 1;
}

void StateSpaceSystem::append_day(std::size_t transition_id, std::optional<std::size_t> measurement_id) {
    if (transition_id >= transitions_.size()) throw ConfigError("unknown transition block");
    if (measurement_id && *measurement_id >= measurements_.size()) {
        throw ConfigError("unknown measurement block");
    }
    days_.push_back(DayRef{transition_id, measurement_id});
}

const TransitionBlock& StateSpaceSystem::transition(std::int64_t t) const {
    return transitions_[days_.at(static_cast<std::size_t>(t)).transition];
}

const MeasurementBlock* StateSpaceSystem::measurement(std::int64_t t) const {
    const auto& ref = days_.at(static_cast<std::size_t>(t));
    return ref.measurement ? &measurements_[*ref.measurement] : nullptr;
}

std::optional<std::size_t> StateSpaceSystem::row_of(std::int64_t t, std::size_t slot) const {
    const MeasurementBlock* block = measurement(t);
    if (block == nullptr) return std::nullopt;
    const auto it = std::find(block->slots.begin(), block->slots.end(), slot);
    if (it == block->slots.end()) return std::nullopt;
    return static_cast<std::size_t>(it - block->slots.begin());
}

std::size_t StateSpaceSystem::measurement_row_count() const {
    std::size_t total = 0;
    for (const auto& d : days_) {
        if (d.measurement) total += measurements_[*d.measurement].slots.size();
    }
    return total;
}

ObservationSet::ObservationSet(std::int64_t n_days) : by_day_(static_cast<std::size_t>(std::max<std::int64_t>(n_days, 0))) {}

void ObservationSet::add(std::int64_t day, std::size_t slot, double value) {
    if (day < 0 || day >= n_days()) {
        throw OutOfRangeError("observation day " + std::to_string(day) + " outside grid");
    }
    if (!std::isfinite(value)) throw ValidationError("non-finite observation value");
    auto& list = by_day_[static_cast<std::size_t>(day)];
    const auto it = std::lower_bound(list.begin(), list.end(), slot,
                                     [](const Observation& o, std::size_t s) { return o.slot < s; });
    if (it != list.end() && it->slot == slot) {
        throw ValidationError("duplicate observation for slot " + std::to_string(slot) + " on day " +
                              std::to_string(day));
    }
    list.insert(it, Observation{slot, value});
    ++count_;
}

bool ObservationSet::remove(std::int64_t day, std::size_t slot) {
    if (day < 0 || day >= n_days()) return false;
    auto& list = by_day_[static_cast<std::size_t>(day)];
    const auto it = std::find_if(list.begin(), list.end(), [&](const Observation& o) { return o.slot == slot; });
    if (it == list.end()) return false;
    list.erase(it);
    --count_;
    return true;
}

std::span<const Observation> ObservationSet::at(std::int64_t day) const {
    return by_day_.at(static_cast<std::size_t>(day));
}

std::optional<std::int64_t> ObservationSet::last_observed_day() const {
    for (std::int64_t t = n_days() - 1; t >= 0; --t) {
        if (!by_day_[static_cast<std::size_t>(t)].empty()) return t;
    }
    return std::nullopt;
}

Matrix stationary_covariance(const Matrix& a, const Matrix& q) {
    const Eigen::Index n = a.rows();
    // vec(P) = (I - A kron A)^{-1} vec(Q)
    Matrix kron(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            kron.block(i * n, j * n, n, n) = a(i, j) * a;
        }
    }
    const Matrix lhs = Matrix::Identity(n * n, n * n) - kron;
    const Vector vec_q = Eigen::Map<const Vector>(q.data(), n * n);
    const Vector vec_p = lhs.fullPivLu().solve(vec_q);
    Matrix p = Eigen::Map<const Matrix>(vec_p.data(), n, n);
    return 0.5 * (p + p.transpose());
}

}  // namespace nowcast
