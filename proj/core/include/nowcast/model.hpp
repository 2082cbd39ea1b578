#pragma once

#include "nowcast/calendar.hpp"
#include "nowcast/config.hpp"
#include "nowcast/state_space.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nowcast {

enum class IndicatorKind { stock, flow };
enum class Transform { level, log_difference, difference };
enum class ErrorDynamics { iid, ar1 };

std::string_view to_string(IndicatorKind k);
std::string_view to_string(Transform t);
std::string_view to_string(ErrorDynamics e);

struct IndicatorSpec {
    std::string id;
    Frequency frequency = Frequency::monthly;
    IndicatorKind kind = IndicatorKind::flow;
    Transform transform = Transform::level;
    ErrorDynamics measurement_error = ErrorDynamics::ar1;
};

/// Measurement-error default: iid for weekly and daily series, ar1 otherwise.
ErrorDynamics default_error_dynamics(Frequency f);

/// One latent daily factor loading on mixed-frequency indicators.
struct DfmSpec {
    std::vector<IndicatorSpec> indicators;
    int factor_ar_order = 1;
    Date grid_start;
    Date grid_end;
    std::chrono::weekday week_end = std::chrono::Saturday;
    /// Indicator whose loading is forced positive after estimation. Empty
    /// means the first indicator.
    std::string reference;

    Grid grid() const;
    Grid grid_until(Date last) const;
    std::size_t index_of(std::string_view id) const;
    std::size_t reference_index() const;
    /// Throws ConfigError on an empty indicator list, duplicate ids, p < 1,
    /// or an unknown reference indicator.
    void validate() const;

    static DfmSpec from_config(const KeyValueFile& kv);
    static DfmSpec load(const std::filesystem::path& path);
    KeyValueFile to_config() const;
};

struct IndicatorParams {
    double loading = 1.0;
    double error_ar = 0.0;   // 0 for iid errors
    double error_std = 1.0;  // innovation std of the measurement error
    double mean = 0.0;

    friend bool operator==(const IndicatorParams&, const IndicatorParams&) = default;
};

/// Factor innovation std is fixed at 1.
struct DfmParams {
    std::vector<double> factor_ar;
    std::vector<IndicatorParams> indicators;

    /// Stationarity of the factor AR polynomial, |phi_k| < 1, sigma_k > 0,
    /// dimensions matching `spec`. Throws ConfigError.
    void validate(const DfmSpec& spec) const;
    bool is_valid(const DfmSpec& spec) const;

    /// lambda=1, rho=0.9 (then 0 for higher lags), sigma=1, phi=0, mu=0.
    static DfmParams defaults(const DfmSpec& spec);

    friend bool operator==(const DfmParams&, const DfmParams&) = default;
};

/// True when the AR polynomial 1 - a_1 z - ... - a_p z^p has all roots
/// outside the unit circle.
bool is_stationary(const std::vector<double>& ar);

/// Per-indicator affine map applied to transformed data before the model
/// sees it: z = (y - center) / scale.
struct Standardization {
    std::vector<double> center;
    std::vector<double> scale;

    static Standardization identity(std::size_t n);
    friend bool operator==(const Standardization&, const Standardization&) = default;
};

/// Parameters plus the standardization they were estimated under.
struct FittedModel {
    DfmParams params;
    Standardization standardization;

    static FittedModel from_config(const DfmSpec& spec, const KeyValueFile& kv);
    static FittedModel load(const DfmSpec& spec, const std::filesystem::path& path);
    KeyValueFile to_config(const DfmSpec& spec) const;
};

/// One published value: the period is the calendar period of the indicator's
/// frequency that ends on `period_end`.
struct SeriesPoint {
    Date period_end;
    double value;

    friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};
using IndicatorSeries = std::vector<SeriesPoint>;
/// One series per indicator, aligned with DfmSpec::indicators.
using PanelData = std::vector<IndicatorSeries>;

/// Applies the indicator's transform to a period-ordered series of levels.
/// Differences need the immediately preceding period; where it is absent the
/// point is dropped. Log differences are 100 * (ln y_t - ln y_{t-1}).
IndicatorSeries transform_series(const IndicatorSpec& spec, const IndicatorSeries& levels,
                                 std::chrono::weekday week_end = std::chrono::Saturday);
PanelData transform_panel(const DfmSpec& spec, const PanelData& raw);

/// Inverse of transform_series: rebuilds levels from transformed values. Each
/// run of consecutive periods starts from `base` at the end of the period
/// before its first point, so differenced series gain one leading point.
IndicatorSeries integrate_series(const IndicatorSpec& spec, const IndicatorSeries& transformed, double base,
                                 std::chrono::weekday week_end = std::chrono::Saturday);

/// Sample mean and std of each (transformed) series. Series with fewer than
/// two points or zero variance keep scale 1.
Standardization compute_standardization(const PanelData& transformed);
PanelData apply_standardization(const Standardization& s, const PanelData& transformed);

/// Maps panel data onto the grid. Points must sit on a period end of the
/// indicator's frequency and their whole period must lie within the grid;
/// otherwise ValidationError. Slot k is indicator k.
ObservationSet make_observations(const DfmSpec& spec, const Grid& grid, const PanelData& panel);

/// As make_observations, but silently drops points whose period is not fully
/// inside the grid (leading partial periods and anything past the grid end).
ObservationSet make_observations_clipped(const DfmSpec& spec, const Grid& grid, const PanelData& panel);

/// State coordinates assigned by build_state_space.
struct DfmLayout {
    std::size_t factor_lags = 0;
    /// Cumulator coordinate per frequency (weekly, monthly, quarterly), if any.
    std::optional<std::size_t> cumulator[3];
    /// AR measurement-error coordinate per indicator, if any.
    std::vector<std::optional<std::size_t>> error_state;
    std::size_t state_dim = 0;
};

DfmLayout dfm_layout(const DfmSpec& spec);

/// Prior variance for cumulator coordinates on the day before the grid.
inline constexpr double kCumulatorPriorVariance = 1e7;

/// Compiles spec + params into a daily time-varying system. Flow indicators
/// observed at weekly/monthly/quarterly frequency load the within-period
/// average of the factor through a cumulator that resets on the first day of
/// each period and adds x_t / n_days(P) every day. Measurement rows exist
/// only on period-end days.
StateSpaceSystem build_state_space(const DfmSpec& spec, const DfmParams& params, const Grid& grid);
StateSpaceSystem build_state_space(const DfmSpec& spec, const DfmParams& params);

struct SimulationOptions {
    bool factor_shocks = true;
    bool measurement_shocks = true;
    /// When set, every pre-grid factor lag starts here instead of being
    /// drawn from the stationary distribution.
    std::optional<double> initial_factor;
};

struct Simulation {
    std::vector<double> factor;  // one value per grid day
    PanelData observations;      // model units (no transform applied)
};

/// Draws a factor path and computes observations straight from the
/// measurement equations (not through the state-space system). Deterministic
/// given the seed.
Simulation simulate(const DfmSpec& spec, const DfmParams& params, std::uint64_t seed,
                    const SimulationOptions& options = {});

/// Flips the factor sign if needed so the reference indicator loads positively.
DfmParams apply_sign_convention(const DfmSpec& spec, DfmParams params);

}  // namespace nowcast
