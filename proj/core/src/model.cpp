#include "nowcast/model.hpp"

#include "nowcast/csv.hpp"
#include "nowcast/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>

namespace nowcast {

namespace {

constexpr std::array<Frequency, 3> kAggregatedFrequencies{Frequency::weekly, Frequency::monthly,
                                                          Frequency::quarterly};

std::optional<std::size_t> aggregated_index(Frequency f) {
    switch (f) {
        case Frequency::weekly: return 0;
        case Frequency::monthly: return 1;
        case Frequency::quarterly: return 2;
        case Frequency::daily: return std::nullopt;
    }
    return std::nullopt;
}

// Flow series at weekly/monthly/quarterly frequency load the period average.
bool uses_cumulator(const IndicatorSpec& ind) {
    return ind.kind == IndicatorKind::flow && ind.frequency != Frequency::daily;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

Matrix companion(const std::vector<double>& ar) {
    const auto p = static_cast<Eigen::Index>(ar.size());
    Matrix a = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) a(0, i) = ar[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 1; i < p; ++i) a(i, i - 1) = 1.0;
    return a;
}

Matrix factor_stationary_cov(const std::vector<double>& ar) {
    const Matrix a = companion(ar);
    Matrix q = Matrix::Zero(a.rows(), a.cols());
    q(0, 0) = 1.0;
    return stationary_covariance(a, q);
}

}  // namespace

std::string_view to_string(IndicatorKind k) { return k == IndicatorKind::stock ? "stock" : "flow"; }

std::string_view to_string(Transform t) {
    switch (t) {
        case Transform::level: return "level";
        case Transform::log_difference: return "log_difference";
        case Transform::difference: return "difference";
    }
    return "unknown";
}

std::string_view to_string(ErrorDynamics e) { return e == ErrorDynamics::iid ? "iid" : "ar1"; }

ErrorDynamics default_error_dynamics(Frequency f) {
    return (f == Frequency::weekly || f == Frequency::daily) ? ErrorDynamics::iid : ErrorDynamics::ar1;
}

// ---------------------------------------------------------------------------
// DfmSpec

Grid DfmSpec::grid() const { return Grid(grid_start, grid_end, week_end); }

Grid DfmSpec::grid_until(Date last) const { return Grid(grid_start, last, week_end); }

std::size_t DfmSpec::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < indicators.size(); ++i) {
        if (indicators[i].id == id) return i;
    }
    throw ConfigError("unknown indicator '" + std::string(id) + "'");
}

std::size_t DfmSpec::reference_index() const { return reference.empty() ? 0 : index_of(reference); }

void DfmSpec::validate() const {
    if (indicators.empty()) throw ConfigError("model needs at least one indicator");
    if (indicators.size() > 64) throw ConfigError("at most 64 indicators are supported");
    if (factor_ar_order < 1) throw ConfigError("factor_ar_order must be >= 1");
    for (std::size_t i = 0; i < indicators.size(); ++i) {
        if (indicators[i].id.empty()) throw ConfigError("indicator with empty id");
        for (std::size_t j = 0; j < i; ++j) {
            if (indicators[i].id == indicators[j].id) {
                throw ConfigError("duplicate indicator id '" + indicators[i].id + "'");
            }
        }
    }
    (void)grid();
    (void)reference_index();
}

DfmSpec DfmSpec::from_config(const KeyValueFile& kv) {
    DfmSpec spec;
    spec.grid_start = parse_date(kv.require("grid_start"));
    spec.grid_end = parse_date(kv.require("grid_end"));
    spec.factor_ar_order = kv.get_int("factor_ar_order").value_or(1);
    if (auto w = kv.get("week_end")) spec.week_end = parse_weekday(*w);
    spec.reference = kv.get("reference").value_or("");
    for (const auto& id : split_list(kv.require("indicators"))) {
        IndicatorSpec ind;
        ind.id = id;
        ind.frequency = parse_frequency(kv.require(id + ".frequency"));
        const std::string kind = lower(kv.get(id + ".kind").value_or("flow"));
        if (kind == "flow") {
            ind.kind = IndicatorKind::flow;
        } else if (kind == "stock") {
            ind.kind = IndicatorKind::stock;
        } else {
            throw ConfigError(kv.source() + ": unknown kind '" + kind + "' for " + id);
        }
        const std::string tr = lower(kv.get(id + ".transform").value_or("level"));
        if (tr == "level") {
            ind.transform = Transform::level;
        } else if (tr == "log_difference") {
            ind.transform = Transform::log_difference;
        } else if (tr == "difference") {
            ind.transform = Transform::difference;
        } else {
            throw ConfigError(kv.source() + ": unknown transform '" + tr + "' for " + id);
        }
        ind.measurement_error = default_error_dynamics(ind.frequency);
        if (auto me = kv.get(id + ".measurement_error")) {
            const std::string m = lower(*me);
            if (m == "iid") {
                ind.measurement_error = ErrorDynamics::iid;
            } else if (m == "ar1") {
                ind.measurement_error = ErrorDynamics::ar1;
            } else {
                throw ConfigError(kv.source() + ": unknown measurement_error '" + m + "' for " + id);
            }
        }
        spec.indicators.push_back(std::move(ind));
    }
    spec.validate();
    return spec;
}

DfmSpec DfmSpec::load(const std::filesystem::path& path) { return from_config(KeyValueFile::load(path)); }

KeyValueFile DfmSpec::to_config() const {
    KeyValueFile kv;
    kv.set("grid_start", format_date(grid_start));
    kv.set("grid_end", format_date(grid_end));
    kv.set("factor_ar_order", std::to_string(factor_ar_order));
    kv.set("week_end", std::string(to_string(week_end)));
    if (!reference.empty()) kv.set("reference", reference);
    std::string ids;
    for (const auto& ind : indicators) ids += (ids.empty() ? "" : ", ") + ind.id;
    kv.set("indicators", ids);
    for (const auto& ind : indicators) {
        kv.set(ind.id + ".frequency", std::string(to_string(ind.frequency)));
        kv.set(ind.id + ".kind", std::string(to_string(ind.kind)));
        kv.set(ind.id + ".transform", std::string(to_string(ind.transform)));
        kv.set(ind.id + ".measurement_error", std::string(to_string(ind.measurement_error)));
    }
    return kv;
}

// ---------------------------------------------------------------------------
// DfmParams

bool is_stationary(const std::vector<double>& ar) {
    if (ar.empty()) return false;
    for (double a : ar) {
        if (!std::isfinite(a)) return false;
    }
    if (ar.size() == 1) return std::abs(ar[0]) < 1.0;
    const Eigen::EigenSolver<Matrix> es(companion(ar), false);
    return es.eigenvalues().cwiseAbs().maxCoeff() < 1.0;
}

void DfmParams::validate(const DfmSpec& spec) const {
    if (factor_ar.size() != static_cast<std::size_t>(spec.factor_ar_order)) {
        throw ConfigError("expected " + std::to_string(spec.factor_ar_order) + " factor AR coefficients, got " +
                          std::to_string(factor_ar.size()));
    }
    if (indicators.size() != spec.indicators.size()) {
        throw ConfigError("expected parameters for " + std::to_string(spec.indicators.size()) +
                          " indicators, got " + std::to_string(indicators.size()));
    }
    if (!is_stationary(factor_ar)) throw ConfigError("factor AR polynomial is not stationary");
    for (std::size_t k = 0; k < indicators.size(); ++k) {
        const auto& ip = indicators[k];
        const auto& id = spec.indicators[k].id;
        if (!std::isfinite(ip.loading) || !std::isfinite(ip.mean)) {
            throw ConfigError(id + ": loading and mean must be finite");
        }
        if (!(ip.error_std > 0.0) || !std::isfinite(ip.error_std)) {
            throw ConfigError(id + ": measurement error std must be positive");
        }
        if (!(std::abs(ip.error_ar) < 1.0)) throw ConfigError(id + ": measurement error AR must lie in (-1, 1)");
        if (spec.indicators[k].measurement_error == ErrorDynamics::iid && ip.error_ar != 0.0) {
            throw ConfigError(id + ": iid measurement error cannot have an AR coefficient");
        }
    }
}

bool DfmParams::is_valid(const DfmSpec& spec) const {
    try {
        validate(spec);
        return true;
    } catch (const ConfigError&) {
        return false;
    }
}

DfmParams DfmParams::defaults(const DfmSpec& spec) {
    DfmParams p;
    p.factor_ar.assign(static_cast<std::size_t>(spec.factor_ar_order), 0.0);
    p.factor_ar[0] = 0.9;
    p.indicators.assign(spec.indicators.size(), IndicatorParams{});
    return p;
}

DfmParams apply_sign_convention(const DfmSpec& spec, DfmParams params) {
    const std::size_t ref = spec.reference_index();
    if (params.indicators.at(ref).loading < 0.0) {
        for (auto& ip : params.indicators) ip.loading = -ip.loading;
    }
    return params;
}

// ---------------------------------------------------------------------------
// Standardization and parameter files

Standardization Standardization::identity(std::size_t n) {
    return Standardization{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
}

FittedModel FittedModel::from_config(const DfmSpec& spec, const KeyValueFile& kv) {
    FittedModel fm;
    for (int i = 1; i <= spec.factor_ar_order; ++i) {
        fm.params.factor_ar.push_back(kv.require_double("factor.ar" + std::to_string(i)));
    }
    fm.standardization = Standardization::identity(spec.indicators.size());
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        const auto& id = spec.indicators[k].id;
        IndicatorParams ip;
        ip.loading = kv.require_double(id + ".loading");
        ip.error_std = kv.require_double(id + ".error_std");
        ip.error_ar = kv.get_double(id + ".error_ar").value_or(0.0);
        ip.mean = kv.get_double(id + ".mean").value_or(0.0);
        fm.params.indicators.push_back(ip);
        fm.standardization.center[k] = kv.get_double(id + ".center").value_or(0.0);
        fm.standardization.scale[k] = kv.get_double(id + ".scale").value_or(1.0);
        if (!(fm.standardization.scale[k] > 0.0)) throw ConfigError(id + ".scale must be positive");
    }
    fm.params.validate(spec);
    return fm;
}

FittedModel FittedModel::load(const DfmSpec& spec, const std::filesystem::path& path) {
    return from_config(spec, KeyValueFile::load(path));
}

KeyValueFile FittedModel::to_config(const DfmSpec& spec) const {
    KeyValueFile kv;
    for (std::size_t i = 0; i < params.factor_ar.size(); ++i) {
        kv.set("factor.ar" + std::to_string(i + 1), format_double(params.factor_ar[i]));
    }
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        const auto& id = spec.indicators[k].id;
        const auto& ip = params.indicators[k];
        kv.set(id + ".loading", format_double(ip.loading));
        if (spec.indicators[k].measurement_error == ErrorDynamics::ar1) {
            kv.set(id + ".error_ar", format_double(ip.error_ar));
        }
        kv.set(id + ".error_std", format_double(ip.error_std));
        kv.set(id + ".mean", format_double(ip.mean));
        if (!standardization.center.empty()) {
            kv.set(id + ".center", format_double(standardization.center[k]));
            kv.set(id + ".scale", format_double(standardization.scale[k]));
        }
    }
    return kv;
}

// ---------------------------------------------------------------------------
// Data preparation

IndicatorSeries transform_series(const IndicatorSpec& spec, const IndicatorSeries& levels,
                                 std::chrono::weekday week_end) {
    IndicatorSeries sorted = levels;
    std::sort(sorted.begin(), sorted.end(), [](const SeriesPoint& a, const SeriesPoint& b) {
        return std::chrono::sys_days{a.period_end} < std::chrono::sys_days{b.period_end};
    });
    if (spec.transform == Transform::level) return sorted;

    IndicatorSeries out;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const DateRange period = calendar_period(sorted[i].period_end, spec.frequency, week_end);
        const Date previous_end = add_days(period.first, -1);
        if (sorted[i - 1].period_end != previous_end) continue;
        const double prev = sorted[i - 1].value;
        const double cur = sorted[i].value;
        if (spec.transform == Transform::difference) {
            out.push_back({sorted[i].period_end, cur - prev});
        } else {
            if (!(prev > 0.0) || !(cur > 0.0)) {
                throw ValidationError(spec.id + ": log difference needs positive levels (period ending " +
                                      format_date(sorted[i].period_end) + ")");
            }
            out.push_back({sorted[i].period_end, 100.0 * (std::log(cur) - std::log(prev))});
        }
    }
    return out;
}

IndicatorSeries integrate_series(const IndicatorSpec& spec, const IndicatorSeries& transformed, double base,
                                 std::chrono::weekday week_end) {
    if (spec.transform == Transform::level) return transformed;
    if (spec.transform == Transform::log_difference && !(base > 0.0)) {
        throw ValidationError(spec.id + ": log-difference levels need a positive base");
    }
    IndicatorSeries out;
    for (const auto& pt : transformed) {
        const Date previous_end = add_days(calendar_period(pt.period_end, spec.frequency, week_end).first, -1);
        if (out.empty() || out.back().period_end != previous_end) out.push_back({previous_end, base});
        const double prev = out.back().value;
        const double level =
            spec.transform == Transform::difference ? prev + pt.value : prev * std::exp(pt.value / 100.0);
        out.push_back({pt.period_end, level});
    }
    return out;
}

PanelData transform_panel(const DfmSpec& spec, const PanelData& raw) {
    if (raw.size() != spec.indicators.size()) throw ValidationError("panel does not match the indicator list");
    PanelData out;
    out.reserve(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        out.push_back(transform_series(spec.indicators[k], raw[k], spec.week_end));
    }
    return out;
}

Standardization compute_standardization(const PanelData& transformed) {
    Standardization s = Standardization::identity(transformed.size());
    for (std::size_t k = 0; k < transformed.size(); ++k) {
        const auto& series = transformed[k];
        if (series.empty()) continue;
        double mean = 0.0;
        for (const auto& pt : series) mean += pt.value;
        mean /= static_cast<double>(series.size());
        s.center[k] = mean;
        if (series.size() < 2) continue;
        double ss = 0.0;
        for (const auto& pt : series) ss += (pt.value - mean) * (pt.value - mean);
        const double sd = std::sqrt(ss / static_cast<double>(series.size() - 1));
        if (sd > 0.0 && std::isfinite(sd)) s.scale[k] = sd;
    }
    return s;
}

PanelData apply_standardization(const Standardization& s, const PanelData& transformed) {
    if (s.center.size() != transformed.size() || s.scale.size() != transformed.size()) {
        throw ValidationError("standardization does not match the panel");
    }
    PanelData out = transformed;
    for (std::size_t k = 0; k < out.size(); ++k) {
        for (auto& pt : out[k]) pt.value = (pt.value - s.center[k]) / s.scale[k];
    }
    return out;
}

namespace {

ObservationSet map_observations(const DfmSpec& spec, const Grid& grid, const PanelData& panel, bool clip) {
    if (panel.size() != spec.indicators.size()) throw ValidationError("panel does not match the indicator list");
    ObservationSet obs(grid.size());
    for (std::size_t k = 0; k < panel.size(); ++k) {
        const auto& ind = spec.indicators[k];
        for (const auto& pt : panel[k]) {
            const DateRange period = grid.calendar_period(pt.period_end, ind.frequency);
            if (period.last != pt.period_end) {
                throw ValidationError(ind.id + ": " + format_date(pt.period_end) + " is not the end of a " +
                                      std::string(to_string(ind.frequency)) + " period");
            }
            if (!grid.contains(period.first) || !grid.contains(period.last)) {
                if (clip) continue;
                throw ValidationError(ind.id + ": period " + format_date(period.first) + " .. " +
                                      format_date(period.last) + " is not inside the model grid");
            }
            obs.add(grid.day(period.last).index, k, pt.value);
        }
    }
    return obs;
}

}  // namespace

ObservationSet make_observations(const DfmSpec& spec, const Grid& grid, const PanelData& panel) {
    return map_observations(spec, grid, panel, false);
}

ObservationSet make_observations_clipped(const DfmSpec& spec, const Grid& grid, const PanelData& panel) {
    return map_observations(spec, grid, panel, true);
}

// ---------------------------------------------------------------------------
// State-space construction

DfmLayout dfm_layout(const DfmSpec& spec) {
    DfmLayout layout;
    layout.factor_lags = static_cast<std::size_t>(spec.factor_ar_order);
    std::size_t next = layout.factor_lags;
    for (std::size_t f = 0; f < kAggregatedFrequencies.size(); ++f) {
        const bool needed = std::any_of(spec.indicators.begin(), spec.indicators.end(), [&](const IndicatorSpec& ind) {
            return uses_cumulator(ind) && ind.frequency == kAggregatedFrequencies[f];
        });
        if (needed) layout.cumulator[f] = next++;
    }
    layout.error_state.resize(spec.indicators.size());
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        if (spec.indicators[k].measurement_error == ErrorDynamics::ar1) layout.error_state[k] = next++;
    }
    layout.state_dim = next;
    return layout;
}

StateSpaceSystem build_state_space(const DfmSpec& spec, const DfmParams& params) {
    return build_state_space(spec, params, spec.grid());
}

StateSpaceSystem build_state_space(const DfmSpec& spec, const DfmParams& params, const Grid& grid) {
    spec.validate();
    params.validate(spec);
    const DfmLayout layout = dfm_layout(spec);
    const auto n = static_cast<Eigen::Index>(layout.state_dim);
    const auto p = static_cast<Eigen::Index>(layout.factor_lags);
    const Matrix a = companion(params.factor_ar);

    Vector mean0 = Vector::Zero(n);
    Matrix cov0 = Matrix::Zero(n, n);
    cov0.topLeftCorner(p, p) = factor_stationary_cov(params.factor_ar);
    for (const auto& c : layout.cumulator) {
        if (c) cov0(static_cast<Eigen::Index>(*c), static_cast<Eigen::Index>(*c)) = kCumulatorPriorVariance;
    }
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        if (const auto e = layout.error_state[k]) {
            const auto& ip = params.indicators[k];
            cov0(static_cast<Eigen::Index>(*e), static_cast<Eigen::Index>(*e)) =
                ip.error_std * ip.error_std / (1.0 - ip.error_ar * ip.error_ar);
        }
    }

    StateSpaceSystem sys(layout.state_dim, spec.indicators.size(), mean0, cov0);
    sys.layout.factor = 0;
    for (Eigen::Index i = 0; i < p; ++i) sys.layout.labels[static_cast<std::size_t>(i)] = "factor_lag" + std::to_string(i);
    for (std::size_t f = 0; f < 3; ++f) {
        if (layout.cumulator[f]) {
            sys.layout.labels[*layout.cumulator[f]] = "cumulator_" + std::string(to_string(kAggregatedFrequencies[f]));
        }
    }
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        if (layout.error_state[k]) sys.layout.labels[*layout.error_state[k]] = "error_" + spec.indicators[k].id;
    }

    // Calendar facts that drive the time variation: (period start flag,
    // period length) per aggregated frequency.
    using TransitionKey = std::array<std::int64_t, 6>;
    std::map<TransitionKey, std::size_t> transition_ids;
    std::map<std::uint64_t, std::size_t> measurement_ids;

    for (std::int64_t t = 0; t < grid.size(); ++t) {
        const Date d = grid.at(t).date;
        std::array<bool, 3> starts{};
        std::array<bool, 3> ends{};
        std::array<std::int64_t, 3> lengths{};
        for (std::size_t f = 0; f < 3; ++f) {
            const DateRange period = grid.calendar_period(d, kAggregatedFrequencies[f]);
            starts[f] = period.first == d;
            ends[f] = period.last == d;
            lengths[f] = period.n_days();
        }
        const TransitionKey key{starts[0], lengths[0], starts[1], lengths[1], starts[2], lengths[2]};

        auto tid = transition_ids.find(key);
        if (tid == transition_ids.end()) {
            Matrix tr = Matrix::Zero(n, n);
            tr.topLeftCorner(p, p) = a;
            Vector shock_load = Vector::Zero(n);
            shock_load(0) = 1.0;
            Matrix q = Matrix::Zero(n, n);
            for (std::size_t f = 0; f < 3; ++f) {
                if (!layout.cumulator[f]) continue;
                const auto c = static_cast<Eigen::Index>(*layout.cumulator[f]);
                const double w = 1.0 / static_cast<double>(lengths[f]);
                tr.block(c, 0, 1, p) = w * a.row(0);
                tr(c, c) = starts[f] ? 0.0 : 1.0;
                shock_load(c) = w;
            }
            q.noalias() = shock_load * shock_load.transpose();
            for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
                const auto e = layout.error_state[k];
                if (!e) continue;
                const auto ei = static_cast<Eigen::Index>(*e);
                const auto fi = aggregated_index(spec.indicators[k].frequency);
                const bool start = fi ? starts[*fi] : true;
                const auto& ip = params.indicators[k];
                tr(ei, ei) = start ? ip.error_ar : 1.0;
                q(ei, ei) = start ? ip.error_std * ip.error_std : 0.0;
            }
            tid = transition_ids.emplace(key, sys.add_transition(TransitionBlock{std::move(tr), std::move(q)})).first;
        }

        std::uint64_t mask = 0;
        for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
            const auto fi = aggregated_index(spec.indicators[k].frequency);
            if (!fi || ends[*fi]) mask |= (std::uint64_t{1} << k);
        }
        std::optional<std::size_t> mid;
        if (mask != 0) {
            auto it = measurement_ids.find(mask);
            if (it == measurement_ids.end()) {
                MeasurementBlock block;
                for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
                    if (mask & (std::uint64_t{1} << k)) block.slots.push_back(k);
                }
                const auto m = static_cast<Eigen::Index>(block.slots.size());
                block.loading = Matrix::Zero(m, n);
                block.intercept = Vector::Zero(m);
                block.noise_cov = Matrix::Zero(m, m);
                for (Eigen::Index r = 0; r < m; ++r) {
                    const std::size_t k = block.slots[static_cast<std::size_t>(r)];
                    const auto& ind = spec.indicators[k];
                    const auto& ip = params.indicators[k];
                    if (uses_cumulator(ind)) {
                        const auto fi = *aggregated_index(ind.frequency);
                        block.loading(r, static_cast<Eigen::Index>(*layout.cumulator[fi])) = ip.loading;
                    } else {
                        block.loading(r, 0) = ip.loading;
                    }
                    block.intercept(r) = ip.mean;
                    if (const auto e = layout.error_state[k]) {
                        block.loading(r, static_cast<Eigen::Index>(*e)) = 1.0;
                    } else {
                        block.noise_cov(r, r) = ip.error_std * ip.error_std;
                    }
                }
                it = measurement_ids.emplace(mask, sys.add_measurement(std::move(block))).first;
            }
            mid = it->second;
        }
        sys.append_day(tid->second, mid);
    }
    return sys;
}

// ---------------------------------------------------------------------------
// Simulation

Simulation simulate(const DfmSpec& spec, const DfmParams& params, std::uint64_t seed,
                    const SimulationOptions& options) {
    spec.validate();
    params.validate(spec);
    const Grid grid = spec.grid();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const std::size_t p = params.factor_ar.size();
    // lags[0] is the most recent value.
    std::vector<double> lags(p, 0.0);
    if (options.initial_factor) {
        std::fill(lags.begin(), lags.end(), *options.initial_factor);
    } else {
        const Matrix cov = factor_stationary_cov(params.factor_ar);
        const Eigen::LLT<Matrix> llt(cov);
        Vector z(static_cast<Eigen::Index>(p));
        for (std::size_t i = 0; i < p; ++i) z(static_cast<Eigen::Index>(i)) = normal(rng);
        const Vector draw = llt.matrixL() * z;
        for (std::size_t i = 0; i < p; ++i) lags[i] = draw(static_cast<Eigen::Index>(i));
    }

    Simulation sim;
    sim.factor.resize(static_cast<std::size_t>(grid.size()));
    for (std::int64_t t = 0; t < grid.size(); ++t) {
        double x = 0.0;
        for (std::size_t i = 0; i < p; ++i) x += params.factor_ar[i] * lags[i];
        if (options.factor_shocks) x += normal(rng);
        for (std::size_t i = p - 1; i > 0; --i) lags[i] = lags[i - 1];
        lags[0] = x;
        sim.factor[static_cast<std::size_t>(t)] = x;
    }

    sim.observations.resize(spec.indicators.size());
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        const auto& ind = spec.indicators[k];
        const auto& ip = params.indicators[k];
        double u_prev = 0.0;
        if (options.measurement_shocks && ind.measurement_error == ErrorDynamics::ar1) {
            u_prev = ip.error_std / std::sqrt(1.0 - ip.error_ar * ip.error_ar) * normal(rng);
        }
        Date d = grid.start();
        while (grid.contains(d)) {
            const DateRange period = grid.calendar_period(d, ind.frequency);
            d = add_days(period.last, 1);
            if (!grid.contains(period.first) || !grid.contains(period.last)) continue;
            const std::int64_t first = grid.day(period.first).index;
            const std::int64_t last = grid.day(period.last).index;
            double aggregate = 0.0;
            if (uses_cumulator(ind)) {
                for (std::int64_t t = first; t <= last; ++t) aggregate += sim.factor[static_cast<std::size_t>(t)];
                aggregate /= static_cast<double>(last - first + 1);
            } else {
                aggregate = sim.factor[static_cast<std::size_t>(last)];
            }
            double u = 0.0;
            if (options.measurement_shocks) {
                u = (ind.measurement_error == ErrorDynamics::ar1 ? ip.error_ar * u_prev : 0.0) +
                    ip.error_std * normal(rng);
                u_prev = u;
            }
            sim.observations[k].push_back({period.last, ip.mean + ip.loading * aggregate + u});
        }
    }
    return sim;
}

}  // namespace nowcast
