#include "nowcast/vintage.hpp"

#include "nowcast/csv.hpp"
#include "nowcast/error.hpp"
#include "nowcast/kalman.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

namespace nowcast {

namespace {

using std::chrono::sys_days;

std::string label(Timestamp ts) { return "vintage " + format_timestamp(ts); }

std::string with_label(Timestamp ts, const std::string& what) {
    const std::string prefix = label(ts) + ": ";
    return what.rfind(prefix, 0) == 0 ? what : prefix + what;
}

[[noreturn]] void rethrow_for(Timestamp ts, std::exception_ptr err) {
    try {
        std::rethrow_exception(err);
    } catch (const NumericalError& e) {
        throw NumericalError(with_label(ts, e.what()));
    } catch (const ValidationError& e) {
        throw ValidationError(with_label(ts, e.what()));
    }
}

Date normalize_period_end(const IndicatorSpec& ind, Date d, std::chrono::weekday week_end) {
    return calendar_period(d, ind.frequency, week_end).last;
}

Timestamp parse_vintage_name(const std::string& name) {
    try {
        return parse_timestamp(name);
    } catch (const ValidationError&) {
        // Filesystems that disallow ':' get '-' as the time separator.
        std::string fixed = name;
        const auto t = fixed.find_first_of("T_");
        if (t == std::string::npos) throw;
        if (fixed[t] == '_') fixed[t] = 'T';
        std::replace(fixed.begin() + static_cast<std::ptrdiff_t>(t), fixed.end(), '-', ':');
        return parse_timestamp(fixed);
    }
}

IndicatorSeries read_indicator_file(const std::filesystem::path& file, const IndicatorSpec& ind,
                                    std::chrono::weekday week_end) {
    const CsvTable table = read_csv(file);
    table.expect_header({"period_end", "value"});
    IndicatorSeries series;
    series.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (row.fields.size() != 2) throw ParseError(table.source, row.line, "expected 2 fields");
        try {
            const Date end = normalize_period_end(ind, parse_date(row.fields[0]), week_end);
            series.push_back(SeriesPoint{end, parse_double(row.fields[1])});
        } catch (const ValidationError& e) {
            throw ParseError(table.source, row.line, e.what());
        }
    }
    std::stable_sort(series.begin(), series.end(), [](const SeriesPoint& a, const SeriesPoint& b) {
        return sys_days(a.period_end) < sys_days(b.period_end);
    });
    return series;
}

}  // namespace

std::size_t VintageDataset::observation_count() const {
    std::size_t n = 0;
    for (const auto& s : data) n += s.size();
    return n;
}

std::optional<Date> VintageDataset::last_period_end() const {
    std::optional<Date> last;
    for (const auto& s : data) {
        if (!s.empty() && (!last || sys_days(s.back().period_end) > sys_days(*last))) last = s.back().period_end;
    }
    return last;
}

void validate_vintage(const DfmSpec& spec, const VintageDataset& v) {
    if (v.data.size() != spec.indicators.size()) {
        throw ValidationError(label(v.pull) + ": panel does not match the indicator list");
    }
    const Date pull_date = date_of(v.pull);
    for (std::size_t k = 0; k < v.data.size(); ++k) {
        const auto& id = spec.indicators[k].id;
        for (std::size_t i = 0; i < v.data[k].size(); ++i) {
            const auto& pt = v.data[k][i];
            if (sys_days(pt.period_end) > sys_days(pull_date)) {
                throw ValidationError(label(v.pull) + ": " + id + " period ending " + format_date(pt.period_end) +
                                      " is after the pull date");
            }
            if (i > 0 && sys_days(pt.period_end) <= sys_days(v.data[k][i - 1].period_end)) {
                throw ValidationError(label(v.pull) + ": " + id + " has duplicate or unordered period " +
                                      format_date(pt.period_end));
            }
        }
    }
}

std::vector<VintageDataset> read_vintage_archive(const std::filesystem::path& dir, const DfmSpec& spec) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ValidationError("vintage archive '" + dir.string() + "' is not a directory");
    std::vector<VintageDataset> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_directory()) continue;
        VintageDataset v;
        v.pull = parse_vintage_name(entry.path().filename().string());
        v.data = read_panel(entry.path(), spec);
        validate_vintage(spec, v);
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), [](const VintageDataset& a, const VintageDataset& b) { return a.pull < b.pull; });
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i].pull == out[i - 1].pull) throw ValidationError("two vintages share " + label(out[i].pull));
    }
    return out;
}

void write_vintage(const std::filesystem::path& dir, const DfmSpec& spec, const VintageDataset& v) {
    validate_vintage(spec, v);
    write_panel(dir / format_timestamp(v.pull), spec, v.data);
}

PanelData read_panel(const std::filesystem::path& dir, const DfmSpec& spec) {
    if (!std::filesystem::is_directory(dir)) throw ValidationError("'" + dir.string() + "' is not a directory");
    PanelData panel(spec.indicators.size());
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        const auto file = dir / (spec.indicators[k].id + ".csv");
        if (std::filesystem::exists(file)) panel[k] = read_indicator_file(file, spec.indicators[k], spec.week_end);
        for (std::size_t i = 1; i < panel[k].size(); ++i) {
            if (panel[k][i].period_end == panel[k][i - 1].period_end) {
                throw ValidationError(file.string() + ": duplicate period ending " + format_date(panel[k][i].period_end));
            }
        }
    }
    return panel;
}

void write_panel(const std::filesystem::path& dir, const DfmSpec& spec, const PanelData& panel) {
    if (panel.size() != spec.indicators.size()) throw ValidationError("panel does not match the indicator list");
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        std::ostringstream text;
        text << "period_end,value\n";
        for (const auto& pt : panel[k]) text << format_date(pt.period_end) << ',' << format_double(pt.value) << '\n';
        write_text_file(dir / (spec.indicators[k].id + ".csv"), text.str());
    }
}

std::vector<ReleaseEvent> read_release_log(const std::filesystem::path& file) {
    const CsvTable table = read_csv(file);
    table.expect_header({"timestamp", "indicator", "period_end", "value"});
    std::vector<ReleaseEvent> events;
    events.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (row.fields.size() != 4) throw ParseError(table.source, row.line, "expected 4 fields");
        try {
            events.push_back(ReleaseEvent{parse_timestamp(row.fields[0]), row.fields[1], parse_date(row.fields[2]),
                                          parse_double(row.fields[3])});
        } catch (const ValidationError& e) {
            throw ParseError(table.source, row.line, e.what());
        }
    }
    return events;
}

std::string release_log_to_csv(const std::vector<ReleaseEvent>& events) {
    std::ostringstream out;
    out << "timestamp,indicator,period_end,value\n";
    for (const auto& e : events) {
        out << format_timestamp(e.timestamp) << ',' << e.indicator << ',' << format_date(e.period_end) << ','
            << format_double(e.value) << '\n';
    }
    return out.str();
}

std::vector<ReleaseEvent> releases_from_panel(const DfmSpec& spec, const PanelData& levels, int delay_days) {
    if (levels.size() != spec.indicators.size()) throw ValidationError("panel does not match the indicator list");
    if (delay_days < 0) throw ValidationError("release delay must be non-negative");
    std::vector<ReleaseEvent> releases;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const auto& series = levels[k];
        for (std::size_t i = 0; i < series.size(); ++i) {
            Date shown = series[i].period_end;
            if (sys_days(shown) < sys_days(spec.grid_start) && i + 1 < series.size()) {
                shown = series[i + 1].period_end;
            }
            releases.push_back(ReleaseEvent{Timestamp(sys_days(add_days(shown, delay_days))), spec.indicators[k].id,
                                            series[i].period_end, series[i].value});
        }
    }
    std::stable_sort(releases.begin(), releases.end(),
                     [](const ReleaseEvent& a, const ReleaseEvent& b) { return a.timestamp < b.timestamp; });
    return releases;
}

std::vector<VintageDataset> build_vintages(const DfmSpec& spec, std::vector<ReleaseEvent> events,
                                           const VintageDataset* base) {
    std::stable_sort(events.begin(), events.end(),
                     [](const ReleaseEvent& a, const ReleaseEvent& b) { return a.timestamp < b.timestamp; });

    std::vector<std::map<sys_days, double>> known(spec.indicators.size());
    if (base) {
        if (base->data.size() != spec.indicators.size()) {
            throw ValidationError("base dataset does not match the indicator list");
        }
        for (std::size_t k = 0; k < base->data.size(); ++k) {
            for (const auto& pt : base->data[k]) known[k][sys_days(pt.period_end)] = pt.value;
        }
    }

    std::vector<VintageDataset> out;
    std::size_t i = 0;
    while (i < events.size()) {
        const Timestamp ts = events[i].timestamp;
        for (; i < events.size() && events[i].timestamp == ts; ++i) {
            const auto& e = events[i];
            const std::size_t k = spec.index_of(e.indicator);
            const Date end = normalize_period_end(spec.indicators[k], e.period_end, spec.week_end);
            if (sys_days(end) > sys_days(date_of(ts))) {
                throw ValidationError("release of " + e.indicator + " for period ending " + format_date(end) +
                                      " at " + format_timestamp(ts) + " is dated in the future");
            }
            known[k][sys_days(end)] = e.value;
        }
        VintageDataset v;
        v.pull = ts;
        v.data.resize(spec.indicators.size());
        for (std::size_t k = 0; k < known.size(); ++k) {
            v.data[k].reserve(known[k].size());
            for (const auto& [day, value] : known[k]) v.data[k].push_back(SeriesPoint{Date{day}, value});
        }
        validate_vintage(spec, v);
        out.push_back(std::move(v));
    }
    return out;
}

VintageDataset truncate(const VintageDataset& data, Timestamp cut) {
    VintageDataset out;
    out.pull = cut;
    out.data.resize(data.data.size());
    const auto limit = sys_days(date_of(cut));
    for (std::size_t k = 0; k < data.data.size(); ++k) {
        for (const auto& pt : data.data[k]) {
            if (sys_days(pt.period_end) <= limit) out.data[k].push_back(pt);
        }
    }
    return out;
}

Path extract_path(const DfmSpec& spec, const FittedModel& model, const VintageDataset& vintage,
                  const ExtractOptions& options) {
    validate_vintage(spec, vintage);
    const PanelData panel = apply_standardization(model.standardization, transform_panel(spec, vintage.data));

    Date end = std::min(spec.grid_end, date_of(vintage.pull));
    std::optional<Date> last;
    for (const auto& s : panel) {
        for (const auto& pt : s) {
            if (sys_days(pt.period_end) <= sys_days(spec.grid_end) &&
                (!last || sys_days(pt.period_end) > sys_days(*last))) {
                last = pt.period_end;
            }
        }
    }
    if (last && !options.extend_to_pull_date) end = *last;
    if (sys_days(end) < sys_days(spec.grid_start)) {
        throw ValidationError(label(vintage.pull) + ": nothing to extract before the grid start " +
                              format_date(spec.grid_start));
    }

    const Grid grid = spec.grid_until(end);
    const ObservationSet obs = make_observations_clipped(spec, grid, panel);
    const StateSpaceSystem system = build_state_space(spec, model.params, grid);
    const FilterResult filtered = filter(system, obs);
    const SmootherResult smoothed = smooth(system, filtered);

    Path path;
    path.vintage = vintage.pull;
    path.points.reserve(static_cast<std::size_t>(grid.size()));
    for (std::int64_t t = 0; t < grid.size(); ++t) {
        const auto i = static_cast<std::size_t>(t);
        path.points.push_back(PathPoint{grid.at(t).date, smoothed.ads[i], smoothed.ads_std[i]});
    }
    path.filtered_last = filtered.steps.back().filtered_mean(0);
    return path;
}

FittedModel fit_vintage(const DfmSpec& spec, const VintageDataset& vintage, const DfmParams& init,
                        const EstimationOptions& options) {
    validate_vintage(spec, vintage);
    const PanelData transformed = transform_panel(spec, vintage.data);
    FittedModel model;
    model.standardization = compute_standardization(transformed);
    const PanelData panel = apply_standardization(model.standardization, transformed);
    const auto last = vintage.last_period_end();
    if (!last) throw ValidationError(label(vintage.pull) + ": no observations to estimate from");
    const Grid grid = spec.grid_until(std::min(*last, spec.grid_end));
    const ObservationSet obs = make_observations_clipped(spec, grid, panel);
    if (obs.count() == 0) throw ValidationError(label(vintage.pull) + ": no observations inside the grid");
    model.params = estimate_mle(spec, grid, obs, init, options).params;
    return model;
}

DotSeries dots_from_paths(const std::vector<Path>& paths) {
    DotSeries dots;
    dots.reserve(paths.size());
    for (const auto& p : paths) dots.push_back(Dot{p.vintage, p.last_value()});
    return dots;
}

ReplayResult replay(const DfmSpec& spec, const FittedModel& model, const std::vector<VintageDataset>& vintages,
                    const ReplayOptions& options) {
    ReplayResult result;
    const std::size_t n = vintages.size();
    result.paths.resize(n);
    result.models.resize(n);
    if (n == 0) return result;

    if (options.policy == ParamsPolicy::reestimate) {
        DfmParams warm = model.params;
        for (std::size_t i = 0; i < n; ++i) {
            try {
                result.models[i] = fit_vintage(spec, vintages[i], warm, options.estimation);
                warm = result.models[i].params;
                result.paths[i] = extract_path(spec, result.models[i], vintages[i], options.extract);
            } catch (const Error&) {
                rethrow_for(vintages[i].pull, std::current_exception());
            }
        }
    } else {
        FittedModel fixed = model;
        if (options.policy == ParamsPolicy::estimate_first) {
            try {
                fixed = fit_vintage(spec, vintages.front(), model.params, options.estimation);
            } catch (const Error&) {
                rethrow_for(vintages.front().pull, std::current_exception());
            }
        }
        std::fill(result.models.begin(), result.models.end(), fixed);

        std::vector<std::exception_ptr> errors(n);
        std::atomic<std::size_t> next{0};
        const auto work = [&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    result.paths[i] = extract_path(spec, fixed, vintages[i], options.extract);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(n)));
        std::vector<std::thread> pool;
        for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();
        for (std::size_t i = 0; i < n; ++i) {
            if (errors[i]) rethrow_for(vintages[i].pull, errors[i]);
        }
    }
    result.dots = dots_from_paths(result.paths);
    return result;
}

EvaluationMode parse_evaluation_mode(std::string_view text) {
    if (text == "final-full") return EvaluationMode::final_full;
    if (text == "final-expanding") return EvaluationMode::final_expanding;
    if (text == "pseudo-real-time") return EvaluationMode::pseudo_real_time;
    throw ValidationError("unknown evaluation mode '" + std::string(text) + "'");
}

std::string_view to_string(EvaluationMode m) {
    switch (m) {
        case EvaluationMode::final_full: return "final-full";
        case EvaluationMode::final_expanding: return "final-expanding";
        case EvaluationMode::pseudo_real_time: return "pseudo-real-time";
    }
    return "?";
}

EvaluationPlan evaluation_plan(EvaluationMode mode, const VintageDataset& final_data,
                               const std::vector<VintageDataset>& vintages, std::vector<Timestamp> cuts) {
    EvaluationPlan plan;
    switch (mode) {
        case EvaluationMode::final_full:
            plan.datasets.push_back(final_data);
            plan.policy = ParamsPolicy::estimate_first;
            break;
        case EvaluationMode::final_expanding:
            if (cuts.empty()) {
                for (const auto& v : vintages) cuts.push_back(v.pull);
            }
            std::sort(cuts.begin(), cuts.end());
            for (const auto cut : cuts) plan.datasets.push_back(truncate(final_data, cut));
            plan.policy = ParamsPolicy::fixed;
            break;
        case EvaluationMode::pseudo_real_time:
            if (vintages.empty()) throw ValidationError("pseudo-real-time evaluation needs vintage data");
            plan.datasets = vintages;
            plan.policy = ParamsPolicy::fixed;
            break;
    }
    return plan;
}

std::vector<Timestamp> monthly_cuts(Date first, int count) {
    using namespace std::chrono;
    std::vector<Timestamp> cuts;
    year_month ym = first.year() / first.month();
    for (int i = 0; i < count; ++i, ym += months(1)) {
        const Date last = ym / std::chrono::last;
        cuts.push_back(Timestamp(sys_days(last)));
    }
    return cuts;
}

}  // namespace nowcast
