#pragma once

#include "nowcast/calendar.hpp"
#include "nowcast/estimate.hpp"
#include "nowcast/model.hpp"
#include "nowcast/path.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nowcast {

/// Everything that was published as of `pull`, in raw (untransformed) units.
/// No period ends after the pull date and each indicator's points are
/// strictly increasing in period end.
struct VintageDataset {
    Timestamp pull{};
    PanelData data;

    std::size_t observation_count() const;
    /// Latest period end across all indicators, if any.
    std::optional<Date> last_period_end() const;
};

/// Reads `<indicator>.csv` files (header `period_end,value`) from one
/// directory. Dates are normalized to the end of their calendar period and a
/// missing file gives an empty series.
PanelData read_panel(const std::filesystem::path& dir, const DfmSpec& spec);
void write_panel(const std::filesystem::path& dir, const DfmSpec& spec, const PanelData& panel);

/// Throws ValidationError if `v` breaks the dataset invariants for `spec`.
void validate_vintage(const DfmSpec& spec, const VintageDataset& v);

/// Reads a directory with one read_panel subdirectory per vintage, named by
/// its pull timestamp. Returns vintages sorted by pull timestamp; an empty directory gives none.
std::vector<VintageDataset> read_vintage_archive(const std::filesystem::path& dir, const DfmSpec& spec);

/// Writes one vintage in the layout read_vintage_archive expects.
void write_vintage(const std::filesystem::path& dir, const DfmSpec& spec, const VintageDataset& v);

/// A single publication: `value` for the period ending `period_end`,
/// released at `timestamp`. A later event for the same period is a revision.
struct ReleaseEvent {
    Timestamp timestamp{};
    std::string indicator;
    Date period_end;
    double value = 0.0;
};

/// Release log CSV with header `timestamp,indicator,period_end,value`.
std::vector<ReleaseEvent> read_release_log(const std::filesystem::path& file);
std::string release_log_to_csv(const std::vector<ReleaseEvent>& events);

/// One release per point, `delay_days` after its period end at midnight.
/// Points dated before the grid start (anchor levels of differenced series)
/// go out with the series' first in-grid point.
std::vector<ReleaseEvent> releases_from_panel(const DfmSpec& spec, const PanelData& levels, int delay_days = 0);

/// Accumulates releases in timestamp order and emits one vintage per distinct
/// timestamp. `base` (if given) is the data already known before the first
/// release.
std::vector<VintageDataset> build_vintages(const DfmSpec& spec, std::vector<ReleaseEvent> events,
                                           const VintageDataset* base = nullptr);

/// Every point of `data` whose period end is at or before the cut date.
VintageDataset truncate(const VintageDataset& data, Timestamp cut);

struct ExtractOptions {
    /// Run the grid through the pull date instead of stopping at the latest
    /// observed period end.
    bool extend_to_pull_date = false;
};

/// Transforms and standardizes the vintage, then filters and smooths over
/// the grid truncated at the latest observed period end. A vintage with no
/// usable observations yields the prior mean (zero) through the pull date.
Path extract_path(const DfmSpec& spec, const FittedModel& model, const VintageDataset& vintage,
                  const ExtractOptions& options = {});

/// Standardization from the vintage itself, then maximum likelihood from `init`.
FittedModel fit_vintage(const DfmSpec& spec, const VintageDataset& vintage, const DfmParams& init,
                        const EstimationOptions& options = {});

enum class ParamsPolicy {
    fixed,           // use the supplied model for every vintage
    estimate_first,  // fit once on the first vintage, then hold fixed
    reestimate,      // refit on each vintage, warm-started from the previous fit
};

struct ReplayOptions {
    ParamsPolicy policy = ParamsPolicy::fixed;
    EstimationOptions estimation;
    ExtractOptions extract;
    /// Worker threads for extraction under a fixed model. Output does not
    /// depend on this.
    unsigned jobs = 1;
};

struct ReplayResult {
    std::vector<Path> paths;
    DotSeries dots;
    /// Model used for each vintage.
    std::vector<FittedModel> models;
};

/// Last value of each path, keyed by its vintage.
DotSeries dots_from_paths(const std::vector<Path>& paths);

/// Extracts a path per vintage in pull order. Any failure aborts with an
/// error of the same category naming the vintage.
ReplayResult replay(const DfmSpec& spec, const FittedModel& model, const std::vector<VintageDataset>& vintages,
                    const ReplayOptions& options = {});

enum class EvaluationMode {
    final_full,         // final revised data on the whole sample
    final_expanding,    // final revised data truncated at each cut
    pseudo_real_time,   // each vintage as it was published
};

EvaluationMode parse_evaluation_mode(std::string_view text);
std::string_view to_string(EvaluationMode m);

struct EvaluationPlan {
    std::vector<VintageDataset> datasets;
    ParamsPolicy policy = ParamsPolicy::fixed;
};

/// Datasets for an evaluation regime. Expanding cuts default to the pull
/// timestamps of `vintages` when `cuts` is empty.
EvaluationPlan evaluation_plan(EvaluationMode mode, const VintageDataset& final_data,
                               const std::vector<VintageDataset>& vintages, std::vector<Timestamp> cuts = {});

/// End-of-month cuts for `count` consecutive months starting with the month of `first`.
std::vector<Timestamp> monthly_cuts(Date first, int count);

}  // namespace nowcast
