#include "nowcast/cli.hpp"

#include "CLI11.hpp"

#include <nowcast/chronology.hpp>
#include <nowcast/covid.hpp>
#include <nowcast/csv.hpp>
#include <nowcast/error.hpp>
#include <nowcast/estimate.hpp>
#include <nowcast/model.hpp>
#include <nowcast/plot.hpp>
#include <nowcast/vintage.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

namespace nowcast::cli {

namespace {

namespace fs = std::filesystem;

struct SimulateArgs {
    std::string spec, params, out;
    std::uint64_t seed = 0;
    int release_delay = 0;
};

struct EstimateArgs {
    std::string spec, data, init, out, optimizer = "simplex";
    int max_iter = 2000;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    bool no_standardize = false;
};

struct ExtractArgs {
    std::string spec, params, data, pull, out, svg;
    bool to_pull = false;
};

struct ReplayArgs {
    std::string spec, params, vintages, releases, out, mode = "pseudo-real-time", recorded_path, recorded_dots,
                                                      optimizer = "simplex";
    bool reestimate = false, svg = false, to_pull = false;
    unsigned jobs = 1;
    int max_iter = 2000;
    double tol = 1e-8;
    std::uint64_t seed = 0;
};

struct ChronologyArgs {
    std::string path, table = "builtin", out;
};

struct CorrelateArgs {
    std::string deaths, path, out, svg;
    int lead = 20;
    double lambda = kDefaultDailyHpLambda;
};

Timestamp default_pull(const DfmSpec& spec, const PanelData& panel) {
    Date last = spec.grid_end;
    for (const auto& s : panel) {
        if (!s.empty() && std::chrono::sys_days(s.back().period_end) > std::chrono::sys_days(last)) {
            last = s.back().period_end;
        }
    }
    return Timestamp(std::chrono::sys_days(last));
}

FittedModel load_model_or_defaults(const DfmSpec& spec, const std::string& file) {
    if (!file.empty()) return FittedModel::load(spec, file);
    return FittedModel{DfmParams::defaults(spec), Standardization::identity(spec.indicators.size())};
}

EstimationOptions estimation_options(const std::string& optimizer, int max_iter, double tol, std::uint64_t seed) {
    EstimationOptions opts;
    opts.optimizer = parse_optimizer_kind(optimizer);
    opts.optimizer_options.max_iterations = max_iter;
    opts.optimizer_options.tolerance = tol;
    opts.optimizer_options.seed = seed;
    return opts;
}

int do_simulate(const SimulateArgs& a, std::ostream& err) {
    const DfmSpec spec = DfmSpec::load(a.spec);
    const FittedModel model = load_model_or_defaults(spec, a.params);
    const Simulation sim = simulate(spec, model.params, a.seed);
    const Grid grid = spec.grid();
    const fs::path out(a.out);

    std::ostringstream factor;
    factor << "date,factor\n";
    for (std::int64_t t = 0; t < grid.size(); ++t) {
        factor << format_date(grid.at(t).date) << ',' << format_double(sim.factor[static_cast<std::size_t>(t)]) << '\n';
    }
    write_text_file(out / "factor.csv", factor.str());

    PanelData levels(spec.indicators.size());
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        const auto& ind = spec.indicators[k];
        const double base = ind.transform == Transform::log_difference ? 100.0 : 0.0;
        levels[k] = integrate_series(ind, sim.observations[k], base, spec.week_end);
    }
    write_panel(out / "data", spec, levels);
    const auto releases = releases_from_panel(spec, levels, a.release_delay);
    write_text_file(out / "releases.csv", release_log_to_csv(releases));
    err << "simulated " << grid.size() << " days, " << releases.size() << " releases\n";
    return kExitOk;
}

int do_estimate(const EstimateArgs& a, std::ostream& err) {
    const DfmSpec spec = DfmSpec::load(a.spec);
    const PanelData raw = read_panel(a.data, spec);
    const PanelData transformed = transform_panel(spec, raw);
    FittedModel model = load_model_or_defaults(spec, a.init);
    model.standardization =
        a.no_standardize ? Standardization::identity(spec.indicators.size()) : compute_standardization(transformed);
    const PanelData panel = apply_standardization(model.standardization, transformed);

    const VintageDataset v{default_pull(spec, raw), raw};
    const auto last = v.last_period_end();
    if (!last) throw ValidationError("no observations in " + a.data);
    const Grid grid = spec.grid_until(std::min(*last, spec.grid_end));
    const ObservationSet obs = make_observations_clipped(spec, grid, panel);

    const EstimationReport report =
        estimate_mle(spec, grid, obs, model.params, estimation_options(a.optimizer, a.max_iter, a.tol, a.seed));
    model.params = report.params;
    model.to_config(spec).save(a.out);
    err << "log-likelihood " << format_double(report.initial_loglik) << " -> " << format_double(report.loglik)
        << " after " << report.iterations << " iterations (" << (report.converged ? "converged" : "not converged")
        << ")\n";
    return kExitOk;
}

int do_extract(const ExtractArgs& a, std::ostream& err) {
    const DfmSpec spec = DfmSpec::load(a.spec);
    const FittedModel model = FittedModel::load(spec, a.params);
    VintageDataset v;
    v.data = read_panel(a.data, spec);
    v.pull = a.pull.empty() ? default_pull(spec, v.data) : parse_timestamp(a.pull);
    ExtractOptions opts;
    opts.extend_to_pull_date = a.to_pull;
    const Path path = extract_path(spec, model, v, opts);
    write_text_file(a.out, path_to_csv(path));
    if (!a.svg.empty()) write_text_file(a.svg, paths_svg({path}));
    err << "extracted " << path.points.size() << " days through " << format_date(path.last_date()) << '\n';
    return kExitOk;
}

int do_replay(const ReplayArgs& a, std::ostream& err) {
    const DfmSpec spec = DfmSpec::load(a.spec);
    if (a.vintages.empty() == a.releases.empty()) {
        throw ValidationError("replay needs exactly one of --vintages or --releases");
    }
    const std::vector<VintageDataset> vintages = !a.vintages.empty()
                                                     ? read_vintage_archive(a.vintages, spec)
                                                     : build_vintages(spec, read_release_log(a.releases));
    if (vintages.empty()) throw ValidationError("no vintages to replay");

    const EvaluationMode mode = parse_evaluation_mode(a.mode);
    const EvaluationPlan plan = evaluation_plan(mode, vintages.back(), vintages);

    ReplayOptions opts;
    opts.policy = a.reestimate ? ParamsPolicy::reestimate
                               : (a.params.empty() ? ParamsPolicy::estimate_first : ParamsPolicy::fixed);
    opts.estimation = estimation_options(a.optimizer, a.max_iter, a.tol, a.seed);
    opts.extract.extend_to_pull_date = a.to_pull;
    opts.jobs = a.jobs;
    const FittedModel model = load_model_or_defaults(spec, a.params);
    const ReplayResult result = replay(spec, model, plan.datasets, opts);

    const fs::path out(a.out);
    for (const auto& p : result.paths) write_text_file(out / "paths" / (format_timestamp(p.vintage) + ".csv"), path_to_csv(p));
    write_text_file(out / "dots.csv", dots_to_csv(result.dots));

    std::optional<Path> recorded;
    if (!a.recorded_path.empty()) recorded = path_from_csv(a.recorded_path);
    if (!a.recorded_dots.empty()) {
        const DotSeries rec = dots_from_csv(a.recorded_dots);
        std::ostringstream cmp;
        cmp << "vintage,ads,recorded,difference\n";
        for (const auto& d : result.dots) {
            const auto it = std::find_if(rec.begin(), rec.end(), [&](const Dot& r) { return r.vintage == d.vintage; });
            cmp << format_timestamp(d.vintage) << ',' << format_double(d.ads) << ',';
            if (it == rec.end()) {
                cmp << "NA,NA\n";
            } else {
                cmp << format_double(it->ads) << ',' << format_double(d.ads - it->ads) << '\n';
            }
        }
        write_text_file(out / "comparison.csv", cmp.str());
    }
    if (a.svg) {
        write_text_file(out / "paths.svg", paths_svg(result.paths, recorded ? &*recorded : nullptr));
        write_text_file(out / "dots.svg", dots_svg(result.dots, recorded ? &*recorded : nullptr));
    }
    err << "replayed " << result.paths.size() << " vintages (" << to_string(mode) << ")\n";
    return kExitOk;
}

int do_chronology(const ChronologyArgs& a, std::ostream& out, std::ostream& err) {
    const Path path = path_from_csv(a.path);
    const std::vector<Episode> table = a.table == "builtin" ? builtin_chronology() : read_chronology(a.table);
    const auto rows = summarize(path, table);
    for (const auto& r : rows) {
        if (r.covered && r.shallow_warning) {
            err << "warning: index stays above zero during " << format_year_month(r.episode.peak) << " to "
                << format_year_month(r.episode.trough) << '\n';
        }
    }
    if (!a.out.empty()) write_text_file(a.out, summary_to_csv(rows));
    out << summary_to_text(rows);
    return kExitOk;
}

int do_correlate(const CorrelateArgs& a, std::ostream& out, std::ostream&) {
    const DailySeries deaths = read_daily_series(a.deaths);
    const DailySeries ads = DailySeries::from_path(path_from_csv(a.path));
    const CovidComparison c = covid_pipeline(ads, deaths, a.lead, a.lambda);
    if (!a.out.empty()) write_text_file(a.out, comparison_to_csv(c));
    if (!a.svg.empty()) write_text_file(a.svg, comparison_svg(c));
    out << "lead_days,lambda,correlation\n"
        << c.lead_days << ',' << format_double(c.lambda) << ',' << format_double(c.correlation) << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Daily business-conditions index: simulation, estimation, extraction and evaluation", "nowcast"};
    app.require_subcommand(1, 1);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Simulate a factor path, indicator data and a release log");
    s->add_option("--spec", sim.spec, "Model specification file")->required()->check(CLI::ExistingFile);
    s->add_option("--params", sim.params, "Parameter file (defaults if omitted)")->check(CLI::ExistingFile);
    s->add_option("--seed", sim.seed, "Random seed");
    s->add_option("--out", sim.out, "Output directory")->required();
    s->add_option("--release-delay", sim.release_delay, "Days between a period's end and its release");

    EstimateArgs est;
    auto* e = app.add_subcommand("estimate", "Maximum-likelihood estimation");
    e->add_option("--spec", est.spec, "Model specification file")->required()->check(CLI::ExistingFile);
    e->add_option("--data", est.data, "Directory of <indicator>.csv files")->required()->check(CLI::ExistingDirectory);
    e->add_option("--init", est.init, "Starting parameter file")->check(CLI::ExistingFile);
    e->add_option("--optimizer", est.optimizer, "simplex or quasi-newton");
    e->add_option("--max-iter", est.max_iter, "Iteration cap");
    e->add_option("--tol", est.tol, "Relative improvement tolerance");
    e->add_option("--seed", est.seed, "Seed for simplex restarts");
    e->add_flag("--no-standardize", est.no_standardize, "Fit the transformed data without standardizing");
    e->add_option("--out", est.out, "Output parameter file")->required();

    ExtractArgs ext;
    auto* x = app.add_subcommand("extract", "Smoothed daily index for one dataset");
    x->add_option("--spec", ext.spec, "Model specification file")->required()->check(CLI::ExistingFile);
    x->add_option("--params", ext.params, "Parameter file")->required()->check(CLI::ExistingFile);
    x->add_option("--data", ext.data, "Directory of <indicator>.csv files")->required()->check(CLI::ExistingDirectory);
    x->add_option("--pull", ext.pull, "Pull timestamp (defaults to the last period end)");
    x->add_flag("--to-pull-date", ext.to_pull, "Extend the path through the pull date");
    x->add_option("--out", ext.out, "Output path CSV")->required();
    x->add_option("--svg", ext.svg, "Optional SVG plot");

    ReplayArgs rep;
    auto* r = app.add_subcommand("replay", "Extract a path for every vintage");
    r->add_option("--spec", rep.spec, "Model specification file")->required()->check(CLI::ExistingFile);
    r->add_option("--params", rep.params, "Parameter file (estimated on the first vintage if omitted)")
        ->check(CLI::ExistingFile);
    r->add_option("--vintages", rep.vintages, "Vintage archive directory")->check(CLI::ExistingDirectory);
    r->add_option("--releases", rep.releases, "Release log CSV")->check(CLI::ExistingFile);
    r->add_option("--mode", rep.mode, "pseudo-real-time, final-expanding or final-full");
    r->add_flag("--reestimate-per-vintage", rep.reestimate, "Refit parameters on every vintage");
    r->add_option("--jobs", rep.jobs, "Worker threads")->check(CLI::PositiveNumber);
    r->add_flag("--to-pull-date", rep.to_pull, "Extend each path through its pull date");
    r->add_option("--optimizer", rep.optimizer, "simplex or quasi-newton");
    r->add_option("--max-iter", rep.max_iter, "Iteration cap");
    r->add_option("--tol", rep.tol, "Relative improvement tolerance");
    r->add_option("--seed", rep.seed, "Seed for simplex restarts");
    r->add_option("--recorded-path", rep.recorded_path, "Recorded path CSV to overlay")->check(CLI::ExistingFile);
    r->add_option("--recorded-dots", rep.recorded_dots, "Recorded dot CSV to compare against")
        ->check(CLI::ExistingFile);
    r->add_flag("--svg", rep.svg, "Write paths.svg and dots.svg");
    r->add_option("--out", rep.out, "Output directory")->required();

    ChronologyArgs chr;
    auto* c = app.add_subcommand("chronology", "Recession depth, duration and severity report");
    c->add_option("--path", chr.path, "Path CSV")->required()->check(CLI::ExistingFile);
    c->add_option("--table", chr.table, "builtin or a CSV with peak,trough columns");
    c->add_option("--out", chr.out, "Optional CSV report");

    CorrelateArgs cor;
    auto* k = app.add_subcommand("correlate", "Correlate the index with led, HP-smoothed daily deaths");
    k->add_option("--deaths", cor.deaths, "Deaths CSV (date,value)")->required()->check(CLI::ExistingFile);
    k->add_option("--path", cor.path, "Path CSV")->required()->check(CLI::ExistingFile);
    k->add_option("--lead", cor.lead, "Lead in days")->check(CLI::NonNegativeNumber);
    k->add_option("--lambda", cor.lambda, "HP smoothing parameter")->check(CLI::PositiveNumber);
    k->add_option("--out", cor.out, "Optional aligned CSV");
    k->add_option("--svg", cor.svg, "Optional SVG plot");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex, out, err);
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex, out, err);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex, err, err);
        err << app.help();
        return kExitValidation;
    }

    try {
        if (*s) return do_simulate(sim, err);
        if (*e) return do_estimate(est, err);
        if (*x) return do_extract(ext, err);
        if (*r) return do_replay(rep, err);
        if (*c) return do_chronology(chr, out, err);
        if (*k) return do_correlate(cor, out, err);
    } catch (const ValidationError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& ex) {
        err << "numerical failure: " << ex.what() << '\n';
        return kExitNumerical;
    } catch (const fs::filesystem_error& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}

}  // namespace nowcast::cli
