#include "fixtures.hpp"

#include <nowcast/error.hpp>

#include <cmath>
#include <numbers>

namespace nowcast::testing {

std::filesystem::path data_dir() { return NOWCAST_TEST_DATA_DIR; }

Date ymd(int y, unsigned m, unsigned d) { return std::chrono::year(y) / std::chrono::month(m) / std::chrono::day(d); }

namespace {

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = n(rng);
    }
    return m;
}

Matrix random_stable(std::mt19937_64& rng, Eigen::Index m) {
    Matrix a = random_matrix(rng, m, m);
    const double radius = a.eigenvalues().cwiseAbs().maxCoeff();
    std::uniform_real_distribution<double> u(0.3, 0.97);
    return a * (u(rng) / std::max(radius, 1e-9));
}

}  // namespace

StateSpaceSystem random_system(std::mt19937_64& rng, std::int64_t days, std::size_t max_state) {
    std::uniform_int_distribution<std::size_t> dim(1, max_state);
    std::uniform_int_distribution<std::size_t> slots_d(1, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto m = static_cast<Eigen::Index>(dim(rng));
    const std::size_t slots = slots_d(rng);

    const Matrix l = random_matrix(rng, m, m);
    StateSpaceSystem sys(static_cast<std::size_t>(m), slots, random_matrix(rng, m, 1).col(0),
                         l * l.transpose() + Matrix::Identity(m, m));

    std::vector<std::size_t> transitions;
    for (int i = 0; i < 2; ++i) {
        // Rank-deficient shocks in the second block, as in aggregation states.
        const Eigen::Index rank = i == 0 ? m : std::max<Eigen::Index>(1, m - 1);
        const Matrix r = random_matrix(rng, m, rank) * 0.7;
        transitions.push_back(sys.add_transition({random_stable(rng, m), r * r.transpose()}));
    }
    std::vector<std::size_t> measurements;
    for (int i = 0; i < 3; ++i) {
        MeasurementBlock mb;
        for (std::size_t s = 0; s < slots; ++s) {
            if (i == 0 || u(rng) < 0.6) mb.slots.push_back(s);
        }
        if (mb.slots.empty()) mb.slots.push_back(slots - 1);
        const auto rows = static_cast<Eigen::Index>(mb.slots.size());
        mb.loading = random_matrix(rng, rows, m);
        mb.intercept = random_matrix(rng, rows, 1).col(0);
        const Matrix h = random_matrix(rng, rows, rows) * 0.4;
        mb.noise_cov = h * h.transpose() + 0.05 * Matrix::Identity(rows, rows);
        measurements.push_back(sys.add_measurement(std::move(mb)));
    }
    for (std::int64_t t = 0; t < days; ++t) {
        const std::size_t tr = transitions[u(rng) < 0.7 ? 0 : 1];
        const double pick = u(rng);
        std::optional<std::size_t> meas;
        if (pick < 0.75) meas = measurements[static_cast<std::size_t>(pick * 4.0)];
        sys.append_day(tr, meas);
    }
    return sys;
}

ObservationSet random_observations(const StateSpaceSystem& sys, std::mt19937_64& rng, double keep) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n(0.0, 1.0);
    ObservationSet obs(sys.n_days());
    for (std::int64_t t = 0; t < sys.n_days(); ++t) {
        const MeasurementBlock* mb = sys.measurement(t);
        if (!mb) continue;
        for (const auto slot : mb->slots) {
            if (u(rng) < keep) obs.add(t, slot, n(rng));
        }
    }
    return obs;
}

DfmSpec random_small_spec(std::mt19937_64& rng, Date start, std::int64_t days) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DfmSpec spec;
    spec.grid_start = start;
    spec.grid_end = add_days(start, days - 1);
    spec.factor_ar_order = u(rng) < 0.5 ? 1 : 2;
    std::uniform_int_distribution<int> count(1, 3);
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
        IndicatorSpec ind;
        ind.id = "s" + std::to_string(k);
        ind.frequency = u(rng) < 0.5 ? Frequency::weekly : Frequency::daily;
        ind.kind = u(rng) < 0.6 ? IndicatorKind::flow : IndicatorKind::stock;
        ind.measurement_error = u(rng) < 0.5 ? ErrorDynamics::iid : ErrorDynamics::ar1;
        spec.indicators.push_back(ind);
    }
    while (dfm_layout(spec).state_dim > 6) {
        spec.indicators.back().measurement_error = ErrorDynamics::iid;
        if (dfm_layout(spec).state_dim > 6) spec.indicators.pop_back();
    }
    spec.validate();
    return spec;
}

DfmParams random_params(const DfmSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DfmParams p = DfmParams::defaults(spec);
    do {
        for (auto& a : p.factor_ar) a = 0.9 * u(rng);
    } while (!is_stationary(p.factor_ar));
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        auto& ip = p.indicators[k];
        ip.loading = 1.5 * u(rng);
        ip.mean = u(rng);
        ip.error_std = 0.3 + 0.5 * (u(rng) + 1.0);
        ip.error_ar = spec.indicators[k].measurement_error == ErrorDynamics::ar1 ? 0.8 * u(rng) : 0.0;
    }
    return p;
}

DfmSpec six_indicator_spec(Date start, Date end) {
    DfmSpec spec;
    spec.grid_start = start;
    spec.grid_end = end;
    spec.reference = "payems";
    spec.indicators = {
        {"claims", Frequency::weekly, IndicatorKind::stock, Transform::level, ErrorDynamics::iid},
        {"payems", Frequency::monthly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
        {"ip", Frequency::monthly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
        {"pilt", Frequency::monthly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
        {"mts", Frequency::monthly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
        {"gdp", Frequency::quarterly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
    };
    spec.validate();
    return spec;
}

DfmSpec recovery_spec() {
    DfmSpec spec;
    spec.grid_start = ymd(2010, 1, 1);
    spec.grid_end = ymd(2019, 12, 31);
    spec.reference = "monthly";
    spec.indicators = {
        {"weekly", Frequency::weekly, IndicatorKind::flow, Transform::level, ErrorDynamics::iid},
        {"monthly", Frequency::monthly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
    };
    spec.validate();
    return spec;
}

DfmParams recovery_truth(const DfmSpec& spec) {
    DfmParams p = DfmParams::defaults(spec);
    p.factor_ar = {0.95};
    p.indicators[0] = IndicatorParams{0.8, 0.0, 0.6, 0.0};
    p.indicators[1] = IndicatorParams{1.2, 0.4, 0.3, 0.0};
    return p;
}

std::vector<ReleaseEvent> synthetic_releases(const DfmSpec& spec, const DfmParams& params, std::uint64_t seed,
                                             int delay_days, double revision_sd, int revision_lag) {
    const Simulation sim = simulate(spec, params, seed);
    std::vector<ReleaseEvent> events = releases_from_panel(spec, sim.observations, delay_days);
    if (revision_sd <= 0.0) return events;
    std::mt19937_64 rng(seed ^ 0x5eedULL);
    std::normal_distribution<double> n(0.0, revision_sd);
    std::vector<ReleaseEvent> out;
    for (const auto& e : events) {
        ReleaseEvent first = e;
        first.value += n(rng);
        out.push_back(first);
        ReleaseEvent revised = e;
        revised.timestamp += std::chrono::days(revision_lag);
        out.push_back(revised);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ReleaseEvent& a, const ReleaseEvent& b) { return a.timestamp < b.timestamp; });
    return out;
}

PandemicFixture load_pandemic_fixture() {
    PandemicFixture f;
    f.spec = DfmSpec::load(data_dir() / "appendix_a.cfg");
    f.model = FittedModel::load(f.spec, data_dir() / "appendix_a_params.cfg");
    const auto history = build_vintages(f.spec, read_release_log(data_dir() / "appendix_a_history.csv"));
    f.history = history.back();
    f.vintages = build_vintages(f.spec, read_release_log(data_dir() / "appendix_a_releases.csv"), &f.history);
    return f;
}

DailySeries covid_index_fixture() {
    std::vector<double> v(730);
    for (std::size_t d = 0; d < v.size(); ++d) {
        const double t = static_cast<double>(d);
        v[d] = 3.0 * std::sin(2.0 * std::numbers::pi * t / 365.0) + 0.8 * std::sin(2.0 * std::numbers::pi * t / 150.0);
    }
    return DailySeries::from_values(ymd(2019, 1, 1), std::move(v));
}

DailySeries covid_deaths_fixture(const DailySeries& index, int k, std::uint64_t seed) {
    static constexpr double kWeekly[7] = {1.2, -0.4, -0.6, -0.3, 0.1, 0.6, -0.6};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 0.3);
    // deaths(d) is defined for every day whose lag d - k is on the index.
    std::vector<double> v;
    for (std::size_t i = 0; i < index.size(); ++i) v.push_back(-index.values[i] + kWeekly[(i + static_cast<std::size_t>(k)) % 7] + n(rng));
    return DailySeries::from_values(add_days(index.start, k), std::move(v));
}

}  // namespace nowcast::testing
