#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "treq/experiment.hpp"
#include "treq/process.hpp"

using namespace treq;

namespace {

ExperimentSpec fair_spec(Mode mode) {
    ExperimentSpec spec;
    spec.model = build_iid(3, StateSpace{{"H", "T"}}, {0.5, 0.5});
    spec.mode = mode;
    spec.degree = 3;
    spec.n_lo = 1;
    spec.n_hi = 3;
    spec.replicas = 8;
    spec.seed = 7;
    spec.prefix_source = "12121212";
    return spec;
}

}  // namespace

TEST_CASE("fair coin gives log 2 exactly in every mode") {
    for (const Mode mode : {Mode::MetricSpheres, Mode::Horoball, Mode::Horoshell, Mode::FolnerF}) {
        const ConvergenceReport report = run_smb(fair_spec(mode));
        for (const ReplicaValue& row : report.rows) CHECK(row.value == std::log(2.0));
        for (const LevelSummary& level : report.levels) {
            CHECK(level.mean == std::log(2.0));
            CHECK(level.sd == 0.0);
        }
    }
}

TEST_CASE("set sizes follow the closed forms") {
    const auto sizes = [](Mode mode) {
        std::vector<std::int64_t> out;
        for (const LevelSummary& level : run_smb(fair_spec(mode)).levels) out.push_back(level.set_size);
        return out;
    };
    CHECK(sizes(Mode::MetricSpheres) == std::vector<std::int64_t>{6, 24, 96});
    CHECK(sizes(Mode::Horoball) == std::vector<std::int64_t>{2, 4, 8});
    CHECK(sizes(Mode::Horoshell) == std::vector<std::int64_t>{1, 2, 4});
    CHECK(sizes(Mode::FolnerF) == std::vector<std::int64_t>{1, 2, 4});
}

TEST_CASE("biased coin mean approaches the entropy") {
    ExperimentSpec spec = fair_spec(Mode::MetricSpheres);
    spec.model = build_iid(3, StateSpace{{"a", "b"}}, {0.3, 0.7});
    spec.n_lo = 2;
    spec.n_hi = 4;
    spec.replicas = 200;
    const double h = -(0.3 * std::log(0.3) + 0.7 * std::log(0.7));
    const ConvergenceReport report = run_smb(spec);
    for (const LevelSummary& level : report.levels) {
        const double se = level.sd / std::sqrt(static_cast<double>(spec.replicas));
        CHECK(std::abs(level.mean - h) < 3 * se);
    }
    // Dispersion shrinks with the set size.
    CHECK(report.levels[2].sd < report.levels[1].sd);
    CHECK(report.levels[1].sd < report.levels[0].sd);
}

TEST_CASE("reports are deterministic and parallel-agnostic") {
    const ExperimentSpec spec = fair_spec(Mode::Horoball);
    const ConvergenceReport first = run_smb(spec);
    const ConvergenceReport second = run_smb(spec);
    std::ostringstream csv1;
    std::ostringstream csv2;
    emit_report(first, ReportFormat::Csv, csv1);
    emit_report(second, ReportFormat::Csv, csv2);
    CHECK(csv1.str() == csv2.str());
    std::ostringstream json1;
    std::ostringstream json2;
    emit_report(first, ReportFormat::Json, json1);
    emit_report(second, ReportFormat::Json, json2);
    CHECK(json1.str() == json2.str());
}

TEST_CASE("different seeds change the draw") {
    ExperimentSpec spec = fair_spec(Mode::Horoball);
    spec.model = build_ising(3, 0.2);
    const ConvergenceReport first = run_smb(spec);
    spec.seed = 8;
    const ConvergenceReport second = run_smb(spec);
    bool any_different = false;
    for (std::size_t i = 0; i < first.rows.size(); ++i)
        if (first.rows[i].value != second.rows[i].value) any_different = true;
    CHECK(any_different);
}

TEST_CASE("empty report emits a header-only csv") {
    ConvergenceReport report;
    report.mode = "metric-spheres";
    std::ostringstream out;
    emit_report(report, ReportFormat::Csv, out);
    CHECK(out.str() == "mode,n,set_size,replica,value,mean,sd,h_running\n");
}

TEST_CASE("csv layout") {
    const ConvergenceReport report = run_smb(fair_spec(Mode::MetricSpheres));
    std::ostringstream out;
    emit_report(report, ReportFormat::Csv, out);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "mode,n,set_size,replica,value,mean,sd,h_running");
    std::getline(lines, line);
    CHECK(line.starts_with("metric-spheres,1,6,0,"));
}

TEST_CASE("spec json round trip with overrides") {
    ExperimentSpec spec = fair_spec(Mode::Horoshell);
    spec.psi_max_distance = 5;
    spec.maximal_n_max = 2;
    const ExperimentSpec back = ExperimentSpec::from_json(spec.to_json());
    CHECK(back.mode == spec.mode);
    CHECK(back.n_lo == spec.n_lo);
    CHECK(back.n_hi == spec.n_hi);
    CHECK(back.replicas == spec.replicas);
    CHECK(back.seed == spec.seed);
    CHECK(back.prefix_source == spec.prefix_source);
    CHECK(back.psi_max_distance == 5);
    CHECK(back.maximal_n_max == 2);

    CHECK_THROWS(ExperimentSpec::from_json(nlohmann::json{{"mode", "metric-spheres"}}));
}

TEST_CASE("fixed prefix must be deep enough") {
    ExperimentSpec spec = fair_spec(Mode::Horoball);
    spec.prefix_source = "12";
    spec.n_hi = 3;
    CHECK_THROWS_AS((void)run_smb(spec), std::invalid_argument);
}

TEST_CASE("psi decay run: product law short-circuits, kernels fit") {
    ExperimentSpec spec = fair_spec(Mode::MetricSpheres);
    spec.psi_max_distance = 4;
    const PsiReport trivial = run_psi_decay(spec);
    CHECK(trivial.trivially_independent);
    CHECK_FALSE(trivial.fit.has_value());

    spec.model = build_ising(3, 0.2);
    const PsiReport report = run_psi_decay(spec);
    REQUIRE(report.fit.has_value());
    CHECK(report.fit->lambda == doctest::Approx(-std::log(std::tanh(0.2))).epsilon(1e-6));
    CHECK(report.fit->exceeds_threshold);
    for (const auto& block : report.block_points) CHECK(block.bound_ok);
}

TEST_CASE("maximal run: fair coin tail vanishes above log 2") {
    ExperimentSpec spec = fair_spec(Mode::Horoball);
    spec.replicas = 500;
    spec.maximal_n_max = 3;
    const MaximalReport report = run_maximal(spec);
    CHECK(report.pass());
    CHECK(report.sup_mean == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    for (const auto& row : report.rows)
        if (row.r > std::log(2.0)) CHECK(row.empirical_tail == 0.0);
    // r0 for two states sits at the first grid point past log 4.
    CHECK(report.r0 >= 2 * std::log(2.0));
    CHECK(report.r0 < 2 * std::log(2.0) + spec.r_grid_step + 1e-12);
}

TEST_CASE("decomposition identity is exact for sampled configurations") {
    const Alphabet alpha(3);
    const ProcessModel model = build_ising(3, 0.2);
    Rng rng(99);
    for (int n = 1; n <= 3; ++n) {
        const auto region = sphere(alpha, 2 * n);
        const Configuration omega = sample_region(model, region, rng);
        const DecompositionCheck check = decomposition_identity(model, alpha, n, omega);
        CHECK(check.gap <= 1e-12);
    }
}

TEST_CASE("block gap vanishes for product laws and shrinks for kernels") {
    const Alphabet alpha(3);
    const ProcessModel coin = build_iid(3, StateSpace{{"H", "T"}}, {0.5, 0.5});
    Rng rng(123);
    for (int n = 1; n <= 3; ++n) {
        const auto region = sphere(alpha, 2 * n);
        const Configuration omega = sample_region(coin, region, rng);
        CHECK(normalized_block_gap(coin, alpha, n, omega) == 0.0);
    }

    const ProcessModel model = build_ising(3, 0.2);
    std::vector<double> gaps;
    for (int n = 1; n <= 3; ++n) {
        const auto region = sphere(alpha, 2 * n);
        double total = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            const Configuration omega = sample_region(model, region, rng);
            total += normalized_block_gap(model, alpha, n, omega);
        }
        gaps.push_back(total / 20.0);
    }
    CHECK(gaps[1] < gaps[0]);
    CHECK(gaps[2] < gaps[1]);
}
