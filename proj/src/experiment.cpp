#include "treq/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace treq {

namespace {

class WallClock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string format_double(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

std::vector<Word> union_of(const std::vector<std::vector<Word>>& sets) {
    std::set<Word> all;
    for (const auto& s : sets) all.insert(s.begin(), s.end());
    return std::vector<Word>(all.begin(), all.end());
}

std::int64_t expected_set_size(Mode mode, int d, int n) {
    switch (mode) {
        case Mode::MetricSpheres: return sphere_size(d, 2 * n);
        case Mode::Horoball: return cyclic_order(d, n);
        case Mode::Horoshell: return cyclic_order(d, n) - cyclic_order(d, n - 1);
        case Mode::FolnerF: return cyclic_order(d, n - 1);
    }
    throw std::logic_error("expected_set_size: bad mode");
}

struct Moments {
    double mean;
    double sd;  // sample standard deviation
};

Moments replica_moments(const std::vector<double>& values) {
    const auto count = static_cast<double>(values.size());
    const double mean = pairwise_sum(values) / count;
    if (values.size() < 2) return {mean, 0.0};
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
    return {mean, std::sqrt(pairwise_sum(sq) / (count - 1.0))};
}

}  // namespace

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::MetricSpheres: return "metric-spheres";
        case Mode::Horoball: return "horoball";
        case Mode::Horoshell: return "horoshell";
        case Mode::FolnerF: return "folner-F";
    }
    throw std::logic_error("mode_name: bad mode");
}

Mode mode_from_name(const std::string& name) {
    if (name == "metric-spheres") return Mode::MetricSpheres;
    if (name == "horoball") return Mode::Horoball;
    if (name == "horoshell") return Mode::Horoshell;
    if (name == "folner-F") return Mode::FolnerF;
    throw std::invalid_argument("unknown mode: " + name);
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
    ExperimentSpec spec;
    if (j.contains("model_file")) {
        std::ifstream in(j.at("model_file").get<std::string>());
        if (!in) throw std::runtime_error("cannot open model file");
        nlohmann::json mj;
        in >> mj;
        spec.model = model_from_json(mj);
    } else {
        spec.model = model_from_json(j.at("model"));
    }
    spec.degree = j.value("d", spec.model.degree);
    if (spec.degree != spec.model.degree)
        throw std::invalid_argument("spec degree disagrees with model degree");
    if (j.contains("mode")) spec.mode = mode_from_name(j.at("mode").get<std::string>());
    if (j.contains("n_range")) {
        const auto range = j.at("n_range").get<std::vector<int>>();
        if (range.size() != 2) throw std::invalid_argument("n_range must be [lo, hi]");
        spec.n_lo = range[0];
        spec.n_hi = range[1];
    }
    spec.replicas = j.value("replicas", spec.replicas);
    spec.seed = j.value("seed", spec.seed);
    spec.prefix_source = j.value("prefix", spec.prefix_source);
    spec.out_path = j.value("out", spec.out_path);
    if (j.contains("format")) {
        const auto f = j.at("format").get<std::string>();
        if (f == "csv") spec.format = ReportFormat::Csv;
        else if (f == "json") spec.format = ReportFormat::Json;
        else throw std::invalid_argument("format must be csv or json");
    }
    if (j.contains("psi")) {
        spec.psi_max_distance = j.at("psi").value("max_distance", spec.psi_max_distance);
        spec.psi_block_level = j.at("psi").value("block_level", spec.psi_block_level);
    }
    if (j.contains("maximal")) {
        const auto& m = j.at("maximal");
        spec.maximal_n_max = m.value("n_max", spec.maximal_n_max);
        if (m.contains("r_grid")) {
            const auto grid = m.at("r_grid").get<std::vector<double>>();
            if (grid.size() != 3) throw std::invalid_argument("r_grid must be [lo, hi, step]");
            spec.r_grid_lo = grid[0];
            spec.r_grid_hi = grid[1];
            spec.r_grid_step = grid[2];
        }
    }
    if (spec.replicas < 1) throw std::invalid_argument("replicas must be at least 1");
    if (spec.n_lo > spec.n_hi) throw std::invalid_argument("empty n_range");
    return spec;
}

nlohmann::json ExperimentSpec::to_json() const {
    nlohmann::json j;
    j["model"] = model_to_json(model);
    j["mode"] = mode_name(mode);
    j["d"] = degree;
    j["n_range"] = {n_lo, n_hi};
    j["replicas"] = replicas;
    j["seed"] = seed;
    j["prefix"] = prefix_source;
    j["format"] = format == ReportFormat::Csv ? "csv" : "json";
    j["psi"] = {{"max_distance", psi_max_distance}, {"block_level", psi_block_level}};
    j["maximal"] = {{"n_max", maximal_n_max}, {"r_grid", {r_grid_lo, r_grid_hi, r_grid_step}}};
    return j;
}

namespace {

// Stream index 0 is reserved for the boundary prefix; replicas use 1.. .
constexpr std::uint64_t kPrefixStream = 0;

BoundaryPrefix resolve_prefix(const ExperimentSpec& spec, int depth_needed) {
    if (spec.prefix_source == "patterson-sullivan") {
        Rng rng = derive_rng(spec.seed, kPrefixStream);
        return ps_sample(Alphabet(spec.degree), depth_needed, rng);
    }
    const BoundaryPrefix xi = BoundaryPrefix::parse(spec.prefix_source);
    if (xi.depth() < depth_needed)
        throw std::invalid_argument("fixed boundary prefix too shallow for requested levels");
    return xi;
}

}  // namespace

double ConvergenceReport::h_standard_error(int replicas) const {
    if (levels.empty() || replicas < 1) return 0.0;
    return levels.back().sd / std::sqrt(static_cast<double>(replicas));
}

ConvergenceReport run_smb(const ExperimentSpec& spec) {
    const WallClock clock;
    const Alphabet alpha(spec.degree);
    const int n_min_allowed = spec.mode == Mode::Horoball ? 0 : 1;
    if (spec.n_lo < n_min_allowed)
        throw std::invalid_argument("n_range starts below the mode's minimal level");

    const int depth_needed = std::max(spec.n_hi + 1, 2);
    const BoundaryPrefix xi = resolve_prefix(spec, depth_needed);

    std::vector<std::vector<Word>> sets;
    for (int n = spec.n_lo; n <= spec.n_hi; ++n) {
        std::vector<Word> set;
        switch (spec.mode) {
            case Mode::MetricSpheres: set = sphere(alpha, 2 * n); break;
            case Mode::Horoball: set = horoball(alpha, xi, n); break;
            case Mode::Horoshell: set = horoshell(alpha, xi, n); break;
            case Mode::FolnerF: set = folner_block(alpha, xi, n); break;
        }
        if (static_cast<std::int64_t>(set.size()) != expected_set_size(spec.mode, spec.degree, n))
            throw std::logic_error("run_smb: set size disagrees with its closed form");
        sets.push_back(std::move(set));
    }

    // Cross-estimator sets at the largest level (shared replicas).
    const std::vector<Word> compare_ball = horoball(alpha, xi, spec.n_hi);
    const std::vector<Word> compare_sphere = sphere(alpha, 2 * spec.n_hi);

    std::vector<std::vector<Word>> all_sets = sets;
    all_sets.push_back(compare_ball);
    all_sets.push_back(compare_sphere);
    const std::vector<Word> region = union_of(all_sets);

    const int levels_count = spec.n_hi - spec.n_lo + 1;
    const int replicas = spec.replicas;
    std::vector<std::vector<double>> values(levels_count,
                                            std::vector<double>(static_cast<std::size_t>(replicas)));
    std::vector<double> ball_values(static_cast<std::size_t>(replicas));
    std::vector<double> sphere_values(static_cast<std::size_t>(replicas));

    // One configuration per replica on the union region, so values across
    // levels within a replica are pathwise.
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < replicas; ++r) {
        Rng rng = derive_rng(spec.seed, static_cast<std::uint64_t>(r) + 1);
        const Configuration omega = sample_region(spec.model, region, rng);
        for (int li = 0; li < levels_count; ++li) {
            const auto& set = sets[static_cast<std::size_t>(li)];
            values[static_cast<std::size_t>(li)][static_cast<std::size_t>(r)] =
                info_value(spec.model, omega.restrict_to(set)) / static_cast<double>(set.size());
        }
        ball_values[static_cast<std::size_t>(r)] =
            info_value(spec.model, omega.restrict_to(compare_ball)) /
            static_cast<double>(compare_ball.size());
        sphere_values[static_cast<std::size_t>(r)] =
            info_value(spec.model, omega.restrict_to(compare_sphere)) /
            static_cast<double>(compare_sphere.size());
    }

    ConvergenceReport report;
    report.mode = mode_name(spec.mode);
    report.spec_echo = spec.to_json();
    report.version = kVersion;
    report.prefix = xi.str();
    for (int li = 0; li < levels_count; ++li) {
        const int n = spec.n_lo + li;
        const auto& level_values = values[static_cast<std::size_t>(li)];
        const auto size = static_cast<std::int64_t>(sets[static_cast<std::size_t>(li)].size());
        const Moments m = replica_moments(level_values);
        report.levels.push_back(LevelSummary{n, size, m.mean, m.sd, m.mean});
        for (int r = 0; r < replicas; ++r)
            report.rows.push_back(ReplicaValue{n, size, r, level_values[static_cast<std::size_t>(r)]});
    }
    const Moments mb = replica_moments(ball_values);
    const Moments ms = replica_moments(sphere_values);
    const double root_r = std::sqrt(static_cast<double>(replicas));
    report.h_horoball = mb.mean;
    report.se_horoball = mb.sd / root_r;
    report.h_sphere = ms.mean;
    report.se_sphere = ms.sd / root_r;
    report.wall_seconds = clock.seconds();
    return report;
}

PsiReport run_psi_decay(const ExperimentSpec& spec) {
    const WallClock clock;
    const Alphabet alpha(spec.degree);
    if (spec.model.kind != ModelKind::MarkovTree && spec.model.kind != ModelKind::Iid)
        throw std::invalid_argument("run_psi_decay: unsupported model kind");

    PsiReport report;
    report.spec_echo = spec.to_json();
    report.version = kVersion;

    // Singleton pairs at distances 1..k_max: the root against one site on the
    // alternating ray.
    const std::vector<Word> u_region{Word()};
    for (int k = 1; k <= spec.psi_max_distance; ++k) {
        std::vector<Letter> letters;
        for (int i = 0; i < k; ++i) letters.push_back(static_cast<Letter>(i % 2 == 0 ? 1 : 2));
        const std::vector<Word> v_region{Word(std::move(letters))};
        const double psi = psi_coeff(spec.model, u_region, v_region);
        report.singleton_points.push_back(DecayPoint{static_cast<double>(k), psi, 1.0, 1.0});
    }

    bool any_positive = false;
    for (const DecayPoint& pt : report.singleton_points)
        if (pt.psi > 0.0) any_positive = true;
    if (!any_positive) {
        report.trivially_independent = true;
    } else {
        report.fit = fit_decay(spec.degree, report.singleton_points);
    }

    // Dependence between a prefix union of partition blocks and the next
    // block, with the fitted bound alongside.
    const int n = spec.psi_block_level;
    const auto partition = sphere_partition(alpha, n);
    std::vector<std::vector<Word>> blocks;
    for (const auto& [u, block] : partition) blocks.push_back(block);
    std::vector<Word> prefix_union;
    const double atom_guard = std::log(static_cast<double>(kDefaultBruteAtomCap)) /
                              std::log(static_cast<double>(spec.model.states.size()));
    for (std::size_t j = 0; j + 1 < blocks.size(); ++j) {
        prefix_union.insert(prefix_union.end(), blocks[j].begin(), blocks[j].end());
        const auto& next = blocks[j + 1];
        if (static_cast<double>(prefix_union.size() + next.size()) > atom_guard) break;
        const double psi = psi_coeff(spec.model, prefix_union, next);
        const double dist = set_distance(prefix_union, next);
        PsiReport::BlockPoint point;
        point.j = static_cast<int>(j + 1);
        point.dist = dist;
        point.size_u = static_cast<double>(prefix_union.size());
        point.size_v = static_cast<double>(next.size());
        point.psi = psi;
        if (report.fit) {
            point.bound = report.fit->prefactor * point.size_u * point.size_v *
                          std::exp(-report.fit->lambda * dist);
            point.bound_ok = psi <= point.bound * (1.0 + 1e-9) + 1e-15;
        } else {
            point.bound = 0.0;
            point.bound_ok = psi == 0.0;
        }
        report.block_points.push_back(point);
    }
    report.wall_seconds = clock.seconds();
    return report;
}

MaximalReport run_maximal(const ExperimentSpec& spec) {
    const WallClock clock;
    const Alphabet alpha(spec.degree);
    const int n_max = spec.maximal_n_max;
    if (n_max < 1) throw std::invalid_argument("run_maximal: n_max must be at least 1");
    const BoundaryPrefix xi = resolve_prefix(spec, n_max + 1);

    std::vector<std::vector<Word>> sets;
    for (int n = 1; n <= n_max; ++n) sets.push_back(horoball(alpha, xi, n));
    const std::vector<Word>& region = sets.back();  // horoballs are nested

    const int replicas = spec.replicas;
    std::vector<double> sups(static_cast<std::size_t>(replicas));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < replicas; ++r) {
        Rng rng = derive_rng(spec.seed, static_cast<std::uint64_t>(r) + 1);
        const Configuration omega = sample_region(spec.model, region, rng);
        double sup = 0.0;
        for (const auto& set : sets)
            sup = std::max(sup, info_value(spec.model, omega.restrict_to(set)) /
                                    static_cast<double>(set.size()));
        sups[static_cast<std::size_t>(r)] = sup;
    }

    const double log_e = std::log(static_cast<double>(spec.model.states.size()));
    MaximalReport report;
    report.spec_echo = spec.to_json();
    report.version = kVersion;
    report.sup_mean = pairwise_sum(sups) / static_cast<double>(replicas);

    // First grid point where e^{r - log|E|} >= 1 + e^{-2 log|E|} e^r; beyond
    // it the union bound sums to e^{2 log|E|} e^{-r}.
    double r0 = 0.0;
    bool found_r0 = false;
    for (double r = spec.r_grid_lo; r <= spec.r_grid_hi + 1e-12; r += spec.r_grid_step) {
        if (std::exp(r - log_e) >= 1.0 + std::exp(-2.0 * log_e) * std::exp(r)) {
            r0 = r;
            found_r0 = true;
            break;
        }
    }
    if (!found_r0) throw std::invalid_argument("run_maximal: grid does not reach the tail regime");
    report.r0 = r0;
    report.bound_constant = r0 + std::exp(2.0 * log_e) * std::exp(-r0);

    for (double r = spec.r_grid_lo; r <= spec.r_grid_hi + 1e-12; r += spec.r_grid_step) {
        int exceed = 0;
        for (double s : sups)
            if (s > r) ++exceed;
        MaximalReport::GridRow row;
        row.r = r;
        row.empirical_tail = static_cast<double>(exceed) / static_cast<double>(replicas);
        row.bound = std::exp(2.0 * log_e) * std::exp(-r);
        row.slack = 3.0 * std::sqrt(row.empirical_tail * (1.0 - row.empirical_tail) /
                                    static_cast<double>(replicas));
        row.violation = r > r0 + 1e-12 && row.empirical_tail > row.bound + row.slack;
        if (row.violation) ++report.violations;
        report.rows.push_back(row);
    }
    report.wall_seconds = clock.seconds();
    return report;
}

void emit_report(const ConvergenceReport& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Csv) {
        out << "mode,n,set_size,replica,value,mean,sd,h_running\n";
        for (const ReplicaValue& row : report.rows) {
            const LevelSummary* level = nullptr;
            for (const LevelSummary& l : report.levels)
                if (l.n == row.n) level = &l;
            out << report.mode << ',' << row.n << ',' << row.set_size << ',' << row.replica << ','
                << format_double(row.value) << ',' << format_double(level->mean) << ','
                << format_double(level->sd) << ',' << format_double(level->h_running) << '\n';
        }
        return;
    }
    nlohmann::json j;
    j["mode"] = report.mode;
    j["spec"] = report.spec_echo;
    j["version"] = report.version;
    j["prefix"] = report.prefix;
    j["conventions"] = {{"folner_tie_break", "minimal-j"}};
    j["levels"] = nlohmann::json::array();
    for (const LevelSummary& l : report.levels)
        j["levels"].push_back({{"n", l.n},
                               {"set_size", l.set_size},
                               {"mean", l.mean},
                               {"sd", l.sd},
                               {"h_running", l.h_running}});
    j["rows"] = nlohmann::json::array();
    for (const ReplicaValue& row : report.rows)
        j["rows"].push_back(
            {{"n", row.n}, {"set_size", row.set_size}, {"replica", row.replica}, {"value", row.value}});
    j["comparison"] = {{"h_horoball", report.h_horoball},
                       {"se_horoball", report.se_horoball},
                       {"h_sphere", report.h_sphere},
                       {"se_sphere", report.se_sphere}};
    out << j.dump(2) << '\n';
}

void emit_report(const PsiReport& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Csv) {
        out << "kind,index,distance,size_u,size_v,psi,bound\n";
        int idx = 1;
        for (const DecayPoint& pt : report.singleton_points)
            out << "singleton," << idx++ << ',' << format_double(pt.dist) << ','
                << format_double(pt.size_u) << ',' << format_double(pt.size_v) << ','
                << format_double(pt.psi) << ",\n";
        for (const auto& pt : report.block_points)
            out << "block," << pt.j << ',' << format_double(pt.dist) << ','
                << format_double(pt.size_u) << ',' << format_double(pt.size_v) << ','
                << format_double(pt.psi) << ',' << format_double(pt.bound) << '\n';
        return;
    }
    nlohmann::json j;
    j["spec"] = report.spec_echo;
    j["version"] = report.version;
    j["conventions"] = {{"folner_tie_break", "minimal-j"}};
    j["trivially_independent"] = report.trivially_independent;
    j["singletons"] = nlohmann::json::array();
    for (const DecayPoint& pt : report.singleton_points)
        j["singletons"].push_back({{"distance", pt.dist}, {"psi", pt.psi}});
    if (report.fit)
        j["fit"] = {{"lambda", report.fit->lambda},
                    {"C", report.fit->prefactor},
                    {"threshold", report.fit->threshold},
                    {"exceeds_threshold", report.fit->exceeds_threshold},
                    {"points_used", report.fit->points_used}};
    j["blocks"] = nlohmann::json::array();
    for (const auto& pt : report.block_points)
        j["blocks"].push_back({{"j", pt.j},
                               {"distance", pt.dist},
                               {"size_u", pt.size_u},
                               {"size_v", pt.size_v},
                               {"psi", pt.psi},
                               {"bound", pt.bound},
                               {"bound_ok", pt.bound_ok}});
    out << j.dump(2) << '\n';
}

void emit_report(const MaximalReport& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Csv) {
        out << "r,empirical_tail,bound,slack,violation\n";
        for (const auto& row : report.rows)
            out << format_double(row.r) << ',' << format_double(row.empirical_tail) << ','
                << format_double(row.bound) << ',' << format_double(row.slack) << ','
                << (row.violation ? 1 : 0) << '\n';
        return;
    }
    nlohmann::json j;
    j["spec"] = report.spec_echo;
    j["version"] = report.version;
    j["r0"] = report.r0;
    j["bound_constant"] = report.bound_constant;
    j["sup_mean"] = report.sup_mean;
    j["violations"] = report.violations;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : report.rows)
        j["rows"].push_back({{"r", row.r},
                             {"empirical_tail", row.empirical_tail},
                             {"bound", row.bound},
                             {"slack", row.slack},
                             {"violation", row.violation}});
    out << j.dump(2) << '\n';
}

namespace {

template <typename Report>
void emit_to_file(const Report& report, ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    emit_report(report, format, out);
}

}  // namespace

void emit_report_file(const ConvergenceReport& report, ReportFormat format, const std::string& path) {
    emit_to_file(report, format, path);
}
void emit_report_file(const PsiReport& report, ReportFormat format, const std::string& path) {
    emit_to_file(report, format, path);
}
void emit_report_file(const MaximalReport& report, ReportFormat format, const std::string& path) {
    emit_to_file(report, format, path);
}

DecompositionCheck decomposition_identity(const ProcessModel& model, const Alphabet& alpha, int n,
                                          const Configuration& config) {
    const auto partition = sphere_partition(alpha, n);
    const double cylinder_mass =
        1.0 / (static_cast<double>(alpha.degree) * static_cast<double>(cyclic_order(alpha.degree, n)));
    const auto sphere_count = static_cast<double>(sphere_size(alpha.degree, 2 * n));

    std::vector<double> weighted;
    std::vector<double> plain;
    for (const auto& [u, block] : partition) {
        const double info = info_value(model, config.restrict_to(block));
        weighted.push_back(cylinder_mass * info / static_cast<double>(block.size()));
        plain.push_back(info);
    }
    DecompositionCheck check;
    check.boundary_average = pairwise_sum(weighted);
    check.block_average = pairwise_sum(plain) / sphere_count;
    check.gap = std::abs(check.boundary_average - check.block_average);
    return check;
}

double normalized_block_gap(const ProcessModel& model, const Alphabet& alpha, int n,
                            const Configuration& config) {
    const auto partition = sphere_partition(alpha, n);
    std::vector<double> block_infos;
    for (const auto& [u, block] : partition)
        block_infos.push_back(info_value(model, config.restrict_to(block)));
    const auto full_sphere = sphere(alpha, 2 * n);
    const double sphere_info = info_value(model, config.restrict_to(full_sphere));
    return std::abs(pairwise_sum(block_infos) - sphere_info) /
           static_cast<double>(sphere_size(alpha.degree, 2 * n));
}

}  // namespace treq
