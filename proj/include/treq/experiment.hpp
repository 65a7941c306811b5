#pragma once

// Experiment runner: draws configurations of a tree process and tracks the
// normalized information value I(F)/|F| along growing set sequences (metric
// spheres of even radius, horospherical balls and spheres, and the
// distinguished coset blocks), plus dependence-decay fits and the maximal
// tail bound. Replicas use seeds derived from (spec seed, replica index), so
// parallel and serial runs emit identical reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "treq/boundary.hpp"
#include "treq/process.hpp"
#include "treq/words.hpp"

namespace treq {

inline constexpr const char* kVersion = "0.1.0";

enum class Mode { MetricSpheres, Horoball, Horoshell, FolnerF };
enum class ReportFormat { Csv, Json };

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct ExperimentSpec {
    ProcessModel model;
    Mode mode = Mode::MetricSpheres;
    int degree = 3;
    int n_lo = 1;
    int n_hi = 4;
    int replicas = 100;
    std::uint64_t seed = 1;
    std::string prefix_source = "patterson-sullivan";  // or an explicit letter string
    std::string out_path;
    ReportFormat format = ReportFormat::Csv;

    // psi-decay options
    int psi_max_distance = 6;
    int psi_block_level = 1;

    // maximal-inequality options
    int maximal_n_max = 3;
    double r_grid_lo = 0.1;
    double r_grid_hi = 8.0;
    double r_grid_step = 0.1;

    static ExperimentSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ReplicaValue {
    int n;
    std::int64_t set_size;
    int replica;
    double value;  // I(F_n)/|F_n| for this replica's configuration
};

struct LevelSummary {
    int n;
    std::int64_t set_size;
    double mean;
    double sd;         // sample standard deviation across replicas
    double h_running;  // entropy-rate estimate using data up to this level
};

struct ConvergenceReport {
    std::string mode;
    nlohmann::json spec_echo;
    std::string version;
    std::string prefix;  // resolved boundary prefix
    std::vector<ReplicaValue> rows;
    std::vector<LevelSummary> levels;

    // Cross-estimator comparison at the largest level, on the same replicas.
    double h_horoball = 0.0;
    double se_horoball = 0.0;
    double h_sphere = 0.0;
    double se_sphere = 0.0;

    double wall_seconds = 0.0;  // never serialized (reports are reproducible)

    double h_estimate() const { return levels.empty() ? 0.0 : levels.back().mean; }
    double h_standard_error(int replicas) const;
};

ConvergenceReport run_smb(const ExperimentSpec& spec);

struct PsiReport {
    nlohmann::json spec_echo;
    std::string version;
    bool trivially_independent = false;  // every coefficient vanished (product law)
    std::vector<DecayPoint> singleton_points;
    std::optional<DecayFit> fit;
    struct BlockPoint {
        int j;
        double dist;
        double size_u;
        double size_v;
        double psi;
        double bound;  // C |U||V| e^{-lambda d} from the fitted constants
        bool bound_ok;
    };
    std::vector<BlockPoint> block_points;
    double wall_seconds = 0.0;
};

PsiReport run_psi_decay(const ExperimentSpec& spec);

struct MaximalReport {
    nlohmann::json spec_echo;
    std::string version;
    double r0 = 0.0;          // first grid point where the tail bound kicks in
    double bound_constant = 0.0;  // r0 + e^{2 log|E|} e^{-r0}
    double sup_mean = 0.0;        // Monte Carlo estimate of the integrated supremum
    struct GridRow {
        double r;
        double empirical_tail;
        double bound;
        double slack;  // 3 sigma Monte Carlo allowance
        bool violation;
    };
    std::vector<GridRow> rows;
    int violations = 0;
    double wall_seconds = 0.0;

    bool pass() const { return violations == 0; }
};

MaximalReport run_maximal(const ExperimentSpec& spec);

// Deterministic column order; equal seeds give byte-identical files.
void emit_report(const ConvergenceReport& report, ReportFormat format, std::ostream& out);
void emit_report(const PsiReport& report, ReportFormat format, std::ostream& out);
void emit_report(const MaximalReport& report, ReportFormat format, std::ostream& out);
void emit_report_file(const ConvergenceReport& report, ReportFormat format, const std::string& path);
void emit_report_file(const PsiReport& report, ReportFormat format, const std::string& path);
void emit_report_file(const MaximalReport& report, ReportFormat format, const std::string& path);

// Exact boundary average of the normalized block information against the
// plain block average: the two sums agree whenever the cylinder weights, the
// block sizes and the sphere cardinality cohere.
struct DecompositionCheck {
    double boundary_average;  // sum over depth-(n+1) cylinders, weights d^-1 (d-1)^-n
    double block_average;     // |S_2n|^{-1} sum of block informations
    double gap;
};
DecompositionCheck decomposition_identity(const ProcessModel& model, const Alphabet& alpha, int n,
                                          const Configuration& config);

// |S_2n|^{-1} | I(S_2n) - sum_j I(block_j) | for one configuration.
double normalized_block_gap(const ProcessModel& model, const Alphabet& alpha, int n,
                            const Configuration& config);

}  // namespace treq
