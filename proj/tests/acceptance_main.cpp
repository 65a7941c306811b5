// Acceptance suite: nine criteria, one pass/fail line each, nonzero exit on
// any failure. Exact combinatorial reproduction where the mathematics is
// exact, statistical bands where the check is Monte Carlo.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "treq/automorphism.hpp"
#include "treq/boundary.hpp"
#include "treq/experiment.hpp"
#include "treq/numeric.hpp"
#include "treq/process.hpp"
#include "treq/suites.hpp"
#include "treq/words.hpp"

using namespace treq;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

bool run_suite_criterion(const std::vector<CheckResult>& results, std::string& detail) {
    for (const CheckResult& r : results)
        if (!r.pass) {
            detail = "failed: " + r.name;
            return false;
        }
    detail = std::to_string(results.size()) + " checks";
    return true;
}

// --- criterion 4 -----------------------------------------------------------

std::vector<Word> random_region(const Alphabet& alpha, Rng& rng, int max_sites, int max_interior,
                                int states) {
    const auto pool = ball(alpha, 3);
    while (true) {
        std::vector<Word> region;
        for (const Word& s : pool)
            if (rng.next_unit() < 0.4 && static_cast<int>(region.size()) < max_sites)
                region.push_back(s);
        if (region.empty()) continue;
        std::set<Word> nodes;
        nodes.insert(Word());
        for (const Word& s : region)
            for (int len = 1; len <= s.length(); ++len) nodes.insert(s.prefix(len));
        const int interior = static_cast<int>(nodes.size() - region.size());
        if (interior > max_interior) continue;
        double atoms = 1.0;
        for (int i = 0; i < interior; ++i) atoms *= states;
        if (atoms > static_cast<double>(std::int64_t{1} << 19)) continue;
        return region;
    }
}

bool criterion_oracle_equivalence(std::string& detail) {
    const Alphabet alpha(3);
    const std::vector<ProcessModel> models = {
        build_ising(3, 0.2), build_ising(3, 0.7), build_potts(3, 3, 1.0),
        build_iid(3, StateSpace{{"a", "b"}}, {0.3, 0.7}),
        build_iid(3, StateSpace{{"H", "T"}}, {0.5, 0.5})};

    Rng rng(424242);
    int worst_trial = -1;
    double worst_gap = 0.0;
    std::vector<int> interiors;
    for (int trial = 0; trial < 200; ++trial) {
        const ProcessModel& model = models[static_cast<std::size_t>(trial) % models.size()];
        const int max_interior = model.states.size() == 2 ? 12 : 11;
        const auto region = random_region(alpha, rng, 12, max_interior, model.states.size());

        Configuration omega = sample_region(model, region, rng);
        if (trial % 2 == 1) {
            // Uniform random atom, to hit improbable configurations too.
            std::vector<std::pair<Word, int>> values;
            for (const Word& s : region) values.emplace_back(s, rng.next_int(model.states.size()));
            omega = Configuration(std::move(values));
        }
        const double exact = exact_region_log_prob(model, omega);
        const double brute = std::log(oracle::brute_region_prob(model, omega));
        const double gap = std::abs(exact - brute) / std::max(1.0, std::abs(brute));
        if (gap > worst_gap) {
            worst_gap = gap;
            worst_trial = trial;
        }
    }
    if (worst_gap > 1e-10) {
        detail = "log-prob mismatch " + std::to_string(worst_gap) + " at trial " +
                 std::to_string(worst_trial);
        return false;
    }

    double worst_psi_gap = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const ProcessModel& model = models[static_cast<std::size_t>(trial) % 3];  // kernels only
        std::vector<Word> u_region;
        std::vector<Word> v_region;
        for (const Word& s : ball(alpha, 2)) {
            const double roll = rng.next_unit();
            if (roll < 0.25 && u_region.size() < 4)
                u_region.push_back(s);
            else if (roll < 0.5 && v_region.size() < 4)
                v_region.push_back(s);
        }
        if (u_region.empty() || v_region.empty() || u_region.size() + v_region.size() > 8) continue;
        const double fast = psi_coeff(model, u_region, v_region);
        const double brute = oracle::brute_psi(model, u_region, v_region);
        worst_psi_gap = std::max(worst_psi_gap, std::abs(fast - brute));
    }
    if (worst_psi_gap > 1e-10) {
        detail = "psi mismatch " + std::to_string(worst_psi_gap);
        return false;
    }
    detail = "200 log-prob + 20 psi comparisons, worst gaps " + std::to_string(worst_gap) + " / " +
             std::to_string(worst_psi_gap);
    return true;
}

// --- criterion 5 -----------------------------------------------------------

bool criterion_psi_decay(std::string& detail) {
    ExperimentSpec spec;
    spec.model = build_ising(3, 0.2);
    spec.degree = 3;
    spec.psi_max_distance = 6;
    spec.psi_block_level = 1;
    spec.prefix_source = "1212121";
    const PsiReport report = run_psi_decay(spec);
    if (!report.fit) {
        detail = "no fit produced";
        return false;
    }
    const double expected = -std::log(std::tanh(0.2));
    const double gap = std::abs(report.fit->lambda - expected);
    detail = "lambda " + std::to_string(report.fit->lambda) + " vs " + std::to_string(expected) +
             ", threshold " + std::to_string(report.fit->threshold);
    return gap < 1e-3 && report.fit->exceeds_threshold;
}

// --- criterion 6 -----------------------------------------------------------

bool criterion_smb_iid(std::string& detail) {
    for (const Mode mode : {Mode::MetricSpheres, Mode::Horoball, Mode::Horoshell, Mode::FolnerF}) {
        ExperimentSpec spec;
        spec.model = build_iid(3, StateSpace{{"H", "T"}}, {0.5, 0.5});
        spec.mode = mode;
        spec.degree = 3;
        spec.n_lo = 1;
        spec.n_hi = 4;
        spec.replicas = 25;
        spec.seed = 61;
        spec.prefix_source = "patterson-sullivan";
        const ConvergenceReport report = run_smb(spec);
        for (const ReplicaValue& row : report.rows)
            if (row.value != std::log(2.0)) {
                detail = "fair coin not exact in mode " + mode_name(mode);
                return false;
            }
    }

    ExperimentSpec spec;
    spec.model = build_iid(3, StateSpace{{"a", "b"}}, {0.3, 0.7});
    spec.mode = Mode::MetricSpheres;
    spec.degree = 3;
    spec.n_lo = 2;
    spec.n_hi = 4;
    spec.replicas = 200;
    spec.seed = 62;
    spec.prefix_source = "patterson-sullivan";
    const double h = -(0.3 * std::log(0.3) + 0.7 * std::log(0.7));
    const ConvergenceReport report = run_smb(spec);
    for (const LevelSummary& level : report.levels) {
        const double se = level.sd / std::sqrt(static_cast<double>(spec.replicas));
        if (std::abs(level.mean - h) >= 3 * se) {
            detail = "biased mean off at n=" + std::to_string(level.n);
            return false;
        }
    }
    detail = "fair exact in 4 modes; biased within 3 SE of " + std::to_string(h);
    return true;
}

// --- criterion 7 -----------------------------------------------------------

bool criterion_smb_trend(std::string& detail) {
    ExperimentSpec spec;
    spec.model = build_ising(3, 0.2);
    spec.mode = Mode::MetricSpheres;
    spec.degree = 3;
    spec.n_lo = 2;
    spec.n_hi = 4;
    spec.replicas = 400;
    spec.seed = 71;
    spec.prefix_source = "patterson-sullivan";
    const ConvergenceReport report = run_smb(spec);
    for (std::size_t i = 1; i < report.levels.size(); ++i)
        if (!(report.levels[i].sd < report.levels[i - 1].sd)) {
            detail = "sd not monotone at n=" + std::to_string(report.levels[i].n);
            return false;
        }
    const double diff = std::abs(report.h_horoball - report.h_sphere);
    const double combined =
        std::sqrt(report.se_horoball * report.se_horoball + report.se_sphere * report.se_sphere);
    detail = "sd " + std::to_string(report.levels[0].sd) + " > " +
             std::to_string(report.levels[1].sd) + " > " + std::to_string(report.levels[2].sd) +
             "; |h_ball - h_sphere| = " + std::to_string(diff) + " vs 3 sigma " +
             std::to_string(3 * combined);
    return diff < 3 * combined;
}

// --- criterion 8 -----------------------------------------------------------

bool criterion_decomposition(std::string& detail) {
    const Alphabet alpha(3);
    const ProcessModel model = build_ising(3, 0.2);

    // Fitted decay constants drive the bound.
    ExperimentSpec psi_spec;
    psi_spec.model = model;
    psi_spec.degree = 3;
    psi_spec.psi_max_distance = 6;
    psi_spec.prefix_source = "1212121";
    const PsiReport psi_report = run_psi_decay(psi_spec);
    if (!psi_report.fit) {
        detail = "no decay fit";
        return false;
    }
    const double lambda = psi_report.fit->lambda;
    const double c_fit = psi_report.fit->prefactor;
    const double epsilon = lambda / (2.0 * std::log(2.0)) - 1.0;
    const double c0 = c_fit * 9.0 / 4.0;  // C d^2 (d-1)^{-2} at d=3

    Rng rng(81);
    double worst_identity_gap = 0.0;
    double worst_margin = 1e9;
    for (int n = 1; n <= 3; ++n) {
        const double bound = std::log1p(c0 * std::pow(2.0, -2.0 * epsilon * n));
        const auto region = sphere(alpha, 2 * n);
        for (int rep = 0; rep < 25; ++rep) {
            const Configuration omega = sample_region(model, region, rng);
            const DecompositionCheck check = decomposition_identity(model, alpha, n, omega);
            worst_identity_gap = std::max(worst_identity_gap, check.gap);
            if (check.gap > 1e-12) {
                detail = "identity gap " + std::to_string(check.gap) + " at n=" + std::to_string(n);
                return false;
            }
            const double gap = normalized_block_gap(model, alpha, n, omega);
            worst_margin = std::min(worst_margin, bound - gap);
            if (gap > bound) {
                detail = "normalized gap " + std::to_string(gap) + " exceeds bound " +
                         std::to_string(bound) + " at n=" + std::to_string(n);
                return false;
            }
        }
    }
    detail = "identity gap <= " + std::to_string(worst_identity_gap) + ", min bound margin " +
             std::to_string(worst_margin);
    return true;
}

// --- criterion 9 -----------------------------------------------------------

bool criterion_maximal(std::string& detail) {
    ExperimentSpec spec;
    spec.model = build_ising(3, 0.2);
    spec.degree = 3;
    spec.replicas = 10000;
    spec.seed = 91;
    spec.prefix_source = "patterson-sullivan";
    spec.maximal_n_max = 3;
    const MaximalReport report = run_maximal(spec);
    detail = "r0 = " + std::to_string(report.r0) + ", sup mean " + std::to_string(report.sup_mean) +
             " vs constant " + std::to_string(report.bound_constant) + ", violations " +
             std::to_string(report.violations);
    return report.pass() && report.sup_mean < report.bound_constant;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "group structure", [](std::string& d) { return run_suite_criterion(group_suite(), d); }},
        {2, "coset partition of even spheres",
         [](std::string& d) { return run_suite_criterion(partition_suite(), d); }},
        {3, "automorphism constructions",
         [](std::string& d) { return run_suite_criterion(automorphism_suite(), d); }},
        {4, "oracle equivalence", criterion_oracle_equivalence},
        {5, "psi decay reproduction", criterion_psi_decay},
        {6, "iid equipartition exactness", criterion_smb_iid},
        {7, "equipartition convergence trend", criterion_smb_trend},
        {8, "telescoping decomposition", criterion_decomposition},
        {9, "maximal tail bound", criterion_maximal},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", pass ? "PASS" : "FAIL", criterion.id,
                    criterion.name.c_str(), seconds, detail.empty() ? "" : " -- ",
                    detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
