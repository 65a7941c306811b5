// Command-line front end: experiment runs, dependence-decay fits, the maximal
// tail check, partition export, and the exhaustive verification suites.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "treq/experiment.hpp"
#include "treq/suites.hpp"

namespace {

treq::ExperimentSpec load_spec(const std::string& path, std::optional<std::uint64_t> seed,
                               const std::optional<std::string>& out,
                               const std::optional<std::string>& format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    nlohmann::json j;
    in >> j;
    treq::ExperimentSpec spec = treq::ExperimentSpec::from_json(j);
    if (seed) spec.seed = *seed;
    if (out) spec.out_path = *out;
    if (format) {
        if (*format == "csv") spec.format = treq::ReportFormat::Csv;
        else if (*format == "json") spec.format = treq::ReportFormat::Json;
        else throw std::runtime_error("format must be csv or json");
    }
    return spec;
}

template <typename Report>
void deliver(const Report& report, const treq::ExperimentSpec& spec) {
    if (spec.out_path.empty()) {
        treq::emit_report(report, spec.format, std::cout);
    } else {
        treq::emit_report_file(report, spec.format, spec.out_path);
        std::cerr << "report written to " << spec.out_path << "\n";
    }
}

int print_results(const std::vector<treq::CheckResult>& results) {
    for (const auto& r : results)
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
                  << (r.detail.empty() ? "" : "  (" + r.detail + ")") << "\n";
    return treq::all_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy equipartition experiments on regular trees"};
    app.require_subcommand(1);

    std::string spec_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
    std::optional<std::string> format_override;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--spec", spec_path, "experiment spec (JSON)")->required();
        cmd->add_option("--seed", seed_override, "override the spec seed");
        cmd->add_option("--out", out_override, "override the output path");
        cmd->add_option("--format", format_override, "override the output format (csv|json)");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "normalized information along growing sets");
    add_common(run_cmd);
    CLI::App* psi_cmd = app.add_subcommand("psi", "dependence coefficients and decay fit");
    add_common(psi_cmd);
    CLI::App* maximal_cmd = app.add_subcommand("maximal", "tail bound for the running supremum");
    add_common(maximal_cmd);

    std::string suite_name;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run an exhaustive invariant suite");
    verify_cmd->add_option("--suite", suite_name, "group|partition|automorphism|process")
        ->required()
        ->check(CLI::IsMember({"group", "partition", "automorphism", "process"}));

    int partition_d = 3;
    int partition_n = 1;
    std::string partition_out;
    CLI::App* partition_cmd = app.add_subcommand("partition", "export the coset blocks of an even sphere");
    partition_cmd->add_option("--d", partition_d, "tree degree")->required();
    partition_cmd->add_option("--n", partition_n, "level (blocks cover the sphere of radius 2n)")
        ->required();
    partition_cmd->add_option("--out", partition_out, "output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto spec = load_spec(spec_path, seed_override, out_override, format_override);
            const auto report = treq::run_smb(spec);
            deliver(report, spec);
            std::cerr << "h(" << report.mode << ", n=" << spec.n_hi << ") = "
                      << report.h_estimate() << " +- " << report.h_standard_error(spec.replicas)
                      << "; horoball " << report.h_horoball << " +- " << report.se_horoball
                      << " vs spheres " << report.h_sphere << " +- " << report.se_sphere << "\n";
            return 0;
        }
        if (psi_cmd->parsed()) {
            const auto spec = load_spec(spec_path, seed_override, out_override, format_override);
            const auto report = treq::run_psi_decay(spec);
            deliver(report, spec);
            if (report.trivially_independent) {
                std::cerr << "all coefficients vanish (product law); no decay fit\n";
            } else {
                std::cerr << "lambda = " << report.fit->lambda << ", C = " << report.fit->prefactor
                          << ", threshold 2log(d-1) = " << report.fit->threshold << " => "
                          << (report.fit->exceeds_threshold ? "exceeded" : "not exceeded") << "\n";
            }
            return 0;
        }
        if (maximal_cmd->parsed()) {
            const auto spec = load_spec(spec_path, seed_override, out_override, format_override);
            const auto report = treq::run_maximal(spec);
            deliver(report, spec);
            std::cerr << "r0 = " << report.r0 << ", integral estimate " << report.sup_mean
                      << " vs constant " << report.bound_constant << ", violations "
                      << report.violations << "\n";
            return report.pass() ? 0 : 1;
        }
        if (verify_cmd->parsed()) {
            if (suite_name == "group") return print_results(treq::group_suite());
            if (suite_name == "partition") return print_results(treq::partition_suite());
            if (suite_name == "automorphism") return print_results(treq::automorphism_suite());
            return print_results(treq::process_suite());
        }
        if (partition_cmd->parsed()) {
            const treq::Alphabet alpha(partition_d);
            nlohmann::json j = nlohmann::json::object();
            for (const auto& [u, block] : treq::sphere_partition(alpha, partition_n)) {
                nlohmann::json sites = nlohmann::json::array();
                for (const auto& s : block) sites.push_back(s.str());
                j[u.str()] = sites;
            }
            if (partition_out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                std::ofstream out(partition_out, std::ios::binary);
                if (!out) throw std::runtime_error("cannot open output file: " + partition_out);
                out << j.dump(2) << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
