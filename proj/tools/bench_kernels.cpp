// Timings for the data-parallel kernels against their serial reference
// paths, plus a bit-identity cross-check. Build with OpenMP to see speedups;
// without it both columns run the same code.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "treq/boundary.hpp"
#include "treq/experiment.hpp"
#include "treq/process.hpp"
#include "treq/words.hpp"

namespace {

double time_once(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void row(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-34s %10.3f ms %10.3f ms %8.2fx   %s\n", name, serial * 1e3, parallel * 1e3,
                parallel > 0 ? serial / parallel : 0.0, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%-34s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    const treq::Alphabet alpha(3);
    const treq::ProcessModel ising = treq::build_ising(3, 0.2);

    {
        const auto region = treq::ball(alpha, 3);  // 2^22 atoms
        std::vector<treq::Word> sites(region.begin(), region.begin() + 16);
        double serial_value = 0.0;
        double parallel_value = 0.0;
        const double ts = time_once([&] {
            serial_value = treq::entropy_exact(ising, sites, treq::Exec::Serial, 1 << 20);
        });
        const double tp = time_once([&] {
            parallel_value = treq::entropy_exact(ising, sites, treq::Exec::Parallel, 1 << 20);
        });
        row("entropy_exact (16 sites)", ts, tp, serial_value == parallel_value);
    }

    {
        const auto s4 = treq::sphere(alpha, 4);
        const std::vector<treq::Word> u(s4.begin(), s4.begin() + 9);
        const std::vector<treq::Word> v(s4.end() - 9, s4.end());
        double serial_value = 0.0;
        double parallel_value = 0.0;
        const double ts = time_once(
            [&] { serial_value = treq::psi_coeff(ising, u, v, treq::Exec::Serial); });
        const double tp = time_once(
            [&] { parallel_value = treq::psi_coeff(ising, u, v, treq::Exec::Parallel); });
        row("psi_coeff (9+9 sites)", ts, tp, serial_value == parallel_value);
    }

    {
        treq::ExperimentSpec spec;
        spec.model = ising;
        spec.mode = treq::Mode::MetricSpheres;
        spec.degree = 3;
        spec.n_lo = 1;
        spec.n_hi = 4;
        spec.replicas = 2000;
        spec.seed = 99;
        spec.prefix_source = "121212";

        // The replica loop parallelizes through OpenMP directly; compare one
        // thread against all threads.
        treq::ConvergenceReport serial_report;
        treq::ConvergenceReport parallel_report;
#ifdef _OPENMP
        const int max_threads = omp_get_max_threads();
        omp_set_num_threads(1);
        const double ts = time_once([&] { serial_report = treq::run_smb(spec); });
        omp_set_num_threads(max_threads);
        const double tp = time_once([&] { parallel_report = treq::run_smb(spec); });
#else
        const double ts = time_once([&] { serial_report = treq::run_smb(spec); });
        const double tp = time_once([&] { parallel_report = treq::run_smb(spec); });
#endif
        bool identical = serial_report.rows.size() == parallel_report.rows.size();
        for (std::size_t i = 0; identical && i < serial_report.rows.size(); ++i)
            identical = serial_report.rows[i].value == parallel_report.rows[i].value;
        row("run_smb replicas (2000)", ts, tp, identical);
    }
    return 0;
}
