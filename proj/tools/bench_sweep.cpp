// Compares the serial reference sweep against the OpenMP fan-out and checks
// that both produce identical reports.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qmt/oracle.hpp"

namespace {

double run_timed(const qmt::SweepPlan& plan, std::string& report_json) {
    const auto t0 = std::chrono::steady_clock::now();
    const qmt::SweepReport report = qmt::run_sweep(plan);
    const auto t1 = std::chrono::steady_clock::now();
    report_json = report.to_json().dump();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int count = 2000;
    std::uint64_t seed = 7;
    if (argc > 1) count = std::atoi(argv[1]);
    if (argc > 2) seed = std::strtoull(argv[2], nullptr, 10);

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%-14s %8s %10s %10s %8s %6s\n", "property", "count", "serial_s", "parallel_s",
                "speedup", "match");

    int mismatches = 0;
    for (qmt::PropertyId property :
         {qmt::PropertyId::prop42, qmt::PropertyId::thm45, qmt::PropertyId::thm41_gate}) {
        qmt::SweepPlan plan;
        plan.property = property;
        plan.count = count;
        plan.seed = seed;
        plan.sizes = {4, 5, 6};

        plan.mode = qmt::ExecutionMode::serial;
        std::string serial_report;
        const double serial_s = run_timed(plan, serial_report);

        plan.mode = qmt::ExecutionMode::parallel;
        std::string parallel_report;
        const double parallel_s = run_timed(plan, parallel_report);

        const bool match = serial_report == parallel_report;
        mismatches += match ? 0 : 1;
        std::printf("%-14s %8d %10.3f %10.3f %7.2fx %6s\n", qmt::to_string(property), count,
                    serial_s, parallel_s, serial_s / parallel_s, match ? "yes" : "NO");
    }
    return mismatches == 0 ? 0 : 1;
}
