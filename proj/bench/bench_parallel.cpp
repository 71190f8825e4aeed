#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "hyplab/parallel.hpp"
#include "hyplab/radial.hpp"
#include "hyplab/submanifold.hpp"
#include "hyplab/upper_bound.hpp"

// Times the parallel kernels against their serial reference paths and checks
// that both produce bitwise-identical results.
namespace {

using hyplab::ExecMode;

double time_ms(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

struct BenchCase {
    const char* name;
    std::function<double(ExecMode)> run;  // returns a scalar digest
};

}  // namespace

int main() {
    std::vector<BenchCase> cases;

    cases.push_back({"upper-bound iterated limit (n=2, p=2, s=0.75)", [](ExecMode mode) {
                         const hyplab::RayleighParams rp(2, 2.0, 0.75);
                         return hyplab::iterated_limit(rp, mode).value;
                     }});

    cases.push_back({"ball eigenvalue scan (n=2, p=2, 6 radii, mesh 800)", [](ExecMode mode) {
                         const std::vector<double> radii{1.0, 2.0, 3.0, 4.0, 6.0, 8.0};
                         const auto res = hyplab::monotonicity_scan(2, 2.0, 1.0, radii, 800, mode);
                         double digest = 0.0;
                         for (const auto& r : res) digest += r.lambda;
                         return digest;
                     }});

    cases.push_back({"equidistant boundary angles (dim 2, j<=12)", [](ExecMode mode) {
                         const auto entry = hyplab::make_catalog_entry(
                             hyplab::CatalogKind::equidistant, 2, 3, 0.4);
                         const auto path =
                             hyplab::catalog_boundary_path(entry, {1.0, 0.5}, 3, 12);
                         return hyplab::boundary_angles(entry.immersion, path,
                                                        hyplab::DefiningFunctionKind::r2, mode)
                             .p_norm_sq_limit;
                     }});

    std::printf("threads available: %d\n\n", hyplab::hardware_threads());
    std::printf("%-55s %12s %12s %9s %s\n", "case", "serial ms", "parallel ms", "speedup",
                "identical");
    bool all_identical = true;
    for (const auto& c : cases) {
        double serial_value = 0.0, parallel_value = 0.0;
        const double ts = time_ms([&] { serial_value = c.run(ExecMode::serial); });
        const double tp = time_ms([&] { parallel_value = c.run(ExecMode::parallel); });
        const bool same = serial_value == parallel_value;
        all_identical = all_identical && same;
        std::printf("%-55s %12.1f %12.1f %8.2fx %s\n", c.name, ts, tp, ts / tp,
                    same ? "yes" : "NO");
    }
    if (!all_identical) {
        std::printf("\nserial and parallel results disagree\n");
        return 1;
    }
    return 0;
}
