#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "forcelab/corpus.hpp"
#include "forcelab/forcing.hpp"
#include "forcelab/suites.hpp"

using namespace forcelab;

namespace {

// Times one suite kernel in both modes and checks the reports agree byte
// for byte.  Timings stay here; reports never carry them.
struct bench_case {
    std::string label;
    std::function<suite_report(run_mode)> kernel;
};

int threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace

int main() {
    std::vector<bench_case> cases;
    cases.push_back({"algebra-laws antichain4_top", [](run_mode m) {
                         return verify_algebra_laws(named_poset("antichain4_top"), m);
                     }});
    cases.push_back({"bvm-laws cohen2", [](run_mode m) {
                         return verify_bvm_laws(named_poset("cohen2"), 2, m);
                     }});
    cases.push_back({"delta0 cohen2", [](run_mode m) {
                         return verify_delta0_satisfaction(named_poset("cohen2"), 2, 2, m);
                     }});
    cases.push_back({"forcing-theorem cohen2", [](run_mode m) {
                         forcing_context ctx(named_poset("cohen2"), m);
                         return verify_forcing_theorem(ctx, 2, 3, m);
                     }});
    cases.push_back({"forcing-facts cohen1", [](run_mode m) {
                         forcing_context ctx(named_poset("cohen1"), m);
                         return verify_forcing_facts(ctx, 2, 3, m);
                     }});
    cases.push_back({"twostep cohen1", [](run_mode m) {
                         return verify_twostep(named_poset("cohen1"), m);
                     }});

    std::printf("threads: %d\n", threads());
    std::printf("%-30s %10s %10s %8s %10s\n", "kernel", "serial", "parallel", "speedup",
                "identical");
    bool ok = true;
    for (const bench_case& c : cases) {
        const double t0 = wall_seconds();
        const suite_report serial = c.kernel(run_mode::serial);
        const double t1 = wall_seconds();
        const suite_report parallel = c.kernel(run_mode::parallel);
        const double t2 = wall_seconds();
        const bool same = serial.to_text() == parallel.to_text();
        ok = ok && same && serial.pass && parallel.pass;
        std::printf("%-30s %9.3fs %9.3fs %7.2fx %10s\n", c.label.c_str(), t1 - t0, t2 - t1,
                    (t2 - t1) > 0 ? (t1 - t0) / (t2 - t1) : 0.0, same ? "yes" : "NO");
    }
    if (!ok) std::printf("mode disagreement or failing suite detected\n");
    return ok ? 0 : 1;
}
