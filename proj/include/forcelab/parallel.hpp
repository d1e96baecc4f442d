#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace forcelab {

// Suite kernels and subset scans run either as a plain loop (the reference
// path) or as an OpenMP loop.  Results are always written to a slot indexed
// by the instance, so output order is identical for both modes.
enum class run_mode { serial, parallel };

inline run_mode parse_run_mode(const std::string& s) {
    return s == "parallel" ? run_mode::parallel : run_mode::serial;
}

inline const char* run_mode_label(run_mode m) {
    return m == run_mode::parallel ? "parallel" : "serial";
}

// f(i) must only touch state owned by instance i.
template <class F>
void for_each_index(std::int64_t n, run_mode mode, F&& f) {
    if (mode == run_mode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < n; ++i) f(i);
        return;
#endif
    }
    for (std::int64_t i = 0; i < n; ++i) f(i);
}

inline double wall_seconds() {
    return static_cast<double>(std::chrono::duration_cast<std::chrono::microseconds>(
                                   std::chrono::steady_clock::now().time_since_epoch())
                                   .count()) /
           1e6;
}

}  // namespace forcelab
