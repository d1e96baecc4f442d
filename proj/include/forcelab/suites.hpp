#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forcelab/twostep.hpp"

namespace forcelab {

inline constexpr std::uint64_t default_suite_seed = 20260822;

// Bound flags shared by the named suites.  An explicit poset list replaces
// a suite's default corpus and yields one report per target.
struct suite_options {
    run_mode mode = run_mode::serial;
    int max_rank = 2;
    int max_depth = 3;
    int max_poset = 7;
    std::uint64_t seed = default_suite_seed;
    std::vector<poset> posets;
};

// Axioms and derived laws of the regular-open completion of one poset:
// exhaustive element scans while the carrier is small, seeded samples past
// that.
suite_report verify_algebra_laws(const poset& p, run_mode mode = run_mode::serial,
                                 std::uint64_t seed = default_suite_seed);

// Congruence inequalities of the atomic Boolean values over every name
// triple of bounded rank, plus reflexivity, symmetry, entry bounds, and
// pairwise membership transport.
suite_report verify_bvm_laws(const poset& p, int max_rank = 2,
                             run_mode mode = run_mode::serial);

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& id);

// Runs one named suite.  Default corpora match the acceptance bounds; the
// reports never mention the run mode, so both modes emit identical bytes.
std::vector<suite_report> run_suite(const std::string& id, const suite_options& opt);

}  // namespace forcelab
