#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "forcelab/semantics.hpp"

namespace forcelab {

// Everything needed to force over one preorder: the completion, a name pool
// over it, memoized Boolean values, and the hereditarily finite sets that
// valuations land in.  Holds internal references, so it is pinned in place.
struct forcing_context {
    explicit forcing_context(poset p, run_mode mode = run_mode::serial);
    forcing_context(const forcing_context&) = delete;
    forcing_context& operator=(const forcing_context&) = delete;

    regular_open_algebra alg;
    name_pool names;
    eval_context ev;
    hf_pool hf;

    const poset& base() const { return alg.base(); }
    int require_condition(int p) const;  // throws unknown_element_error
};

// The forcing relation by the completion route: e(p) <= [phi].  A memo miss
// recomputes into call-local state, so const contexts are safe to share.
bool forces(const forcing_context& ctx, int p, const formula& f);
bool forces(const forcing_context& ctx, int p, const formula& f, std::vector<name_id>& env);

// The forcing relation by the definitional recursion: atomics via the
// completion, negation via no-extension-forces, the other connectives and
// bounded quantifiers unfolded through their density clauses.
bool forces_by_recursion(const forcing_context& ctx, int p, const formula& f);

// Valuation of names by one generic filter: i_G(tau) collects i_G(sigma)
// for the entries whose value meets the filter.  Results are interned into
// the context's hf pool, so computing values mutates shared state; after
// ensure() the const lookup at() serves parallel readers.
class valuation {
public:
    valuation(forcing_context& ctx, cond_mask generic);  // throws not_generic_error

    cond_mask generic() const { return generic_; }
    hf_id value(name_id tau);
    hf_id at(name_id tau) const;  // throws unknown_reference_error if not computed
    void ensure(const std::vector<name_id>& names);

private:
    forcing_context* ctx_;
    cond_mask generic_;
    std::unordered_map<name_id, hf_id> memo_;
};

hf_id valuate(forcing_context& ctx, cond_mask generic, name_id tau);

// Tarskian truth over the hereditarily finite sets; constants are looked up
// through the valuation, bounded quantifiers range over actual members.
bool hf_eval(const hf_pool& hf, const formula& f, const valuation& val,
             std::vector<hf_id>& env);

// Copy a name between pools, relabeling values through the algebra map j
// (indexed by source algebra element).  Entries map entrywise; results are
// interned in the target pool.
class name_transport {
public:
    name_transport(const name_pool& from, name_pool& to, std::vector<ba_elem> j);
    name_id apply(name_id tau);

private:
    const name_pool* from_;
    name_pool* to_;
    std::vector<ba_elem> j_;
    std::map<name_id, name_id> memo_;
};

// Corpus cap for the forcing suites; small enough that the sweep over every
// preorder stays inside its runtime budget.
inline constexpr std::int64_t default_forcing_cap = 50'000;

// For every generic filter and corpus formula: truth in the valuated
// extension iff some condition of the filter forces the formula.
suite_report verify_forcing_theorem(forcing_context& ctx, int max_rank, int max_depth,
                                    run_mode mode = run_mode::serial,
                                    std::uint64_t seed = 20260822,
                                    std::int64_t exhaustive_cap = default_forcing_cap,
                                    std::int64_t samples = formula_corpus::default_samples);

// The seven forcing-relation facts over the corpus, plus agreement of the
// completion route and the definitional recursion on every (p, formula).
suite_report verify_forcing_facts(forcing_context& ctx, int max_rank, int max_depth,
                                  run_mode mode = run_mode::serial,
                                  std::uint64_t seed = 20260822,
                                  std::int64_t exhaustive_cap = default_forcing_cap,
                                  std::int64_t samples = formula_corpus::default_samples);

}  // namespace forcelab
