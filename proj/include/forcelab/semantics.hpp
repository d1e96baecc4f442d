#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "forcelab/formula.hpp"
#include "forcelab/names.hpp"
#include "forcelab/report.hpp"

namespace forcelab {

enum class atom_kind { in_rel = 0, subset_rel = 1, eq_rel = 2 };

// Boolean values of atomic and bounded formulas over one name pool.  Atomic
// values are memoized; after ensure_names has covered every name a formula
// can reach, bval is read-only and safe to call from parallel workers.
class eval_context {
public:
    explicit eval_context(const name_pool& names);

    const name_pool& names() const { return *names_; }
    const regular_open_algebra& algebra() const { return *alg_; }

    ba_elem bval_atomic(atom_kind k, name_id a, name_id b);

    // Precompute every atomic value over the names and their hereditary
    // domains.
    void ensure_names(const std::vector<name_id>& ns);

    // Environment convention: env.back() is variable 0 (innermost binder).
    ba_elem bval(const formula& f, std::vector<name_id>& env) const;
    ba_elem bval_closed(const formula& f) const;

    std::size_t memo_entries() const { return memo_.size(); }

private:
    using memo_map = std::unordered_map<std::uint64_t, ba_elem>;
    static std::uint64_t key(int kind, name_id a, name_id b);
    ba_elem atom_value(int kind, name_id a, name_id b, memo_map& local) const;
    ba_elem bval_rec(const formula& f, std::vector<name_id>& env, memo_map& local) const;
    name_id resolve(const term& t, const std::vector<name_id>& env) const;

    const name_pool* names_;
    const regular_open_algebra* alg_;
    memo_map memo_;
};

// Two-valued model induced by an ultrafilter: classes of names under
// "Boolean value of equality lies in the filter", with membership relation
// E.  Everything is precomputed, so satisfaction is a pure table walk.
struct quotient_model {
    std::vector<name_id> universe;          // structurally sorted input names
    std::vector<int> class_of;              // per universe position
    std::vector<name_id> reps;              // structurally least member per class
    std::vector<std::vector<char>> in_rel;  // [i][j]: class i is a member of class j
    ba_elem atom = 0;                       // generator of the ultrafilter

    int cls(name_id n) const;  // throws unknown_reference_error

private:
    friend quotient_model build_quotient(eval_context&, std::vector<name_id>,
                                         const std::vector<ba_elem>&);
    std::unordered_map<name_id, int> pos_;
};

quotient_model build_quotient(eval_context& ev, std::vector<name_id> names,
                              const std::vector<ba_elem>& ultra);

// Tarskian satisfaction in the quotient; env holds class indices.  Subset
// atoms are read as the bounded universal they abbreviate.
bool quotient_satisfies(const quotient_model& m, const formula& f, std::vector<int>& env);

// Nice name for a subset: domain dom(a), value at σ the sum over dom(z) of
// z(τ) × ⟦τ=σ⟧ × ⟦σ∈a⟧.
name_id nice_name(eval_context& ev, name_pool& pool, name_id z, name_id a);

// Value pool used by the verification suites: the whole carrier while it is
// small, else the four-element subalgebra over the first nontrivial element.
std::vector<ba_elem> suite_value_pool(const regular_open_algebra& alg, int full_limit = 32);

// For every generic ultrafilter and every corpus formula: quotient
// satisfaction iff the Boolean value lies in the filter.
suite_report verify_delta0_satisfaction(const poset& p, int max_rank, int max_depth,
                                        run_mode mode = run_mode::serial,
                                        std::uint64_t seed = 20260822,
                                        std::int64_t exhaustive_cap = formula_corpus::default_exhaustive_cap,
                                        std::int64_t samples = formula_corpus::default_samples);

}  // namespace forcelab
