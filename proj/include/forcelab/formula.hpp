#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "forcelab/names.hpp"

namespace forcelab {

enum class formula_kind {
    atom_in,
    atom_subset,
    atom_eq,
    f_not,
    f_and,
    f_or,
    f_implies,
    f_exists,
    f_forall,
};

inline bool is_atom(formula_kind k) { return k <= formula_kind::atom_eq; }
inline bool is_binary(formula_kind k) {
    return k == formula_kind::f_and || k == formula_kind::f_or || k == formula_kind::f_implies;
}
inline bool is_quantifier(formula_kind k) {
    return k == formula_kind::f_exists || k == formula_kind::f_forall;
}

// A term is a de Bruijn variable (0 = innermost binder) or a name constant.
struct term {
    int var = -1;
    name_id constant = 0;
    bool is_var() const { return var >= 0; }
    static term v(int k) {
        term t;
        t.var = k;
        return t;
    }
    static term c(name_id n) {
        term t;
        t.constant = n;
        return t;
    }
};

struct formula;
using formula_ptr = std::unique_ptr<formula>;

struct formula {
    formula_kind kind;
    term a, b;         // atoms: both sides; quantifiers: a is the bound term
    formula_ptr l, r;  // not and quantifiers: l is the body; binary: l and r

    int height() const;
    formula_ptr clone() const;
};

formula_ptr make_atom(formula_kind k, term a, term b);
formula_ptr make_not(formula_ptr f);
formula_ptr make_binary(formula_kind k, formula_ptr l, formula_ptr r);
formula_ptr make_quantifier(formula_kind k, term bound, formula_ptr body);

// S-expression form; binders are printed as x0, x1, ... outside in.
std::string render_formula(const formula& f, const name_pool& names);

// The formula space over fixed constant pools, indexable in a fixed order:
// per height budget, atoms first, then the not / and / or / implies blocks
// over the next-smaller budget, then exists / forall.  Every formula of
// height <= max_depth whose atom constants come from `constants` and whose
// quantifier bounds come from `bounds` appears at exactly one index.
class formula_space {
public:
    formula_space(std::vector<name_id> constants, std::vector<name_id> bounds, int max_depth);

    // Counts saturate at huge(); a saturated space cannot be decoded but can
    // still be sampled.
    std::int64_t size() const { return count(depth_, 0); }
    static std::int64_t huge() { return std::int64_t{1} << 62; }

    formula_ptr decode(std::int64_t index) const;
    formula_ptr sample(std::mt19937_64& rng) const;

    int max_depth() const { return depth_; }
    const std::vector<name_id>& constants() const { return constants_; }
    const std::vector<name_id>& bounds() const { return bounds_; }

private:
    std::int64_t count(int d, int v) const;
    formula_ptr decode(std::int64_t index, int d, int v) const;
    formula_ptr sample(std::mt19937_64& rng, int d, int v) const;
    term atom_term(std::int64_t t) const;

    std::vector<name_id> constants_, bounds_;
    int depth_;
    mutable std::vector<std::vector<std::int64_t>> counts_;  // [d][v], -1 unset
};

// Deterministic formula corpus: the full space when it is small enough to
// exhaust, otherwise the atomic layer, an exhaustive closure over reduced
// pools, and a seeded sample of the full space.  Positions decode
// statelessly, so corpus items can be evaluated concurrently.
class formula_corpus {
public:
    static constexpr std::int64_t default_exhaustive_cap = 4'000'000;
    static constexpr std::int64_t default_samples = 400;

    static formula_corpus build(const name_pool& pool, const std::vector<name_id>& names,
                                int max_depth, std::uint64_t seed,
                                std::int64_t exhaustive_cap = default_exhaustive_cap,
                                std::int64_t samples = default_samples);

    std::int64_t size() const { return total_; }
    formula_ptr at(std::int64_t i) const;
    const std::string& describe() const { return description_; }

private:
    struct segment {
        formula_space space;
        std::int64_t count = 0;
        bool sampled = false;
        std::uint64_t seed = 0;
    };
    std::vector<segment> segments_;
    std::int64_t total_ = 0;
    std::string description_;
};

}  // namespace forcelab
