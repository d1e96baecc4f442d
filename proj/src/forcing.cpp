#include "forcelab/forcing.hpp"

#include <array>
#include <atomic>
#include <string>
#include <tuple>
#include <utility>

namespace forcelab {

namespace {

// [sigma in t] through the shared atomic memo; const access recomputes into
// call-local state on a miss, so this is safe from parallel workers.
ba_elem member_value(const forcing_context& ctx, name_id s, name_id t) {
    const formula atom{formula_kind::atom_in, term::c(s), term::c(t), nullptr, nullptr};
    std::vector<name_id> none;
    return ctx.ev.bval(atom, none);
}

// Definitional recursion for the forcing relation.  Atomics defer to the
// completion; everything else unfolds its density clause over extensions.
// Keys copy the environment, which stays tiny at corpus depths.
struct recursion_engine {
    const forcing_context& ctx;
    std::map<std::tuple<const formula*, int, std::vector<name_id>>, bool> memo;
    std::map<std::tuple<const formula*, int, std::vector<name_id>>, bool> exists_not_memo;

    name_id resolve(const term& t, const std::vector<name_id>& env) const {
        if (!t.is_var()) return t.constant;
        if (t.var >= static_cast<int>(env.size()))
            throw unbound_variable_error("variable " + std::to_string(t.var) +
                                         " unbound at depth " + std::to_string(env.size()));
        return env[env.size() - 1 - static_cast<std::size_t>(t.var)];
    }

    // r forces the negation of body: no extension of r forces body.
    bool refutes(int r, const formula& body, std::vector<name_id>& env) {
        const poset& base = ctx.base();
        for (int s = 0; s < base.size(); ++s)
            if (base.leq(s, r) && run(s, body, env)) return false;
        return true;
    }

    // q forces "some member of the bound refutes the body"; the forall
    // clause is the negation of this over all extensions.
    bool exists_not(int q, const formula& f, std::vector<name_id>& env) {
        const auto key = std::make_tuple(&f, q, env);
        if (auto it = exists_not_memo.find(key); it != exists_not_memo.end()) return it->second;
        const poset& base = ctx.base();
        const name_id t = resolve(f.a, env);
        const auto& dom = ctx.names.entries(t);
        bool out = true;
        for (int q2 = 0; q2 < base.size() && out; ++q2) {
            if (!base.leq(q2, q)) continue;
            bool witness = false;
            for (int r = 0; r < base.size() && !witness; ++r) {
                if (!base.leq(r, q2)) continue;
                for (const auto& entry : dom) {
                    if (!ctx.alg.leq(ctx.alg.embed(r), member_value(ctx, entry.first, t))) continue;
                    env.push_back(entry.first);
                    const bool hit = refutes(r, *f.l, env);
                    env.pop_back();
                    if (hit) {
                        witness = true;
                        break;
                    }
                }
            }
            if (!witness) out = false;
        }
        exists_not_memo.emplace(key, out);
        return out;
    }

    bool run(int p, const formula& f, std::vector<name_id>& env) {
        if (is_atom(f.kind)) return ctx.alg.leq(ctx.alg.embed(p), ctx.ev.bval(f, env));
        const auto key = std::make_tuple(&f, p, env);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const poset& base = ctx.base();
        const int n = base.size();
        bool out = true;
        switch (f.kind) {
            case formula_kind::f_not:
                for (int q = 0; q < n && out; ++q)
                    if (base.leq(q, p) && run(q, *f.l, env)) out = false;
                break;
            case formula_kind::f_and:
                out = run(p, *f.l, env) && run(p, *f.r, env);
                break;
            case formula_kind::f_or:
                for (int q = 0; q < n && out; ++q) {
                    if (!base.leq(q, p)) continue;
                    bool witness = false;
                    for (int r = 0; r < n && !witness; ++r)
                        if (base.leq(r, q) && (run(r, *f.l, env) || run(r, *f.r, env)))
                            witness = true;
                    if (!witness) out = false;
                }
                break;
            case formula_kind::f_implies:
                // phi -> psi read as (not phi) or psi
                for (int q = 0; q < n && out; ++q) {
                    if (!base.leq(q, p)) continue;
                    bool witness = false;
                    for (int r = 0; r < n && !witness; ++r)
                        if (base.leq(r, q) && (refutes(r, *f.l, env) || run(r, *f.r, env)))
                            witness = true;
                    if (!witness) out = false;
                }
                break;
            case formula_kind::f_exists: {
                const name_id t = resolve(f.a, env);
                const auto& dom = ctx.names.entries(t);
                for (int q = 0; q < n && out; ++q) {
                    if (!base.leq(q, p)) continue;
                    bool witness = false;
                    for (int r = 0; r < n && !witness; ++r) {
                        if (!base.leq(r, q)) continue;
                        for (const auto& entry : dom) {
                            if (!ctx.alg.leq(ctx.alg.embed(r), member_value(ctx, entry.first, t)))
                                continue;
                            env.push_back(entry.first);
                            const bool forced = run(r, *f.l, env);
                            env.pop_back();
                            if (forced) {
                                witness = true;
                                break;
                            }
                        }
                    }
                    if (!witness) out = false;
                }
                break;
            }
            case formula_kind::f_forall:
                // forall as not-exists-not
                for (int q = 0; q < n && out; ++q)
                    if (base.leq(q, p) && exists_not(q, f, env)) out = false;
                break;
            default:
                break;
        }
        memo.emplace(key, out);
        return out;
    }
};

std::string render_conditions(const poset& base, cond_mask m) {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < base.size(); ++i) {
        if (!has_bit(m, i)) continue;
        if (!first) out += ",";
        out += base.elem(i);
        first = false;
    }
    return out + "}";
}

constexpr const char* kind_labels[9] = {"in", "subset", "eq",     "not",   "and",
                                        "or", "implies", "exists", "forall"};

}  // namespace

forcing_context::forcing_context(poset p, run_mode mode)
    : alg(std::move(p), mode), names(alg), ev(names) {}

int forcing_context::require_condition(int p) const {
    if (p < 0 || p >= base().size())
        throw unknown_element_error("condition index " + std::to_string(p) + " outside " +
                                    base().name());
    return p;
}

bool forces(const forcing_context& ctx, int p, const formula& f, std::vector<name_id>& env) {
    ctx.require_condition(p);
    return ctx.alg.leq(ctx.alg.embed(p), ctx.ev.bval(f, env));
}

bool forces(const forcing_context& ctx, int p, const formula& f) {
    std::vector<name_id> env;
    return forces(ctx, p, f, env);
}

bool forces_by_recursion(const forcing_context& ctx, int p, const formula& f) {
    ctx.require_condition(p);
    recursion_engine eng{ctx, {}, {}};
    std::vector<name_id> env;
    return eng.run(p, f, env);
}

valuation::valuation(forcing_context& ctx, cond_mask generic) : ctx_(&ctx), generic_(generic) {
    if (!ctx.base().generic(generic))
        throw not_generic_error("condition set is not a generic filter on " + ctx.base().name());
}

hf_id valuation::value(name_id tau) {
    if (auto it = memo_.find(tau); it != memo_.end()) return it->second;
    std::vector<hf_id> members;
    // A regular open value meets the filter exactly when some filter
    // condition embeds below it, so a mask intersection decides membership.
    for (const auto& entry : ctx_->names.entries(tau))
        if ((ctx_->alg.mask_of(entry.second) & generic_) != 0) members.push_back(value(entry.first));
    const hf_id out = ctx_->hf.make(std::move(members));
    memo_.emplace(tau, out);
    return out;
}

hf_id valuation::at(name_id tau) const {
    const auto it = memo_.find(tau);
    if (it == memo_.end())
        throw unknown_reference_error("name has no precomputed valuation");
    return it->second;
}

void valuation::ensure(const std::vector<name_id>& names) {
    for (const name_id n : names) value(n);
}

hf_id valuate(forcing_context& ctx, cond_mask generic, name_id tau) {
    valuation val(ctx, generic);
    return val.value(tau);
}

bool hf_eval(const hf_pool& hf, const formula& f, const valuation& val,
             std::vector<hf_id>& env) {
    const auto term_value = [&](const term& t) -> hf_id {
        if (!t.is_var()) return val.at(t.constant);
        if (t.var >= static_cast<int>(env.size()))
            throw unbound_variable_error("variable " + std::to_string(t.var) +
                                         " unbound at depth " + std::to_string(env.size()));
        return env[env.size() - 1 - static_cast<std::size_t>(t.var)];
    };
    switch (f.kind) {
        case formula_kind::atom_in:
            return hf.contains(term_value(f.b), term_value(f.a));
        case formula_kind::atom_subset:
            return hf.subset(term_value(f.a), term_value(f.b));
        case formula_kind::atom_eq:
            return term_value(f.a) == term_value(f.b);
        case formula_kind::f_not:
            return !hf_eval(hf, *f.l, val, env);
        case formula_kind::f_and:
            return hf_eval(hf, *f.l, val, env) && hf_eval(hf, *f.r, val, env);
        case formula_kind::f_or:
            return hf_eval(hf, *f.l, val, env) || hf_eval(hf, *f.r, val, env);
        case formula_kind::f_implies:
            return !hf_eval(hf, *f.l, val, env) || hf_eval(hf, *f.r, val, env);
        default: {
            const hf_id bound = term_value(f.a);
            const bool want = f.kind == formula_kind::f_exists;
            for (const hf_id m : hf.members(bound)) {
                env.push_back(m);
                const bool sat = hf_eval(hf, *f.l, val, env);
                env.pop_back();
                if (sat == want) return want;
            }
            return !want;
        }
    }
}

name_transport::name_transport(const name_pool& from, name_pool& to, std::vector<ba_elem> j)
    : from_(&from), to_(&to), j_(std::move(j)) {}

name_id name_transport::apply(name_id tau) {
    if (auto it = memo_.find(tau); it != memo_.end()) return it->second;
    std::vector<std::pair<name_id, ba_elem>> entries;
    for (const auto& entry : from_->entries(tau)) {
        if (entry.second >= j_.size())
            throw invalid_argument_error("value outside the embedding table");
        entries.emplace_back(apply(entry.first), j_[entry.second]);
    }
    const name_id out = to_->make(std::move(entries));
    memo_.emplace(tau, out);
    return out;
}

suite_report verify_forcing_theorem(forcing_context& ctx, int max_rank, int max_depth,
                                    run_mode mode, std::uint64_t seed,
                                    std::int64_t exhaustive_cap, std::int64_t samples) {
    suite_report rep;
    rep.suite = "forcing-theorem";
    const auto values = suite_value_pool(ctx.alg);
    const auto names = ctx.names.enumerate(max_rank, values);
    ctx.ev.ensure_names(names);
    const auto corpus = formula_corpus::build(ctx.names, names, max_depth, seed, exhaustive_cap, samples);
    rep.note("poset " + ctx.base().name());
    rep.note("corpus " + corpus.describe());
    rep.bump("names", static_cast<std::int64_t>(names.size()));
    rep.bump("formulas", corpus.size());

    const auto generics = ctx.base().generic_filters();
    std::vector<valuation> vals;
    vals.reserve(generics.size());
    for (const cond_mask g : generics) {
        vals.emplace_back(ctx, g);
        vals.back().ensure(names);
    }
    rep.bump("generics", static_cast<std::int64_t>(generics.size()));
    const auto gcount = static_cast<std::int64_t>(generics.size());

    std::atomic<std::int64_t> first_fail{-1};  // formula index * generic count + generic
    std::array<std::atomic<std::int64_t>, 9> root_kinds{};
    for (auto& a : root_kinds) a.store(0, std::memory_order_relaxed);
    for_each_index(corpus.size(), mode, [&](std::int64_t i) {
        const auto f = corpus.at(i);
        root_kinds[static_cast<std::size_t>(f->kind)].fetch_add(1, std::memory_order_relaxed);
        std::vector<name_id> env;
        const ba_elem v = ctx.ev.bval(*f, env);
        const cond_mask forced = ctx.alg.mask_of(v);
        for (std::int64_t g = 0; g < gcount; ++g) {
            std::vector<hf_id> henv;
            const bool truth = hf_eval(ctx.hf, *f, vals[static_cast<std::size_t>(g)], henv);
            // some condition of the filter forces f iff the filter meets
            // the mask of the value
            const bool witnessed = (forced & generics[static_cast<std::size_t>(g)]) != 0;
            if (truth != witnessed) {
                const std::int64_t at = i * gcount + g;
                std::int64_t prev = first_fail.load(std::memory_order_relaxed);
                while ((prev < 0 || at < prev) &&
                       !first_fail.compare_exchange_weak(prev, at, std::memory_order_relaxed)) {
                }
                break;
            }
        }
    });

    for (int k = 0; k < 9; ++k)
        rep.bump(std::string("root_") + kind_labels[k], root_kinds[static_cast<std::size_t>(k)].load());

    const std::int64_t bad = first_fail.load();
    if (bad >= 0) {
        const auto f = corpus.at(bad / gcount);
        const auto g = static_cast<std::size_t>(bad % gcount);
        std::vector<name_id> env;
        const ba_elem v = ctx.ev.bval(*f, env);
        std::vector<hf_id> henv;
        const bool truth = hf_eval(ctx.hf, *f, vals[g], henv);
        rep.fail("formula " + render_formula(*f, ctx.names) + " generic " +
                 render_conditions(ctx.base(), generics[g]) + " value " + render_elem(ctx.alg, v) +
                 " truth=" + (truth ? "yes" : "no"));
    } else {
        rep.bump("checked", corpus.size() * gcount);
    }
    return rep;
}

namespace {

// One formula against the seven relation facts plus route agreement.
// Returns 0 on pass, else the first failing fact; fills detail if asked.
int check_formula_facts(const forcing_context& ctx, const formula& f, std::string* detail) {
    const auto& alg = ctx.alg;
    const poset& base = ctx.base();
    const int n = base.size();
    const auto note = [&](std::string text) {
        if (detail) *detail = std::move(text);
    };
    std::vector<name_id> env;
    const ba_elem v = ctx.ev.bval(f, env);
    // p forces f iff e(p) <= v iff p lies in the mask of v (regular open
    // values are downward closed)
    const cond_mask forced = alg.mask_of(v);
    const cond_mask refuted = alg.mask_of(alg.neg(v));

    if (!base.downward_closed(forced)) {
        note("forced set is not downward closed");
        return 1;
    }
    for (int p = 0; p < n; ++p)
        if (!has_bit(forced, p) && base.dense_below(forced, p)) {
            note("forced densely below " + base.elem(p) + " without forcing there");
            return 2;
        }
    if (alg.mask_of(alg.neg(alg.neg(v))) != forced) {
        note("double negation changes the forced set");
        return 3;
    }
    if (f.kind == formula_kind::f_or) {
        const cond_mask either =
            alg.mask_of(ctx.ev.bval(*f.l, env)) | alg.mask_of(ctx.ev.bval(*f.r, env));
        for (int p = 0; p < n; ++p)
            if (has_bit(forced, p) != base.dense_below(either, p)) {
                note("disjunction density clause fails at " + base.elem(p));
                return 4;
            }
    }
    if (f.kind == formula_kind::f_forall) {
        // closed corpus formula: the bound is a constant
        const name_id t = f.a.constant;
        cond_mask inter = base.all();
        for (const auto& entry : ctx.names.entries(t)) {
            env.push_back(entry.first);
            const ba_elem body = ctx.ev.bval(*f.l, env);
            env.pop_back();
            inter &= alg.mask_of(alg.implies(member_value(ctx, entry.first, t), body));
        }
        if (inter != forced) {
            note("universal differs from the conjunction of its instances");
            return 5;
        }
    }
    if ((forced & refuted) != 0) {
        note("a condition forces the formula and its negation");
        return 6;
    }
    if (!base.dense(forced | refuted)) {
        note("deciding conditions are not dense");
        return 7;
    }
    recursion_engine eng{ctx, {}, {}};
    for (int p = 0; p < n; ++p) {
        env.clear();
        if (eng.run(p, f, env) != has_bit(forced, p)) {
            note("recursion route disagrees at " + base.elem(p));
            return 8;
        }
    }
    return 0;
}

}  // namespace

suite_report verify_forcing_facts(forcing_context& ctx, int max_rank, int max_depth,
                                  run_mode mode, std::uint64_t seed,
                                  std::int64_t exhaustive_cap, std::int64_t samples) {
    suite_report rep;
    rep.suite = "forcing-facts";
    const auto values = suite_value_pool(ctx.alg);
    const auto names = ctx.names.enumerate(max_rank, values);
    ctx.ev.ensure_names(names);
    const auto corpus = formula_corpus::build(ctx.names, names, max_depth, seed, exhaustive_cap, samples);
    rep.note("poset " + ctx.base().name());
    rep.note("corpus " + corpus.describe());
    rep.note("facts 1-7 per formula; 8 is route agreement over every condition");
    rep.bump("names", static_cast<std::int64_t>(names.size()));
    rep.bump("formulas", corpus.size());
    rep.bump("conditions", ctx.base().size());

    std::atomic<std::int64_t> first_fail{-1};  // formula index * 16 + fact
    std::array<std::atomic<std::int64_t>, 9> root_kinds{};
    for (auto& a : root_kinds) a.store(0, std::memory_order_relaxed);
    for_each_index(corpus.size(), mode, [&](std::int64_t i) {
        const auto f = corpus.at(i);
        root_kinds[static_cast<std::size_t>(f->kind)].fetch_add(1, std::memory_order_relaxed);
        const int fact = check_formula_facts(ctx, *f, nullptr);
        if (fact != 0) {
            const std::int64_t at = i * 16 + fact;
            std::int64_t prev = first_fail.load(std::memory_order_relaxed);
            while ((prev < 0 || at < prev) &&
                   !first_fail.compare_exchange_weak(prev, at, std::memory_order_relaxed)) {
            }
        }
    });

    for (int k = 0; k < 9; ++k)
        rep.bump(std::string("root_") + kind_labels[k], root_kinds[static_cast<std::size_t>(k)].load());

    const std::int64_t bad = first_fail.load();
    if (bad >= 0) {
        const auto f = corpus.at(bad / 16);
        std::string detail;
        check_formula_facts(ctx, *f, &detail);
        rep.fail("formula " + render_formula(*f, ctx.names) + " fact " + std::to_string(bad % 16) +
                 ": " + detail);
    } else {
        rep.bump("checked", corpus.size());
    }
    return rep;
}

}  // namespace forcelab
