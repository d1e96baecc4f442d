#include "forcelab/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <array>

namespace forcelab {

eval_context::eval_context(const name_pool& names) : names_(&names), alg_(&names.algebra()) {}

std::uint64_t eval_context::key(int kind, name_id a, name_id b) {
    return (static_cast<std::uint64_t>(kind) << 60) | (static_cast<std::uint64_t>(a) << 30) |
           static_cast<std::uint64_t>(b);
}

ba_elem eval_context::atom_value(int kind, name_id a, name_id b, memo_map& local) const {
    if (a >= names_->size() || b >= names_->size())
        throw invalid_argument_error("name from a different pool");
    const std::uint64_t k = key(kind, a, b);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    if (auto it = local.find(k); it != local.end()) return it->second;
    const auto& alg = *alg_;
    ba_elem out = alg.zero();
    switch (static_cast<atom_kind>(kind)) {
        case atom_kind::in_rel: {
            std::vector<ba_elem> parts;
            for (const auto& [x, vx] : names_->entries(b))
                parts.push_back(
                    alg.meet(vx, atom_value(static_cast<int>(atom_kind::eq_rel), a, x, local)));
            out = alg.big_sum(parts);
            break;
        }
        case atom_kind::subset_rel: {
            std::vector<ba_elem> parts;
            for (const auto& [y, vy] : names_->entries(a))
                parts.push_back(
                    alg.implies(vy, atom_value(static_cast<int>(atom_kind::in_rel), y, b, local)));
            out = alg.big_prod(parts);
            break;
        }
        case atom_kind::eq_rel:
            out = alg.meet(atom_value(static_cast<int>(atom_kind::subset_rel), a, b, local),
                           atom_value(static_cast<int>(atom_kind::subset_rel), b, a, local));
            break;
    }
    local.emplace(k, out);
    return out;
}

ba_elem eval_context::bval_atomic(atom_kind k, name_id a, name_id b) {
    memo_map local;
    const ba_elem out = atom_value(static_cast<int>(k), a, b, local);
    memo_.merge(local);
    return out;
}

void eval_context::ensure_names(const std::vector<name_id>& ns) {
    std::vector<name_id> closure;
    std::vector<char> seen(names_->size(), 0);
    std::vector<name_id> stack(ns.begin(), ns.end());
    while (!stack.empty()) {
        const name_id t = stack.back();
        stack.pop_back();
        if (t >= seen.size()) throw invalid_argument_error("name from a different pool");
        if (seen[t]) continue;
        seen[t] = 1;
        closure.push_back(t);
        for (const auto& [k, v] : names_->entries(t)) stack.push_back(k);
    }
    // eq does not compute in, so every kind is requested explicitly.
    for (name_id a : closure)
        for (name_id b : closure) {
            bval_atomic(atom_kind::eq_rel, a, b);
            bval_atomic(atom_kind::in_rel, a, b);
            bval_atomic(atom_kind::subset_rel, a, b);
        }
}

name_id eval_context::resolve(const term& t, const std::vector<name_id>& env) const {
    if (!t.is_var()) return t.constant;
    if (t.var >= static_cast<int>(env.size()))
        throw unbound_variable_error("variable index " + std::to_string(t.var) +
                                     " exceeds binder depth " + std::to_string(env.size()));
    return env[env.size() - 1 - static_cast<std::size_t>(t.var)];
}

ba_elem eval_context::bval_rec(const formula& f, std::vector<name_id>& env, memo_map& local) const {
    const auto& alg = *alg_;
    switch (f.kind) {
        case formula_kind::atom_in:
        case formula_kind::atom_subset:
        case formula_kind::atom_eq: {
            const int k = static_cast<int>(f.kind);
            return atom_value(k, resolve(f.a, env), resolve(f.b, env), local);
        }
        case formula_kind::f_not:
            return alg.neg(bval_rec(*f.l, env, local));
        case formula_kind::f_and:
            return alg.meet(bval_rec(*f.l, env, local), bval_rec(*f.r, env, local));
        case formula_kind::f_or:
            return alg.join(bval_rec(*f.l, env, local), bval_rec(*f.r, env, local));
        case formula_kind::f_implies:
            return alg.implies(bval_rec(*f.l, env, local), bval_rec(*f.r, env, local));
        case formula_kind::f_exists: {
            const name_id t = resolve(f.a, env);
            std::vector<ba_elem> parts;
            for (const auto& [s, vs] : names_->entries(t)) {
                env.push_back(s);
                parts.push_back(alg.meet(vs, bval_rec(*f.l, env, local)));
                env.pop_back();
            }
            return alg.big_sum(parts);
        }
        case formula_kind::f_forall: {
            const name_id t = resolve(f.a, env);
            std::vector<ba_elem> parts;
            for (const auto& [s, vs] : names_->entries(t)) {
                env.push_back(s);
                parts.push_back(alg.implies(vs, bval_rec(*f.l, env, local)));
                env.pop_back();
            }
            return alg.big_prod(parts);
        }
    }
    throw invalid_argument_error("unreachable formula kind");
}

ba_elem eval_context::bval(const formula& f, std::vector<name_id>& env) const {
    memo_map local;
    return bval_rec(f, env, local);
}

ba_elem eval_context::bval_closed(const formula& f) const {
    std::vector<name_id> env;
    return bval(f, env);
}

int quotient_model::cls(name_id n) const {
    auto it = pos_.find(n);
    if (it == pos_.end()) throw unknown_reference_error("name is not in the quotient universe");
    return class_of[static_cast<std::size_t>(it->second)];
}

quotient_model build_quotient(eval_context& ev, std::vector<name_id> names,
                              const std::vector<ba_elem>& ultra) {
    const auto& alg = ev.algebra();
    if (!alg.classify_filter(ultra).ultrafilter)
        throw not_ultrafilter_error("quotient model needs an ultrafilter");
    quotient_model m;
    m.atom = alg.big_prod(ultra);
    std::sort(names.begin(), names.end(),
              [&](name_id a, name_id b) { return ev.names().cmp(a, b) < 0; });
    names.erase(std::unique(names.begin(), names.end()), names.end());
    m.universe = std::move(names);
    ev.ensure_names(m.universe);

    auto holds = [&](ba_elem u) { return alg.leq(m.atom, u); };
    const int n = static_cast<int>(m.universe.size());
    m.class_of.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        if (m.class_of[static_cast<std::size_t>(i)] >= 0) continue;
        const int c = static_cast<int>(m.reps.size());
        m.class_of[static_cast<std::size_t>(i)] = c;
        m.reps.push_back(m.universe[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < n; ++j) {
            if (m.class_of[static_cast<std::size_t>(j)] >= 0) continue;
            if (holds(ev.bval_atomic(atom_kind::eq_rel, m.universe[static_cast<std::size_t>(i)],
                                     m.universe[static_cast<std::size_t>(j)])))
                m.class_of[static_cast<std::size_t>(j)] = c;
        }
    }
    const int k = static_cast<int>(m.reps.size());
    m.in_rel.assign(static_cast<std::size_t>(k), std::vector<char>(static_cast<std::size_t>(k), 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            m.in_rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                holds(ev.bval_atomic(atom_kind::in_rel, m.reps[static_cast<std::size_t>(i)],
                                     m.reps[static_cast<std::size_t>(j)]))
                    ? 1
                    : 0;
    for (int i = 0; i < n; ++i) m.pos_[m.universe[static_cast<std::size_t>(i)]] = i;
    return m;
}

namespace {

int quotient_class(const quotient_model& m, const term& t, const std::vector<int>& env) {
    if (!t.is_var()) return m.cls(t.constant);
    if (t.var >= static_cast<int>(env.size()))
        throw unbound_variable_error("variable index " + std::to_string(t.var) +
                                     " exceeds binder depth " + std::to_string(env.size()));
    return env[env.size() - 1 - static_cast<std::size_t>(t.var)];
}

}  // namespace

bool quotient_satisfies(const quotient_model& m, const formula& f, std::vector<int>& env) {
    const int k = static_cast<int>(m.reps.size());
    switch (f.kind) {
        case formula_kind::atom_in:
            return m.in_rel[static_cast<std::size_t>(quotient_class(m, f.a, env))]
                           [static_cast<std::size_t>(quotient_class(m, f.b, env))] != 0;
        case formula_kind::atom_subset: {
            const auto a = static_cast<std::size_t>(quotient_class(m, f.a, env));
            const auto b = static_cast<std::size_t>(quotient_class(m, f.b, env));
            for (int c = 0; c < k; ++c)
                if (m.in_rel[static_cast<std::size_t>(c)][a] &&
                    !m.in_rel[static_cast<std::size_t>(c)][b])
                    return false;
            return true;
        }
        case formula_kind::atom_eq:
            return quotient_class(m, f.a, env) == quotient_class(m, f.b, env);
        case formula_kind::f_not:
            return !quotient_satisfies(m, *f.l, env);
        case formula_kind::f_and:
            return quotient_satisfies(m, *f.l, env) && quotient_satisfies(m, *f.r, env);
        case formula_kind::f_or:
            return quotient_satisfies(m, *f.l, env) || quotient_satisfies(m, *f.r, env);
        case formula_kind::f_implies:
            return !quotient_satisfies(m, *f.l, env) || quotient_satisfies(m, *f.r, env);
        case formula_kind::f_exists:
        case formula_kind::f_forall: {
            const auto t = static_cast<std::size_t>(quotient_class(m, f.a, env));
            const bool want = f.kind == formula_kind::f_exists;
            for (int c = 0; c < k; ++c) {
                if (!m.in_rel[static_cast<std::size_t>(c)][t]) continue;
                env.push_back(c);
                const bool got = quotient_satisfies(m, *f.l, env);
                env.pop_back();
                if (got == want) return want;
            }
            return !want;
        }
    }
    throw invalid_argument_error("unreachable formula kind");
}

name_id nice_name(eval_context& ev, name_pool& pool, name_id z, name_id a) {
    if (&ev.names() != &pool)
        throw invalid_argument_error("evaluation context and pool disagree");
    const auto& alg = pool.algebra();
    std::vector<std::pair<name_id, ba_elem>> entries;
    for (const auto& [s, vs] : pool.entries(a)) {
        std::vector<ba_elem> parts;
        for (const auto& [t, vt] : pool.entries(z)) {
            ba_elem u = alg.meet(vt, ev.bval_atomic(atom_kind::eq_rel, t, s));
            u = alg.meet(u, ev.bval_atomic(atom_kind::in_rel, s, a));
            parts.push_back(u);
        }
        entries.emplace_back(s, alg.big_sum(parts));
    }
    return pool.make(std::move(entries));
}

std::vector<ba_elem> suite_value_pool(const regular_open_algebra& alg, int full_limit) {
    std::vector<ba_elem> out;
    if (alg.carrier_size() <= full_limit) {
        out.reserve(static_cast<std::size_t>(alg.carrier_size()));
        for (int u = 0; u < alg.carrier_size(); ++u) out.push_back(static_cast<ba_elem>(u));
        return out;
    }
    const ba_elem u = 1;
    out = {alg.zero(), u, alg.neg(u), alg.one()};
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

suite_report verify_delta0_satisfaction(const poset& p, int max_rank, int max_depth, run_mode mode,
                                        std::uint64_t seed, std::int64_t exhaustive_cap,
                                        std::int64_t samples) {
    suite_report rep;
    rep.suite = "delta0";
    regular_open_algebra alg(p, mode);
    name_pool pool(alg);
    const auto values = suite_value_pool(alg);
    const auto names = pool.enumerate(max_rank, values);
    eval_context ev(pool);
    ev.ensure_names(names);
    const auto corpus = formula_corpus::build(pool, names, max_depth, seed, exhaustive_cap, samples);
    rep.note("poset " + p.name());
    rep.note("corpus " + corpus.describe());
    rep.bump("names", static_cast<std::int64_t>(names.size()));
    rep.bump("formulas", corpus.size());

    const auto ultras = alg.ultrafilters();
    std::vector<quotient_model> models;
    models.reserve(ultras.size());
    for (const auto& u : ultras) {
        if (!alg.classify_filter(u).generic) {
            rep.fail("ultrafilter is not generic");
            return rep;
        }
        models.push_back(build_quotient(ev, names, u));
    }
    rep.bump("generics", static_cast<std::int64_t>(models.size()));

    std::atomic<std::int64_t> first_fail{-1};
    std::array<std::atomic<std::int64_t>, 9> root_kinds{};
    for (auto& a : root_kinds) a.store(0, std::memory_order_relaxed);
    for_each_index(corpus.size(), mode, [&](std::int64_t i) {
        const auto f = corpus.at(i);
        root_kinds[static_cast<std::size_t>(f->kind)].fetch_add(1, std::memory_order_relaxed);
        std::vector<name_id> env;
        const ba_elem v = ev.bval(*f, env);
        for (const auto& model : models) {
            const bool in_filter = alg.leq(model.atom, v);
            std::vector<int> cenv;
            const bool sat = quotient_satisfies(model, *f, cenv);
            if (sat != in_filter) {
                std::int64_t prev = first_fail.load(std::memory_order_relaxed);
                while ((prev < 0 || i < prev) &&
                       !first_fail.compare_exchange_weak(prev, i, std::memory_order_relaxed)) {
                }
                break;
            }
        }
    });

    static const char* kind_labels[9] = {"in",  "subset", "eq",      "not",   "and",
                                         "or",  "implies", "exists", "forall"};
    for (int k = 0; k < 9; ++k)
        rep.bump(std::string("root_") + kind_labels[k], root_kinds[static_cast<std::size_t>(k)].load());

    const std::int64_t bad = first_fail.load();
    if (bad >= 0) {
        const auto f = corpus.at(bad);
        std::vector<name_id> env;
        const ba_elem v = ev.bval(*f, env);
        for (std::size_t g = 0; g < models.size(); ++g) {
            const bool in_filter = alg.leq(models[g].atom, v);
            std::vector<int> cenv;
            const bool sat = quotient_satisfies(models[g], *f, cenv);
            if (sat != in_filter) {
                rep.fail("formula " + render_formula(*f, pool) + " generic " + std::to_string(g) +
                         " value " + render_elem(alg, v) + " satisfied=" + (sat ? "yes" : "no"));
                break;
            }
        }
    } else {
        rep.bump("checked", corpus.size() * static_cast<std::int64_t>(models.size()));
    }
    return rep;
}

}  // namespace forcelab
