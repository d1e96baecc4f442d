#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "forcelab/corpus.hpp"
#include "forcelab/semantics.hpp"

using namespace forcelab;

namespace {

struct world {
    regular_open_algebra alg;
    name_pool pool;
    eval_context ev;
    std::vector<name_id> names;

    explicit world(const poset& p, int max_rank = 2)
        : alg(p), pool(alg), ev(pool), names(pool.enumerate(max_rank, suite_value_pool(alg))) {
        ev.ensure_names(names);
    }
};

ba_elem atom(world& w, atom_kind k, name_id a, name_id b) { return w.ev.bval_atomic(k, a, b); }

}  // namespace

TEST_CASE("check names mirror hereditarily finite sets exactly") {
    world w(cohen_poset(1));
    hf_pool hf;
    std::vector<hf_id> sets = {hf.empty(), hf.make({hf.empty()})};
    sets.push_back(hf.make({sets[1]}));
    sets.push_back(hf.make({sets[0], sets[1]}));
    std::vector<name_id> checks;
    for (hf_id x : sets) checks.push_back(w.pool.check_name(hf, x));

    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = 0; j < sets.size(); ++j) {
            const ba_elem eq = atom(w, atom_kind::eq_rel, checks[i], checks[j]);
            const ba_elem in = atom(w, atom_kind::in_rel, checks[i], checks[j]);
            const ba_elem sub = atom(w, atom_kind::subset_rel, checks[i], checks[j]);
            CHECK(eq == (sets[i] == sets[j] ? w.alg.one() : w.alg.zero()));
            CHECK(in == (hf.contains(sets[j], sets[i]) ? w.alg.one() : w.alg.zero()));
            CHECK(sub == (hf.subset(sets[i], sets[j]) ? w.alg.one() : w.alg.zero()));
        }
}

TEST_CASE("singleton membership value is the entry value") {
    world w(antichain_poset(2, true));
    for (ba_elem u : suite_value_pool(w.alg)) {
        const name_id s = w.pool.make({{w.pool.empty_name(), u}});
        CHECK(atom(w, atom_kind::in_rel, w.pool.empty_name(), s) == u);
    }
}

TEST_CASE("reflexivity, symmetry, and entry bounds") {
    for (const char* id : {"antichain2_top", "cohen1"}) {
        world w(named_poset(id));
        for (name_id a : w.names) {
            CHECK(atom(w, atom_kind::eq_rel, a, a) == w.alg.one());
            CHECK(atom(w, atom_kind::subset_rel, a, a) == w.alg.one());
            for (const auto& [x, vx] : w.pool.entries(a))
                CHECK(w.alg.leq(vx, atom(w, atom_kind::in_rel, x, a)));
            for (name_id b : w.names)
                CHECK(atom(w, atom_kind::eq_rel, a, b) == atom(w, atom_kind::eq_rel, b, a));
        }
    }
}

TEST_CASE("equality is a congruence for membership and inclusion") {
    for (const char* id : {"antichain2_top", "cohen1", "chain3"}) {
        world w(named_poset(id));
        auto val = [&](atom_kind k, name_id a, name_id b) { return w.ev.bval_atomic(k, a, b); };
        for (name_id tau : w.names)
            for (name_id sigma : w.names)
                for (name_id x : w.names) {
                    const ba_elem eq_sx = val(atom_kind::eq_rel, sigma, x);
                    CHECK(w.alg.leq(w.alg.meet(val(atom_kind::subset_rel, tau, sigma), eq_sx),
                                    val(atom_kind::subset_rel, tau, x)));
                    CHECK(w.alg.leq(w.alg.meet(val(atom_kind::subset_rel, sigma, tau), eq_sx),
                                    val(atom_kind::subset_rel, x, tau)));
                    CHECK(w.alg.leq(w.alg.meet(val(atom_kind::in_rel, sigma, tau), eq_sx),
                                    val(atom_kind::in_rel, x, tau)));
                    CHECK(w.alg.leq(w.alg.meet(val(atom_kind::in_rel, sigma, x),
                                               val(atom_kind::eq_rel, tau, sigma)),
                                    val(atom_kind::in_rel, tau, x)));
                    CHECK(w.alg.leq(w.alg.meet(val(atom_kind::in_rel, tau, sigma), eq_sx),
                                    val(atom_kind::in_rel, tau, x)));
                    CHECK(w.alg.leq(w.alg.meet(val(atom_kind::eq_rel, tau, sigma), eq_sx),
                                    val(atom_kind::eq_rel, tau, x)));
                }
    }
}

TEST_CASE("membership transports along equal pairs") {
    world w(cohen_poset(1));
    for (name_id tau : w.names)
        for (name_id sigma : w.names)
            for (name_id x : w.names)
                for (name_id y : w.names) {
                    const ba_elem lhs =
                        w.alg.meet(atom(w, atom_kind::in_rel, tau, sigma),
                                   w.alg.meet(atom(w, atom_kind::eq_rel, tau, x),
                                              atom(w, atom_kind::eq_rel, sigma, y)));
                    CHECK(w.alg.leq(lhs, atom(w, atom_kind::in_rel, x, y)));
                }
}

TEST_CASE("connectives and bounded quantifiers compose atomic values") {
    world w(antichain_poset(2, true));
    formula_space space(w.names, w.names, 3);
    std::mt19937_64 rng(7);

    for (int trial = 0; trial < 60; ++trial) {
        auto f = space.sample(rng);
        const ba_elem v = w.ev.bval_closed(*f);
        auto negated = make_not(f->clone());
        CHECK(w.ev.bval_closed(*negated) == w.alg.neg(v));
        auto excluded = make_binary(formula_kind::f_or, f->clone(), make_not(f->clone()));
        CHECK(w.ev.bval_closed(*excluded) == w.alg.one());
        auto contradiction = make_binary(formula_kind::f_and, f->clone(), make_not(f->clone()));
        CHECK(w.ev.bval_closed(*contradiction) == w.alg.zero());
        eval_context fresh(w.pool);
        CHECK(fresh.bval_closed(*f) == v);
    }

    for (name_id t : w.names) {
        auto exists_refl = make_quantifier(formula_kind::f_exists, term::c(t),
                                           make_atom(formula_kind::atom_eq, term::v(0), term::v(0)));
        std::vector<ba_elem> vals;
        for (const auto& [s, vs] : w.pool.entries(t)) vals.push_back(vs);
        CHECK(w.ev.bval_closed(*exists_refl) == w.alg.big_sum(vals));
        auto forall_member = make_quantifier(formula_kind::f_forall, term::c(t),
                                             make_atom(formula_kind::atom_in, term::v(0), term::c(t)));
        CHECK(w.ev.bval_closed(*forall_member) == w.alg.one());
    }

    const name_id a = w.names[1], b = w.names.back();
    auto combo = make_binary(
        formula_kind::f_and, make_atom(formula_kind::atom_in, term::c(a), term::c(b)),
        make_binary(formula_kind::f_implies, make_atom(formula_kind::atom_eq, term::c(a), term::c(b)),
                    make_not(make_atom(formula_kind::atom_subset, term::c(b), term::c(a)))));
    const ba_elem expect = w.alg.meet(
        atom(w, atom_kind::in_rel, a, b),
        w.alg.implies(atom(w, atom_kind::eq_rel, a, b),
                      w.alg.neg(atom(w, atom_kind::subset_rel, b, a))));
    CHECK(w.ev.bval_closed(*combo) == expect);
}

TEST_CASE("const evaluation leaves the shared memo untouched") {
    world w(antichain_poset(2, true));
    const std::size_t before = w.ev.memo_entries();
    const eval_context& frozen = w.ev;
    formula_space space(w.names, w.names, 3);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = space.sample(rng);
        std::vector<name_id> env;
        const ba_elem v = frozen.bval(*f, env);
        CHECK(v < static_cast<ba_elem>(w.alg.carrier_size()));
        CHECK(env.empty());
    }
    CHECK(w.ev.memo_entries() == before);
}

TEST_CASE("unbound variables are reported") {
    world w(chain_poset(1));
    auto open_atom = make_atom(formula_kind::atom_eq, term::v(0), term::v(0));
    CHECK_THROWS_AS(w.ev.bval_closed(*open_atom), unbound_variable_error);
    auto deep = make_quantifier(formula_kind::f_exists, term::c(w.names[1]),
                                make_atom(formula_kind::atom_in, term::v(1), term::c(w.names[0])));
    CHECK_THROWS_AS(w.ev.bval_closed(*deep), unbound_variable_error);
}

TEST_CASE("formula space indexes every formula exactly once") {
    world w(chain_poset(1));
    const name_id c0 = w.names[0], c1 = w.names[1];
    formula_space space({c0}, {c1}, 2);
    // 3 atoms at depth 1; at depth 2: atoms + not + three binaries + two
    // quantifiers over one bound and the body space with one variable.
    CHECK(space.size() == 3 + 3 + 3 * 3 * 3 + 2 * 1 * 12);
    std::set<std::string> seen;
    for (std::int64_t i = 0; i < space.size(); ++i) {
        auto f = space.decode(i);
        CHECK(f->height() <= 2);
        seen.insert(render_formula(*f, w.pool));
    }
    CHECK(static_cast<std::int64_t>(seen.size()) == space.size());
    CHECK_THROWS_AS(space.decode(space.size()), invalid_argument_error);
    CHECK_THROWS_AS(space.decode(-1), invalid_argument_error);

    formula_space deeper({c0}, {c1}, 3);
    CHECK(deeper.size() > space.size());

    // Samples are deterministic under the seed and stay inside the space.
    std::mt19937_64 r1(5), r2(5);
    for (int t = 0; t < 50; ++t) {
        auto f1 = space.sample(r1);
        auto f2 = space.sample(r2);
        const std::string s1 = render_formula(*f1, w.pool);
        CHECK(s1 == render_formula(*f2, w.pool));
        CHECK(seen.count(s1) == 1);
    }
}

TEST_CASE("formula corpus is exhaustive when the space fits") {
    world w(antichain_poset(2, true));
    auto corpus = formula_corpus::build(w.pool, w.names, 2, 99);
    CHECK(corpus.size() == 18105);
    CHECK(corpus.describe() == "exhaustive=18105");
    formula_space space(w.names, w.names, 2);
    for (std::int64_t i : {std::int64_t{0}, std::int64_t{1234}, corpus.size() - 1})
        CHECK(render_formula(*corpus.at(i), w.pool) == render_formula(*space.decode(i), w.pool));
}

TEST_CASE("formula corpus falls back to layers under a tight cap") {
    world w(antichain_poset(2, true));
    auto corpus = formula_corpus::build(w.pool, w.names, 2, 99, 1000, 50);
    // Atom layer 3 * 5 * 5, restricted closure over two constants and three
    // bounds, then the seeded samples.
    CHECK(corpus.size() == 75 + 618 + 50);
    CHECK(corpus.describe() == "atoms=75 restricted=618 samples=50");
    std::set<std::string> renders;
    for (std::int64_t i = 0; i < corpus.size(); ++i) {
        auto f = corpus.at(i);
        auto again = corpus.at(i);
        const std::string s = render_formula(*f, w.pool);
        CHECK(s == render_formula(*again, w.pool));
        renders.insert(s);
    }
    CHECK(renders.size() > 600);
    CHECK_THROWS_AS(corpus.at(corpus.size()), invalid_argument_error);
    CHECK_THROWS_AS(
        (void)formula_corpus::build(w.pool, w.names, 2, 99, 1, 10), size_limit_error);
}

TEST_CASE("quotient classes follow equality in the filter") {
    world w(chain_poset(1));
    REQUIRE(w.names.size() == 3);
    const auto ultra = w.alg.principal_ultrafilter(w.alg.one());
    auto m = build_quotient(w.ev, w.names, ultra);
    // The zero-certainty singleton collapses onto the empty name; the
    // one-certainty singleton stays apart.
    REQUIRE(m.reps.size() == 2);
    CHECK(m.cls(w.names[0]) == m.cls(w.pool.make({{w.pool.empty_name(), w.alg.zero()}})));
    CHECK(m.cls(w.names[0]) != m.cls(w.pool.make({{w.pool.empty_name(), w.alg.one()}})));
    CHECK(m.reps[0] == w.pool.empty_name());
    const auto e = static_cast<std::size_t>(m.cls(w.pool.empty_name()));
    const auto s =
        static_cast<std::size_t>(m.cls(w.pool.make({{w.pool.empty_name(), w.alg.one()}})));
    CHECK(m.in_rel[e][s] == 1);
    CHECK(m.in_rel[s][e] == 0);
    CHECK(m.in_rel[e][e] == 0);

    const name_id outsider = w.pool.make({{w.names[1], w.alg.one()}});
    CHECK_THROWS_AS(m.cls(outsider), unknown_reference_error);
}

TEST_CASE("quotients require an ultrafilter") {
    world w(antichain_poset(2, true));
    CHECK_THROWS_AS(build_quotient(w.ev, w.names, {w.alg.one()}), not_ultrafilter_error);
}

TEST_CASE("check-name quotients recover the hereditarily finite sets") {
    world w(cohen_poset(1));
    hf_pool hf;
    std::vector<hf_id> sets = {hf.empty(), hf.make({hf.empty()})};
    sets.push_back(hf.make({sets[1]}));
    sets.push_back(hf.make({sets[0], sets[1]}));
    std::vector<name_id> checks;
    for (hf_id x : sets) checks.push_back(w.pool.check_name(hf, x));

    for (ba_elem a : w.alg.atoms()) {
        auto m = build_quotient(w.ev, checks, w.alg.principal_ultrafilter(a));
        REQUIRE(m.reps.size() == sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i)
            for (std::size_t j = 0; j < sets.size(); ++j) {
                if (i != j) CHECK(m.cls(checks[i]) != m.cls(checks[j]));
                CHECK((m.in_rel[static_cast<std::size_t>(m.cls(checks[i]))]
                               [static_cast<std::size_t>(m.cls(checks[j]))] != 0) ==
                      hf.contains(sets[j], sets[i]));
            }

        // {empty, {empty}} contains a member equal to {empty} but not every
        // member lands in {{empty}}; inclusion reads as the bounded universal.
        std::vector<int> env;
        auto wit = make_quantifier(formula_kind::f_exists, term::c(checks[3]),
                                   make_atom(formula_kind::atom_eq, term::v(0), term::c(checks[1])));
        CHECK(quotient_satisfies(m, *wit, env));
        auto all = make_quantifier(formula_kind::f_forall, term::c(checks[3]),
                                   make_atom(formula_kind::atom_in, term::v(0), term::c(checks[2])));
        CHECK(!quotient_satisfies(m, *all, env));
        auto sub = make_atom(formula_kind::atom_subset, term::c(checks[1]), term::c(checks[3]));
        CHECK(quotient_satisfies(m, *sub, env));
        auto sub_rev = make_atom(formula_kind::atom_subset, term::c(checks[3]), term::c(checks[1]));
        CHECK(!quotient_satisfies(m, *sub_rev, env));
        CHECK(env.empty());
    }
}

TEST_CASE("nice names cover exactly what the original names force") {
    world w(antichain_poset(2, true));
    for (name_id z : w.names)
        for (name_id a : w.names) {
            const name_id nn = nice_name(w.ev, w.pool, z, a);
            CHECK(atom(w, atom_kind::subset_rel, nn, a) == w.alg.one());
            CHECK(w.alg.leq(atom(w, atom_kind::subset_rel, z, a),
                            atom(w, atom_kind::eq_rel, nn, z)));
        }
    for (name_id a : w.names)
        CHECK(atom(w, atom_kind::eq_rel, nice_name(w.ev, w.pool, a, a), a) == w.alg.one());
    const name_id from_empty = nice_name(w.ev, w.pool, w.pool.empty_name(), w.names.back());
    for (const auto& [k, v] : w.pool.entries(from_empty)) CHECK(v == w.alg.zero());
}

TEST_CASE("suite value pool shrinks to the four-element subalgebra") {
    regular_open_algebra small(antichain_poset(2, true));
    const auto full = suite_value_pool(small, 8);
    CHECK(full.size() == 4);
    for (int u = 0; u < small.carrier_size(); ++u)
        CHECK(full[static_cast<std::size_t>(u)] == static_cast<ba_elem>(u));

    regular_open_algebra bigger(antichain_poset(3, true));
    REQUIRE(bigger.carrier_size() == 8);
    const auto sub = suite_value_pool(bigger, 4);
    REQUIRE(sub.size() == 4);
    CHECK(sub[0] == bigger.zero());
    CHECK(sub[3] == bigger.one());
    CHECK(std::is_sorted(sub.begin(), sub.end()));
    for (ba_elem u : sub)
        for (ba_elem v : sub) {
            auto in_pool = [&](ba_elem x) {
                return std::find(sub.begin(), sub.end(), x) != sub.end();
            };
            CHECK(in_pool(bigger.meet(u, v)));
            CHECK(in_pool(bigger.join(u, v)));
            CHECK(in_pool(bigger.neg(u)));
        }
}

TEST_CASE("bounded satisfaction matches filter membership on small posets") {
    for (const char* id : {"chain1", "antichain2_top", "cohen1"}) {
        const poset p = named_poset(id);
        auto serial = verify_delta0_satisfaction(p, 2, 2, run_mode::serial);
        CHECK(serial.pass);
        CHECK(serial.counterexample.empty());
        auto parallel = verify_delta0_satisfaction(p, 2, 2, run_mode::parallel);
        CHECK(serial.to_text() == parallel.to_text());
        CHECK(report_to_json(serial) == report_to_json(parallel));
    }
}
