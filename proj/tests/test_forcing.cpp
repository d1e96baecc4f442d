#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "forcelab/corpus.hpp"
#include "forcelab/forcing.hpp"

using namespace forcelab;

namespace {

std::vector<name_id> standard_names(forcing_context& ctx, int max_rank = 2) {
    auto names = ctx.names.enumerate(max_rank, suite_value_pool(ctx.alg));
    ctx.ev.ensure_names(names);
    return names;
}

formula_ptr in_generic(forcing_context& ctx, int p) {
    const name_id check = ctx.names.check_name(ctx.hf, ctx.hf.nat(p));
    return make_atom(formula_kind::atom_in, term::c(check), term::c(ctx.names.generic_name(ctx.hf)));
}

}  // namespace

TEST_CASE("valuating a check name recovers its set") {
    forcing_context ctx(named_poset("cohen2"));
    std::vector<hf_id> xs = {ctx.hf.empty(), ctx.hf.nat(1), ctx.hf.nat(3),
                             ctx.hf.kpair(ctx.hf.nat(1), ctx.hf.empty()),
                             ctx.hf.make({ctx.hf.nat(2)})};
    std::vector<name_id> checks;
    for (const hf_id x : xs) checks.push_back(ctx.names.check_name(ctx.hf, x));
    for (const cond_mask g : ctx.base().generic_filters()) {
        valuation val(ctx, g);
        for (std::size_t i = 0; i < xs.size(); ++i) CHECK(val.value(checks[i]) == xs[i]);
    }
}

TEST_CASE("the generic name valuates to the filter itself") {
    for (const char* id : {"cohen2", "antichain3_top", "chain3"}) {
        forcing_context ctx(named_poset(id));
        const name_id gdot = ctx.names.generic_name(ctx.hf);
        for (const cond_mask g : ctx.base().generic_filters()) {
            std::vector<hf_id> conds;
            for (int p = 0; p < ctx.base().size(); ++p)
                if (has_bit(g, p)) conds.push_back(ctx.hf.nat(p));
            const hf_id expect = ctx.hf.make(std::move(conds));
            CHECK(valuate(ctx, g, gdot) == expect);
        }
    }
}

TEST_CASE("valuation rank stays below the name rank") {
    forcing_context ctx(named_poset("cohen2"));
    auto names = standard_names(ctx);
    names.push_back(ctx.names.generic_name(ctx.hf));
    names.push_back(ctx.names.op_name(names[1], names[2]));
    for (const cond_mask g : ctx.base().generic_filters()) {
        valuation val(ctx, g);
        for (const name_id t : names) CHECK(ctx.hf.rank(val.value(t)) < ctx.names.brank(t));
    }
}

TEST_CASE("valuation images are transitive families") {
    forcing_context ctx(named_poset("cohen2"));
    const auto names = standard_names(ctx);
    for (const cond_mask g : ctx.base().generic_filters()) {
        valuation val(ctx, g);
        std::set<hf_id> image;
        for (const name_id t : names) image.insert(val.value(t));
        for (const hf_id x : image)
            for (const hf_id m : ctx.hf.members(x)) CHECK(image.count(m) == 1);
    }
}

TEST_CASE("worked conditions on the binary tree") {
    forcing_context ctx(named_poset("cohen2"));
    const auto names = standard_names(ctx);

    SUBCASE("the top condition forces every self-identity") {
        const int top = ctx.base().top().value();
        for (const name_id t : names) {
            const auto f = make_atom(formula_kind::atom_eq, term::c(t), term::c(t));
            CHECK(forces(ctx, top, *f));
        }
    }

    SUBCASE("each condition forces its own membership in the generic") {
        for (int p = 0; p < ctx.base().size(); ++p) {
            const auto f = in_generic(ctx, p);
            std::vector<name_id> env;
            CHECK(ctx.ev.bval(*f, env) == ctx.alg.embed(p));
            CHECK(forces(ctx, p, *f));
        }
    }

    SUBCASE("a condition decides nothing about its proper extensions") {
        const int zero = ctx.base().require_index("0");
        const int zerozero = ctx.base().require_index("00");
        const auto f = in_generic(ctx, zerozero);
        CHECK(forces(ctx, zerozero, *f));
        CHECK_FALSE(forces(ctx, zero, *f));
        CHECK_FALSE(forces(ctx, zero, *make_not(f->clone())));
    }
}

TEST_CASE("both routes agree on sampled formulas") {
    for (const char* id : {"chain2", "antichain2_top", "cohen1"}) {
        forcing_context ctx(named_poset(id));
        const auto names = standard_names(ctx);
        const auto corpus = formula_corpus::build(ctx.names, names, 3, 11, 400, 100);
        for (std::int64_t i = 0; i < corpus.size(); i += 7) {
            const auto f = corpus.at(i);
            for (int p = 0; p < ctx.base().size(); ++p)
                CHECK(forces(ctx, p, *f) == forces_by_recursion(ctx, p, *f));
        }
    }
}

TEST_CASE("hf truth matches the two-element algebra on check names") {
    forcing_context ctx(named_poset("chain1"));
    REQUIRE(ctx.alg.carrier_size() == 2);
    std::vector<name_id> names;
    for (int k = 0; k < 3; ++k) names.push_back(ctx.names.check_name(ctx.hf, ctx.hf.nat(k)));
    names.push_back(ctx.names.check_name(ctx.hf, ctx.hf.kpair(ctx.hf.empty(), ctx.hf.nat(1))));
    ctx.ev.ensure_names(names);
    const auto corpus = formula_corpus::build(ctx.names, names, 3, 5, 2000, 100);
    const cond_mask g = ctx.base().generic_filters().at(0);
    valuation val(ctx, g);
    val.ensure(names);
    for (std::int64_t i = 0; i < corpus.size(); ++i) {
        const auto f = corpus.at(i);
        std::vector<name_id> env;
        std::vector<hf_id> henv;
        CHECK(hf_eval(ctx.hf, *f, val, henv) == (ctx.ev.bval(*f, env) == ctx.alg.one()));
    }
}

TEST_CASE("valuations are stable under a complete subposet") {
    forcing_context sub(named_poset("cohen1"));
    forcing_context big(named_poset("cohen2"));
    std::vector<int> map;
    for (int i = 0; i < sub.base().size(); ++i)
        map.push_back(big.base().require_index(sub.base().elem(i)));
    REQUIRE(check_embedding(sub.base(), big.base(), map).complete_embedding);
    const auto induced = induce_algebra_embedding(sub.alg, big.alg, map);
    REQUIRE(induced.boolean_embedding);
    REQUIRE(induced.square_commutes);

    const auto names = standard_names(sub);
    name_transport lift(sub.names, big.names, induced.j);
    std::vector<name_id> lifted;
    for (const name_id t : names) lifted.push_back(lift.apply(t));
    for (const cond_mask h : big.base().generic_filters()) {
        const cond_mask g = pull_back_generic(sub.base(), big.base(), map, h);
        REQUIRE(sub.base().generic(g));
        valuation below(sub, g);
        valuation above(big, h);
        for (std::size_t i = 0; i < names.size(); ++i)
            CHECK(sub.hf.render(below.value(names[i])) == big.hf.render(above.value(lifted[i])));
    }
}

TEST_CASE("nice names valuate to the named subset") {
    forcing_context ctx(named_poset("cohen2"));
    const auto names = standard_names(ctx);
    const auto generics = ctx.base().generic_filters();
    for (const name_id z : names)
        for (const name_id a : names) {
            const name_id nice = nice_name(ctx.ev, ctx.names, z, a);
            for (const cond_mask g : generics) {
                valuation val(ctx, g);
                const hf_id vn = val.value(nice);
                const hf_id vz = val.value(z);
                const hf_id va = val.value(a);
                CHECK(ctx.hf.subset(vn, va));
                CHECK(ctx.hf.subset(vn, vz));
                if (ctx.hf.subset(vz, va)) CHECK(vn == vz);
            }
        }
}

TEST_CASE("conditions and filters are validated") {
    forcing_context ctx(named_poset("antichain2_top"));
    const auto names = standard_names(ctx);
    const auto f = make_atom(formula_kind::atom_eq, term::c(names[0]), term::c(names[0]));
    CHECK_THROWS_AS(forces(ctx, -1, *f), unknown_element_error);
    CHECK_THROWS_AS(forces(ctx, ctx.base().size(), *f), unknown_element_error);
    CHECK_THROWS_AS(valuate(ctx, ctx.base().all(), names[0]), not_generic_error);
    valuation val(ctx, ctx.base().generic_filters().at(0));
    CHECK_THROWS_AS(val.at(names[0]), unknown_reference_error);
    val.ensure(names);
    CHECK(val.at(names[0]) == ctx.hf.empty());
    const auto open_f = make_atom(formula_kind::atom_in, term::v(0), term::c(names[1]));
    std::vector<hf_id> henv;
    CHECK_THROWS_AS(hf_eval(ctx.hf, *open_f, val, henv), unbound_variable_error);
}

TEST_CASE("forcing suites pass with identical reports in both modes") {
    for (const char* id : {"cohen1", "antichain2_top"}) {
        forcing_context serial_ctx(named_poset(id));
        auto serial_theorem = verify_forcing_theorem(serial_ctx, 2, 2, run_mode::serial);
        CHECK(serial_theorem.pass);
        CHECK(serial_theorem.counterexample.empty());

        forcing_context parallel_ctx(named_poset(id), run_mode::parallel);
        auto parallel_theorem = verify_forcing_theorem(parallel_ctx, 2, 2, run_mode::parallel);
        CHECK(serial_theorem.to_text() == parallel_theorem.to_text());

        forcing_context serial_facts_ctx(named_poset(id));
        auto serial_facts = verify_forcing_facts(serial_facts_ctx, 2, 2, run_mode::serial);
        CHECK(serial_facts.pass);

        forcing_context parallel_facts_ctx(named_poset(id), run_mode::parallel);
        auto parallel_facts = verify_forcing_facts(parallel_facts_ctx, 2, 2, run_mode::parallel);
        CHECK(serial_facts.to_text() == parallel_facts.to_text());
        CHECK(report_to_json(serial_facts) == report_to_json(parallel_facts));
    }
}

TEST_CASE("deep suites stay green on the binary tree") {
    forcing_context ctx(named_poset("cohen2"), run_mode::parallel);
    const auto theorem = verify_forcing_theorem(ctx, 2, 3, run_mode::parallel, 20260822, 5000, 100);
    CHECK(theorem.pass);
    forcing_context fctx(named_poset("cohen2"), run_mode::parallel);
    const auto facts = verify_forcing_facts(fctx, 2, 3, run_mode::parallel, 20260822, 5000, 100);
    CHECK(facts.pass);
}
