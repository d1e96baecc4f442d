#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "forcelab/corpus.hpp"
#include "forcelab/suites.hpp"
#include "forcelab/workspace.hpp"

using namespace forcelab;

namespace {

std::string error_text(const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("s-expressions tokenize atoms, strings, and comments") {
    const sexpr e = parse_sexpr("(a \"b c\" # trailing words\n (d))", "<t>");
    REQUIRE(e.items.size() == 3);
    CHECK(e.items[0].text == "a");
    CHECK(e.items[1].text == "b c");
    CHECK(!e.items[2].atom);
    CHECK(e.items[2].items[0].text == "d");
    CHECK(e.items[2].line == 2);

    CHECK(parse_sexpr_list("a (b) c", "<t>").size() == 3);
    CHECK(contains(error_text([] { parse_sexpr("(a", "<t>"); }), "<t>:1:3"));
    CHECK(contains(error_text([] { parse_sexpr(")", "<t>"); }), "unmatched"));
    CHECK(contains(error_text([] { parse_sexpr("a b", "<t>"); }), "trailing"));
    CHECK(contains(error_text([] { parse_sexpr("\"open", "<t>"); }), "unterminated"));
}

TEST_CASE("poset blocks close under generators and honor the declared top") {
    workspace ws;
    ws.load_text(
        "# three conditions under a top\n"
        "poset t3\n"
        "elem a b t\n"
        "le a t\n"
        "le b t\n"
        "top t\n",
        "<t>");
    const poset& p = ws.find_poset("t3");
    CHECK(p.size() == 3);
    CHECK(p.leq(0, 2));
    CHECK(!p.leq(0, 1));
    CHECK(p.top() == 2);
    CHECK(ws.poset_ids() == std::vector<std::string>{"t3"});

    CHECK(ws.has_poset("cohen2"));
    CHECK(ws.find_poset("cohen2").size() == 7);
}

TEST_CASE("loader errors point at the offending file position") {
    workspace ws;
    SUBCASE("unknown element in a generator pair") {
        const std::string msg = error_text([&] {
            ws.load_text("poset p\nelem a b\nle a z\n", "bad.fl");
        });
        CHECK(contains(msg, "ParseError"));
        CHECK(contains(msg, "bad.fl:3:6"));
        CHECK(contains(msg, "'z'"));
    }
    SUBCASE("duplicate element") {
        CHECK(contains(error_text([&] { ws.load_text("poset p\nelem a a\n", "b.fl"); }),
                       "b.fl:2:8"));
    }
    SUBCASE("directive outside a poset block") {
        CHECK(contains(error_text([&] { ws.load_text("elem a\n", "b.fl"); }), "outside"));
    }
    SUBCASE("unknown directive") {
        CHECK(contains(error_text([&] { ws.load_text("order p\n", "b.fl"); }), "'order'"));
    }
    SUBCASE("declared top that is not greatest") {
        const std::string msg =
            error_text([&] { ws.load_text("poset p\nelem a b\ntop a\n", "b.fl"); });
        CHECK(contains(msg, "ParseError"));
        CHECK(contains(msg, "b.fl:1"));
    }
    SUBCASE("duplicate identifiers across kinds") {
        ws.load_text("poset p\nelem a\n", "one.fl");
        CHECK(contains(error_text([&] { ws.load_text("name p p (gdot)", "two.fl"); }),
                       "DuplicateIdentifier"));
    }
    SUBCASE("name bound to an unknown poset") {
        CHECK(contains(error_text([&] { ws.load_text("name n nowhere (gdot)", "b.fl"); }),
                       "UnknownReference"));
    }
    SUBCASE("unknown condition inside a name expression") {
        const std::string msg = error_text(
            [&] { ws.load_text("name n cohen1 (name (entry (check 0) (e zz)))", "b.fl"); });
        CHECK(contains(msg, "UnknownElement"));
        CHECK(contains(msg, "b.fl"));
        CHECK(contains(msg, "'zz'"));
    }
}

TEST_CASE("name expressions intern into the bound poset's completion") {
    workspace ws;
    ws.load_text(
        "name g cohen1 (gdot)\n"
        "name two cohen1 (check 2)\n"
        "name folded cohen1 (name (entry (check 0) (e 0)) (entry (check 0) (e 1)))\n"
        "name op cohen1 (op two g)\n",
        "<t>");
    forcing_context& ctx = ws.context("cohen1");
    CHECK(ws.find_name("g").id == ctx.names.generic_name(ctx.hf));
    CHECK(ctx.names.decode_check(ctx.hf, ws.find_name("two").id) == ctx.hf.nat(2));

    // duplicate keys fold by join: e(0) v e(1) is the whole algebra
    const name_id folded = ws.find_name("folded").id;
    REQUIRE(ctx.names.entries(folded).size() == 1);
    CHECK(ctx.names.entries(folded)[0].second == ctx.alg.one());

    const auto op = ctx.names.decode_op(ws.find_name("op").id);
    REQUIRE(op.has_value());
    CHECK(op->first == ws.find_name("two").id);
    CHECK(op->second == ws.find_name("g").id);
}

TEST_CASE("hf literals cover numerals, sets, and pairs") {
    workspace ws;
    ws.load_text(
        "name n1 chain2 (check (set (set) (set (set))))\n"
        "name n2 chain2 (check 2)\n"
        "name n3 chain2 (check (pair 0 1))\n",
        "<t>");
    forcing_context& ctx = ws.context("chain2");
    CHECK(ws.find_name("n1").id == ws.find_name("n2").id);
    const hf_id p = *ctx.names.decode_check(ctx.hf, ws.find_name("n3").id);
    CHECK(ctx.hf.decode_pair(p) == std::pair<hf_id, hf_id>{ctx.hf.nat(0), ctx.hf.nat(1)});
}

TEST_CASE("formula variables resolve to de Bruijn indices with shadowing") {
    workspace ws;
    ws.load_text(
        "name g antichain2_top (gdot)\n"
        "formula f antichain2_top (forall x g (exists x g (in x x)))\n"
        "formula gf antichain2_top (exists y g (in y g))\n",
        "<t>");
    const formula& f = *ws.find_formula("f").f;
    REQUIRE(f.kind == formula_kind::f_forall);
    REQUIRE(f.l->kind == formula_kind::f_exists);
    const formula& atom = *f.l->l;
    // both sides refer to the inner binder
    CHECK(atom.a.is_var());
    CHECK(atom.a.var == 0);
    CHECK(atom.b.var == 0);

    const formula& gf = *ws.find_formula("gf").f;
    CHECK(gf.l->a.var == 0);
    CHECK(!gf.l->b.is_var());
    CHECK(gf.l->b.constant == ws.find_name("g").id);

    CHECK(contains(error_text([&] {
                       ws.load_text("formula bad antichain2_top (in z z)", "b.fl");
                   }),
                   "unknown term 'z'"));
}

TEST_CASE("names of one poset are invisible to another") {
    workspace ws;
    ws.load_text("name g cohen1 (gdot)\n", "<t>");
    const std::string msg = error_text(
        [&] { ws.load_text("name h cohen2 (name (entry g 1))", "<t2>"); });
    CHECK(contains(msg, "bound to poset 'cohen1'"));
}

TEST_CASE("the corpus directory loads in filename order") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "forcelab_corpus_test";
    fs::create_directories(dir);
    std::ofstream(dir / "b.fl") << "poset late\nelem x\n";
    std::ofstream(dir / "a.fl") << "poset early\nelem x y\nle x y\n";

    REQUIRE(setenv("FORCELAB_CORPUS", dir.c_str(), 1) == 0);
    workspace ws;
    CHECK(ws.load_corpus_dir() == 2);
    CHECK(ws.poset_ids() == std::vector<std::string>{"early", "late"});

    REQUIRE(unsetenv("FORCELAB_CORPUS") == 0);
    workspace fresh;
    CHECK(fresh.load_corpus_dir() == 0);
    fs::remove_all(dir);
}

TEST_CASE("suite registry dispatches every suite over explicit targets") {
    CHECK(suite_names().size() == 7);
    for (const std::string& id : suite_names()) CHECK(is_suite(id));
    CHECK(!is_suite("laws"));
    CHECK_THROWS_AS(run_suite("laws", suite_options{}), unknown_reference_error);

    suite_options opt;
    opt.posets = {named_poset("chain3"), named_poset("antichain2_top")};
    for (const char* id : {"algebra-laws", "bvm-laws", "product"}) {
        const auto rs = run_suite(id, opt);
        CHECK(rs.size() >= 1);
        for (const auto& r : rs) CHECK(r.pass);
    }
    // explicit targets yield one report per poset
    CHECK(run_suite("algebra-laws", opt).size() == 2);
    // a pair of explicit targets yields the three factor pairs
    CHECK(run_suite("product", opt).size() == 3);
}

TEST_CASE("suite reports are identical in both run modes") {
    for (const char* id : {"algebra-laws", "bvm-laws"}) {
        suite_options serial;
        serial.posets = {named_poset("cohen2")};
        suite_options parallel = serial;
        parallel.mode = run_mode::parallel;
        const auto a = run_suite(id, serial);
        const auto b = run_suite(id, parallel);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a[i].to_text() == b[i].to_text());
    }
}
