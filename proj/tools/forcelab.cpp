#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "forcelab/suites.hpp"
#include "forcelab/workspace.hpp"

using namespace forcelab;

namespace {

std::string mask_ids(const poset& p, cond_mask m) {
    std::string out = "{";
    for (int i = 0; i < p.size(); ++i)
        if (has_bit(m, i)) {
            if (out.size() > 1) out += ", ";
            out += p.elem(i);
        }
    return out + "}";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Inline s-expression or a declared identifier bound to the same poset.
name_id get_name(workspace& ws, const std::string& pid, const std::string& arg) {
    forcing_context& ctx = ws.context(pid);
    if (!arg.empty() && arg[0] == '(')
        return read_name(ctx, parse_sexpr(arg, "<name>"), ws.resolver_for(pid));
    const auto& ne = ws.find_name(arg);
    if (ne.poset_id != pid)
        throw invalid_argument_error("name '" + arg + "' is bound to poset '" + ne.poset_id +
                                     "', not '" + pid + "'");
    return ne.id;
}

formula_ptr get_formula(workspace& ws, const std::string& pid, const std::string& arg) {
    forcing_context& ctx = ws.context(pid);
    if (!arg.empty() && arg[0] == '(')
        return read_formula(ctx, parse_sexpr(arg, "<formula>"), ws.resolver_for(pid));
    const auto& fe = ws.find_formula(arg);
    if (fe.poset_id != pid)
        throw invalid_argument_error("formula '" + arg + "' is bound to poset '" + fe.poset_id +
                                     "', not '" + pid + "'");
    return fe.f->clone();
}

suite_report run_validate(workspace& ws, int files) {
    suite_report r;
    r.suite = "validate";
    r.bump("files", files);
    r.bump("posets", static_cast<std::int64_t>(ws.poset_ids().size()));
    r.bump("names", static_cast<std::int64_t>(ws.name_ids().size()));
    r.bump("formulas", static_cast<std::int64_t>(ws.formula_ids().size()));
    for (const std::string& id : ws.poset_ids()) {
        const poset& p = ws.find_poset(id);
        std::string line = "poset " + id + ": " + std::to_string(p.size()) + " conditions";
        if (const auto t = p.top()) line += ", top " + p.elem(*t);
        r.note(std::move(line));
    }
    for (const std::string& id : ws.name_ids()) {
        const auto& ne = ws.find_name(id);
        r.note("name " + id + " over " + ne.poset_id + ": rank " +
               std::to_string(ws.context(ne.poset_id).names.brank(ne.id)));
    }
    for (const std::string& id : ws.formula_ids()) {
        const auto& fe = ws.find_formula(id);
        r.note("formula " + id + " over " + fe.poset_id + ": height " +
               std::to_string(fe.f->height()));
    }
    return r;
}

suite_report run_complete(workspace& ws, const std::string& id) {
    suite_report r;
    r.suite = "complete";
    forcing_context& ctx = ws.context(id);
    const poset& p = ctx.base();
    r.bump("conditions", p.size());
    r.bump("carrier", ctx.alg.carrier_size());
    r.bump("atoms", static_cast<std::int64_t>(ctx.alg.atoms().size()));
    for (int i = 0; i < p.size(); ++i)
        r.note("e " + p.elem(i) + " = " + mask_ids(p, ctx.alg.mask_of(ctx.alg.embed(i))));
    if (ctx.alg.carrier_size() <= 64)
        for (ba_elem u = 0; u < static_cast<ba_elem>(ctx.alg.carrier_size()); ++u)
            r.note("u" + std::to_string(u) + " = " + mask_ids(p, ctx.alg.mask_of(u)));
    return r;
}

suite_report run_generics(workspace& ws, const std::string& id) {
    suite_report r;
    r.suite = "generics";
    const poset& p = ws.find_poset(id);
    const std::vector<cond_mask> gs = p.generic_filters();
    r.bump("generics", static_cast<std::int64_t>(gs.size()));
    for (std::size_t k = 0; k < gs.size(); ++k)
        r.note("G" + std::to_string(k) + " = " + mask_ids(p, gs[k]));
    return r;
}

suite_report run_bval(workspace& ws, const std::string& pid, const std::string& farg) {
    suite_report r;
    r.suite = "bval";
    forcing_context& ctx = ws.context(pid);
    const formula_ptr f = get_formula(ws, pid, farg);
    std::vector<name_id> env;
    const ba_elem v = ctx.ev.bval(*f, env);
    r.bump("height", f->height());
    r.bump("value_index", v);
    r.note("value = " + mask_ids(ctx.base(), ctx.alg.mask_of(v)) +
           (v == ctx.alg.one() ? " (one)" : v == ctx.alg.zero() ? " (zero)" : ""));
    return r;
}

suite_report run_forces(workspace& ws, const std::string& pid, const std::string& cond,
                        const std::string& farg) {
    suite_report r;
    r.suite = "forces";
    forcing_context& ctx = ws.context(pid);
    const int c = ctx.base().require_index(cond);
    const formula_ptr f = get_formula(ws, pid, farg);
    const bool yes = forces(ctx, c, *f);
    r.bump("forced", yes ? 1 : 0);
    r.note(cond + " forces the formula: " + (yes ? "yes" : "no"));
    return r;
}

suite_report run_valuate(workspace& ws, const std::string& pid, int index,
                         const std::string& narg) {
    suite_report r;
    r.suite = "valuate";
    forcing_context& ctx = ws.context(pid);
    const std::vector<cond_mask> gs = ctx.base().generic_filters();
    if (index < 0 || index >= static_cast<int>(gs.size()))
        throw invalid_argument_error("generic index " + std::to_string(index) +
                                     " out of range; poset has " + std::to_string(gs.size()) +
                                     " generic filters");
    const name_id n = get_name(ws, pid, narg);
    valuation val(ctx, gs[static_cast<std::size_t>(index)]);
    const hf_id x = val.value(n);
    r.bump("generic_index", index);
    r.bump("hf_rank", ctx.hf.rank(x));
    r.note("G = " + mask_ids(ctx.base(), gs[static_cast<std::size_t>(index)]));
    r.note("i_G = " + ctx.hf.render(x));
    return r;
}

void describe_carrier(suite_report& r, const poset& q) {
    if (q.size() <= 64)
        for (int i = 0; i < q.size(); ++i) r.note("condition " + q.elem(i));
    if (const auto t = q.top()) r.note("top " + q.elem(*t));
}

suite_report run_star(workspace& ws, const std::vector<std::string>& args) {
    suite_report r;
    r.suite = "star";
    workspace local(run_mode::parallel);
    forcing_context* ctx = nullptr;
    name_id n = 0;
    if (args.size() == 1) {
        const sexpr e = parse_sexpr(slurp(args[0]), args[0]);
        if (!e.is("star") || e.items.size() != 3 || !e.items[1].atom || !e.items[2].atom)
            throw parse_error(args[0] + ": expected (star <poset-file> <name-file>)");
        const auto dir = std::filesystem::path(args[0]).parent_path();
        local.load_file((dir / e.items[1].text).string());
        if (local.poset_ids().empty())
            throw parse_error(e.items[1].text + ": no poset declared");
        ctx = &local.context(local.poset_ids()[0]);
        n = read_name(*ctx, parse_sexpr(slurp((dir / e.items[2].text).string()),
                                        e.items[2].text));
    } else {
        ctx = &ws.context(args[0]);
        n = get_name(ws, args[0], args[1]);
    }
    const poset_name pn = validate_poset_name(*ctx, n);
    const two_step ts = star(*ctx, pn);
    r.bump("first_conditions", ctx->base().size());
    r.bump("second_elements", static_cast<std::int64_t>(pn.elements.size()));
    r.bump("certificates", static_cast<std::int64_t>(pn.certificates.size()));
    r.bump("carrier", ts.carrier.size());
    describe_carrier(r, ts.carrier);
    return r;
}

suite_report run_product(workspace& ws, const std::string& a, const std::string& b) {
    suite_report r;
    r.suite = "product";
    const product_poset pp = product(ws.find_poset(a), ws.find_poset(b));
    r.bump("left", pp.left_size);
    r.bump("right", pp.right_size);
    r.bump("carrier", pp.carrier.size());
    describe_carrier(r, pp.carrier);
    return r;
}

suite_report run_iterate(workspace&, const std::string& path) {
    suite_report r;
    r.suite = "iterate";
    const sexpr e = parse_sexpr(slurp(path), path);
    if (!e.is("iterate")) throw parse_error(path + ": expected (iterate <name-file> ...)");
    const auto dir = std::filesystem::path(path).parent_path();
    std::vector<stage_spec> stages;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        if (!e.items[i].atom) throw parse_error(path + ": stage entries must be file names");
        const std::string file = (dir / e.items[i].text).string();
        const sexpr parsed = parse_sexpr(slurp(file), file);
        stages.push_back([parsed](forcing_context& ctx) { return read_name(ctx, parsed); });
    }
    const finite_iteration it = iterate(stages, std::max(4, static_cast<int>(stages.size()) + 1));
    r.bump("stages", it.length());
    for (int b = 0; b <= it.length(); ++b) {
        r.bump("stage" + std::to_string(b) + "_size", it.stage(b).size());
        if (it.stage(b).size() <= 32)
            for (int i = 0; i < it.stage(b).size(); ++i)
                r.note("stage " + std::to_string(b) + ": " + it.stage(b).elem(i));
    }
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forcing over finite preorders: completions, names, suites"};
    app.require_subcommand(1);
    std::string out_format = "text";
    suite_options opt;
    opt.mode = run_mode::parallel;
    std::string suite_flag;
    std::vector<std::string> files;
    app.add_option("--out", out_format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--max-rank", opt.max_rank, "name rank bound");
    app.add_option("--max-depth", opt.max_depth, "formula height bound");
    app.add_option("--max-poset", opt.max_poset, "poset size bound for default corpora");
    app.add_option("--seed", opt.seed, "sampling seed");
    app.add_option("--suite", suite_flag, "suite to check");
    app.add_option("-f,--file", files, "workspace files to load first");

    auto* validate = app.add_subcommand("validate", "parse files and list declarations");
    std::vector<std::string> validate_files;
    validate->add_option("files", validate_files, "workspace files")->required();

    auto* complete = app.add_subcommand("complete", "regular-open completion of a poset");
    std::string complete_id;
    complete->add_option("poset", complete_id)->required();

    auto* generics = app.add_subcommand("generics", "generic filters of a poset");
    std::string generics_id;
    generics->add_option("poset", generics_id)->required();

    auto* bval = app.add_subcommand("bval", "Boolean value of a closed formula");
    std::string bval_id, bval_formula;
    bval->add_option("poset", bval_id)->required();
    bval->add_option("formula", bval_formula, "identifier or inline expression")->required();

    auto* forces_cmd = app.add_subcommand("forces", "does a condition force a formula");
    std::string forces_id, forces_cond, forces_formula;
    forces_cmd->add_option("poset", forces_id)->required();
    forces_cmd->add_option("condition", forces_cond)->required();
    forces_cmd->add_option("formula", forces_formula)->required();

    auto* valuate_cmd = app.add_subcommand("valuate", "value of a name under a generic filter");
    std::string valuate_id, valuate_name;
    int valuate_index = 0;
    valuate_cmd->add_option("poset", valuate_id)->required();
    valuate_cmd->add_option("generic", valuate_index, "index into the sorted filters")->required();
    valuate_cmd->add_option("name", valuate_name)->required();

    auto* star_cmd = app.add_subcommand("star", "two-step order from a certified poset name");
    std::vector<std::string> star_args;
    star_cmd->add_option("args", star_args, "<spec-file> or <poset> <name>")
        ->expected(1, 2)
        ->required();

    auto* product_cmd = app.add_subcommand("product", "product of two posets");
    std::string product_left, product_right;
    product_cmd->add_option("left", product_left)->required();
    product_cmd->add_option("right", product_right)->required();

    auto* iterate_cmd = app.add_subcommand("iterate", "finite iteration from a spec file");
    std::string iterate_file;
    iterate_cmd->add_option("spec", iterate_file)->required();

    auto* check = app.add_subcommand("check", "run verification suites");
    std::string check_suite;
    std::vector<std::string> check_posets;
    check->add_option("suite", check_suite, "suite name; all suites when omitted");
    check->add_option("--poset", check_posets, "explicit target posets");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        workspace ws(run_mode::parallel);
        for (const std::string& f : files) ws.load_file(f);
        for (const std::string& f : validate_files) ws.load_file(f);
        ws.load_corpus_dir();

        std::vector<suite_report> reports;
        if (app.got_subcommand(validate)) {
            reports.push_back(
                run_validate(ws, static_cast<int>(files.size() + validate_files.size())));
        } else if (app.got_subcommand(complete)) {
            reports.push_back(run_complete(ws, complete_id));
        } else if (app.got_subcommand(generics)) {
            reports.push_back(run_generics(ws, generics_id));
        } else if (app.got_subcommand(bval)) {
            reports.push_back(run_bval(ws, bval_id, bval_formula));
        } else if (app.got_subcommand(forces_cmd)) {
            reports.push_back(run_forces(ws, forces_id, forces_cond, forces_formula));
        } else if (app.got_subcommand(valuate_cmd)) {
            reports.push_back(run_valuate(ws, valuate_id, valuate_index, valuate_name));
        } else if (app.got_subcommand(star_cmd)) {
            reports.push_back(run_star(ws, star_args));
        } else if (app.got_subcommand(product_cmd)) {
            reports.push_back(run_product(ws, product_left, product_right));
        } else if (app.got_subcommand(iterate_cmd)) {
            reports.push_back(run_iterate(ws, iterate_file));
        } else if (app.got_subcommand(check)) {
            if (!check_suite.empty() && !suite_flag.empty() && check_suite != suite_flag)
                throw invalid_argument_error("conflicting suites '" + check_suite + "' and '" +
                                             suite_flag + "'");
            const std::string chosen = !check_suite.empty() ? check_suite : suite_flag;
            if (!chosen.empty() && !is_suite(chosen))
                throw unknown_reference_error("unknown suite '" + chosen + "'");
            for (const std::string& id : check_posets)
                opt.posets.push_back(ws.find_poset(id));
            const std::vector<std::string> chosen_all =
                chosen.empty() ? suite_names() : std::vector<std::string>{chosen};
            for (const std::string& id : chosen_all)
                for (suite_report& r : run_suite(id, opt)) reports.push_back(std::move(r));
        }

        bool all = true;
        for (const suite_report& r : reports) all = all && r.pass;
        if (out_format == "json") {
            std::cout << reports_to_json(reports);
        } else {
            for (const suite_report& r : reports) std::cout << r.to_text();
        }
        return all ? 0 : 1;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
