#include "forcelab/sexpr.hpp"

#include <cctype>
#include <charconv>

namespace forcelab {

namespace {

std::string at(const sexpr& e) {
    return "line " + std::to_string(e.line) + " col " + std::to_string(e.col) + ": ";
}

bool is_atom_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '#' &&
           c != '"';
}

void step(sexpr_cursor& c) {
    if ((*c.text)[c.pos] == '\n') {
        ++c.line;
        c.col = 1;
    } else {
        ++c.col;
    }
    ++c.pos;
}

}  // namespace

void sexpr_cursor::skip_blank() {
    while (!at_end()) {
        const char c = (*text)[pos];
        if (c == '#') {
            while (!at_end() && (*text)[pos] != '\n') step(*this);
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            step(*this);
        } else {
            return;
        }
    }
}

std::string sexpr_cursor::where() const {
    return source + ":" + std::to_string(line) + ":" + std::to_string(col);
}

sexpr parse_sexpr_at(sexpr_cursor& c) {
    c.skip_blank();
    if (c.at_end()) throw parse_error(c.where() + ": expected an expression");
    sexpr e;
    e.line = c.line;
    e.col = c.col;
    const char first = (*c.text)[c.pos];
    if (first == ')') throw parse_error(c.where() + ": unmatched ')'");
    if (first == '(') {
        step(c);
        while (true) {
            c.skip_blank();
            if (c.at_end())
                throw parse_error(c.where() + ": unclosed '(' from line " + std::to_string(e.line));
            if ((*c.text)[c.pos] == ')') {
                step(c);
                return e;
            }
            e.items.push_back(parse_sexpr_at(c));
        }
    }
    e.atom = true;
    if (first == '"') {
        step(c);
        while (!c.at_end() && (*c.text)[c.pos] != '"' && (*c.text)[c.pos] != '\n') {
            e.text += (*c.text)[c.pos];
            step(c);
        }
        if (c.at_end() || (*c.text)[c.pos] != '"')
            throw parse_error(c.where() + ": unterminated string");
        step(c);
        return e;
    }
    while (!c.at_end() && is_atom_char((*c.text)[c.pos])) {
        e.text += (*c.text)[c.pos];
        step(c);
    }
    return e;
}

sexpr parse_sexpr(const std::string& text, const std::string& source) {
    sexpr_cursor c{&text, source};
    sexpr e = parse_sexpr_at(c);
    c.skip_blank();
    if (!c.at_end()) throw parse_error(c.where() + ": trailing content after expression");
    return e;
}

std::vector<sexpr> parse_sexpr_list(const std::string& text, const std::string& source) {
    sexpr_cursor c{&text, source};
    std::vector<sexpr> out;
    while (true) {
        c.skip_blank();
        if (c.at_end()) return out;
        out.push_back(parse_sexpr_at(c));
    }
}

namespace {

const sexpr& arg(const sexpr& e, std::size_t i, int want, const char* form) {
    if (e.items.size() != static_cast<std::size_t>(want) + 1)
        throw parse_error(at(e) + "(" + form + " ...) takes " + std::to_string(want) +
                          " argument" + (want == 1 ? "" : "s"));
    return e.items[i];
}

int read_numeral(const sexpr& e) {
    int k = 0;
    const auto [p, ec] = std::from_chars(e.text.data(), e.text.data() + e.text.size(), k);
    if (ec != std::errc{} || p != e.text.data() + e.text.size() || k < 0)
        throw parse_error(at(e) + "expected a natural number, got '" + e.text + "'");
    if (k > 4096) throw parse_error(at(e) + "numeral " + e.text + " is too large");
    return k;
}

}  // namespace

hf_id read_hf(hf_pool& hf, const sexpr& e) {
    if (e.atom) return hf.nat(read_numeral(e));
    if (e.is("set")) {
        std::vector<hf_id> members;
        for (std::size_t i = 1; i < e.items.size(); ++i)
            members.push_back(read_hf(hf, e.items[i]));
        return hf.make(std::move(members));
    }
    if (e.is("pair")) return hf.kpair(read_hf(hf, arg(e, 1, 2, "pair")), read_hf(hf, e.items[2]));
    throw parse_error(at(e) + "expected a set literal: a numeral, (set ...), or (pair ...)");
}

ba_elem read_elem(const forcing_context& ctx, const sexpr& e) {
    if (e.atom) {
        if (e.text == "0") return ctx.alg.zero();
        if (e.text == "1") return ctx.alg.one();
        throw parse_error(at(e) + "expected a completion element, got '" + e.text + "'");
    }
    if (e.is("e")) {
        const sexpr& id = arg(e, 1, 1, "e");
        if (!id.atom) throw parse_error(at(id) + "(e ...) takes a condition identifier");
        const auto ix = ctx.base().index(id.text);
        if (!ix)
            throw unknown_element_error(at(id) + "no condition '" + id.text + "' in poset '" +
                                        ctx.base().name() + "'");
        return ctx.alg.embed(*ix);
    }
    if (e.is("join") || e.is("meet")) {
        const bool join = e.is("join");
        ba_elem acc = join ? ctx.alg.zero() : ctx.alg.one();
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            const ba_elem u = read_elem(ctx, e.items[i]);
            acc = join ? ctx.alg.join(acc, u) : ctx.alg.meet(acc, u);
        }
        return acc;
    }
    if (e.is("neg")) return ctx.alg.neg(read_elem(ctx, arg(e, 1, 1, "neg")));
    throw parse_error(at(e) + "expected 0, 1, (e ...), (join ...), (meet ...), or (neg ...)");
}

name_id read_name(forcing_context& ctx, const sexpr& e, const name_resolver& resolve) {
    if (e.atom) {
        name_id out = 0;
        if (resolve && resolve(e.text, out)) return out;
        throw unknown_reference_error(at(e) + "unknown name '" + e.text + "'");
    }
    if (e.is("name")) {
        std::vector<std::pair<name_id, ba_elem>> entries;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            const sexpr& ent = e.items[i];
            if (!ent.is("entry") || ent.items.size() != 3)
                throw parse_error(at(ent) + "expected (entry <name> <elem>)");
            entries.emplace_back(read_name(ctx, ent.items[1], resolve),
                                 read_elem(ctx, ent.items[2]));
        }
        return ctx.names.make(std::move(entries));
    }
    if (e.is("check")) return ctx.names.check_name(ctx.hf, read_hf(ctx.hf, arg(e, 1, 1, "check")));
    if (e.is("gdot")) {
        if (e.items.size() != 1) throw parse_error(at(e) + "(gdot) takes no arguments");
        return ctx.names.generic_name(ctx.hf);
    }
    if (e.is("op"))
        return ctx.names.op_name(read_name(ctx, arg(e, 1, 2, "op"), resolve),
                                 read_name(ctx, e.items[2], resolve));
    throw parse_error(at(e) + "expected (name ...), (check ...), (gdot), or (op ...)");
}

namespace {

term read_term(forcing_context& ctx, const sexpr& e, const name_resolver& resolve,
               const std::vector<std::string>& bound) {
    if (e.atom) {
        for (std::size_t i = bound.size(); i-- > 0;)
            if (bound[i] == e.text) return term::v(static_cast<int>(bound.size() - 1 - i));
        name_id out = 0;
        if (resolve && resolve(e.text, out)) return term::c(out);
        throw unknown_reference_error(at(e) + "unknown term '" + e.text + "'");
    }
    return term::c(read_name(ctx, e, resolve));
}

formula_ptr read_formula_rec(forcing_context& ctx, const sexpr& e, const name_resolver& resolve,
                             std::vector<std::string>& bound) {
    if (e.atom) throw parse_error(at(e) + "expected a formula, got '" + e.text + "'");
    if (e.is("eq") || e.is("in") || e.is("subset")) {
        const formula_kind k = e.is("eq")   ? formula_kind::atom_eq
                               : e.is("in") ? formula_kind::atom_in
                                            : formula_kind::atom_subset;
        const char* form = e.is("eq") ? "eq" : e.is("in") ? "in" : "subset";
        return make_atom(k, read_term(ctx, arg(e, 1, 2, form), resolve, bound),
                         read_term(ctx, e.items[2], resolve, bound));
    }
    if (e.is("not"))
        return make_not(read_formula_rec(ctx, arg(e, 1, 1, "not"), resolve, bound));
    if (e.is("and") || e.is("or") || e.is("implies")) {
        const formula_kind k = e.is("and")  ? formula_kind::f_and
                               : e.is("or") ? formula_kind::f_or
                                            : formula_kind::f_implies;
        const char* form = e.is("and") ? "and" : e.is("or") ? "or" : "implies";
        formula_ptr l = read_formula_rec(ctx, arg(e, 1, 2, form), resolve, bound);
        return make_binary(k, std::move(l), read_formula_rec(ctx, e.items[2], resolve, bound));
    }
    if (e.is("exists") || e.is("forall")) {
        const formula_kind k = e.is("exists") ? formula_kind::f_exists : formula_kind::f_forall;
        const char* form = e.is("exists") ? "exists" : "forall";
        const sexpr& var = arg(e, 1, 3, form);
        if (!var.atom) throw parse_error(at(var) + "binder variable must be an identifier");
        const term dom = read_term(ctx, e.items[2], resolve, bound);
        bound.push_back(var.text);
        formula_ptr body = read_formula_rec(ctx, e.items[3], resolve, bound);
        bound.pop_back();
        return make_quantifier(k, dom, std::move(body));
    }
    throw parse_error(at(e) + "expected (eq ...), (in ...), (subset ...), (not ...), (and ...), " +
                      "(or ...), (implies ...), (exists x t f), or (forall x t f)");
}

}  // namespace

formula_ptr read_formula(forcing_context& ctx, const sexpr& e, const name_resolver& resolve) {
    std::vector<std::string> bound;
    return read_formula_rec(ctx, e, resolve, bound);
}

}  // namespace forcelab
