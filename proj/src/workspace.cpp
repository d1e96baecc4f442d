#include "forcelab/workspace.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace forcelab {

namespace {

// Re-raises reader errors with the file name attached, keeping their codes.
[[noreturn]] void rethrow_located(const error& e, const std::string& source) {
    const std::string msg = source + ": " + std::string(e.what()).substr(e.code().size() + 2);
    if (e.code() == "UnknownReference") throw unknown_reference_error(msg);
    if (e.code() == "UnknownElement") throw unknown_element_error(msg);
    if (e.code() == "DuplicateIdentifier") throw duplicate_identifier_error(msg);
    throw parse_error(msg);
}

// Atoms up to the end of the current line; stops before newline or comment.
std::vector<sexpr> rest_of_line(sexpr_cursor& c) {
    std::vector<sexpr> out;
    while (true) {
        while (!c.at_end()) {
            const char ch = (*c.text)[c.pos];
            if (ch != ' ' && ch != '\t' && ch != '\r') break;
            ++c.pos;
            ++c.col;
        }
        if (c.at_end()) return out;
        const char ch = (*c.text)[c.pos];
        if (ch == '\n' || ch == '#') return out;
        out.push_back(parse_sexpr_at(c));
    }
}

const sexpr& only_atom(const std::vector<sexpr>& toks, const sexpr_cursor& c, const char* what) {
    if (toks.size() != 1 || !toks[0].atom)
        throw parse_error(c.source + ":" + std::to_string(c.line) + ": expected exactly one " +
                          what);
    return toks[0];
}

struct poset_builder {
    bool open = false;
    std::string id;
    int line = 0;
    std::vector<std::string> elems;
    std::vector<std::pair<int, int>> le;
    std::optional<int> top;

    std::optional<int> index(const std::string& e) const {
        const auto it = std::find(elems.begin(), elems.end(), e);
        if (it == elems.end()) return std::nullopt;
        return static_cast<int>(it - elems.begin());
    }

    int require(const sexpr& tok, const std::string& source) const {
        const auto ix = index(tok.text);
        if (!ix)
            throw parse_error(source + ":" + std::to_string(tok.line) + ":" +
                              std::to_string(tok.col) + ": unknown element '" + tok.text +
                              "' in poset '" + id + "'");
        return *ix;
    }
};

}  // namespace

workspace::workspace(run_mode mode) : mode_(mode) {}
workspace::~workspace() = default;

void workspace::check_fresh(const std::string& id, const std::string& where) {
    if (posets_.count(id) || names_.count(id) || formulas_.count(id))
        throw duplicate_identifier_error(where + ": identifier '" + id + "' already declared");
}

void workspace::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    load_text(buf.str(), path);
}

void workspace::load_text(const std::string& text, const std::string& source) {
    sexpr_cursor c{&text, source};
    poset_builder b;

    const auto flush = [&] {
        if (!b.open) return;
        check_fresh(b.id, source + ":" + std::to_string(b.line));
        try {
            poset p(b.id, b.elems, b.le, b.top);
            posets_.emplace(b.id, std::move(p));
        } catch (const error& e) {
            rethrow_located(e, source + ":" + std::to_string(b.line));
        }
        poset_order_.push_back(b.id);
        b = poset_builder{};
    };

    while (true) {
        c.skip_blank();
        if (c.at_end()) break;
        const sexpr kw = parse_sexpr_at(c);
        if (!kw.atom)
            throw parse_error(c.source + ":" + std::to_string(kw.line) +
                              ": expected a directive (poset, elem, le, top, name, formula)");
        const std::string where =
            source + ":" + std::to_string(kw.line) + ":" + std::to_string(kw.col);

        if (kw.text == "poset") {
            flush();
            const sexpr id = only_atom(rest_of_line(c), c, "poset identifier");
            b.open = true;
            b.id = id.text;
            b.line = id.line;
        } else if (kw.text == "elem" || kw.text == "le" || kw.text == "top") {
            if (!b.open) throw parse_error(where + ": '" + kw.text + "' outside a poset block");
            const std::vector<sexpr> toks = rest_of_line(c);
            for (const sexpr& t : toks)
                if (!t.atom)
                    throw parse_error(source + ":" + std::to_string(t.line) + ":" +
                                      std::to_string(t.col) + ": expected an identifier");
            if (kw.text == "elem") {
                if (toks.empty()) throw parse_error(where + ": 'elem' needs identifiers");
                for (const sexpr& t : toks) {
                    if (b.index(t.text))
                        throw parse_error(source + ":" + std::to_string(t.line) + ":" +
                                          std::to_string(t.col) + ": duplicate element '" +
                                          t.text + "'");
                    b.elems.push_back(t.text);
                }
            } else if (kw.text == "le") {
                if (toks.size() != 2)
                    throw parse_error(where + ": 'le' takes two element identifiers");
                b.le.emplace_back(b.require(toks[0], source), b.require(toks[1], source));
            } else {
                if (toks.size() != 1) throw parse_error(where + ": 'top' takes one identifier");
                if (b.top) throw parse_error(where + ": top already declared");
                b.top = b.require(toks[0], source);
            }
        } else if (kw.text == "name" || kw.text == "formula") {
            flush();
            const sexpr id = parse_sexpr_at(c);
            const sexpr pid = parse_sexpr_at(c);
            if (!id.atom || !pid.atom)
                throw parse_error(where + ": expected '" + kw.text +
                                  " <id> <poset-id> <expression>'");
            check_fresh(id.text, where);
            if (!has_poset(pid.text))
                throw unknown_reference_error(source + ":" + std::to_string(pid.line) + ":" +
                                              std::to_string(pid.col) + ": unknown poset '" +
                                              pid.text + "'");
            const sexpr expr = parse_sexpr_at(c);
            try {
                forcing_context& ctx = context(pid.text);
                if (kw.text == "name") {
                    names_[id.text] = name_entry{pid.text, read_name(ctx, expr, resolver_for(pid.text))};
                    name_order_.push_back(id.text);
                } else {
                    formulas_[id.text] =
                        formula_entry{pid.text, read_formula(ctx, expr, resolver_for(pid.text))};
                    formula_order_.push_back(id.text);
                }
            } catch (const error& e) {
                rethrow_located(e, source);
            }
        } else {
            throw parse_error(where + ": unknown directive '" + kw.text + "'");
        }
    }
    flush();
}

int workspace::load_corpus_dir() {
    const char* dir = std::getenv("FORCELAB_CORPUS");
    if (!dir || !*dir) return 0;
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw parse_error(std::string(dir) + ": FORCELAB_CORPUS is not a directory");
    std::vector<fs::path> files;
    for (const auto& ent : fs::directory_iterator(dir)) {
        if (!ent.is_regular_file()) continue;
        const std::string base = ent.path().filename().string();
        if (!base.empty() && base[0] != '.') files.push_back(ent.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) load_file(f.string());
    return static_cast<int>(files.size());
}

bool workspace::has_poset(const std::string& id) const {
    return posets_.count(id) != 0 || is_named_poset(id);
}

const poset& workspace::find_poset(const std::string& id) const {
    if (const auto it = posets_.find(id); it != posets_.end()) return it->second;
    if (const auto it = builtin_cache_.find(id); it != builtin_cache_.end()) return it->second;
    if (!is_named_poset(id)) throw unknown_reference_error("unknown poset '" + id + "'");
    return builtin_cache_.emplace(id, named_poset(id)).first->second;
}

forcing_context& workspace::context(const std::string& id) {
    if (const auto it = contexts_.find(id); it != contexts_.end()) return *it->second;
    const poset& p = find_poset(id);
    return *contexts_.emplace(id, std::make_unique<forcing_context>(p, mode_)).first->second;
}

bool workspace::has_name(const std::string& id) const { return names_.count(id) != 0; }

const workspace::name_entry& workspace::find_name(const std::string& id) const {
    const auto it = names_.find(id);
    if (it == names_.end()) throw unknown_reference_error("unknown name '" + id + "'");
    return it->second;
}

bool workspace::has_formula(const std::string& id) const { return formulas_.count(id) != 0; }

const workspace::formula_entry& workspace::find_formula(const std::string& id) const {
    const auto it = formulas_.find(id);
    if (it == formulas_.end()) throw unknown_reference_error("unknown formula '" + id + "'");
    return it->second;
}

name_resolver workspace::resolver_for(const std::string& poset_id) const {
    return [this, poset_id](const std::string& id, name_id& out) {
        const auto it = names_.find(id);
        if (it == names_.end()) return false;
        if (it->second.poset_id != poset_id)
            throw unknown_reference_error("name '" + id + "' is bound to poset '" +
                                          it->second.poset_id + "', not '" + poset_id + "'");
        out = it->second.id;
        return true;
    };
}

}  // namespace forcelab
