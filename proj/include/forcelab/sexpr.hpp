#pragma once

#include <functional>
#include <string>
#include <vector>

#include "forcelab/forcing.hpp"

namespace forcelab {

// One parsed s-expression node: an atom token or a parenthesized list.
// Quoted atoms keep their text without the quotes.  Positions are 1-based
// and point at the node's first character.
struct sexpr {
    bool atom = false;
    std::string text;
    std::vector<sexpr> items;
    int line = 0;
    int col = 0;

    bool is(const std::string& head) const {
        return !atom && !items.empty() && items[0].atom && items[0].text == head;
    }
};

// Tracks a position inside a source string; # starts a comment to the end
// of the line, both here and in the workspace line format.
struct sexpr_cursor {
    const std::string* text;
    std::string source;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    void skip_blank();
    bool at_end() const { return pos >= text->size(); }
    std::string where() const;
};

// Reads one expression at the cursor and leaves it after the expression.
sexpr parse_sexpr_at(sexpr_cursor& c);

// Reads exactly one expression; trailing content is an error.
sexpr parse_sexpr(const std::string& text, const std::string& source);

// Reads every top-level expression.
std::vector<sexpr> parse_sexpr_list(const std::string& text, const std::string& source);

// Resolves bare identifiers in name and formula expressions; returns false
// for identifiers it does not know.
using name_resolver = std::function<bool(const std::string& id, name_id& out)>;

// Hereditarily finite literals: a natural number (von Neumann numeral),
// (set <hf> ...), or (pair <hf> <hf>).
hf_id read_hf(hf_pool& hf, const sexpr& e);

// 0, 1, (e <condition>), (join <elem> ...), (meet <elem> ...), (neg <elem>).
ba_elem read_elem(const forcing_context& ctx, const sexpr& e);

// (name (entry <name> <elem>) ...), (check <hf>), (gdot),
// (op <name> <name>), or an identifier the resolver knows.
name_id read_name(forcing_context& ctx, const sexpr& e, const name_resolver& resolve = {});

// (eq t t), (in t t), (subset t t), (not f), (and f f), (or f f),
// (implies f f), (exists x t f), (forall x t f).  Terms are bound variables,
// resolvable identifiers, or inline name expressions; binders introduce
// names that shadow outward.
formula_ptr read_formula(forcing_context& ctx, const sexpr& e, const name_resolver& resolve = {});

}  // namespace forcelab
