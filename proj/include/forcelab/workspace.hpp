#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "forcelab/corpus.hpp"
#include "forcelab/sexpr.hpp"

namespace forcelab {

// Declarations loaded from workspace files.  The line format:
//
//   poset <id>            starts a poset block
//   elem <id> ...         declares conditions, in order
//   le <id> <id>          generator pair, first extends second
//   top <id>              optional declared greatest element
//   name <id> <poset> <s-expression>
//   formula <id> <poset> <s-expression>
//
// S-expressions may span lines; # starts a comment anywhere.  Identifiers
// share one namespace across kinds and files; built-in poset ids resolve
// when no declaration shadows them.
class workspace {
public:
    explicit workspace(run_mode mode = run_mode::serial);
    ~workspace();
    workspace(const workspace&) = delete;
    workspace& operator=(const workspace&) = delete;

    void load_file(const std::string& path);
    void load_text(const std::string& text, const std::string& source);
    // Loads every regular file under $FORCELAB_CORPUS in filename order;
    // returns how many, 0 when the variable is unset.
    int load_corpus_dir();

    // Workspace declaration first, then the built-in corpus.
    const poset& find_poset(const std::string& id) const;
    bool has_poset(const std::string& id) const;
    // Completion context for a poset id, built on first use and pinned.
    forcing_context& context(const std::string& id);

    struct name_entry {
        std::string poset_id;
        name_id id = 0;
    };
    struct formula_entry {
        std::string poset_id;
        formula_ptr f;
    };

    bool has_name(const std::string& id) const;
    const name_entry& find_name(const std::string& id) const;
    bool has_formula(const std::string& id) const;
    const formula_entry& find_formula(const std::string& id) const;

    // Declaration order, for listings.
    const std::vector<std::string>& poset_ids() const { return poset_order_; }
    const std::vector<std::string>& name_ids() const { return name_order_; }
    const std::vector<std::string>& formula_ids() const { return formula_order_; }

    // Identifier resolver over the declared names of one poset.
    name_resolver resolver_for(const std::string& poset_id) const;

private:
    void check_fresh(const std::string& id, const std::string& where);

    run_mode mode_;
    std::map<std::string, poset> posets_;
    mutable std::map<std::string, poset> builtin_cache_;
    std::map<std::string, std::unique_ptr<forcing_context>> contexts_;
    std::map<std::string, name_entry> names_;
    std::map<std::string, formula_entry> formulas_;
    std::vector<std::string> poset_order_, name_order_, formula_order_;
};

}  // namespace forcelab
