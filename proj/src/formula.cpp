#include "forcelab/formula.hpp"

#include <algorithm>

namespace forcelab {

namespace {

constexpr formula_kind atom_kinds[3] = {formula_kind::atom_in, formula_kind::atom_subset,
                                        formula_kind::atom_eq};
constexpr formula_kind binary_kinds[3] = {formula_kind::f_and, formula_kind::f_or,
                                          formula_kind::f_implies};
constexpr formula_kind quant_kinds[2] = {formula_kind::f_exists, formula_kind::f_forall};

}  // namespace

int formula::height() const {
    if (is_atom(kind)) return 1;
    if (is_binary(kind)) return 1 + std::max(l->height(), r->height());
    return 1 + l->height();
}

formula_ptr formula::clone() const {
    auto out = std::make_unique<formula>();
    out->kind = kind;
    out->a = a;
    out->b = b;
    if (l) out->l = l->clone();
    if (r) out->r = r->clone();
    return out;
}

formula_ptr make_atom(formula_kind k, term a, term b) {
    if (!is_atom(k)) throw invalid_argument_error("make_atom needs an atomic kind");
    auto f = std::make_unique<formula>();
    f->kind = k;
    f->a = a;
    f->b = b;
    return f;
}

formula_ptr make_not(formula_ptr inner) {
    auto f = std::make_unique<formula>();
    f->kind = formula_kind::f_not;
    f->l = std::move(inner);
    return f;
}

formula_ptr make_binary(formula_kind k, formula_ptr l, formula_ptr r) {
    if (!is_binary(k)) throw invalid_argument_error("make_binary needs a connective kind");
    auto f = std::make_unique<formula>();
    f->kind = k;
    f->l = std::move(l);
    f->r = std::move(r);
    return f;
}

formula_ptr make_quantifier(formula_kind k, term bound, formula_ptr body) {
    if (!is_quantifier(k)) throw invalid_argument_error("make_quantifier needs a quantifier kind");
    auto f = std::make_unique<formula>();
    f->kind = k;
    f->a = bound;
    f->l = std::move(body);
    return f;
}

namespace {

std::string render_term(const term& t, const name_pool& names, int depth) {
    if (t.is_var()) return "x" + std::to_string(depth - 1 - t.var);
    return names.repr(t.constant);
}

std::string render(const formula& f, const name_pool& names, int depth) {
    switch (f.kind) {
        case formula_kind::atom_in:
            return "(in " + render_term(f.a, names, depth) + " " + render_term(f.b, names, depth) + ")";
        case formula_kind::atom_subset:
            return "(subset " + render_term(f.a, names, depth) + " " +
                   render_term(f.b, names, depth) + ")";
        case formula_kind::atom_eq:
            return "(eq " + render_term(f.a, names, depth) + " " + render_term(f.b, names, depth) + ")";
        case formula_kind::f_not:
            return "(not " + render(*f.l, names, depth) + ")";
        case formula_kind::f_and:
            return "(and " + render(*f.l, names, depth) + " " + render(*f.r, names, depth) + ")";
        case formula_kind::f_or:
            return "(or " + render(*f.l, names, depth) + " " + render(*f.r, names, depth) + ")";
        case formula_kind::f_implies:
            return "(implies " + render(*f.l, names, depth) + " " + render(*f.r, names, depth) + ")";
        case formula_kind::f_exists:
        case formula_kind::f_forall: {
            std::string head = f.kind == formula_kind::f_exists ? "exists" : "forall";
            return "(" + head + " x" + std::to_string(depth) + " " + render_term(f.a, names, depth) +
                   " " + render(*f.l, names, depth + 1) + ")";
        }
    }
    throw invalid_argument_error("unreachable formula kind");
}

}  // namespace

std::string render_formula(const formula& f, const name_pool& names) { return render(f, names, 0); }

formula_space::formula_space(std::vector<name_id> constants, std::vector<name_id> bounds,
                             int max_depth)
    : constants_(std::move(constants)), bounds_(std::move(bounds)), depth_(max_depth) {
    if (max_depth < 1) throw invalid_argument_error("formula space needs depth >= 1");
    counts_.assign(static_cast<std::size_t>(depth_) + 1,
                   std::vector<std::int64_t>(static_cast<std::size_t>(depth_) + 2, -1));
    // Fill the whole cache now; decode and sample then only read it, which
    // keeps const access safe for parallel workers.  Depth-d nodes see at
    // most depth_ - d extra binders.
    for (int d = 1; d <= depth_; ++d)
        for (int v = 0; v + d <= depth_; ++v) count(d, v);
}

std::int64_t formula_space::count(int d, int v) const {
    if (d <= 0) return 0;
    auto& slot = counts_[static_cast<std::size_t>(d)][static_cast<std::size_t>(v)];
    if (slot >= 0) return slot;
    const __int128 t = static_cast<std::int64_t>(constants_.size()) + v;
    __int128 total = 3 * t * t;
    if (d >= 2) {
        const __int128 c1 = count(d - 1, v);
        const __int128 c2 = count(d - 1, v + 1);
        const __int128 bq = static_cast<std::int64_t>(bounds_.size()) + v;
        total += c1 + 3 * c1 * c1 + 2 * bq * c2;
    }
    slot = total > huge() ? huge() : static_cast<std::int64_t>(total);
    return slot;
}

term formula_space::atom_term(std::int64_t t) const {
    if (t < static_cast<std::int64_t>(constants_.size()))
        return term::c(constants_[static_cast<std::size_t>(t)]);
    return term::v(static_cast<int>(t - static_cast<std::int64_t>(constants_.size())));
}

formula_ptr formula_space::decode(std::int64_t index) const {
    if (size() >= huge()) throw size_limit_error("formula space too large to decode");
    if (index < 0 || index >= size()) throw invalid_argument_error("formula index out of range");
    return decode(index, depth_, 0);
}

formula_ptr formula_space::decode(std::int64_t i, int d, int v) const {
    const std::int64_t t = static_cast<std::int64_t>(constants_.size()) + v;
    const std::int64_t atoms = 3 * t * t;
    if (i < atoms) {
        const std::int64_t kind = i / (t * t);
        const std::int64_t rest = i % (t * t);
        return make_atom(atom_kinds[kind], atom_term(rest / t), atom_term(rest % t));
    }
    i -= atoms;
    const std::int64_t c1 = count(d - 1, v);
    if (c1 > 0) {
        if (i < c1) return make_not(decode(i, d - 1, v));
        i -= c1;
        for (formula_kind k : binary_kinds) {
            if (i < c1 * c1)
                return make_binary(k, decode(i / c1, d - 1, v), decode(i % c1, d - 1, v));
            i -= c1 * c1;
        }
    }
    const std::int64_t c2 = count(d - 1, v + 1);
    const std::int64_t bq = static_cast<std::int64_t>(bounds_.size()) + v;
    if (c2 > 0 && bq > 0) {
        for (formula_kind k : quant_kinds) {
            if (i < bq * c2) {
                const std::int64_t bi = i / c2;
                term bound = bi < static_cast<std::int64_t>(bounds_.size())
                                 ? term::c(bounds_[static_cast<std::size_t>(bi)])
                                 : term::v(static_cast<int>(bi - static_cast<std::int64_t>(bounds_.size())));
                return make_quantifier(k, bound, decode(i % c2, d - 1, v + 1));
            }
            i -= bq * c2;
        }
    }
    throw invalid_argument_error("formula index out of range");
}

formula_ptr formula_space::sample(std::mt19937_64& rng) const { return sample(rng, depth_, 0); }

formula_ptr formula_space::sample(std::mt19937_64& rng, int d, int v) const {
    const std::int64_t t = static_cast<std::int64_t>(constants_.size()) + v;
    const std::int64_t bq = static_cast<std::int64_t>(bounds_.size()) + v;
    // Weighted node choice: 0-2 atom kinds, 3 not, 4-6 binary, 7-8 quantifier
    // (each quantifier weighted twice to keep samples quantifier-rich).
    std::vector<int> options;
    if (t > 0)
        for (int k = 0; k < 3; ++k) options.push_back(k);
    if (d >= 2 && count(d - 1, v) > 0)
        for (int k = 3; k < 7; ++k) options.push_back(k);
    if (d >= 2 && bq > 0 && count(d - 1, v + 1) > 0)
        for (int k = 7; k < 9; ++k) {
            options.push_back(k);
            options.push_back(k);
        }
    if (options.empty()) throw invalid_argument_error("empty formula space");
    const int choice = options[rng() % options.size()];
    if (choice < 3) {
        auto ta = atom_term(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(t)));
        auto tb = atom_term(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(t)));
        return make_atom(atom_kinds[choice], ta, tb);
    }
    if (choice == 3) return make_not(sample(rng, d - 1, v));
    if (choice < 7) {
        auto l = sample(rng, d - 1, v);
        auto r = sample(rng, d - 1, v);
        return make_binary(binary_kinds[choice - 4], std::move(l), std::move(r));
    }
    const std::int64_t bi = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(bq));
    term bound = bi < static_cast<std::int64_t>(bounds_.size())
                     ? term::c(bounds_[static_cast<std::size_t>(bi)])
                     : term::v(static_cast<int>(bi - static_cast<std::int64_t>(bounds_.size())));
    return make_quantifier(quant_kinds[choice - 7], bound, sample(rng, d - 1, v + 1));
}

formula_corpus formula_corpus::build(const name_pool& pool, const std::vector<name_id>& names,
                                     int max_depth, std::uint64_t seed,
                                     std::int64_t exhaustive_cap, std::int64_t samples) {
    if (names.empty()) throw invalid_argument_error("formula corpus needs at least one name");
    formula_corpus out;
    formula_space full(names, names, max_depth);
    if (full.size() <= exhaustive_cap) {
        out.description_ = "exhaustive=" + std::to_string(full.size());
        out.total_ = full.size();
        out.segments_.push_back({std::move(full), out.total_, false, 0});
        return out;
    }

    formula_space atom_layer(names, {}, 1);
    const std::int64_t atom_count = std::min(atom_layer.size(), exhaustive_cap);
    out.segments_.push_back({std::move(atom_layer), atom_count, false, 0});

    // Reduction ladder for the exhaustive closure: shrink the constant pool,
    // then the depth, until the space fits the cap.
    std::vector<name_id> bounds;
    for (name_id n : names)
        if (!pool.entries(n).empty() && bounds.size() < 3) bounds.push_back(n);
    if (bounds.empty()) bounds.assign(names.begin(), names.begin() + std::min<std::size_t>(3, names.size()));
    std::size_t num_consts = 2;
    int depth = max_depth;
    for (;;) {
        std::vector<name_id> consts(names.begin(),
                                    names.begin() + std::min(num_consts, names.size()));
        formula_space restricted(consts, bounds, depth);
        if (restricted.size() <= exhaustive_cap) {
            const std::int64_t rcount = restricted.size();
            out.segments_.push_back({std::move(restricted), rcount, false, 0});
            break;
        }
        if (num_consts > 1)
            --num_consts;
        else if (depth > 2)
            --depth;
        else if (bounds.size() > 1)
            bounds.pop_back();
        else
            throw size_limit_error("formula corpus cap too small for the minimal space");
    }

    out.segments_.push_back({formula_space(names, names, max_depth), samples, true, seed});
    out.total_ = 0;
    for (const auto& s : out.segments_) out.total_ += s.count;
    out.description_ = "atoms=" + std::to_string(out.segments_[0].count) +
                       " restricted=" + std::to_string(out.segments_[1].count) +
                       " samples=" + std::to_string(samples);
    return out;
}

formula_ptr formula_corpus::at(std::int64_t i) const {
    if (i < 0 || i >= total_) throw invalid_argument_error("corpus index out of range");
    for (const auto& s : segments_) {
        if (i < s.count) {
            if (!s.sampled) return s.space.decode(i);
            std::uint64_t z = s.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(i + 1);
            z ^= z >> 30;
            z *= 0xbf58476d1ce4e5b9ull;
            z ^= z >> 27;
            z *= 0x94d049bb133111ebull;
            z ^= z >> 31;
            std::mt19937_64 rng(z);
            return s.space.sample(rng);
        }
        i -= s.count;
    }
    throw invalid_argument_error("corpus index out of range");
}

}  // namespace forcelab
