#include "forcelab/twostep.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "forcelab/corpus.hpp"

namespace forcelab {

namespace {

// mask of [op(t, s) in n]: the conditions forcing "t lies below s" in the
// order the name codes
cond_mask order_mask(forcing_context& ctx, name_id n, name_id t, name_id s) {
    return ctx.alg.mask_of(ctx.ev.bval_atomic(atom_kind::in_rel, ctx.names.op_name(t, s), n));
}

std::string seq_id(const finite_iteration& it, const std::vector<std::pair<int, name_id>>& seq) {
    std::string out = "<";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(seq[i].first) + ":" +
               it.contexts[static_cast<std::size_t>(seq[i].first)]->names.repr(seq[i].second);
    }
    return out + ">";
}

}  // namespace

name_id poset_order_name(forcing_context& ctx, const poset& q) {
    const auto top = q.top();
    if (!top) throw invalid_argument_error("poset " + q.name() + " has no top to code as empty");
    // top is coded as the empty set, the rest as numerals in index order
    std::vector<hf_id> codes(static_cast<std::size_t>(q.size()));
    int next = 1;
    for (int i = 0; i < q.size(); ++i)
        codes[static_cast<std::size_t>(i)] = i == *top ? ctx.hf.empty() : ctx.hf.nat(next++);
    std::vector<std::pair<name_id, ba_elem>> entries;
    for (int a = 0; a < q.size(); ++a)
        for (int b = 0; b < q.size(); ++b)
            if (q.leq(a, b)) {
                const name_id ca = ctx.names.check_name(ctx.hf, codes[static_cast<std::size_t>(a)]);
                const name_id cb = ctx.names.check_name(ctx.hf, codes[static_cast<std::size_t>(b)]);
                entries.emplace_back(ctx.names.op_name(ca, cb), ctx.alg.one());
            }
    return ctx.names.make(std::move(entries));
}

poset_name validate_poset_name(forcing_context& ctx, name_id n) {
    if (n >= ctx.names.size()) throw invalid_argument_error("name from a different pool");
    poset_name out;
    out.base = ctx.base().name();
    out.name = n;

    // element names are the components of the op-name keys
    std::vector<name_id> elems = {ctx.names.check_name(ctx.hf, ctx.hf.empty())};
    for (const auto& entry : ctx.names.entries(n)) {
        const auto pair = ctx.names.decode_op(entry.first);
        if (!pair)
            throw invalid_argument_error("second-stage key " + ctx.names.repr(entry.first) +
                                         " does not pair two names");
        elems.push_back(pair->first);
        elems.push_back(pair->second);
    }
    std::sort(elems.begin(), elems.end(),
              [&](name_id a, name_id b) { return ctx.names.cmp(a, b) < 0; });
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    out.elements = elems;

    int stage = 0;
    for (const cond_mask g : ctx.base().generic_filters()) {
        valuation val(ctx, g);
        const hf_id rel = val.value(n);
        const auto witness = [&](const std::string& what) {
            return not_preorder_error("name " + ctx.names.repr(n) + " under generic " +
                                      std::to_string(stage) + ": " + what);
        };

        std::set<std::pair<hf_id, hf_id>> pairs;
        std::vector<hf_id> field;
        for (const hf_id m : ctx.hf.members(rel)) {
            const auto pr = ctx.hf.decode_pair(m);
            if (!pr) throw witness("member " + ctx.hf.render(m) + " is not an ordered pair");
            pairs.insert(*pr);
            field.push_back(pr->first);
            field.push_back(pr->second);
        }
        std::sort(field.begin(), field.end(),
                  [&](hf_id a, hf_id b) { return ctx.hf.cmp(a, b) < 0; });
        field.erase(std::unique(field.begin(), field.end()), field.end());

        for (const hf_id x : field)
            if (!pairs.count({x, x})) throw witness("not reflexive at " + ctx.hf.render(x));
        for (const auto& ab : pairs)
            for (const auto& cd : pairs)
                if (ab.second == cd.first && !pairs.count({ab.first, cd.second}))
                    throw witness("not transitive through " + ctx.hf.render(ab.second));
        if (!std::binary_search(field.begin(), field.end(), ctx.hf.empty(),
                                [&](hf_id a, hf_id b) { return ctx.hf.cmp(a, b) < 0; }))
            throw witness("empty set is not an element");
        for (const hf_id x : field)
            if (!pairs.count({x, ctx.hf.empty()}))
                throw witness("empty set is not greatest: misses " + ctx.hf.render(x));

        // every element name must denote an element; this keeps the
        // two-step order reflexive on its whole carrier
        stage_certificate cert;
        cert.generic = g;
        cert.field = field;
        for (const name_id t : out.elements) {
            const hf_id v = val.value(t);
            const auto it = std::find(field.begin(), field.end(), v);
            if (it == field.end())
                throw witness("element " + ctx.names.repr(t) + " falls outside the order");
            cert.element_image.push_back(static_cast<int>(it - field.begin()));
        }

        // identifiers come from the least name denoting each element, with
        // the raw set as fallback
        std::vector<std::string> ids;
        for (const hf_id v : field) {
            std::string id;
            for (const name_id t : out.elements)
                if (val.value(t) == v) {
                    id = ctx.names.repr(t);
                    break;
                }
            if (id.empty()) id = ctx.hf.render(v);
            while (std::find(ids.begin(), ids.end(), id) != ids.end()) id += "#";
            ids.push_back(id);
        }
        std::vector<std::pair<int, int>> le;
        for (const auto& ab : pairs) {
            const auto ia = std::find(field.begin(), field.end(), ab.first) - field.begin();
            const auto ib = std::find(field.begin(), field.end(), ab.second) - field.begin();
            le.emplace_back(static_cast<int>(ia), static_cast<int>(ib));
        }
        const auto itop = std::find(field.begin(), field.end(), ctx.hf.empty()) - field.begin();
        cert.decoded = poset("stage(" + out.base + "," + std::to_string(stage) + ")", ids, le,
                             static_cast<int>(itop));
        out.certificates.push_back(std::move(cert));
        ++stage;
    }
    return out;
}

two_step star(forcing_context& ctx, const poset_name& qdot) {
    const poset& p = ctx.base();
    if (qdot.base != p.name() || qdot.name >= ctx.names.size() ||
        qdot.certificates.size() != p.generic_filters().size())
        throw uncertified_name_error("second stage is not certified over " + p.name());
    const auto ptop = p.top();
    if (!ptop) throw invalid_argument_error("first stage " + p.name() + " has no top");

    const int e = static_cast<int>(qdot.elements.size());
    std::vector<std::vector<cond_mask>> below(static_cast<std::size_t>(e),
                                              std::vector<cond_mask>(static_cast<std::size_t>(e)));
    for (int t = 0; t < e; ++t)
        for (int s = 0; s < e; ++s)
            below[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] = order_mask(
                ctx, qdot.name, qdot.elements[static_cast<std::size_t>(t)],
                qdot.elements[static_cast<std::size_t>(s)]);
    // elements[0] is the check of empty, the coded top
    const auto forced = [&](int cond, int t, int s) {
        return has_bit(below[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)], cond);
    };

    const int total = p.size() + p.size() * e;
    std::vector<std::string> ids;
    for (int i = 0; i < p.size(); ++i) ids.push_back(p.elem(i));
    for (int i = 0; i < p.size(); ++i)
        for (int t = 0; t < e; ++t)
            ids.push_back("<" + p.elem(i) + "|" +
                          ctx.names.repr(qdot.elements[static_cast<std::size_t>(t)]) + ">");

    const auto first_of = [&](int c) { return c < p.size() ? c : (c - p.size()) / e; };
    const auto elem_of = [&](int c) { return c < p.size() ? -1 : (c - p.size()) % e; };
    const auto clause = [&](int c, int d) {
        const int pc = first_of(c), pd = first_of(d);
        if (!p.leq(pc, pd)) return false;
        const int tc = elem_of(c), td = elem_of(d);
        if (td < 0) return true;                       // anything below a bare condition
        return forced(pc, tc < 0 ? 0 : tc, td);        // bare reads as the coded top
    };
    std::vector<std::pair<int, int>> le;
    for (int c = 0; c < total; ++c)
        for (int d = 0; d < total; ++d)
            if (clause(c, d)) le.emplace_back(c, d);

    two_step out;
    out.second = qdot;
    out.first_size = p.size();
    out.carrier = poset(p.name() + "*" + ctx.names.repr(qdot.name), ids, le, *ptop);
    // the clauses are already reflexive and transitive for a certified
    // second stage, so closure must not have added anything
    for (int c = 0; c < total; ++c)
        for (int d = 0; d < total; ++d)
            if (out.carrier.leq(c, d) != clause(c, d))
                throw not_preorder_error("two-step order clauses are not closed at " + ids[static_cast<std::size_t>(c)] +
                                         " vs " + ids[static_cast<std::size_t>(d)]);
    return out;
}

generic_pair split_generic(const two_step& ts, cond_mask k) {
    if (!ts.carrier.generic(k)) throw not_generic_error("filter is not generic on " + ts.carrier.name());
    generic_pair out;
    for (int c = 0; c < ts.carrier.size(); ++c)
        if (has_bit(k, c) && ts.is_bare(c)) out.first |= bit(c);
    for (std::size_t i = 0; i < ts.second.certificates.size(); ++i)
        if (ts.second.certificates[i].generic == out.first) out.certificate = static_cast<int>(i);
    if (out.certificate < 0)
        throw not_generic_error("first coordinates of the filter are not generic");
    const auto& cert = ts.second.certificates[static_cast<std::size_t>(out.certificate)];
    for (int c = 0; c < ts.carrier.size(); ++c)
        if (has_bit(k, c) && !ts.is_bare(c))
            out.second |= bit(cert.element_image[static_cast<std::size_t>(ts.element_of(c))]);
    if (!cert.decoded.generic(out.second))
        throw not_generic_error("second coordinates do not form a generic on the decoded stage");
    return out;
}

cond_mask merge_generic(const two_step& ts, const generic_pair& gh) {
    int ci = gh.certificate;
    if (ci < 0)
        for (std::size_t i = 0; i < ts.second.certificates.size(); ++i)
            if (ts.second.certificates[i].generic == gh.first) ci = static_cast<int>(i);
    if (ci < 0 || ci >= static_cast<int>(ts.second.certificates.size()) ||
        ts.second.certificates[static_cast<std::size_t>(ci)].generic != gh.first)
        throw not_generic_error("first coordinate is not a generic of the first stage");
    const auto& cert = ts.second.certificates[static_cast<std::size_t>(ci)];
    if (!cert.decoded.generic(gh.second))
        throw not_generic_error("second coordinate is not generic on the decoded stage");
    cond_mask k = 0;
    for (int p = 0; p < ts.first_size; ++p) {
        if (!has_bit(gh.first, p)) continue;
        k |= bit(p);
        for (int t = 0; t < static_cast<int>(ts.second.elements.size()); ++t)
            if (has_bit(gh.second, cert.element_image[static_cast<std::size_t>(t)]))
                k |= bit(ts.pair_index(p, t));
    }
    if (!ts.carrier.generic(k)) throw not_generic_error("merge did not produce a generic filter");
    return k;
}

namespace {

// the pair-name with condition p at every level: {<x,p>, <{<x,p>,<y,p>},p>}
name_id condition_pair_name(name_pool& pool, name_id x, name_id y, ba_elem ep) {
    const name_id inner = pool.make({{x, ep}, {y, ep}});
    return pool.make({{x, ep}, {inner, ep}});
}

struct reassociator {
    const two_step& ts;
    forcing_context& star_ctx;
    forcing_context& first_ctx;
    int rank_cap;
    std::map<name_id, name_id> memo;

    name_id apply(name_id a) {
        if (const auto it = memo.find(a); it != memo.end()) return it->second;
        if (first_ctx.names.size() > (1u << 20))
            throw rank_cap_error("reassociation exhausted the name budget");
        if (star_ctx.names.brank(a) > rank_cap)
            throw rank_cap_error("name rank " + std::to_string(star_ctx.names.brank(a)) +
                                 " above cap " + std::to_string(rank_cap));
        std::vector<std::pair<name_id, ba_elem>> entries;
        for (const auto& entry : star_ctx.names.entries(a)) {
            const name_id js = apply(entry.first);
            for (int c = 0; c < ts.carrier.size(); ++c) {
                if (!has_bit(star_ctx.alg.mask_of(entry.second), c)) continue;
                const int p = ts.first_of(c);
                const int t = ts.element_of(c);
                const name_id y =
                    t < 0 ? first_ctx.names.empty_name() : ts.second.elements[static_cast<std::size_t>(t)];
                const ba_elem ep = first_ctx.alg.embed(p);
                entries.emplace_back(condition_pair_name(first_ctx.names, js, y, ep), ep);
            }
        }
        const name_id out = first_ctx.names.make(std::move(entries));
        memo.emplace(a, out);
        return out;
    }
};

}  // namespace

name_id reassociate(const two_step& ts, forcing_context& star_ctx, forcing_context& first_ctx,
                    name_id a, int rank_cap) {
    if (a >= star_ctx.names.size()) throw invalid_argument_error("name from a different pool");
    if (first_ctx.base().name() != ts.second.base)
        throw invalid_argument_error("first-stage context does not match the two-step");
    reassociator r{ts, star_ctx, first_ctx, rank_cap, {}};
    return r.apply(a);
}

namespace {

hf_id stage_valuate_rec(hf_pool& hf, hf_id coded, const std::vector<hf_id>& filter,
                        std::map<hf_id, hf_id>& memo) {
    if (const auto it = memo.find(coded); it != memo.end()) return it->second;
    const auto members = hf.members(coded);  // copy: make below reallocates
    std::vector<hf_id> out;
    for (const hf_id m : members) {
        const auto pr = hf.decode_pair(m);
        if (!pr) throw invalid_argument_error("coded member " + hf.render(m) + " is not a pair");
        if (std::find(filter.begin(), filter.end(), pr->second) == filter.end()) continue;
        out.push_back(stage_valuate_rec(hf, pr->first, filter, memo));
    }
    const hf_id v = hf.make(std::move(out));
    memo.emplace(coded, v);
    return v;
}

name_id decode_stage_rec(const hf_pool& hf, hf_id coded, forcing_context& target,
                         const std::vector<hf_id>& field, std::map<hf_id, name_id>& memo) {
    if (const auto it = memo.find(coded); it != memo.end()) return it->second;
    const auto members = hf.members(coded);
    std::vector<std::pair<name_id, ba_elem>> entries;
    for (const hf_id m : members) {
        const auto pr = hf.decode_pair(m);
        if (!pr) throw invalid_argument_error("coded member " + hf.render(m) + " is not a pair");
        const auto it = std::find(field.begin(), field.end(), pr->second);
        if (it == field.end())
            throw unknown_reference_error("order element " + hf.render(pr->second) +
                                          " is outside the decoded stage");
        entries.emplace_back(decode_stage_rec(hf, pr->first, target, field, memo),
                             target.alg.embed(static_cast<int>(it - field.begin())));
    }
    const name_id v = target.names.make(std::move(entries));
    memo.emplace(coded, v);
    return v;
}

}  // namespace

hf_id hf_stage_valuate(hf_pool& hf, hf_id coded, const std::vector<hf_id>& filter) {
    std::map<hf_id, hf_id> memo;
    return stage_valuate_rec(hf, coded, filter, memo);
}

name_id decode_stage_name(const hf_pool& hf, hf_id coded, forcing_context& target,
                          const std::vector<hf_id>& field) {
    std::map<hf_id, name_id> memo;
    return decode_stage_rec(hf, coded, target, field, memo);
}

product_poset product(const poset& left, const poset& right) {
    product_poset out;
    out.left_size = left.size();
    out.right_size = right.size();
    std::vector<std::string> ids;
    for (int p = 0; p < left.size(); ++p)
        for (int q = 0; q < right.size(); ++q)
            ids.push_back("(" + left.elem(p) + "," + right.elem(q) + ")");
    std::vector<std::pair<int, int>> le;
    const int total = left.size() * right.size();
    for (int c = 0; c < total; ++c)
        for (int d = 0; d < total; ++d)
            if (left.leq(c / right.size(), d / right.size()) &&
                right.leq(c % right.size(), d % right.size()))
                le.emplace_back(c, d);
    std::optional<int> top;
    if (left.top() && right.top()) top = *left.top() * right.size() + *right.top();
    out.carrier = poset(left.name() + "x" + right.name(), ids, le, top);
    return out;
}

finite_iteration iterate(const std::vector<stage_spec>& stages, int cap) {
    if (static_cast<int>(stages.size()) > cap)
        throw stage_cap_error("iteration length " + std::to_string(stages.size()) + " above cap " +
                              std::to_string(cap));
    finite_iteration it;
    it.contexts.push_back(
        std::make_unique<forcing_context>(poset("stage0", {"<>"}, {}, 0)));
    it.seqs.push_back({{}});

    for (std::size_t b = 0; b < stages.size(); ++b) {
        forcing_context& ctx = *it.contexts[b];
        const poset& pb = ctx.base();
        const poset_name pn = validate_poset_name(ctx, stages[b](ctx));
        it.names.push_back(pn);
        const int e = static_cast<int>(pn.elements.size());

        std::vector<std::vector<cond_mask>> below(
            static_cast<std::size_t>(e), std::vector<cond_mask>(static_cast<std::size_t>(e)));
        for (int t = 0; t < e; ++t)
            for (int s = 0; s < e; ++s)
                below[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] = order_mask(
                    ctx, pn.name, pn.elements[static_cast<std::size_t>(t)],
                    pn.elements[static_cast<std::size_t>(s)]);

        // slot 0 leaves the stage undefined; slot t+1 assigns element t
        std::vector<std::vector<std::pair<int, name_id>>> seqs;
        std::vector<std::string> ids;
        for (int r = 0; r < pb.size(); ++r)
            for (int s = 0; s <= e; ++s) {
                auto seq = it.seqs[b][static_cast<std::size_t>(r)];
                if (s > 0)
                    seq.emplace_back(static_cast<int>(b), pn.elements[static_cast<std::size_t>(s - 1)]);
                seqs.push_back(seq);
                ids.push_back(seq_id(it, seq));
            }
        const int total = pb.size() * (1 + e);
        const auto clause = [&](int x, int y) {
            const int rx = x / (1 + e), ry = y / (1 + e);
            if (!pb.leq(rx, ry)) return false;
            const int sx = x % (1 + e), sy = y % (1 + e);
            if (sy == 0) return true;                 // undefined on top reads as the top element
            const int tx = sx == 0 ? 0 : sx - 1;      // undefined below reads as the coded top
            return has_bit(below[static_cast<std::size_t>(tx)][static_cast<std::size_t>(sy - 1)], rx);
        };
        std::vector<std::pair<int, int>> le;
        for (int x = 0; x < total; ++x)
            for (int y = 0; y < total; ++y)
                if (clause(x, y)) le.emplace_back(x, y);
        poset next("stage" + std::to_string(b + 1), ids, le, 0);
        for (int x = 0; x < total; ++x)
            for (int y = 0; y < total; ++y)
                if (next.leq(x, y) != clause(x, y))
                    throw not_preorder_error("iteration order clauses are not closed at stage " +
                                             std::to_string(b + 1));

        // the packaging map: bare conditions keep their sequence, pairs
        // append the assigned element
        const two_step ts = star(ctx, pn);
        const auto packaged = [&](int c) {
            const int t = ts.element_of(c);
            return ts.first_of(c) * (1 + e) + (t < 0 ? 0 : t + 1);
        };
        for (int c = 0; c < ts.carrier.size(); ++c)
            for (int d = 0; d < ts.carrier.size(); ++d)
                if (ts.carrier.leq(c, d) != next.leq(packaged(c), packaged(d)))
                    throw invalid_argument_error("stage " + std::to_string(b + 1) +
                                                 " does not package into the star order");

        it.contexts.push_back(std::make_unique<forcing_context>(std::move(next)));
        it.seqs.push_back(std::move(seqs));
    }

    // every earlier stage embeds completely into every later one
    for (int xi = 0; xi <= it.length(); ++xi)
        for (int be = xi + 1; be <= it.length(); ++be) {
            const poset& px = it.stage(xi);
            const poset& pbig = it.stage(be);
            std::vector<int> map;
            for (int i = 0; i < px.size(); ++i) map.push_back(pbig.require_index(px.elem(i)));
            if (!check_embedding(px, pbig, map).complete_embedding)
                throw invalid_argument_error("stage " + std::to_string(xi) +
                                             " is not a complete subposet of stage " +
                                             std::to_string(be));
        }
    return it;
}

namespace {

// two elements whose order depends on the generic: the numeral sits below
// the top everywhere, the top sits below the numeral only where u holds
name_id mixed_stage_name(forcing_context& ctx, ba_elem u) {
    auto& nm = ctx.names;
    const name_id top = nm.check_name(ctx.hf, ctx.hf.empty());
    const name_id other = nm.check_name(ctx.hf, ctx.hf.nat(1));
    const ba_elem one = ctx.alg.one();
    return nm.make({{nm.op_name(top, top), one},
                    {nm.op_name(other, other), one},
                    {nm.op_name(other, top), one},
                    {nm.op_name(top, other), u}});
}

std::vector<formula_ptr> transport_formulas(name_id x) {
    std::vector<formula_ptr> out;
    out.push_back(make_atom(formula_kind::atom_eq, term::c(x), term::c(0)));
    out.push_back(make_atom(formula_kind::atom_in, term::c(0), term::c(x)));
    out.push_back(make_not(make_atom(formula_kind::atom_in, term::c(0), term::c(x))));
    out.push_back(make_atom(formula_kind::atom_subset, term::c(x), term::c(0)));
    out.push_back(make_atom(formula_kind::atom_subset, term::c(0), term::c(x)));
    return out;
}

}  // namespace

suite_report verify_twostep(const poset& first, run_mode mode) {
    suite_report rep;
    rep.suite = "twostep";
    rep.note("first " + first.name());
    forcing_context ctx(first, mode);
    if (!ctx.base().top()) {
        rep.fail("first stage " + first.name() + " has no top");
        return rep;
    }

    struct second_case {
        std::string label;
        name_id n;
        std::optional<poset> source;
    };
    std::vector<second_case> seconds;
    seconds.push_back({"check(chain2)", poset_order_name(ctx, chain_poset(2)), chain_poset(2)});
    seconds.push_back({"check(antichain2_top)", poset_order_name(ctx, named_poset("antichain2_top")),
                       named_poset("antichain2_top")});
    bool have_u = false;
    ba_elem u = ctx.alg.zero();
    for (int p = 0; p < ctx.base().size() && !have_u; ++p)
        if (const ba_elem e = ctx.alg.embed(p); e != ctx.alg.zero() && e != ctx.alg.one()) {
            u = e;
            have_u = true;
        }
    if (have_u)
        seconds.push_back({"mixed", mixed_stage_name(ctx, u), std::nullopt});
    else
        rep.note("completion is two-valued; mixed second stage skipped");

    for (const second_case& sc : seconds) {
        const poset_name pn = validate_poset_name(ctx, sc.n);
        const two_step ts = star(ctx, pn);
        rep.bump("stages");
        rep.note(sc.label + ": elements " + std::to_string(pn.elements.size()) + ", carrier " +
                 std::to_string(ts.carrier.size()));
        rep.bump("order_pairs", static_cast<std::int64_t>(ts.carrier.size()) * ts.carrier.size());

        if (!ts.carrier.top() || *ts.carrier.top() != *ctx.base().top())
            rep.fail(sc.label + ": two-step top is not the first stage's top");

        std::vector<int> ident;
        for (int i = 0; i < first.size(); ++i) ident.push_back(i);
        if (!check_embedding(ctx.base(), ts.carrier, ident).complete_embedding)
            rep.fail(sc.label + ": first stage is not a complete subposet");
        rep.bump("complete_first");

        // split and merge are mutually inverse bijections
        std::size_t split_count = 0;
        for (const cond_mask k : ts.carrier.generic_filters()) {
            const generic_pair gh = split_generic(ts, k);
            if (merge_generic(ts, gh) != k)
                rep.fail(sc.label + ": split then merge moved a generic");
            rep.bump("splits");
            ++split_count;
        }
        std::size_t merge_count = 0;
        for (std::size_t ci = 0; ci < pn.certificates.size(); ++ci) {
            const stage_certificate& cert = pn.certificates[ci];
            for (const cond_mask h : cert.decoded.generic_filters()) {
                generic_pair gh;
                gh.first = cert.generic;
                gh.second = h;
                gh.certificate = static_cast<int>(ci);
                const cond_mask k = merge_generic(ts, gh);
                const generic_pair back = split_generic(ts, k);
                if (back.first != gh.first || back.second != gh.second ||
                    back.certificate != gh.certificate)
                    rep.fail(sc.label + ": merge then split moved a generic pair");
                rep.bump("merges");
                ++merge_count;
            }
        }
        if (split_count != merge_count)
            rep.fail(sc.label + ": generic counts disagree between the two sides");

        // a check-name second stage gives the product order
        if (sc.source) {
            const poset& q = *sc.source;
            std::vector<int> pos;
            {
                int next = 1;
                for (int i = 0; i < q.size(); ++i) {
                    const hf_id code = i == *q.top() ? ctx.hf.empty() : ctx.hf.nat(next++);
                    const name_id cn = ctx.names.check_name(ctx.hf, code);
                    const auto it = std::find(pn.elements.begin(), pn.elements.end(), cn);
                    if (it == pn.elements.end()) {
                        rep.fail(sc.label + ": coded element is missing from the name");
                        pos.push_back(0);
                    } else {
                        pos.push_back(static_cast<int>(it - pn.elements.begin()));
                    }
                }
            }
            const product_poset pq = product(ctx.base(), q);
            const auto mapped = [&](int c) {
                return ts.pair_index(pq.left_of(c), pos[static_cast<std::size_t>(pq.right_of(c))]);
            };
            for (int c = 0; c < pq.carrier.size(); ++c)
                for (int d = 0; d < pq.carrier.size(); ++d) {
                    if (pq.carrier.leq(c, d) != ts.carrier.leq(mapped(c), mapped(d)))
                        rep.fail(sc.label + ": pair order differs from the product at " +
                                 pq.carrier.elem(c) + " vs " + pq.carrier.elem(d));
                    rep.bump("product_iso_pairs");
                }
            for (int p = 0; p < first.size(); ++p) {
                const int d = ts.pair_index(p, pos[static_cast<std::size_t>(*q.top())]);
                if (!ts.carrier.leq(p, d) || !ts.carrier.leq(d, p))
                    rep.fail(sc.label + ": bare condition differs from its top pair");
                rep.bump("bare_equivalences");
            }
        }

        // direct valuation under K equals staged valuation through j
        forcing_context star_ctx(ts.carrier, mode);
        std::vector<ba_elem> pool = {star_ctx.alg.zero(), star_ctx.alg.one()};
        for (int c = 0; c < ts.carrier.size(); ++c) pool.push_back(star_ctx.alg.embed(c));
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
        std::vector<name_id> checked = star_ctx.names.enumerate(2, pool);
        checked.push_back(star_ctx.names.generic_name(star_ctx.hf));
        const name_id n1 = star_ctx.names.check_name(star_ctx.hf, star_ctx.hf.nat(1));
        const name_id n2 = star_ctx.names.check_name(star_ctx.hf, star_ctx.hf.nat(2));
        checked.push_back(n1);
        checked.push_back(n2);
        checked.push_back(star_ctx.names.op_name(n1, n2));
        checked.push_back(star_ctx.names.make(
            {{star_ctx.names.generic_name(star_ctx.hf), star_ctx.alg.embed(0)},
             {n2, star_ctx.alg.one()}}));
        std::sort(checked.begin(), checked.end());
        checked.erase(std::unique(checked.begin(), checked.end()), checked.end());

        if (reassociate(ts, star_ctx, ctx, star_ctx.names.empty_name()) != ctx.names.empty_name())
            rep.fail(sc.label + ": reassociation moves the empty name");
        std::vector<name_id> jn;
        for (const name_id a : checked)
            jn.push_back(reassociate(ts, star_ctx, ctx, a, star_ctx.names.brank(a)));

        for (const cond_mask k : ts.carrier.generic_filters()) {
            const generic_pair gh = split_generic(ts, k);
            const stage_certificate& cert =
                pn.certificates[static_cast<std::size_t>(gh.certificate)];
            valuation vk(star_ctx, k);
            valuation vg(ctx, gh.first);
            std::vector<hf_id> filter;
            for (int i = 0; i < cert.decoded.size(); ++i)
                if (has_bit(gh.second, i)) filter.push_back(cert.field[static_cast<std::size_t>(i)]);
            for (std::size_t i = 0; i < checked.size(); ++i) {
                const hf_id direct = vk.value(checked[i]);
                const hf_id staged = hf_stage_valuate(ctx.hf, vg.value(jn[i]), filter);
                rep.bump("staged_values");
                if (star_ctx.hf.render(direct) != ctx.hf.render(staged))
                    rep.fail(sc.label + ": name " + star_ctx.names.repr(checked[i]) +
                             " valuates to " + star_ctx.hf.render(direct) + " but stages to " +
                             ctx.hf.render(staged));
            }
        }

        // forcing at a pair transports to forcing at the decoded condition
        std::vector<std::unique_ptr<forcing_context>> dctxs;
        for (const stage_certificate& cert : pn.certificates)
            dctxs.push_back(std::make_unique<forcing_context>(cert.decoded, mode));
        for (std::size_t ci = 0; ci < pn.certificates.size(); ++ci) {
            const stage_certificate& cert = pn.certificates[ci];
            valuation vg(ctx, cert.generic);
            for (std::size_t i = 0; i < checked.size(); ++i) {
                const hf_id coded = vg.value(jn[i]);
                const name_id dname =
                    decode_stage_name(ctx.hf, coded, *dctxs[ci], cert.field);
                const auto fs = transport_formulas(checked[i]);
                const auto fd = transport_formulas(dname);
                for (int c = ts.first_size; c < ts.carrier.size(); ++c) {
                    if (!has_bit(cert.generic, ts.first_of(c))) continue;
                    const int qidx =
                        cert.element_image[static_cast<std::size_t>(ts.element_of(c))];
                    for (std::size_t s = 0; s < fs.size(); ++s) {
                        rep.bump("transports");
                        if (forces(star_ctx, c, *fs[s]) && !forces(*dctxs[ci], qidx, *fd[s]))
                            rep.fail(sc.label + ": forcing at " + ts.carrier.elem(c) +
                                     " does not transport for " +
                                     render_formula(*fs[s], star_ctx.names));
                    }
                }
            }
        }
    }

    // iteration stages package into the star construction
    {
        const finite_iteration it0 = iterate({});
        if (it0.length() != 0 || it0.stage(0).size() != 1)
            rep.fail("empty iteration is not the one-point stage");
        rep.bump("iterations");

        const stage_spec cohen = [](forcing_context& c) {
            return poset_order_name(c, cohen_poset(1));
        };
        const finite_iteration it2 = iterate({cohen, cohen});
        rep.bump("iterations");
        const int expected[3] = {1, 4, 16};
        for (int b = 0; b <= 2; ++b) {
            if (it2.stage(b).size() != expected[b])
                rep.fail("iteration stage " + std::to_string(b) + " has size " +
                         std::to_string(it2.stage(b).size()));
            rep.bump("iteration_stages");
        }
        for (int xi = 0; xi <= 1; ++xi) {
            const poset& px = it2.stage(xi);
            std::vector<int> down;
            for (std::size_t x = 0; x < it2.seqs[2].size(); ++x) {
                std::vector<std::pair<int, name_id>> seq;
                for (const auto& slot : it2.seqs[2][x])
                    if (slot.first < xi) seq.push_back(slot);
                down.push_back(px.require_index(seq_id(it2, seq)));
            }
            for (int x = 0; x < it2.stage(2).size(); ++x)
                for (int y = 0; y < it2.stage(2).size(); ++y) {
                    if (it2.stage(2).leq(x, y) &&
                        !px.leq(down[static_cast<std::size_t>(x)], down[static_cast<std::size_t>(y)]))
                        rep.fail("restriction to stage " + std::to_string(xi) +
                                 " does not preserve order");
                    rep.bump("restrictions");
                }
        }
    }
    return rep;
}

suite_report verify_product(const poset& left, const poset& right) {
    suite_report rep;
    rep.suite = "product";
    rep.note("left " + left.name() + ", right " + right.name());
    const product_poset pp = product(left, right);
    const product_poset sw = product(right, left);
    rep.note("carrier " + std::to_string(pp.carrier.size()));

    for (int c = 0; c < pp.carrier.size(); ++c)
        for (int d = 0; d < pp.carrier.size(); ++d) {
            const bool want = left.leq(pp.left_of(c), pp.left_of(d)) &&
                              right.leq(pp.right_of(c), pp.right_of(d));
            if (pp.carrier.leq(c, d) != want)
                rep.fail("order is not componentwise at " + pp.carrier.elem(c) + " vs " +
                         pp.carrier.elem(d));
            rep.bump("order_pairs");
        }

    const auto swap_of = [&](int c) { return sw.pair_index(pp.right_of(c), pp.left_of(c)); };
    for (int c = 0; c < pp.carrier.size(); ++c)
        for (int d = 0; d < pp.carrier.size(); ++d) {
            if (pp.carrier.leq(c, d) != sw.carrier.leq(swap_of(c), swap_of(d)))
                rep.fail("swap is not an order isomorphism at " + pp.carrier.elem(c));
            rep.bump("swap_pairs");
        }

    // genericity of a rectangle equals genericity of both sides, either way
    // around; extension clauses reduce to this at finite scale
    if (left.size() + right.size() <= 12) {
        for (cond_mask g = 0; g < (cond_mask{1} << left.size()); ++g)
            for (cond_mask h = 0; h < (cond_mask{1} << right.size()); ++h) {
                cond_mask k = 0, ks = 0;
                for (int p = 0; p < left.size(); ++p)
                    for (int q = 0; q < right.size(); ++q)
                        if (has_bit(g, p) && has_bit(h, q)) {
                            k |= bit(pp.pair_index(p, q));
                            ks |= bit(sw.pair_index(q, p));
                        }
                const bool e1 = pp.carrier.generic(k);
                const bool e2 = sw.carrier.generic(ks);
                const bool e3 = left.generic(g) && right.generic(h);
                if (e1 != e3 || e2 != e3)
                    rep.fail("rectangle genericity disagrees at masks " + std::to_string(g) +
                             "," + std::to_string(h));
                rep.bump("filter_pairs");
            }
    } else {
        rep.note("carrier too large for the full rectangle scan; generics only");
    }

    std::int64_t count = 0;
    for (const cond_mask k : pp.carrier.generic_filters()) {
        cond_mask g = 0, h = 0, ks = 0;
        for (int c = 0; c < pp.carrier.size(); ++c)
            if (has_bit(k, c)) {
                g |= bit(pp.left_of(c));
                h |= bit(pp.right_of(c));
                ks |= bit(swap_of(c));
            }
        cond_mask k2 = 0;
        for (int p = 0; p < left.size(); ++p)
            for (int q = 0; q < right.size(); ++q)
                if (has_bit(g, p) && has_bit(h, q)) k2 |= bit(pp.pair_index(p, q));
        if (k2 != k || !left.generic(g) || !right.generic(h))
            rep.fail("generic does not factor as a rectangle");
        if (!sw.carrier.generic(ks)) rep.fail("swap does not carry a generic to a generic");
        rep.bump("generic_splits");
        ++count;
    }
    const std::int64_t nl = static_cast<std::int64_t>(left.generic_filters().size());
    const std::int64_t nr = static_cast<std::int64_t>(right.generic_filters().size());
    if (count != nl * nr)
        rep.fail("generic count " + std::to_string(count) + " is not " + std::to_string(nl) +
                 "*" + std::to_string(nr));

    if (right.top()) {
        std::vector<int> map;
        for (int p = 0; p < left.size(); ++p) map.push_back(pp.pair_index(p, *right.top()));
        if (!check_embedding(left, pp.carrier, map).complete_embedding)
            rep.fail("left factor does not embed completely through the right top");
        rep.bump("top_embeddings");
    } else {
        rep.note("right factor has no top; its embedding clause skipped");
    }
    if (left.top()) {
        std::vector<int> map;
        for (int q = 0; q < right.size(); ++q) map.push_back(sw.pair_index(q, *left.top()));
        if (!check_embedding(right, sw.carrier, map).complete_embedding)
            rep.fail("right factor does not embed completely through the left top");
        rep.bump("top_embeddings");
    } else {
        rep.note("left factor has no top; its embedding clause skipped");
    }
    return rep;
}

}  // namespace forcelab
