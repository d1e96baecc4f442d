#include "forcelab/suites.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <random>

#include "forcelab/corpus.hpp"
#include "forcelab/forcing.hpp"

namespace forcelab {

namespace {

// CAS-min keeps the least failing instance, so both run modes report the
// same counterexample.
void note_fail(std::atomic<std::int64_t>& first, std::int64_t at) {
    std::int64_t prev = first.load(std::memory_order_relaxed);
    while ((prev < 0 || at < prev) &&
           !first.compare_exchange_weak(prev, at, std::memory_order_relaxed)) {
    }
}

const char* triple_violation(const regular_open_algebra& A, ba_elem u, ba_elem v, ba_elem w) {
    if (A.join(u, v) != A.join(v, u)) return "join commutativity";
    if (A.meet(u, v) != A.meet(v, u)) return "meet commutativity";
    if (A.join(u, A.join(v, w)) != A.join(A.join(u, v), w)) return "join associativity";
    if (A.meet(u, A.meet(v, w)) != A.meet(A.meet(u, v), w)) return "meet associativity";
    if (A.meet(u, A.join(v, w)) != A.join(A.meet(u, v), A.meet(u, w)))
        return "meet distributes over join";
    if (A.join(u, A.meet(v, w)) != A.meet(A.join(u, v), A.join(u, w)))
        return "join distributes over meet";
    if (A.join(u, A.meet(u, v)) != u) return "absorption";
    if (A.meet(u, A.join(u, v)) != u) return "dual absorption";
    if (A.join(u, A.neg(u)) != A.one()) return "complement join";
    if (A.meet(u, A.neg(u)) != A.zero()) return "complement meet";
    if (A.leq(u, w) && A.leq(v, w) && !A.leq(A.join(u, v), w)) return "join minimality";
    if (A.leq(w, u) && A.leq(w, v) && !A.leq(w, A.meet(u, v))) return "meet maximality";
    return nullptr;
}

const char* element_violation(const regular_open_algebra& A, ba_elem u) {
    if (A.join(u, u) != u) return "join idempotence";
    if (A.meet(u, u) != u) return "meet idempotence";
    if (A.join(u, A.zero()) != u) return "zero is a join identity";
    if (A.meet(u, A.one()) != u) return "one is a meet identity";
    if (A.meet(u, A.zero()) != A.zero()) return "zero absorbs meets";
    if (A.join(u, A.one()) != A.one()) return "one absorbs joins";
    if (A.neg(A.neg(u)) != u) return "double complement";
    if (!A.leq(A.zero(), u)) return "zero is least";
    if (!A.leq(u, A.one())) return "one is greatest";
    return nullptr;
}

const char* pair_violation(const regular_open_algebra& A, ba_elem u, ba_elem v) {
    if (A.neg(A.join(u, v)) != A.meet(A.neg(u), A.neg(v))) return "De Morgan for join";
    if (A.neg(A.meet(u, v)) != A.join(A.neg(u), A.neg(v))) return "De Morgan for meet";
    if (A.leq(u, v) != ((A.mask_of(u) & ~A.mask_of(v)) == 0)) return "order is mask inclusion";
    if (!A.leq(u, A.join(u, v))) return "join is an upper bound";
    if (!A.leq(A.meet(u, v), u)) return "meet is a lower bound";
    if (A.join(u, v) == A.one() && A.meet(u, v) == A.zero() && v != A.neg(u))
        return "complements are unique";
    return nullptr;
}

const char* subset_violation(const regular_open_algebra& A, const std::vector<ba_elem>& xs,
                             ba_elem u) {
    const ba_elem S = A.big_sum(xs);
    const ba_elem P = A.big_prod(xs);
    for (const ba_elem x : xs) {
        if (!A.leq(x, S)) return "big sum bounds its terms";
        if (!A.leq(P, x)) return "big product is below its terms";
    }
    std::vector<ba_elem> mapped(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) mapped[i] = A.meet(u, xs[i]);
    if (A.meet(u, S) != A.big_sum(mapped)) return "meet distributes over big sums";
    for (std::size_t i = 0; i < xs.size(); ++i) mapped[i] = A.join(u, xs[i]);
    if (A.join(u, P) != A.big_prod(mapped)) return "join distributes over big products";
    for (std::size_t i = 0; i < xs.size(); ++i) mapped[i] = A.neg(xs[i]);
    if (A.neg(S) != A.big_prod(mapped)) return "De Morgan for big sums";
    if (A.neg(P) != A.big_sum(mapped)) return "De Morgan for big products";
    return nullptr;
}

std::string elem_label(const regular_open_algebra& A, ba_elem u) {
    return std::to_string(u) + "@" + std::to_string(static_cast<unsigned long long>(A.mask_of(u)));
}

}  // namespace

suite_report verify_algebra_laws(const poset& p, run_mode mode, std::uint64_t seed) {
    suite_report r;
    r.suite = "algebra-laws";
    const regular_open_algebra A(p);
    const std::int64_t n = A.carrier_size();
    r.note("poset " + p.name() + ": " + std::to_string(p.size()) + " conditions, carrier " +
           std::to_string(n));

    if (A.big_sum({}) != A.zero() || A.big_prod({}) != A.one()) {
        r.fail("empty big operations miss the lattice bounds");
        return r;
    }

    for (ba_elem u = 0; u < static_cast<ba_elem>(n); ++u)
        if (const char* law = element_violation(A, u)) {
            r.fail("element " + elem_label(A, u) + ": " + law);
            return r;
        }
    r.bump("elements", n);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<ba_elem> pick(0, static_cast<ba_elem>(n - 1));

    std::vector<std::array<ba_elem, 2>> pairs;
    if (n <= 64) {
        for (ba_elem u = 0; u < static_cast<ba_elem>(n); ++u)
            for (ba_elem v = 0; v < static_cast<ba_elem>(n); ++v) pairs.push_back({u, v});
    } else {
        for (int i = 0; i < 500; ++i) pairs.push_back({pick(rng), pick(rng)});
    }
    std::vector<std::array<ba_elem, 3>> triples;
    if (n <= 16) {
        for (ba_elem u = 0; u < static_cast<ba_elem>(n); ++u)
            for (ba_elem v = 0; v < static_cast<ba_elem>(n); ++v)
                for (ba_elem w = 0; w < static_cast<ba_elem>(n); ++w) triples.push_back({u, v, w});
    } else {
        for (int i = 0; i < 500; ++i) triples.push_back({pick(rng), pick(rng), pick(rng)});
    }

    std::atomic<std::int64_t> first_fail{-1};
    for_each_index(static_cast<std::int64_t>(pairs.size()), mode, [&](std::int64_t i) {
        const auto [u, v] = pairs[static_cast<std::size_t>(i)];
        if (pair_violation(A, u, v)) note_fail(first_fail, i);
    });
    if (const std::int64_t bad = first_fail.load(); bad >= 0) {
        const auto [u, v] = pairs[static_cast<std::size_t>(bad)];
        r.fail("elements (" + elem_label(A, u) + ", " + elem_label(A, v) + "): " +
               pair_violation(A, u, v));
        return r;
    }
    r.bump("pairs", static_cast<std::int64_t>(pairs.size()));

    first_fail.store(-1);
    for_each_index(static_cast<std::int64_t>(triples.size()), mode, [&](std::int64_t i) {
        const auto [u, v, w] = triples[static_cast<std::size_t>(i)];
        if (triple_violation(A, u, v, w)) note_fail(first_fail, i);
    });
    if (const std::int64_t bad = first_fail.load(); bad >= 0) {
        const auto [u, v, w] = triples[static_cast<std::size_t>(bad)];
        r.fail("elements (" + elem_label(A, u) + ", " + elem_label(A, v) + ", " +
               elem_label(A, w) + "): " + triple_violation(A, u, v, w));
        return r;
    }
    r.bump("triples", static_cast<std::int64_t>(triples.size()));

    std::uniform_int_distribution<int> len(0, 8);
    for (int round = 0; round < 120; ++round) {
        std::vector<ba_elem> xs;
        const int k = len(rng);
        for (int i = 0; i < k; ++i) xs.push_back(pick(rng));
        const ba_elem u = pick(rng);
        if (const char* law = subset_violation(A, xs, u)) {
            r.fail("subset round " + std::to_string(round) + ": " + law);
            return r;
        }
        r.bump("subset_rounds");
    }
    return r;
}

namespace {

const char* bvm_violation(eval_context& ev, const regular_open_algebra& A, name_id t, name_id s,
                          name_id x) {
    const auto val = [&](atom_kind k, name_id a, name_id b) { return ev.bval_atomic(k, a, b); };
    const ba_elem eq_sx = val(atom_kind::eq_rel, s, x);
    if (!A.leq(A.meet(val(atom_kind::subset_rel, t, s), eq_sx), val(atom_kind::subset_rel, t, x)))
        return "inclusion transports on the right";
    if (!A.leq(A.meet(val(atom_kind::subset_rel, s, t), eq_sx), val(atom_kind::subset_rel, x, t)))
        return "inclusion transports on the left";
    if (!A.leq(A.meet(val(atom_kind::in_rel, s, t), eq_sx), val(atom_kind::in_rel, x, t)))
        return "membership transports the member";
    if (!A.leq(A.meet(val(atom_kind::in_rel, s, x), val(atom_kind::eq_rel, t, s)),
               val(atom_kind::in_rel, t, x)))
        return "membership transports along the first equality";
    if (!A.leq(A.meet(val(atom_kind::in_rel, t, s), eq_sx), val(atom_kind::in_rel, t, x)))
        return "membership transports the container";
    if (!A.leq(A.meet(val(atom_kind::eq_rel, t, s), eq_sx), val(atom_kind::eq_rel, t, x)))
        return "equality is transitive";
    return nullptr;
}

}  // namespace

suite_report verify_bvm_laws(const poset& p, int max_rank, run_mode mode) {
    suite_report r;
    r.suite = "bvm-laws";
    forcing_context ctx(p, mode);
    const std::vector<ba_elem> pool = suite_value_pool(ctx.alg, 8);
    const std::vector<name_id> names = ctx.names.enumerate(max_rank, pool);
    ctx.ev.ensure_names(names);
    const std::int64_t n = static_cast<std::int64_t>(names.size());
    r.note("poset " + p.name() + ": " + std::to_string(n) + " names over " +
           std::to_string(pool.size()) + " values");

    for (const name_id a : names) {
        if (ctx.ev.bval_atomic(atom_kind::eq_rel, a, a) != ctx.alg.one()) {
            r.fail("equality is not reflexive at " + ctx.names.repr(a));
            return r;
        }
        if (ctx.ev.bval_atomic(atom_kind::subset_rel, a, a) != ctx.alg.one()) {
            r.fail("inclusion is not reflexive at " + ctx.names.repr(a));
            return r;
        }
        for (const auto& [x, vx] : ctx.names.entries(a)) {
            if (!ctx.alg.leq(vx, ctx.ev.bval_atomic(atom_kind::in_rel, x, a))) {
                r.fail("entry bound fails at " + ctx.names.repr(a));
                return r;
            }
            r.bump("entry_bounds");
        }
        for (const name_id b : names)
            if (ctx.ev.bval_atomic(atom_kind::eq_rel, a, b) !=
                ctx.ev.bval_atomic(atom_kind::eq_rel, b, a)) {
                r.fail("equality is not symmetric at (" + ctx.names.repr(a) + ", " +
                       ctx.names.repr(b) + ")");
                return r;
            }
    }
    r.bump("names", n);
    r.bump("pairs", n * n);

    std::atomic<std::int64_t> first_fail{-1};
    for_each_index(n * n * n, mode, [&](std::int64_t i) {
        const name_id t = names[static_cast<std::size_t>(i / (n * n))];
        const name_id s = names[static_cast<std::size_t>((i / n) % n)];
        const name_id x = names[static_cast<std::size_t>(i % n)];
        if (bvm_violation(ctx.ev, ctx.alg, t, s, x)) note_fail(first_fail, i);
    });
    if (const std::int64_t bad = first_fail.load(); bad >= 0) {
        const name_id t = names[static_cast<std::size_t>(bad / (n * n))];
        const name_id s = names[static_cast<std::size_t>((bad / n) % n)];
        const name_id x = names[static_cast<std::size_t>(bad % n)];
        r.fail("names (" + ctx.names.repr(t) + ", " + ctx.names.repr(s) + ", " +
               ctx.names.repr(x) + "): " + bvm_violation(ctx.ev, ctx.alg, t, s, x));
        return r;
    }
    r.bump("triples", n * n * n);

    first_fail.store(-1);
    for_each_index(n * n * n * n, mode, [&](std::int64_t i) {
        const name_id t = names[static_cast<std::size_t>(i / (n * n * n))];
        const name_id s = names[static_cast<std::size_t>((i / (n * n)) % n)];
        const name_id x = names[static_cast<std::size_t>((i / n) % n)];
        const name_id y = names[static_cast<std::size_t>(i % n)];
        const ba_elem lhs =
            ctx.alg.meet(ctx.ev.bval_atomic(atom_kind::in_rel, t, s),
                         ctx.alg.meet(ctx.ev.bval_atomic(atom_kind::eq_rel, t, x),
                                      ctx.ev.bval_atomic(atom_kind::eq_rel, s, y)));
        if (!ctx.alg.leq(lhs, ctx.ev.bval_atomic(atom_kind::in_rel, x, y)))
            note_fail(first_fail, i);
    });
    if (const std::int64_t bad = first_fail.load(); bad >= 0) {
        r.fail("membership fails to transport along equal pairs at index " + std::to_string(bad));
        return r;
    }
    r.bump("quadruples", n * n * n * n);
    return r;
}

namespace {

std::vector<poset> default_corpus(const std::string& id, const suite_options& opt) {
    if (id == "algebra-laws") {
        std::vector<poset> ps = all_preorders_up_to_iso(std::min(4, opt.max_poset));
        std::mt19937_64 rng(opt.seed);
        for (int i = 0; i < 200; ++i) ps.push_back(random_preorder(rng, opt.max_poset, i));
        return ps;
    }
    if (id == "bvm-laws") return all_preorders_up_to_iso(std::min(4, opt.max_poset));
    if (id == "delta0")
        return {named_poset("cohen2"), antichain_poset(2), antichain_poset(3)};
    if (id == "forcing-theorem" || id == "forcing-facts")
        return all_preorders_up_to_iso(std::min(5, opt.max_poset));
    if (id == "twostep") return {named_poset("cohen1"), named_poset("chain2")};
    return all_preorders_up_to_iso(std::min(3, opt.max_poset));  // product factors
}

suite_report merge_reports(const std::string& suite, std::vector<suite_report> parts,
                           const std::vector<std::string>& labels, std::string corpus_note) {
    suite_report merged;
    merged.suite = suite;
    merged.note(std::move(corpus_note));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        merged.bump("targets");
        for (const auto& [k, v] : parts[i].counts) merged.bump(k, v);
        if (!parts[i].pass && merged.pass) merged.fail(labels[i] + ": " + parts[i].counterexample);
    }
    return merged;
}

std::vector<suite_report> run_per_poset(const std::string& id, const suite_options& opt,
                                        const std::function<suite_report(const poset&)>& kernel) {
    if (!opt.posets.empty()) {
        std::vector<suite_report> out;
        for (const poset& p : opt.posets) out.push_back(kernel(p));
        return out;
    }
    const std::vector<poset> corpus = default_corpus(id, opt);
    std::vector<suite_report> parts;
    std::vector<std::string> labels;
    for (const poset& p : corpus) {
        parts.push_back(kernel(p));
        labels.push_back(p.name());
    }
    return {merge_reports(id, std::move(parts), labels,
                          "default corpus: " + std::to_string(corpus.size()) + " posets")};
}

std::vector<suite_report> run_product_suite(const suite_options& opt) {
    std::vector<std::pair<poset, poset>> pairs;
    if (opt.posets.size() >= 2) {
        for (std::size_t i = 0; i < opt.posets.size(); ++i)
            for (std::size_t j = i; j < opt.posets.size(); ++j)
                pairs.emplace_back(opt.posets[i], opt.posets[j]);
    } else if (opt.posets.size() == 1) {
        pairs.emplace_back(opt.posets[0], opt.posets[0]);
    } else {
        const std::vector<poset> corpus = default_corpus("product", opt);
        for (std::size_t i = 0; i < corpus.size(); ++i)
            for (std::size_t j = i; j < corpus.size(); ++j)
                pairs.emplace_back(corpus[i], corpus[j]);
    }
    std::vector<suite_report> parts;
    std::vector<std::string> labels;
    for (const auto& [l, rgt] : pairs) {
        parts.push_back(verify_product(l, rgt));
        labels.push_back(l.name() + " x " + rgt.name());
    }
    if (!opt.posets.empty()) return parts;
    return {merge_reports("product", std::move(parts), labels,
                          "default corpus: " + std::to_string(pairs.size()) + " factor pairs")};
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> ids = {"forcing-theorem", "forcing-facts", "bvm-laws",
                                                 "algebra-laws",    "twostep",       "product",
                                                 "delta0"};
    return ids;
}

bool is_suite(const std::string& id) {
    const auto& ids = suite_names();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::vector<suite_report> run_suite(const std::string& id, const suite_options& opt) {
    if (id == "algebra-laws")
        return run_per_poset(id, opt,
                             [&](const poset& p) { return verify_algebra_laws(p, opt.mode, opt.seed); });
    if (id == "bvm-laws")
        return run_per_poset(id, opt,
                             [&](const poset& p) { return verify_bvm_laws(p, opt.max_rank, opt.mode); });
    if (id == "delta0")
        return run_per_poset(id, opt, [&](const poset& p) {
            return verify_delta0_satisfaction(p, opt.max_rank, opt.max_depth, opt.mode, opt.seed);
        });
    if (id == "forcing-theorem")
        return run_per_poset(id, opt, [&](const poset& p) {
            forcing_context ctx(p, opt.mode);
            return verify_forcing_theorem(ctx, opt.max_rank, opt.max_depth, opt.mode, opt.seed);
        });
    if (id == "forcing-facts")
        return run_per_poset(id, opt, [&](const poset& p) {
            forcing_context ctx(p, opt.mode);
            return verify_forcing_facts(ctx, opt.max_rank, opt.max_depth, opt.mode, opt.seed);
        });
    if (id == "twostep")
        return run_per_poset(id, opt,
                             [&](const poset& p) { return verify_twostep(p, opt.mode); });
    if (id == "product") return run_product_suite(opt);
    throw unknown_reference_error("unknown suite '" + id + "'");
}

}  // namespace forcelab
