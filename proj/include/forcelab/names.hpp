#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forcelab/algebra.hpp"

namespace forcelab {

using hf_id = std::uint32_t;
using name_id = std::uint32_t;

// Position of a pair of naturals in the canonical well ordering: by maximum,
// then first coordinate, then second.
std::int64_t pair_code(std::int64_t a, std::int64_t b);
// Same ordering idea for triples: by maximum, then lexicographically.
std::int64_t triple_code(std::int64_t a, std::int64_t b, std::int64_t c);

// Interned hereditarily finite sets.  Members are kept sorted by the
// structural order, so equal sets share an id and id comparison is equality.
class hf_pool {
public:
    hf_pool();

    hf_id empty() const { return 0; }
    hf_id make(std::vector<hf_id> members);
    hf_id nat(int k);                    // von Neumann numeral
    hf_id kpair(hf_id a, hf_id b);       // Kuratowski pair {a, {a, b}}

    const std::vector<hf_id>& members(hf_id x) const { return nodes_[x].members; }
    bool contains(hf_id x, hf_id m) const;
    bool subset(hf_id x, hf_id y) const;
    int rank(hf_id x) const { return nodes_[x].rank; }
    // Total structural order: rank, then size, then member list.
    int cmp(hf_id a, hf_id b) const;

    std::optional<std::pair<hf_id, hf_id>> decode_pair(hf_id x) const;
    std::optional<int> decode_nat(hf_id x) const;

    // Canonical rendering: numerals as digits, pairs as <a,b>, else braces.
    std::string render(hf_id x) const;

private:
    struct node {
        std::vector<hf_id> members;
        int rank = 0;
    };
    std::vector<node> nodes_;
    std::map<std::vector<hf_id>, hf_id> index_;
};

// Names over a fixed completion, interned in canonical form: entries are
// sorted by the structural name order, duplicate keys folded by joining
// their values.  Zero-valued entries are kept; {<empty,0>} and the empty
// name are different names even though they are forced equal.
class name_pool {
public:
    explicit name_pool(const regular_open_algebra& alg);

    const regular_open_algebra& algebra() const { return *alg_; }

    name_id empty_name() const { return 0; }
    name_id make(std::vector<std::pair<name_id, ba_elem>> entries);

    const std::vector<std::pair<name_id, ba_elem>>& entries(name_id t) const {
        return nodes_[t].entries;
    }
    std::optional<ba_elem> value(name_id t, name_id key) const;
    int brank(name_id t) const { return nodes_[t].brank; }
    // Structural order: brank, then entries lexicographically.  Interning
    // makes equal ids the only equal names, so descent stops at the first
    // difference.
    int cmp(name_id a, name_id b) const;
    // Serialized form, built on demand: deep names flatten their shared
    // parts, so the string can be far larger than the pool node.
    const std::string& repr(name_id t) const;

    std::size_t size() const { return nodes_.size(); }

    // Check name of a hereditarily finite set: every member named with
    // certainty one.
    name_id check_name(hf_pool& hf, hf_id x);
    // Interns the decoded set, so the pool is taken mutably.
    std::optional<hf_id> decode_check(hf_pool& hf, name_id t) const;

    // The canonical name for the generic filter: {<p-check, e(p)> : p}.
    // Condition p is checked as the von Neumann numeral of its index.
    name_id generic_name(hf_pool& hf);

    // op(a, b) names the Kuratowski pair of the two names' values.
    name_id op_name(name_id a, name_id b);
    std::optional<std::pair<name_id, name_id>> decode_op(name_id t) const;

    // All names of rank <= max_rank with values drawn from pool (ascending
    // algebra order expected).  Throws pool_too_large_error if the level
    // count would exceed the cap.
    std::vector<name_id> enumerate(int max_rank, const std::vector<ba_elem>& pool,
                                   std::size_t cap = 1u << 20);

private:
    struct node {
        std::vector<std::pair<name_id, ba_elem>> entries;
        int brank = 1;
    };

    const regular_open_algebra* alg_;
    std::vector<node> nodes_;
    std::map<std::vector<std::pair<name_id, ba_elem>>, name_id> index_;
    std::map<hf_id, name_id> check_cache_;
    mutable std::map<name_id, std::string> repr_cache_;
    std::optional<name_id> gdot_;
};

// Element rendering used in name serializations: 0, 1, (e p), or a join of
// embedded conditions.
std::string render_elem(const regular_open_algebra& alg, ba_elem u);

}  // namespace forcelab
