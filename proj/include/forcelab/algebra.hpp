#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "forcelab/parallel.hpp"
#include "forcelab/poset.hpp"

namespace forcelab {

using ba_elem = std::uint32_t;

// Boolean completion of a finite preorder: the algebra of regular open
// subsets.  A subset is regular open exactly when it is a fixed point of
// regularize().  Elements are indices into the carrier, which is kept in
// ascending mask order, so 0 is always the zero element and the last index
// is the unit.
class regular_open_algebra {
public:
    explicit regular_open_algebra(poset base, run_mode mode = run_mode::serial);

    const poset& base() const { return base_; }
    int carrier_size() const { return static_cast<int>(carrier_.size()); }
    cond_mask mask_of(ba_elem u) const { return carrier_[u]; }
    std::optional<ba_elem> try_from_mask(cond_mask m) const;
    ba_elem from_mask(cond_mask m) const;

    ba_elem zero() const { return 0; }
    ba_elem one() const { return static_cast<ba_elem>(carrier_.size() - 1); }

    // Least regular open superset of an arbitrary condition set.
    cond_mask regularize(cond_mask a) const;

    // The dense embedding p -> regularize(below p).
    ba_elem embed(int p) const { return embed_[static_cast<std::size_t>(p)]; }

    ba_elem meet(ba_elem u, ba_elem v) const { return from_mask(carrier_[u] & carrier_[v]); }
    ba_elem join(ba_elem u, ba_elem v) const { return from_mask(regularize(carrier_[u] | carrier_[v])); }
    ba_elem neg(ba_elem u) const;
    ba_elem minus(ba_elem u, ba_elem v) const { return meet(u, neg(v)); }
    ba_elem implies(ba_elem u, ba_elem v) const { return join(neg(u), v); }
    bool leq(ba_elem u, ba_elem v) const { return minus(u, v) == zero(); }

    // Empty sum is zero, empty product is one.
    ba_elem big_sum(std::span<const ba_elem> xs) const;
    ba_elem big_prod(std::span<const ba_elem> xs) const;

    std::vector<ba_elem> atoms() const;

    struct filter_class {
        bool filter = false;
        bool ultrafilter = false;
        bool generic = false;
    };
    filter_class classify_filter(const std::vector<ba_elem>& f) const;

    // One ultrafilter per atom: everything above it.  Ascending atom order.
    std::vector<std::vector<ba_elem>> ultrafilters() const;
    std::vector<ba_elem> principal_ultrafilter(ba_elem atom) const;

private:
    poset base_;
    std::vector<cond_mask> carrier_;
    std::vector<ba_elem> embed_;
};

// Algebra embedding induced by an order embedding i of base posets:
// j(u) = regularize of the image of u.  relabel[c] identifies the unique
// domain element u with j(u) == c, when one exists; composing embed and j
// against the base map commutes for complete embeddings.
struct induced_embedding {
    std::vector<ba_elem> j;                         // indexed by domain algebra element
    std::vector<std::optional<ba_elem>> relabel;    // indexed by codomain algebra element
    bool boolean_embedding = false;                 // preserves meet, join, neg, 0, 1, injectively
    bool square_commutes = false;                   // j(e_P(p)) == e_Q(i(p))
};

induced_embedding induce_algebra_embedding(const regular_open_algebra& ro_p,
                                           const regular_open_algebra& ro_q,
                                           const std::vector<int>& base_map);

}  // namespace forcelab
