#pragma once

#include <random>
#include <vector>

#include "forcelab/poset.hpp"

namespace forcelab {

// Binary strings of length at most depth, ordered by reverse extension: a
// condition extends its prefixes.  The empty string "e" is the top.
poset cohen_poset(int depth);

// a1 > a2 > ... > an.
poset chain_poset(int n);

// n pairwise incompatible conditions; with_top adds a greatest element t.
poset antichain_poset(int n, bool with_top = false);

// Looks up cohen1/cohen2/chain_k/antichain_k/antichain_k_top by name.
poset named_poset(const std::string& id);
bool is_named_poset(const std::string& id);

// All preorders on up to max_n elements, one per isomorphism class,
// deterministically ordered and named.  max_n <= 5.
std::vector<poset> all_preorders_up_to_iso(int max_n);

// Seeded preorder on up to max_n elements: random generator pairs, closed.
poset random_preorder(std::mt19937_64& rng, int max_n, int tag);

}  // namespace forcelab
