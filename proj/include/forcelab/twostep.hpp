#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "forcelab/forcing.hpp"

namespace forcelab {

// What one generic filter makes of a certified poset name: the decoded
// preorder, the set value behind each of its elements, and where each
// second-coordinate element name lands.
struct stage_certificate {
    cond_mask generic = 0;
    poset decoded;
    std::vector<hf_id> field;        // set value per decoded element
    std::vector<int> element_image;  // element-name position -> decoded index
};

// A name certified to valuate, under every generic, to a preorder coded as
// a set of ordered pairs whose greatest element is the empty set.  Element
// names are the pair components; every one of them must land inside the
// decoded order under every generic, which is what keeps the two-step
// order reflexive on its whole carrier.
struct poset_name {
    std::string base;               // first-stage poset this was certified over
    name_id name = 0;
    std::vector<name_id> elements;  // structurally sorted; [0] is the check of empty
    std::vector<stage_certificate> certificates;  // per generic, ascending
};

poset_name validate_poset_name(forcing_context& ctx, name_id n);

// Check name of a poset's order relation.  The top is coded as the empty
// set and the remaining elements as numerals in index order, so the coded
// relation has the greatest element the convention demands.
name_id poset_order_name(forcing_context& ctx, const poset& q);

// The two-step order: bare first-stage conditions together with all pairs
// <p, tau> over the second stage's element names.
struct two_step {
    poset_name second;
    poset carrier;
    int first_size = 0;

    int pair_index(int p, int t) const {
        return first_size + p * static_cast<int>(second.elements.size()) + t;
    }
    bool is_bare(int c) const { return c < first_size; }
    int first_of(int c) const {
        return is_bare(c) ? c : (c - first_size) / static_cast<int>(second.elements.size());
    }
    int element_of(int c) const {  // -1 for bare conditions
        return is_bare(c) ? -1 : (c - first_size) % static_cast<int>(second.elements.size());
    }
};

two_step star(forcing_context& ctx, const poset_name& qdot);

// A generic on the two-step splits into a first-stage generic and a filter
// on the matching decoded poset; merging reverses the split.
struct generic_pair {
    cond_mask first = 0;
    cond_mask second = 0;  // over the certificate's decoded poset
    int certificate = -1;  // index into second.certificates
};

generic_pair split_generic(const two_step& ts, cond_mask k);
cond_mask merge_generic(const two_step& ts, const generic_pair& gh);

// Reassociation j: a name over the two-step becomes a first-stage name
// valuating to a coded second-stage name.  Entries follow the two-branch
// recursion over the carrier conditions of each value.
name_id reassociate(const two_step& ts, forcing_context& star_ctx, forcing_context& first_ctx,
                    name_id a, int rank_cap = 6);

// Valuation of a coded second-stage name by a filter given as set values:
// members decode as pairs <inner code, order element> and survive when the
// order element lies in the filter.
hf_id hf_stage_valuate(hf_pool& hf, hf_id coded, const std::vector<hf_id>& filter);

// Rebuilds a coded second-stage name as a name over the decoded poset's
// completion; field lists the decoded element values in index order.
name_id decode_stage_name(const hf_pool& hf, hf_id coded, forcing_context& target,
                          const std::vector<hf_id>& field);

// Product order on all pairs, componentwise.
struct product_poset {
    poset carrier;
    int left_size = 0, right_size = 0;

    int pair_index(int p, int q) const { return p * right_size + q; }
    int left_of(int c) const { return c / right_size; }
    int right_of(int c) const { return c % right_size; }
};

product_poset product(const poset& left, const poset& right);

// Finite iteration of certified stages; conditions are partial sequences
// with full support.  Stage contexts are pinned because names reference
// their pools.
struct finite_iteration {
    std::vector<std::unique_ptr<forcing_context>> contexts;  // per stage 0..n
    std::vector<poset_name> names;                           // pi_b over stage b
    // per stage, per condition: the defined slots as (stage, element name)
    std::vector<std::vector<std::vector<std::pair<int, name_id>>>> seqs;

    int length() const { return static_cast<int>(names.size()); }
    const poset& stage(int b) const { return contexts[static_cast<std::size_t>(b)]->base(); }
};

using stage_spec = std::function<name_id(forcing_context&)>;

finite_iteration iterate(const std::vector<stage_spec>& stages, int cap = 4);

// Star construction, split/merge, reassociation, and iteration packaging
// over one first-stage poset with standard and mixed second stages.
suite_report verify_twostep(const poset& first, run_mode mode = run_mode::serial);

// The product equivalence: componentwise generics, the swap isomorphism,
// and the complete embedding through the top.
suite_report verify_product(const poset& left, const poset& right);

}  // namespace forcelab
