#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forcelab/base.hpp"

namespace forcelab {

// Finite preorder of forcing conditions.  q <= p reads "q extends p".
// The order is stored reflexively and transitively closed; antisymmetry is
// not assumed and is reported as a derived property.
class poset {
public:
    // Empty shell with no elements; only useful as a slot assigned later.
    poset() = default;

    // le lists generator pairs (a, b) meaning a <= b; the constructor closes
    // them reflexively and transitively.  A declared top must be a greatest
    // element.
    poset(std::string name, std::vector<std::string> elems,
          const std::vector<std::pair<int, int>>& le,
          std::optional<int> declared_top = std::nullopt);

    const std::string& name() const { return name_; }
    int size() const { return static_cast<int>(elems_.size()); }
    const std::string& elem(int i) const { return elems_[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& elems() const { return elems_; }
    std::optional<int> index(std::string_view id) const;
    int require_index(std::string_view id) const;

    bool leq(int p, int q) const { return has_bit(below_[static_cast<std::size_t>(q)], p); }
    bool equivalent(int p, int q) const { return leq(p, q) && leq(q, p); }
    cond_mask below(int p) const { return below_[static_cast<std::size_t>(p)]; }
    cond_mask above(int p) const { return above_[static_cast<std::size_t>(p)]; }
    cond_mask all() const;

    // True when the order is antisymmetric (a partial order proper).
    bool strict() const;
    std::optional<int> declared_top() const { return declared_top_; }
    // Declared top, or the least-index greatest element if one exists.
    std::optional<int> top() const;

    bool compatible(int p, int q) const { return (below(p) & below(q)) != 0; }
    // Least-index common extension, if the two conditions are compatible.
    std::optional<int> compat_witness(int p, int q) const;

    bool downward_closed(cond_mask s) const;
    bool upward_closed(cond_mask s) const;
    bool dense(cond_mask s) const;
    bool dense_below(cond_mask s, int p) const;
    bool antichain(cond_mask s) const;
    bool maximal_antichain(cond_mask s) const;
    bool filter(cond_mask s) const;

    struct subset_class {
        bool downward_closed = false;
        bool open_dense = false;
        bool dense = false;
        bool antichain = false;
        bool maximal_antichain = false;
        bool filter = false;
    };
    subset_class classify(cond_mask s) const;

    cond_mask upward_closure(cond_mask s) const;
    cond_mask downward_closure(cond_mask s) const;

    // Conditions with nothing strictly below them.
    cond_mask minimal_conditions() const;

    // All generic filters, in ascending mask order.  A filter of a finite
    // preorder is generic exactly when it is the upward closure of a minimal
    // condition, which keeps this total for any size.
    std::vector<cond_mask> generic_filters() const;
    bool generic(cond_mask f) const;

    // Scan-based families; they enumerate all 2^n subsets and require
    // size() <= 20.  The definitional generic enumeration intersects the
    // filter family with every dense subset.
    std::vector<cond_mask> dense_subsets() const;
    std::vector<cond_mask> open_dense_subsets() const;
    std::vector<cond_mask> maximal_antichains() const;
    std::vector<cond_mask> generic_filters_definitional() const;

private:
    void require_scan_size(const char* what) const;

    std::string name_;
    std::vector<std::string> elems_;
    std::vector<cond_mask> below_;
    std::vector<cond_mask> above_;
    std::optional<int> declared_top_;
};

// Order/dense/complete classification of a condition map i : p -> q given by
// image indices per element of p.
struct embedding_report {
    bool order_embedding = false;
    bool dense_embedding = false;
    bool complete_embedding = false;
    // First witness against the strongest failed property, as element indices
    // of the relevant poset, for diagnostics.
    std::string detail;
};

embedding_report check_embedding(const poset& p, const poset& q, const std::vector<int>& map);

// Generic transfer along an embedding: pull back through a complete
// embedding, push forward (upward closure of the image) through a dense one.
cond_mask pull_back_generic(const poset& p, const poset& q, const std::vector<int>& map,
                            cond_mask generic_on_q);
cond_mask push_forward_generic(const poset& p, const poset& q, const std::vector<int>& map,
                               cond_mask generic_on_p);

}  // namespace forcelab
