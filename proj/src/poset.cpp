#include "forcelab/poset.hpp"

#include <algorithm>
#include <set>

namespace forcelab {

poset::poset(std::string name, std::vector<std::string> elems,
             const std::vector<std::pair<int, int>>& le, std::optional<int> declared_top)
    : name_(std::move(name)), elems_(std::move(elems)), declared_top_(declared_top) {
    if (elems_.empty()) throw empty_poset_error("poset '" + name_ + "' has no elements");
    if (elems_.size() > max_conditions)
        throw size_limit_error("poset '" + name_ + "' exceeds " + std::to_string(max_conditions) +
                               " elements");
    {
        std::set<std::string> seen;
        for (const auto& e : elems_)
            if (!seen.insert(e).second)
                throw invalid_argument_error("duplicate element '" + e + "' in poset '" + name_ + "'");
    }
    const int n = size();
    below_.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) below_[static_cast<std::size_t>(i)] = bit(i);
    for (auto [a, b] : le) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw invalid_argument_error("order pair index out of range in poset '" + name_ + "'");
        below_[static_cast<std::size_t>(b)] |= bit(a);
    }
    // Transitive closure by mask propagation.
    for (bool changed = true; changed;) {
        changed = false;
        for (int p = 0; p < n; ++p) {
            cond_mask acc = below_[static_cast<std::size_t>(p)];
            for_each_bit(acc, [&](int q) { acc |= below_[static_cast<std::size_t>(q)]; });
            if (acc != below_[static_cast<std::size_t>(p)]) {
                below_[static_cast<std::size_t>(p)] = acc;
                changed = true;
            }
        }
    }
    above_.assign(static_cast<std::size_t>(n), 0);
    for (int p = 0; p < n; ++p)
        for_each_bit(below_[static_cast<std::size_t>(p)],
                     [&](int q) { above_[static_cast<std::size_t>(q)] |= bit(p); });
    if (declared_top_) {
        int t = *declared_top_;
        if (t < 0 || t >= n)
            throw invalid_argument_error("declared top out of range in poset '" + name_ + "'");
        if (below(t) != all())
            throw invalid_argument_error("declared top '" + elem(t) + "' of poset '" + name_ +
                                         "' is not a greatest element");
    }
}

std::optional<int> poset::index(std::string_view id) const {
    for (int i = 0; i < size(); ++i)
        if (elems_[static_cast<std::size_t>(i)] == id) return i;
    return std::nullopt;
}

int poset::require_index(std::string_view id) const {
    auto i = index(id);
    if (!i)
        throw unknown_reference_error("no element '" + std::string(id) + "' in poset '" + name_ + "'");
    return *i;
}

cond_mask poset::all() const {
    return size() == max_conditions ? ~cond_mask{0} : bit(size()) - 1;
}

bool poset::strict() const {
    for (int p = 0; p < size(); ++p)
        for (int q = 0; q < p; ++q)
            if (leq(p, q) && leq(q, p)) return false;
    return true;
}

std::optional<int> poset::top() const {
    if (declared_top_) return declared_top_;
    for (int t = 0; t < size(); ++t)
        if (below(t) == all()) return t;
    return std::nullopt;
}

std::optional<int> poset::compat_witness(int p, int q) const {
    cond_mask common = below(p) & below(q);
    if (!common) return std::nullopt;
    return std::countr_zero(common);
}

bool poset::downward_closed(cond_mask s) const {
    bool ok = true;
    for_each_bit(s, [&](int p) { ok = ok && (below(p) & ~s) == 0; });
    return ok;
}

bool poset::upward_closed(cond_mask s) const {
    bool ok = true;
    for_each_bit(s, [&](int p) { ok = ok && (above(p) & ~s) == 0; });
    return ok;
}

bool poset::dense(cond_mask s) const {
    for (int p = 0; p < size(); ++p)
        if ((below(p) & s) == 0) return false;
    return true;
}

bool poset::dense_below(cond_mask s, int p) const {
    bool ok = true;
    for_each_bit(below(p), [&](int q) { ok = ok && (below(q) & s) != 0; });
    return ok;
}

bool poset::antichain(cond_mask s) const {
    bool ok = true;
    for_each_bit(s, [&](int p) {
        for_each_bit(s & (bit(p) - 1), [&](int q) { ok = ok && !compatible(p, q); });
    });
    return ok;
}

bool poset::maximal_antichain(cond_mask s) const {
    if (!antichain(s)) return false;
    for (int p = 0; p < size(); ++p) {
        bool met = false;
        for_each_bit(s, [&](int a) { met = met || compatible(p, a); });
        if (!met) return false;
    }
    return true;
}

bool poset::filter(cond_mask s) const {
    if (!s || !upward_closed(s)) return false;
    bool ok = true;
    for_each_bit(s, [&](int p) {
        for_each_bit(s, [&](int q) { ok = ok && (below(p) & below(q) & s) != 0; });
    });
    return ok;
}

poset::subset_class poset::classify(cond_mask s) const {
    subset_class c;
    c.downward_closed = downward_closed(s);
    c.dense = dense(s);
    c.open_dense = c.downward_closed && c.dense;
    c.antichain = antichain(s);
    c.maximal_antichain = c.antichain && maximal_antichain(s);
    c.filter = filter(s);
    return c;
}

cond_mask poset::upward_closure(cond_mask s) const {
    cond_mask r = 0;
    for_each_bit(s, [&](int p) { r |= above(p); });
    return r;
}

cond_mask poset::downward_closure(cond_mask s) const {
    cond_mask r = 0;
    for_each_bit(s, [&](int p) { r |= below(p); });
    return r;
}

cond_mask poset::minimal_conditions() const {
    cond_mask r = 0;
    for (int p = 0; p < size(); ++p) {
        bool minimal = true;
        for_each_bit(below(p), [&](int q) { minimal = minimal && leq(p, q); });
        if (minimal) r |= bit(p);
    }
    return r;
}

std::vector<cond_mask> poset::generic_filters() const {
    std::vector<cond_mask> out;
    for_each_bit(minimal_conditions(), [&](int m) {
        cond_mask g = above(m);
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    });
    std::sort(out.begin(), out.end());
    return out;
}

bool poset::generic(cond_mask f) const {
    if (!filter(f)) return false;
    cond_mask mins = minimal_conditions() & f;
    if (!mins) return false;
    return f == above(std::countr_zero(mins));
}

void poset::require_scan_size(const char* what) const {
    if (size() > 20)
        throw size_limit_error(std::string(what) + " scans all subsets; poset '" + name_ +
                               "' is too large");
}

std::vector<cond_mask> poset::dense_subsets() const {
    require_scan_size("dense_subsets");
    std::vector<cond_mask> out;
    for (cond_mask s = 0; s <= all(); ++s)
        if (dense(s)) out.push_back(s);
    return out;
}

std::vector<cond_mask> poset::open_dense_subsets() const {
    require_scan_size("open_dense_subsets");
    std::vector<cond_mask> out;
    for (cond_mask s = 0; s <= all(); ++s)
        if (downward_closed(s) && dense(s)) out.push_back(s);
    return out;
}

std::vector<cond_mask> poset::maximal_antichains() const {
    require_scan_size("maximal_antichains");
    std::vector<cond_mask> out;
    for (cond_mask s = 0; s <= all(); ++s)
        if (antichain(s) && maximal_antichain(s)) out.push_back(s);
    return out;
}

std::vector<cond_mask> poset::generic_filters_definitional() const {
    require_scan_size("generic_filters_definitional");
    auto dense_family = dense_subsets();
    std::vector<cond_mask> out;
    for (cond_mask s = 1; s <= all(); ++s) {
        if (!filter(s)) continue;
        bool meets_all = true;
        for (cond_mask d : dense_family)
            if ((s & d) == 0) {
                meets_all = false;
                break;
            }
        if (meets_all) out.push_back(s);
    }
    return out;
}

embedding_report check_embedding(const poset& p, const poset& q, const std::vector<int>& map) {
    if (map.size() != static_cast<std::size_t>(p.size()))
        throw invalid_argument_error("embedding map size does not match domain poset");
    for (int i : map)
        if (i < 0 || i >= q.size())
            throw invalid_argument_error("embedding map image out of range");
    embedding_report r;
    // An embedding preserves the order and preserves incompatibility; neither
    // is required to reflect.
    r.order_embedding = true;
    for (int a = 0; a < p.size() && r.order_embedding; ++a) {
        for (int b = 0; b < p.size(); ++b) {
            auto fa = static_cast<std::size_t>(a), fb = static_cast<std::size_t>(b);
            if (p.leq(a, b) && !q.leq(map[fa], map[fb])) {
                r.order_embedding = false;
                r.detail = "order not preserved at (" + p.elem(a) + ", " + p.elem(b) + ")";
                break;
            }
            if (!p.compatible(a, b) && q.compatible(map[fa], map[fb])) {
                r.order_embedding = false;
                r.detail = "incompatibility not preserved at (" + p.elem(a) + ", " + p.elem(b) + ")";
                break;
            }
        }
    }
    if (!r.order_embedding) return r;

    // The image must be dense as a set of conditions: every q-condition has an
    // extension into the image.
    cond_mask image = 0;
    for (int i : map) image |= bit(i);
    r.dense_embedding = true;
    for (int c = 0; c < q.size(); ++c)
        if ((q.below(c) & image) == 0) {
            r.dense_embedding = false;
            if (r.detail.empty()) r.detail = "no extension of " + q.elem(c) + " lands in the image";
            break;
        }

    r.complete_embedding = true;
    for (cond_mask a : p.maximal_antichains()) {
        cond_mask ia = 0;
        for_each_bit(a, [&](int x) { ia |= bit(map[static_cast<std::size_t>(x)]); });
        if (!q.maximal_antichain(ia)) {
            r.complete_embedding = false;
            if (r.detail.empty()) r.detail = "a maximal antichain loses maximality in the image";
            break;
        }
    }
    return r;
}

cond_mask pull_back_generic(const poset& p, const poset& q, const std::vector<int>& map,
                            cond_mask generic_on_q) {
    cond_mask g = 0;
    for (int a = 0; a < p.size(); ++a)
        if (has_bit(generic_on_q, map[static_cast<std::size_t>(a)])) g |= bit(a);
    return g;
}

cond_mask push_forward_generic(const poset& p, const poset& q, const std::vector<int>& map,
                               cond_mask generic_on_p) {
    cond_mask image = 0;
    for_each_bit(generic_on_p, [&](int a) { image |= bit(map[static_cast<std::size_t>(a)]); });
    return q.upward_closure(image);
}

}  // namespace forcelab
