#include "forcelab/algebra.hpp"

#include <algorithm>

namespace forcelab {

regular_open_algebra::regular_open_algebra(poset base, run_mode mode) : base_(std::move(base)) {
    const int n = base_.size();
    if (n > 22)
        throw size_limit_error("completion of poset '" + base_.name() +
                               "' would scan 2^" + std::to_string(n) + " subsets");
    const std::int64_t total = std::int64_t{1} << n;
    std::vector<std::uint8_t> keep(static_cast<std::size_t>(total));
    for_each_index(total, mode, [&](std::int64_t s) {
        auto m = static_cast<cond_mask>(s);
        keep[static_cast<std::size_t>(s)] = regularize(m) == m;
    });
    for (std::int64_t s = 0; s < total; ++s)
        if (keep[static_cast<std::size_t>(s)]) carrier_.push_back(static_cast<cond_mask>(s));
    embed_.reserve(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) embed_.push_back(from_mask(regularize(base_.below(p))));
}

cond_mask regular_open_algebra::regularize(cond_mask a) const {
    // The pointwise fixed-point formula computes the least regular open
    // superset of a downward closed set only, so close downwards first; on
    // open input the closure is the identity.
    a = base_.downward_closure(a);
    cond_mask r = 0;
    for (int p = 0; p < base_.size(); ++p) {
        bool hits_everywhere = true;
        for_each_bit(base_.below(p), [&](int q) {
            hits_everywhere = hits_everywhere && (base_.below(q) & a) != 0;
        });
        if (hits_everywhere) r |= bit(p);
    }
    return r;
}

std::optional<ba_elem> regular_open_algebra::try_from_mask(cond_mask m) const {
    auto it = std::lower_bound(carrier_.begin(), carrier_.end(), m);
    if (it == carrier_.end() || *it != m) return std::nullopt;
    return static_cast<ba_elem>(it - carrier_.begin());
}

ba_elem regular_open_algebra::from_mask(cond_mask m) const {
    auto u = try_from_mask(m);
    if (!u) throw invalid_argument_error("condition set is not regular open");
    return *u;
}

ba_elem regular_open_algebra::neg(ba_elem u) const {
    cond_mask m = carrier_[u];
    cond_mask r = 0;
    for (int p = 0; p < base_.size(); ++p)
        if ((base_.below(p) & m) == 0) r |= bit(p);
    return from_mask(r);
}

ba_elem regular_open_algebra::big_sum(std::span<const ba_elem> xs) const {
    cond_mask u = 0;
    for (ba_elem x : xs) u |= carrier_[x];
    return from_mask(regularize(u));
}

ba_elem regular_open_algebra::big_prod(std::span<const ba_elem> xs) const {
    cond_mask u = base_.all();
    for (ba_elem x : xs) u &= carrier_[x];
    return from_mask(u);
}

std::vector<ba_elem> regular_open_algebra::atoms() const {
    // Minimal conditions give the atoms: any nonzero regular open set
    // contains a minimal condition, whose embedded value sits below it.
    std::vector<ba_elem> out;
    for_each_bit(base_.minimal_conditions(), [&](int m) {
        ba_elem a = embed_[static_cast<std::size_t>(m)];
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    });
    std::sort(out.begin(), out.end());
    return out;
}

regular_open_algebra::filter_class regular_open_algebra::classify_filter(
    const std::vector<ba_elem>& f) const {
    filter_class c;
    std::vector<std::uint8_t> in(carrier_.size(), 0);
    for (ba_elem u : f) in[u] = 1;
    if (!in[one()] || in[zero()]) return c;
    c.filter = true;
    for (ba_elem u : f) {
        for (ba_elem v = 0; c.filter && v < carrier_.size(); ++v)
            if (leq(u, v) && !in[v]) c.filter = false;
        for (ba_elem v : f)
            if (!in[meet(u, v)]) c.filter = false;
        if (!c.filter) break;
    }
    if (!c.filter) return c;
    c.ultrafilter = true;
    for (ba_elem u = 0; u < carrier_.size(); ++u)
        if (!in[u] && !in[neg(u)]) {
            c.ultrafilter = false;
            break;
        }
    // Finite products never leave the filter, so closure under products of
    // arbitrary subsets reduces to containing the product of all of f.
    c.generic = in[big_prod(f)];
    return c;
}

std::vector<ba_elem> regular_open_algebra::principal_ultrafilter(ba_elem atom) const {
    std::vector<ba_elem> out;
    for (ba_elem u = 0; u < carrier_.size(); ++u)
        if (leq(atom, u)) out.push_back(u);
    return out;
}

std::vector<std::vector<ba_elem>> regular_open_algebra::ultrafilters() const {
    std::vector<std::vector<ba_elem>> out;
    for (ba_elem a : atoms()) out.push_back(principal_ultrafilter(a));
    return out;
}

induced_embedding induce_algebra_embedding(const regular_open_algebra& ro_p,
                                           const regular_open_algebra& ro_q,
                                           const std::vector<int>& base_map) {
    induced_embedding r;
    const auto kp = static_cast<ba_elem>(ro_p.carrier_size());
    const auto kq = static_cast<ba_elem>(ro_q.carrier_size());
    r.j.resize(kp);
    for (ba_elem u = 0; u < kp; ++u) {
        cond_mask image = 0;
        for_each_bit(ro_p.mask_of(u), [&](int p) { image |= bit(base_map[static_cast<std::size_t>(p)]); });
        r.j[u] = ro_q.from_mask(ro_q.regularize(image));
    }
    r.relabel.assign(kq, std::nullopt);
    bool unique = true;
    for (ba_elem u = 0; u < kp; ++u) {
        auto& slot = r.relabel[r.j[u]];
        if (slot) unique = false;
        slot = u;
    }
    r.boolean_embedding = unique;
    for (ba_elem u = 0; r.boolean_embedding && u < kp; ++u)
        for (ba_elem v = 0; v < kp; ++v) {
            if (r.j[ro_p.meet(u, v)] != ro_q.meet(r.j[u], r.j[v]) ||
                r.j[ro_p.join(u, v)] != ro_q.join(r.j[u], r.j[v])) {
                r.boolean_embedding = false;
                break;
            }
        }
    if (r.boolean_embedding)
        for (ba_elem u = 0; u < kp; ++u)
            if (r.j[ro_p.neg(u)] != ro_q.neg(r.j[u])) {
                r.boolean_embedding = false;
                break;
            }
    if (r.j[ro_p.zero()] != ro_q.zero() || r.j[ro_p.one()] != ro_q.one())
        r.boolean_embedding = false;
    r.square_commutes = true;
    for (int p = 0; p < ro_p.base().size(); ++p)
        if (r.j[ro_p.embed(p)] != ro_q.embed(base_map[static_cast<std::size_t>(p)])) {
            r.square_commutes = false;
            break;
        }
    return r;
}

}  // namespace forcelab
