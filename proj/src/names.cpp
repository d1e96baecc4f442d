#include "forcelab/names.hpp"

#include <algorithm>
#include <cmath>

namespace forcelab {

std::int64_t pair_code(std::int64_t a, std::int64_t b) {
    if (a < 0 || b < 0) throw invalid_argument_error("pair_code takes naturals");
    const std::int64_t m = std::max(a, b);
    return a < m ? m * m + a : m * m + m + b;
}

std::int64_t triple_code(std::int64_t a, std::int64_t b, std::int64_t c) {
    if (a < 0 || b < 0 || c < 0) throw invalid_argument_error("triple_code takes naturals");
    const std::int64_t m = std::max({a, b, c});
    std::int64_t rank_within = 0;
    for (std::int64_t x = 0; x <= m; ++x)
        for (std::int64_t y = 0; y <= m; ++y)
            for (std::int64_t z = 0; z <= m; ++z) {
                if (std::max({x, y, z}) != m) continue;
                if (std::tie(x, y, z) < std::tie(a, b, c)) ++rank_within;
            }
    return m * m * m + rank_within;
}

hf_pool::hf_pool() {
    nodes_.push_back({});
    index_.emplace(std::vector<hf_id>{}, 0);
}

int hf_pool::cmp(hf_id a, hf_id b) const {
    if (a == b) return 0;
    const node& na = nodes_[a];
    const node& nb = nodes_[b];
    if (na.rank != nb.rank) return na.rank < nb.rank ? -1 : 1;
    if (na.members.size() != nb.members.size()) return na.members.size() < nb.members.size() ? -1 : 1;
    for (std::size_t i = 0; i < na.members.size(); ++i)
        if (int c = cmp(na.members[i], nb.members[i]); c != 0) return c;
    return 0;
}

hf_id hf_pool::make(std::vector<hf_id> members) {
    std::sort(members.begin(), members.end(), [&](hf_id x, hf_id y) { return cmp(x, y) < 0; });
    members.erase(std::unique(members.begin(), members.end()), members.end());
    auto it = index_.find(members);
    if (it != index_.end()) return it->second;
    node n;
    n.rank = 0;
    for (hf_id m : members) n.rank = std::max(n.rank, nodes_[m].rank + 1);
    n.members = members;
    auto id = static_cast<hf_id>(nodes_.size());
    nodes_.push_back(std::move(n));
    index_.emplace(std::move(members), id);
    return id;
}

hf_id hf_pool::nat(int k) {
    std::vector<hf_id> members;
    hf_id cur = empty();
    for (int i = 0; i < k; ++i) {
        members.push_back(cur);
        cur = make(members);
    }
    return cur;
}

hf_id hf_pool::kpair(hf_id a, hf_id b) { return make({a, make({a, b})}); }

bool hf_pool::contains(hf_id x, hf_id m) const {
    const auto& ms = nodes_[x].members;
    return std::find(ms.begin(), ms.end(), m) != ms.end();
}

bool hf_pool::subset(hf_id x, hf_id y) const {
    for (hf_id m : nodes_[x].members)
        if (!contains(y, m)) return false;
    return true;
}

std::optional<std::pair<hf_id, hf_id>> hf_pool::decode_pair(hf_id x) const {
    const auto& ms = nodes_[x].members;
    if (ms.size() != 2) return std::nullopt;
    hf_id first, pairset;
    if (contains(ms[1], ms[0])) {
        first = ms[0];
        pairset = ms[1];
    } else if (contains(ms[0], ms[1])) {
        first = ms[1];
        pairset = ms[0];
    } else {
        return std::nullopt;
    }
    const auto& ps = nodes_[pairset].members;
    if (ps.size() == 1 && ps[0] == first) return std::pair{first, first};
    if (ps.size() == 2) {
        if (ps[0] == first) return std::pair{first, ps[1]};
        if (ps[1] == first) return std::pair{first, ps[0]};
    }
    return std::nullopt;
}

std::optional<int> hf_pool::decode_nat(hf_id x) const {
    auto k = static_cast<int>(nodes_[x].members.size());
    // von Neumann k has members 0..k-1; verify via the numeral cache of a
    // scratch walk without interning new nodes.
    hf_id expect = 0;
    std::vector<hf_id> acc;
    for (int i = 0; i < k; ++i) {
        acc.push_back(expect);
        auto it = index_.find(acc);
        if (it == index_.end()) return std::nullopt;
        expect = it->second;
    }
    return expect == x ? std::optional<int>(k) : std::nullopt;
}

std::string hf_pool::render(hf_id x) const {
    if (auto k = decode_nat(x)) return std::to_string(*k);
    if (auto p = decode_pair(x)) return "<" + render(p->first) + "," + render(p->second) + ">";
    std::string out = "{";
    bool first = true;
    for (hf_id m : nodes_[x].members) {
        if (!first) out += ",";
        first = false;
        out += render(m);
    }
    return out + "}";
}

name_pool::name_pool(const regular_open_algebra& alg) : alg_(&alg) {
    nodes_.push_back(node{});
    index_.emplace(std::vector<std::pair<name_id, ba_elem>>{}, 0);
}

std::string render_elem(const regular_open_algebra& alg, ba_elem u) {
    if (u == alg.zero()) return "0";
    if (u == alg.one()) return "1";
    for (int p = 0; p < alg.base().size(); ++p)
        if (alg.embed(p) == u) return "(e " + alg.base().elem(p) + ")";
    std::string out = "(join";
    for_each_bit(alg.mask_of(u), [&](int p) { out += " (e " + alg.base().elem(p) + ")"; });
    return out + ")";
}

const std::string& name_pool::repr(name_id t) const {
    if (const auto it = repr_cache_.find(t); it != repr_cache_.end()) return it->second;
    std::string out = "(name";
    for (const auto& [k, v] : nodes_[t].entries)
        out += " (entry " + repr(k) + " " + render_elem(*alg_, v) + ")";
    out += ")";
    return repr_cache_.emplace(t, std::move(out)).first->second;
}

name_id name_pool::make(std::vector<std::pair<name_id, ba_elem>> raw) {
    // Fold duplicate keys by joining their values, then order canonically.
    std::vector<std::pair<name_id, ba_elem>> entries;
    for (auto [k, v] : raw) {
        if (k >= nodes_.size()) throw invalid_argument_error("name key from a different pool");
        bool merged = false;
        for (auto& [ek, ev] : entries)
            if (ek == k) {
                ev = alg_->join(ev, v);
                merged = true;
                break;
            }
        if (!merged) entries.emplace_back(k, v);
    }
    std::sort(entries.begin(), entries.end(),
              [&](const auto& x, const auto& y) { return cmp(x.first, y.first) < 0; });
    auto it = index_.find(entries);
    if (it != index_.end()) return it->second;
    node n;
    n.brank = 1;
    for (const auto& [k, v] : entries) n.brank = std::max(n.brank, nodes_[k].brank + 1);
    n.entries = entries;
    auto id = static_cast<name_id>(nodes_.size());
    nodes_.push_back(std::move(n));
    index_.emplace(std::move(entries), id);
    return id;
}

std::optional<ba_elem> name_pool::value(name_id t, name_id key) const {
    for (const auto& [k, v] : nodes_[t].entries)
        if (k == key) return v;
    return std::nullopt;
}

int name_pool::cmp(name_id a, name_id b) const {
    if (a == b) return 0;
    const node& na = nodes_[a];
    const node& nb = nodes_[b];
    if (na.brank != nb.brank) return na.brank < nb.brank ? -1 : 1;
    const std::size_t n = std::min(na.entries.size(), nb.entries.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (const int c = cmp(na.entries[i].first, nb.entries[i].first)) return c;
        if (na.entries[i].second != nb.entries[i].second)
            return na.entries[i].second < nb.entries[i].second ? -1 : 1;
    }
    return na.entries.size() < nb.entries.size() ? -1 : 1;
}

name_id name_pool::check_name(hf_pool& hf, hf_id x) {
    auto it = check_cache_.find(x);
    if (it != check_cache_.end()) return it->second;
    std::vector<std::pair<name_id, ba_elem>> entries;
    for (hf_id m : hf.members(x)) entries.emplace_back(check_name(hf, m), alg_->one());
    name_id id = make(std::move(entries));
    check_cache_.emplace(x, id);
    return id;
}

std::optional<hf_id> name_pool::decode_check(hf_pool& hf, name_id t) const {
    std::vector<hf_id> members;
    for (const auto& [k, v] : nodes_[t].entries) {
        if (v != alg_->one()) return std::nullopt;
        auto m = decode_check(hf, k);
        if (!m) return std::nullopt;
        members.push_back(*m);
    }
    return hf.make(std::move(members));
}

name_id name_pool::generic_name(hf_pool& hf) {
    if (gdot_) return *gdot_;
    std::vector<std::pair<name_id, ba_elem>> entries;
    for (int p = 0; p < alg_->base().size(); ++p)
        entries.emplace_back(check_name(hf, hf.nat(p)), alg_->embed(p));
    gdot_ = make(std::move(entries));
    return *gdot_;
}

name_id name_pool::op_name(name_id a, name_id b) {
    name_id inner = make({{a, alg_->one()}, {b, alg_->one()}});
    return make({{a, alg_->one()}, {inner, alg_->one()}});
}

std::optional<std::pair<name_id, name_id>> name_pool::decode_op(name_id t) const {
    const auto& es = nodes_[t].entries;
    if (es.size() != 2) return std::nullopt;
    if (es[0].second != alg_->one() || es[1].second != alg_->one()) return std::nullopt;
    // The pair-set key has strictly larger rank, so it sorts second.
    name_id a = es[0].first;
    const auto& inner = nodes_[es[1].first].entries;
    if (inner.size() == 1 && inner[0].second == alg_->one() && inner[0].first == a)
        return std::pair{a, a};
    if (inner.size() == 2 && inner[0].second == alg_->one() && inner[1].second == alg_->one()) {
        if (inner[0].first == a) return std::pair{a, inner[1].first};
        if (inner[1].first == a) return std::pair{a, inner[0].first};
    }
    return std::nullopt;
}

std::vector<name_id> name_pool::enumerate(int max_rank, const std::vector<ba_elem>& pool,
                                          std::size_t cap) {
    if (max_rank < 1) return {};
    std::vector<name_id> level{empty_name()};
    std::vector<name_id> out{empty_name()};
    for (int r = 2; r <= max_rank; ++r) {
        const std::size_t d = out.size();
        const double log_count = static_cast<double>(d) * std::log2(static_cast<double>(pool.size() + 1));
        if (log_count > std::log2(static_cast<double>(cap)))
            throw pool_too_large_error("name enumeration at rank " + std::to_string(r) + " needs " +
                                       std::to_string(pool.size() + 1) + "^" + std::to_string(d) +
                                       " assignments");
        std::vector<name_id> domain = out;
        std::sort(domain.begin(), domain.end(), [&](name_id x, name_id y) { return cmp(x, y) < 0; });
        std::vector<std::size_t> odo(d, 0);  // 0 = absent, k = pool[k-1]
        std::vector<name_id> next;
        for (;;) {
            std::vector<std::pair<name_id, ba_elem>> entries;
            for (std::size_t i = 0; i < d; ++i)
                if (odo[i] > 0) entries.emplace_back(domain[i], pool[odo[i] - 1]);
            next.push_back(make(std::move(entries)));
            std::size_t i = 0;
            while (i < d && odo[i] == pool.size()) odo[i++] = 0;
            if (i == d) break;
            ++odo[i];
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        out = std::move(next);
    }
    std::sort(out.begin(), out.end(), [&](name_id x, name_id y) { return cmp(x, y) < 0; });
    return out;
}

}  // namespace forcelab
