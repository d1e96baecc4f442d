#include "forcelab/corpus.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace forcelab {

poset cohen_poset(int depth) {
    if (depth < 0 || depth > 5) throw invalid_argument_error("cohen depth out of range");
    std::vector<std::string> elems{"e"};
    for (int len = 1; len <= depth; ++len)
        for (int v = 0; v < (1 << len); ++v) {
            std::string s;
            for (int i = len - 1; i >= 0; --i) s += ((v >> i) & 1) ? '1' : '0';
            elems.push_back(s);
        }
    std::vector<std::pair<int, int>> le;
    auto ix = [&](const std::string& s) {
        return static_cast<int>(std::find(elems.begin(), elems.end(), s) - elems.begin());
    };
    for (const auto& s : elems) {
        if (s == "e") continue;
        std::string parent = s.size() == 1 ? "e" : s.substr(0, s.size() - 1);
        le.emplace_back(ix(s), ix(parent));
    }
    return poset("cohen" + std::to_string(depth), std::move(elems), le, 0);
}

poset chain_poset(int n) {
    if (n < 1) throw invalid_argument_error("chain length must be positive");
    std::vector<std::string> elems;
    for (int i = 1; i <= n; ++i) elems.push_back("c" + std::to_string(i));
    std::vector<std::pair<int, int>> le;
    for (int i = 1; i < n; ++i) le.emplace_back(i, i - 1);
    return poset("chain" + std::to_string(n), std::move(elems), le, 0);
}

poset antichain_poset(int n, bool with_top) {
    if (n < 1) throw invalid_argument_error("antichain width must be positive");
    std::vector<std::string> elems;
    std::vector<std::pair<int, int>> le;
    std::optional<int> top;
    if (with_top) {
        elems.push_back("t");
        top = 0;
    }
    for (int i = 1; i <= n; ++i) elems.push_back("a" + std::to_string(i));
    if (with_top)
        for (int i = 1; i <= n; ++i) le.emplace_back(i, 0);
    std::string name = "antichain" + std::to_string(n) + (with_top ? "_top" : "");
    return poset(std::move(name), std::move(elems), le, top);
}

bool is_named_poset(const std::string& id) {
    if (id.rfind("cohen", 0) == 0 || id.rfind("chain", 0) == 0) return true;
    return id.rfind("antichain", 0) == 0;
}

poset named_poset(const std::string& id) {
    auto tail_int = [&](std::size_t at, std::size_t len) {
        return std::stoi(id.substr(at, len == 0 ? std::string::npos : len));
    };
    try {
        if (id.rfind("cohen", 0) == 0) return cohen_poset(tail_int(5, 0));
        if (id.rfind("chain", 0) == 0) return chain_poset(tail_int(5, 0));
        if (id.rfind("antichain", 0) == 0) {
            bool with_top = id.size() > 4 && id.substr(id.size() - 4) == "_top";
            std::string num = id.substr(9, id.size() - 9 - (with_top ? 4 : 0));
            return antichain_poset(std::stoi(num), with_top);
        }
    } catch (const std::logic_error&) {
    }
    throw unknown_reference_error("no named poset '" + id + "'");
}

namespace {

// Canonical form of a closed relation: the lexicographically least row-major
// bit matrix over all permutations of the elements.
std::vector<bool> canonical_relation(const std::vector<cond_mask>& below, int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<bool> best;
    do {
        std::vector<bool> cur;
        cur.reserve(static_cast<std::size_t>(n * n));
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                cur.push_back(has_bit(below[static_cast<std::size_t>(perm[static_cast<std::size_t>(q)])],
                                      perm[static_cast<std::size_t>(p)]));
        if (best.empty() || cur < best) best = cur;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<std::string> numbered_elems(int n) {
    std::vector<std::string> elems;
    for (int i = 0; i < n; ++i) elems.push_back("p" + std::to_string(i));
    return elems;
}

}  // namespace

std::vector<poset> all_preorders_up_to_iso(int max_n) {
    if (max_n < 1 || max_n > 5) throw invalid_argument_error("preorder enumeration supports 1..5");
    std::vector<poset> out;
    for (int n = 1; n <= max_n; ++n) {
        const int off_diag = n * (n - 1);
        std::vector<std::pair<int, int>> slots;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b) slots.emplace_back(a, b);
        // Dedupe labeled closed relations first; only the distinct ones are
        // canonicalized over permutations.
        std::set<std::vector<cond_mask>> labeled;
        for (std::int64_t m = 0; m < (std::int64_t{1} << off_diag); ++m) {
            std::vector<cond_mask> below(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) below[static_cast<std::size_t>(i)] = bit(i);
            for (int s = 0; s < off_diag; ++s)
                if ((m >> s) & 1)
                    below[static_cast<std::size_t>(slots[static_cast<std::size_t>(s)].second)] |=
                        bit(slots[static_cast<std::size_t>(s)].first);
            for (bool changed = true; changed;) {
                changed = false;
                for (int p = 0; p < n; ++p) {
                    cond_mask acc = below[static_cast<std::size_t>(p)];
                    for_each_bit(acc, [&](int q) { acc |= below[static_cast<std::size_t>(q)]; });
                    if (acc != below[static_cast<std::size_t>(p)]) {
                        below[static_cast<std::size_t>(p)] = acc;
                        changed = true;
                    }
                }
            }
            labeled.insert(below);
        }
        std::map<std::vector<bool>, std::vector<cond_mask>> classes;
        for (const auto& below : labeled) classes.try_emplace(canonical_relation(below, n), below);
        int k = 0;
        for (const auto& [canon, below] : classes) {
            std::vector<std::pair<int, int>> le;
            for (int q = 0; q < n; ++q)
                for_each_bit(below[static_cast<std::size_t>(q)] & ~bit(q),
                             [&](int p) { le.emplace_back(p, q); });
            out.emplace_back("pre" + std::to_string(n) + "_" + std::to_string(k++), numbered_elems(n),
                             le);
        }
    }
    return out;
}

poset random_preorder(std::mt19937_64& rng, int max_n, int tag) {
    std::uniform_int_distribution<int> size_dist(1, max_n);
    const int n = size_dist(rng);
    std::uniform_int_distribution<int> elem_dist(0, n - 1);
    std::uniform_int_distribution<int> count_dist(0, 2 * n);
    std::vector<std::pair<int, int>> le;
    const int pairs = count_dist(rng);
    for (int i = 0; i < pairs; ++i) {
        int a = elem_dist(rng), b = elem_dist(rng);
        le.emplace_back(a, b);
    }
    return poset("rand" + std::to_string(tag), numbered_elems(n), le);
}

}  // namespace forcelab
