#include "treq/boundary.hpp"

#include <algorithm>
#include <charconv>

namespace treq {

std::int64_t cyclic_order(int d, int n) {
    if (n < 0) throw std::invalid_argument("cyclic_order: negative level");
    std::int64_t order = 1;
    for (int k = 0; k < n; ++k) order *= d - 1;
    return order;
}

GroupElement canonical_element(int d, int level, std::int64_t exponent, int level_cap) {
    if (level < 0) throw std::invalid_argument("canonical_element: negative level");
    if (level > level_cap) throw std::invalid_argument("canonical_element: level exceeds cap");
    const std::int64_t order = cyclic_order(d, level);
    exponent %= order;
    if (exponent < 0) exponent += order;
    while (level > 0 && exponent % (d - 1) == 0) {
        exponent /= d - 1;
        --level;
    }
    if (exponent == 0) level = 0;
    return GroupElement{level, exponent};
}

GroupElement generator(int d, int n, int level_cap) {
    if (n == 0) return GroupElement{};
    return canonical_element(d, n, 1, level_cap);
}

GroupElement g_mul(int d, const GroupElement& g, const GroupElement& h) {
    const int level = std::max(g.level, h.level);
    const std::int64_t e = g.exponent * cyclic_order(d, level - g.level) +
                           h.exponent * cyclic_order(d, level - h.level);
    return canonical_element(d, level, e);
}

GroupElement g_inv(int d, const GroupElement& g) {
    return canonical_element(d, g.level, -g.exponent);
}

GroupElement g_pow(int d, const GroupElement& g, std::int64_t k) {
    const std::int64_t order = cyclic_order(d, g.level);
    k %= order;
    if (k < 0) k += order;
    const __int128 e = static_cast<__int128>(g.exponent) * k;
    return canonical_element(d, g.level, static_cast<std::int64_t>(e % order));
}

std::vector<GroupElement> group_elements(int d, int n, int level_cap) {
    const std::int64_t order = cyclic_order(d, n);
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(order));
    for (std::int64_t m = 0; m < order; ++m) out.push_back(canonical_element(d, n, m, level_cap));
    return out;
}

GroupElement GroupElement::parse(std::string_view text, int d) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("GroupElement::parse: expected \"level:exponent\"");
    int level = 0;
    std::int64_t exponent = 0;
    const auto lhs = text.substr(0, colon);
    const auto rhs = text.substr(colon + 1);
    auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), level);
    auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), exponent);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size() ||
        r2.ptr != rhs.data() + rhs.size())
        throw std::invalid_argument("GroupElement::parse: malformed integers");
    const GroupElement canonical = canonical_element(d, level, exponent);
    if (canonical.level != level || canonical.exponent != exponent)
        throw std::invalid_argument("GroupElement::parse: not in canonical form");
    return canonical;
}

std::int64_t rank(const Alphabet& alpha, const BoundaryPrefix& xi, int n) {
    if (n < 0) throw std::invalid_argument("rank: negative level");
    if (n + 1 > xi.depth()) throw std::invalid_argument("rank: prefix depth too small");
    std::int64_t r = 0;
    for (int k = 1; k <= n; ++k)
        r = r * (alpha.degree - 1) + letter_index(alpha.degree, xi.entry(k), xi.entry(k + 1));
    return r;
}

BoundaryPrefix unrank(const Alphabet& alpha, std::int64_t r, int n, const BoundaryPrefix& tail) {
    const std::int64_t order = cyclic_order(alpha.degree, n);
    if (r < 0 || r >= order) throw std::invalid_argument("unrank: rank out of range");
    std::vector<Letter> entries(static_cast<std::size_t>(n) + tail.depth());
    for (int i = 1; i <= tail.depth(); ++i) entries[n + i - 1] = tail.entry(i);
    for (int k = n; k >= 1; --k) {
        const int digit = static_cast<int>(r % (alpha.degree - 1));
        r /= alpha.degree - 1;
        entries[k - 1] = letter_at(alpha.degree, digit, entries[k]);
    }
    return BoundaryPrefix(std::move(entries));
}

BoundaryPrefix act(const Alphabet& alpha, const GroupElement& g, const BoundaryPrefix& xi) {
    const int n = g.level;
    if (n + 1 > xi.depth()) throw std::invalid_argument("act: prefix depth too small for group level");
    if (n == 0) return xi;
    const std::int64_t order = cyclic_order(alpha.degree, n);
    const std::int64_t shifted = (rank(alpha, xi, n) + g.exponent) % order;
    return unrank(alpha, shifted, n, xi.suffix(n + 1));
}

Word cocycle_u(const BoundaryPrefix& xi, const BoundaryPrefix& zeta, int n) {
    if (n < 0) throw std::invalid_argument("cocycle_u: negative level");
    if (xi.depth() < n + 1 || zeta.depth() < n + 1)
        throw std::invalid_argument("cocycle_u: prefix depth too small");
    const int common = std::min(xi.depth(), zeta.depth());
    for (int k = n + 1; k <= common; ++k)
        if (xi.entry(k) != zeta.entry(k))
            throw std::invalid_argument("cocycle_u: prefixes do not agree beyond position n");
    return concat_reduce(xi.prefix_word(n), inverse(zeta.prefix_word(n)));
}

Word site_of(const Alphabet& alpha, const GroupElement& g, const BoundaryPrefix& xi) {
    if (xi.depth() < g.level + 1) throw std::invalid_argument("site_of: prefix depth too small");
    const BoundaryPrefix zeta = act(alpha, g_inv(alpha.degree, g), xi);
    return cocycle_u(xi, zeta, g.level);
}

std::vector<Word> horoball(const Alphabet& alpha, const BoundaryPrefix& xi, int n) {
    if (n < 0) throw std::invalid_argument("horoball: negative index");
    if (xi.depth() < n + 1) throw std::invalid_argument("horoball: prefix depth too small");
    std::vector<Word> out;
    for (const GroupElement& g : group_elements(alpha.degree, n))
        out.push_back(site_of(alpha, g, xi));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Word> horoshell(const Alphabet& alpha, const BoundaryPrefix& xi, int n) {
    if (n < 1) throw std::invalid_argument("horoshell: index must be at least 1");
    if (xi.depth() < n + 1) throw std::invalid_argument("horoshell: prefix depth too small");
    std::vector<Word> out;
    for (const GroupElement& g : group_elements(alpha.degree, n))
        if (g.level == n) out.push_back(site_of(alpha, g, xi));
    std::sort(out.begin(), out.end());
    return out;
}

int busemann(const Word& v, const BoundaryPrefix& xi) {
    if (xi.depth() < v.length() + 1) throw std::invalid_argument("busemann: prefix depth too small");
    const int k = v.length();
    return distance(v, xi.prefix_word(k)) - k;
}

std::vector<GroupElement> folner_F(const Alphabet& alpha, const BoundaryPrefix& xi, int n) {
    if (n < 1) throw std::invalid_argument("folner_F: index must be at least 1");
    if (xi.depth() < n + 1) throw std::invalid_argument("folner_F: prefix depth too small");
    const int d = alpha.degree;

    // Target letter: minimal letter != entry n strictly above entry n+1, with
    // fallback to the least letter != entry n. (Letters are involutive, so
    // entry n+1 is its own inverse.)
    Letter target = 0;
    for (Letter x = static_cast<Letter>(xi.entry(n + 1) + 1); x <= d; ++x) {
        if (x != xi.entry(n)) {
            target = x;
            break;
        }
    }
    if (target == 0) {
        for (Letter x = 1; x <= d; ++x) {
            if (x != xi.entry(n)) {
                target = x;
                break;
            }
        }
    }

    const GroupElement gen = generator(d, n);
    for (int j = 1; j <= d - 1; ++j) {
        if (act(alpha, g_pow(d, gen, j), xi).entry(n) != target) continue;
        const std::int64_t block = cyclic_order(d, n - 1);
        std::vector<GroupElement> coset;
        coset.reserve(static_cast<std::size_t>(block));
        for (std::int64_t k = 0; k < block; ++k)
            coset.push_back(canonical_element(d, n, j + k * (d - 1)));
        return coset;
    }
    throw std::logic_error("folner_F: no coset realizes the target letter");
}

std::vector<Word> folner_block(const Alphabet& alpha, const BoundaryPrefix& xi, int n) {
    std::vector<Word> out;
    for (const GroupElement& g : folner_F(alpha, xi, n)) out.push_back(site_of(alpha, g, xi));
    std::sort(out.begin(), out.end());
    return out;
}

std::map<Word, std::vector<Word>> sphere_partition(const Alphabet& alpha, int n, int radius_cap) {
    if (n < 1) throw std::invalid_argument("sphere_partition: index must be at least 1");
    std::map<Word, std::vector<Word>> blocks;
    for (const Word& u : sphere(alpha, n + 1, radius_cap))
        blocks.emplace(u, folner_block(alpha, BoundaryPrefix(u), n));
    return blocks;
}

BoundaryPrefix ps_sample(const Alphabet& alpha, int depth, Rng& rng) {
    if (depth < 1) throw std::invalid_argument("ps_sample: depth must be at least 1");
    std::vector<Letter> entries(static_cast<std::size_t>(depth));
    entries[0] = static_cast<Letter>(1 + rng.next_int(alpha.degree));
    for (int k = 1; k < depth; ++k)
        entries[k] = letter_at(alpha.degree, rng.next_int(alpha.degree - 1), entries[k - 1]);
    return BoundaryPrefix(std::move(entries));
}

}  // namespace treq
