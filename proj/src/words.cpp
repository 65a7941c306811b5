#include "treq/words.hpp"

#include <algorithm>

namespace treq {

Word concat_reduce(const Word& u, const Word& v) {
    std::vector<Letter> out(u.letters());
    for (Letter x : v.letters()) {
        if (!out.empty() && out.back() == x) {
            out.pop_back();
        } else {
            out.push_back(x);
        }
    }
    return Word(std::move(out));
}

Word inverse(const Word& u) {
    std::vector<Letter> out(u.letters().rbegin(), u.letters().rend());
    return Word(std::move(out));
}

int distance(const Word& u, const Word& v) {
    // |u^{-1} v|: the reversal of u cancels against v exactly along their
    // longest common prefix.
    const int n = std::min(u.length(), v.length());
    int lcp = 0;
    while (lcp < n && u.at(lcp) == v.at(lcp)) ++lcp;
    return u.length() + v.length() - 2 * lcp;
}

std::int64_t sphere_size(int d, int r) {
    if (r < 0) throw std::invalid_argument("sphere_size: negative radius");
    if (r == 0) return 1;
    std::int64_t size = d;
    for (int k = 1; k < r; ++k) size *= d - 1;
    return size;
}

std::int64_t ball_size(int d, int r) {
    std::int64_t total = 0;
    for (int k = 0; k <= r; ++k) total += sphere_size(d, k);
    return total;
}

namespace {

void check_radius(int r, int cap) {
    if (r < 0) throw std::invalid_argument("enumeration: negative radius");
    if (r > cap) throw std::invalid_argument("enumeration: radius exceeds configured cap");
}

void extend_all(const Alphabet& alpha, std::vector<Letter>& stack, int target_len,
                std::vector<Word>& out) {
    if (static_cast<int>(stack.size()) == target_len) {
        out.emplace_back(stack);
        return;
    }
    for (Letter x = 1; x <= alpha.degree; ++x) {
        if (!stack.empty() && stack.back() == x) continue;
        stack.push_back(x);
        extend_all(alpha, stack, target_len, out);
        stack.pop_back();
    }
}

}  // namespace

std::vector<Word> sphere(const Alphabet& alpha, int r, int radius_cap) {
    check_radius(r, radius_cap);
    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(sphere_size(alpha.degree, r)));
    std::vector<Letter> stack;
    extend_all(alpha, stack, r, out);
    return out;
}

std::vector<Word> ball(const Alphabet& alpha, int r, int radius_cap) {
    check_radius(r, radius_cap);
    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(ball_size(alpha.degree, r)));
    for (int k = 0; k <= r; ++k) {
        auto shell = sphere(alpha, k, radius_cap);
        out.insert(out.end(), shell.begin(), shell.end());
    }
    return out;
}

std::vector<Word> subtree_level(const Alphabet& alpha, const Word& u, int k, int radius_cap) {
    if (u.empty()) throw std::invalid_argument("subtree_level: u must not be the root");
    check_radius(k, radius_cap);
    std::vector<Word> out;
    std::vector<Letter> stack(u.letters());
    extend_all(alpha, stack, u.length() + k, out);
    return out;
}

int set_distance(const std::vector<Word>& lhs, const std::vector<Word>& rhs) {
    if (lhs.empty() || rhs.empty()) throw std::invalid_argument("set_distance: empty set");
    int best = distance(lhs.front(), rhs.front());
    for (const Word& a : lhs)
        for (const Word& b : rhs) best = std::min(best, distance(a, b));
    return best;
}

}  // namespace treq
