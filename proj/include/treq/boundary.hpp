#pragma once

// Boundary machinery for the d-regular tree.
//
// Boundary points are one-sided infinite reduced sequences; we only ever hold
// finite prefixes, and every operation states the minimal depth it reads and
// fails loudly below it. Sequences that differ in at most their first n
// entries form finite classes of (d-1)^n elements each. An inductively
// interleaved linear order on each class turns the class into one cycle, and
// the cycles at every level assemble into an abelian group realized as roots
// of unity g_n^m = exp(2 pi i m / (d-1)^n). rank/unrank convert between a
// prefix and its position in the ordered class, which makes the group action
// plain modular arithmetic on ranks.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "treq/numeric.hpp"
#include "treq/words.hpp"

namespace treq {

inline constexpr int kDefaultLevelCap = 12;

class BoundaryPrefix {
public:
    explicit BoundaryPrefix(std::vector<Letter> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw std::invalid_argument("BoundaryPrefix: depth must be at least 1");
        for (std::size_t i = 0; i + 1 < entries_.size(); ++i)
            if (entries_[i] == entries_[i + 1])
                throw std::invalid_argument("BoundaryPrefix: repeated adjacent entry");
    }

    // A nonempty reduced word read as the first |w| boundary entries.
    explicit BoundaryPrefix(const Word& w) : BoundaryPrefix(w.letters()) {}

    static BoundaryPrefix parse(std::string_view digits) { return BoundaryPrefix(Word::parse(digits)); }

    int depth() const { return static_cast<int>(entries_.size()); }
    Letter entry(int pos) const {  // 1-based
        if (pos < 1 || pos > depth()) throw std::out_of_range("BoundaryPrefix::entry");
        return entries_[pos - 1];
    }

    // Entries from position `from` onward, as a prefix in its own right.
    BoundaryPrefix suffix(int from) const {
        if (from < 1 || from > depth()) throw std::out_of_range("BoundaryPrefix::suffix");
        return BoundaryPrefix(std::vector<Letter>(entries_.begin() + (from - 1), entries_.end()));
    }

    Word prefix_word(int len) const {
        if (len < 0 || len > depth()) throw std::out_of_range("BoundaryPrefix::prefix_word");
        return Word(std::vector<Letter>(entries_.begin(), entries_.begin() + len));
    }

    std::string str() const { return prefix_word(depth()).str(); }

    bool operator==(const BoundaryPrefix&) const = default;

private:
    std::vector<Letter> entries_;
};

// g_n^m in lowest terms: level 0 is the identity (exponent 0); at positive
// level the exponent lies in [0, (d-1)^n) and is not divisible by d-1.
struct GroupElement {
    int level = 0;
    std::int64_t exponent = 0;

    bool is_identity() const { return level == 0; }
    bool operator==(const GroupElement&) const = default;
    auto operator<=>(const GroupElement&) const = default;

    std::string str() const { return std::to_string(level) + ":" + std::to_string(exponent); }
    static GroupElement parse(std::string_view text, int d);
};

// (d-1)^n, exact in 64-bit for the supported level cap.
std::int64_t cyclic_order(int d, int n);

GroupElement canonical_element(int d, int level, std::int64_t exponent,
                               int level_cap = kDefaultLevelCap);

// The level-n generator g_n.
GroupElement generator(int d, int n, int level_cap = kDefaultLevelCap);

// Abelian product: addition of m/(d-1)^n + k/(d-1)^l modulo one.
GroupElement g_mul(int d, const GroupElement& g, const GroupElement& h);
GroupElement g_inv(int d, const GroupElement& g);
GroupElement g_pow(int d, const GroupElement& g, std::int64_t k);

// All (d-1)^n elements of the level-n subgroup, by ascending exponent at level n.
std::vector<GroupElement> group_elements(int d, int n, int level_cap = kDefaultLevelCap);

// Zero-based position of xi inside its level-n class under the interleaved
// order: rank(xi, 0) = 0 and
//   rank(xi, n) = rank(xi, n-1) * (d-1) + index of entry n among the letters
//                 distinct from entry n+1.
// Reads entries 1..n+1.
std::int64_t rank(const Alphabet& alpha, const BoundaryPrefix& xi, int n);

// Inverse of rank: reconstructs entries n..1 top-down by digit extraction,
// given the entries from position n+1 onward.
BoundaryPrefix unrank(const Alphabet& alpha, std::int64_t r, int n, const BoundaryPrefix& tail);

// The action of g = g_n^m: adds m to rank(xi, n) modulo (d-1)^n and leaves
// all entries beyond position n unchanged. Needs depth >= level + 1.
BoundaryPrefix act(const Alphabet& alpha, const GroupElement& g, const BoundaryPrefix& xi);

// The shortest group word moving zeta to xi: the reduced form of
// xi_1 ... xi_n zeta_n ... zeta_1 (letters are involutive). Requires the two
// prefixes to agree beyond position n.
Word cocycle_u(const BoundaryPrefix& xi, const BoundaryPrefix& zeta, int n);

// Site labelled by g on the horosphere of xi: cocycle_u(xi, g^{-1} xi, level(g)).
Word site_of(const Alphabet& alpha, const GroupElement& g, const BoundaryPrefix& xi);

// Horospherical ball/sphere through the root: images of the level-n subgroup
// (resp. its level-n layer) under site_of. Sorted shortlex.
std::vector<Word> horoball(const Alphabet& alpha, const BoundaryPrefix& xi, int n);
std::vector<Word> horoshell(const Alphabet& alpha, const BoundaryPrefix& xi, int n);

// Renormalized distance to the boundary point: d(v, xi_1..xi_K) - K, which is
// K-independent for K >= |v|. Zero exactly on the horosphere through the root.
int busemann(const Word& v, const BoundaryPrefix& xi);

// The distinguished coset g_n^j G_{n-1} determined by entries 1..n+1 of xi:
// the target letter is the minimal letter distinct from entry n that is
// strictly larger than entry n+1 if one exists, else the least letter
// distinct from entry n; j in {1,...,d-1} is minimal with the action of g_n^j
// sending entry n to that letter.
std::vector<GroupElement> folner_F(const Alphabet& alpha, const BoundaryPrefix& xi, int n);

// Sites of the coset on the horosphere of xi, sorted shortlex.
std::vector<Word> folner_block(const Alphabet& alpha, const BoundaryPrefix& xi, int n);

// One block per u in the sphere of radius n+1 (any prefix extending u gives
// the same block); the blocks partition the sphere of radius 2n.
std::map<Word, std::vector<Word>> sphere_partition(const Alphabet& alpha, int n,
                                                   int radius_cap = kDefaultRadiusCap);

// Draws boundary prefixes with the uniform first letter and uniform
// non-repeating transitions; every depth-k cylinder has mass
// d^{-1} (d-1)^{-(k-1)}.
BoundaryPrefix ps_sample(const Alphabet& alpha, int depth, Rng& rng);

class PsSampler {
public:
    PsSampler(const Alphabet& alpha, std::uint64_t seed) : alpha_(alpha), rng_(seed) {}
    BoundaryPrefix sample(int depth) { return ps_sample(alpha_, depth, rng_); }

private:
    Alphabet alpha_;
    Rng rng_;
};

}  // namespace treq
