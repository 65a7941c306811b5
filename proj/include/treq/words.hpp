#pragma once

// The d-regular tree realized as the Cayley graph of the d-fold free product
// of order-two cyclic groups. Vertices ("sites") are reduced words over an
// involutive alphabet {1, ..., d}: no two consecutive letters are equal, and
// every letter is its own inverse. The empty word is the root.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treq {

using Letter = std::uint8_t;  // 1..d under the natural order

// Guard against runaway enumerations; desk-scale verification only.
inline constexpr int kDefaultRadiusCap = 12;

struct Alphabet {
    int degree;  // d

    explicit Alphabet(int d) : degree(d) {
        if (d <= 2) throw std::invalid_argument("Alphabet: degree must exceed 2");
        if (d > 9) throw std::invalid_argument("Alphabet: degree above 9 unsupported (string serialization)");
    }

    bool contains(Letter x) const { return x >= 1 && x <= degree; }
};

// Zero-based index of letter x within {1..d} \ {excluded}, ascending.
inline int letter_index(int d, Letter x, Letter excluded) {
    if (x < 1 || x > d) throw std::invalid_argument("letter_index: letter out of range");
    if (x == excluded) throw std::invalid_argument("letter_index: letter equals excluded letter");
    return x < excluded ? x - 1 : x - 2;
}

// Inverse of letter_index: the index-th letter of {1..d} \ {excluded}.
inline Letter letter_at(int d, int index, Letter excluded) {
    if (index < 0 || index >= d - 1) throw std::invalid_argument("letter_at: index out of range");
    Letter x = static_cast<Letter>(index + 1);
    if (x >= excluded) x = static_cast<Letter>(index + 2);
    return x;
}

class Word {
public:
    Word() = default;

    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) { check_reduced(); }

    // Parses the ASCII serialization: one digit per letter, "" is the root.
    static Word parse(std::string_view digits) {
        std::vector<Letter> letters;
        letters.reserve(digits.size());
        for (char c : digits) {
            if (c < '1' || c > '9') throw std::invalid_argument("Word::parse: invalid letter digit");
            letters.push_back(static_cast<Letter>(c - '0'));
        }
        return Word(std::move(letters));
    }

    int length() const { return static_cast<int>(letters_.size()); }
    bool empty() const { return letters_.empty(); }

    Letter at(int i) const { return letters_.at(i); }  // 0-based
    Letter last() const { return letters_.back(); }
    const std::vector<Letter>& letters() const { return letters_; }

    Word prefix(int len) const {
        if (len < 0 || len > length()) throw std::out_of_range("Word::prefix: bad length");
        return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + len));
    }

    std::string str() const {
        std::string out;
        out.reserve(letters_.size());
        for (Letter x : letters_) out.push_back(static_cast<char>('0' + x));
        return out;
    }

    bool operator==(const Word&) const = default;

    // Shortlex: by length, then lexicographically.
    std::strong_ordering operator<=>(const Word& other) const {
        if (auto c = letters_.size() <=> other.letters_.size(); c != 0) return c;
        for (std::size_t i = 0; i < letters_.size(); ++i)
            if (auto c = letters_[i] <=> other.letters_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

private:
    void check_reduced() const {
        for (std::size_t i = 0; i + 1 < letters_.size(); ++i)
            if (letters_[i] == letters_[i + 1])
                throw std::invalid_argument("Word: not reduced (repeated adjacent letter)");
    }

    std::vector<Letter> letters_;
};

struct WordHash {
    std::size_t operator()(const Word& w) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (Letter x : w.letters()) h = (h ^ x) * 0x100000001b3ULL;
        return h;
    }
};

enum class Parity { Even, Odd };

// True iff appending x to u keeps the word reduced (always true at the root).
inline bool compatible(const Word& u, Letter x) { return u.empty() || u.last() != x; }

// Group product with cancellation; letters are involutive, so cancellation
// removes equal adjacent letters at the junction.
Word concat_reduce(const Word& u, const Word& v);

// Reversal; each letter is its own inverse.
Word inverse(const Word& u);

// Path metric |u^{-1} v|.
int distance(const Word& u, const Word& v);

inline Parity parity(const Word& u) { return u.length() % 2 == 0 ? Parity::Even : Parity::Odd; }

// |S_r| = d (d-1)^{r-1} for r >= 1, and 1 for r = 0.
std::int64_t sphere_size(int d, int r);
std::int64_t ball_size(int d, int r);

// All reduced words of length r, lexicographically ordered.
std::vector<Word> sphere(const Alphabet& alpha, int r, int radius_cap = kDefaultRadiusCap);

// Spheres 0..r concatenated (shortlex order).
std::vector<Word> ball(const Alphabet& alpha, int r, int radius_cap = kDefaultRadiusCap);

// Level k of the subtree under u: all u v with |v| = k, v compatible with u,
// in lexicographic order of v. Requires u != e.
std::vector<Word> subtree_level(const Alphabet& alpha, const Word& u, int k,
                                int radius_cap = kDefaultRadiusCap);

// Minimum of distance(a, b) over a in lhs, b in rhs.
int set_distance(const std::vector<Word>& lhs, const std::vector<Word>& rhs);

}  // namespace treq
