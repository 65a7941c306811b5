#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "treq/words.hpp"

using namespace treq;

// Letters within tests: 1 = a, 2 = b, 3 = c, ...

TEST_CASE("concat_reduce cancels involutive letters") {
    CHECK(concat_reduce(Word::parse("12"), Word::parse("21")).empty());
    CHECK(concat_reduce(Word::parse("12"), Word::parse("23")) == Word::parse("13"));
    CHECK(inverse(Word::parse("12")) == Word::parse("21"));
    CHECK(concat_reduce(inverse(Word::parse("12")), Word::parse("12")).empty());
}

TEST_CASE("distance") {
    CHECK(distance(Word(), Word()) == 0);
    CHECK(distance(Word::parse("12"), Word::parse("13")) == 2);
    CHECK(distance(Word(), Word::parse("1231")) == 4);
}

TEST_CASE("distance agrees with the reduced-product route") {
    const Alphabet alpha(3);
    const auto sites = ball(alpha, 4);
    for (const Word& u : sites)
        for (const Word& v : sites)
            CHECK(distance(u, v) == concat_reduce(inverse(u), v).length());
}

TEST_CASE("sphere cardinality and contents") {
    const Alphabet alpha(3);
    CHECK(sphere(alpha, 0) == std::vector<Word>{Word()});
    const auto s2 = sphere(alpha, 2);
    CHECK(s2.size() == 6);
    std::vector<std::string> names;
    for (const Word& w : s2) names.push_back(w.str());
    CHECK(names == std::vector<std::string>{"12", "13", "21", "23", "31", "32"});
    CHECK(sphere(alpha, 4).size() == 24);
    for (int r = 1; r <= 6; ++r) {
        CHECK(static_cast<std::int64_t>(sphere(alpha, r).size()) == sphere_size(3, r));
        CHECK(static_cast<std::int64_t>(sphere(Alphabet(4), r).size()) == sphere_size(4, r));
    }
}

TEST_CASE("sphere radius cap guards enumeration") {
    const Alphabet alpha(3);
    CHECK_THROWS_AS((void)sphere(alpha, 13), std::invalid_argument);
    CHECK_THROWS_AS((void)sphere(alpha, -1), std::invalid_argument);
    CHECK_NOTHROW((void)sphere(alpha, 13, 13));
}

TEST_CASE("subtree levels") {
    const Alphabet alpha(3);
    CHECK(subtree_level(alpha, Word::parse("1"), 0) == std::vector<Word>{Word::parse("1")});
    const auto level1 = subtree_level(alpha, Word::parse("1"), 1);
    CHECK(level1 == std::vector<Word>{Word::parse("12"), Word::parse("13")});
    CHECK(subtree_level(alpha, Word::parse("1"), 2).size() == 4);
    CHECK_THROWS_AS((void)subtree_level(alpha, Word(), 1), std::invalid_argument);
}

TEST_CASE("compatible and parity") {
    CHECK(compatible(Word(), 1));
    CHECK_FALSE(compatible(Word::parse("12"), 2));
    CHECK(compatible(Word::parse("12"), 3));
    CHECK(parity(Word()) == Parity::Even);
    CHECK(parity(Word::parse("1")) == Parity::Odd);
    CHECK(parity(Word::parse("1231")) == Parity::Even);
}

TEST_CASE("words reject unreduced input") {
    CHECK_THROWS_AS(Word::parse("11"), std::invalid_argument);
    CHECK_THROWS_AS(Word::parse("10"), std::invalid_argument);
}

TEST_CASE("triangle inequality, exhaustive up to length 6") {
    for (const int d : {3, 4}) {
        const Alphabet alpha(d);
        const auto sites = ball(alpha, 6);
        const int count = static_cast<int>(sites.size());
        std::vector<std::int8_t> dist(static_cast<std::size_t>(count) * count);
        for (int i = 0; i < count; ++i)
            for (int j = 0; j < count; ++j)
                dist[static_cast<std::size_t>(i) * count + j] =
                    static_cast<std::int8_t>(distance(sites[i], sites[j]));
        long long violations = 0;
#pragma omp parallel for schedule(static) reduction(+ : violations)
        for (int u = 0; u < count; ++u)
            for (int v = 0; v < count; ++v) {
                const std::int8_t* du = &dist[static_cast<std::size_t>(u) * count];
                const std::int8_t* dv = &dist[static_cast<std::size_t>(v) * count];
                const std::int8_t duv = du[v];
                for (int w = 0; w < count; ++w) violations += du[w] > duv + dv[w];
            }
        CHECK(violations == 0);
    }
}

TEST_CASE("concat_reduce associativity and inverses, exhaustive length <= 5") {
    const Alphabet alpha(3);
    const auto sites = ball(alpha, 5);
    for (const Word& u : sites) CHECK(concat_reduce(inverse(u), u).empty());
    // Associativity over a length-3 slice of the ball (cubic in the slice size).
    const auto small = ball(alpha, 3);
    for (const Word& u : small)
        for (const Word& v : small)
            for (const Word& w : small)
                CHECK(concat_reduce(concat_reduce(u, v), w) ==
                      concat_reduce(u, concat_reduce(v, w)));
}

TEST_CASE("spheres are disjoint and fill the ball") {
    const Alphabet alpha(3);
    std::set<Word> seen;
    std::size_t total = 0;
    for (int r = 0; r <= 5; ++r) {
        for (const Word& w : sphere(alpha, r)) {
            CHECK(w.length() == r);
            seen.insert(w);
            ++total;
        }
    }
    CHECK(seen.size() == total);
    CHECK(static_cast<std::int64_t>(total) == ball_size(3, 5));
    CHECK(ball(alpha, 5).size() == total);
}

TEST_CASE("serialization round trip") {
    const Alphabet alpha(3);
    for (const Word& w : ball(alpha, 5)) CHECK(Word::parse(w.str()) == w);
    CHECK(Word::parse("121").str() == "121");
    CHECK(Word().str().empty());
}
