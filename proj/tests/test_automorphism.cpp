#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "treq/automorphism.hpp"
#include "treq/boundary.hpp"
#include "treq/numeric.hpp"
#include "treq/words.hpp"

using namespace treq;

TEST_CASE("flip examples") {
    const Alphabet alpha(3);
    const auto ball3 = make_ball(alpha, 3);

    const DepthAutomorphism id_flip = flip(ball3, Word(), 1, 1);
    for (const Word& s : ball3->sites()) CHECK(id_flip.apply(s) == s);

    const DepthAutomorphism phi = flip(ball3, Word::parse("1"), 2, 3);
    CHECK(phi.apply(Word::parse("12")) == Word::parse("13"));
    CHECK(phi.apply(Word::parse("2")) == Word::parse("2"));
    CHECK(phi.apply(Word::parse("31")) == Word::parse("31"));
    CHECK(phi.apply(Word::parse("1")) == Word::parse("1"));
    CHECK(phi.verify().ok());
    CHECK(phi.parity_preserving());

    CHECK_THROWS_AS((void)flip(ball3, Word::parse("1"), 1, 2), std::invalid_argument);
}

TEST_CASE("flip pairs level sets in lexicographic order") {
    const Alphabet alpha(4);
    const auto ball4 = make_ball(alpha, 4);
    const DepthAutomorphism phi = flip(ball4, Word::parse("1"), 2, 3);
    const auto level_a = subtree_level(alpha, Word::parse("12"), 2);
    const auto level_b = subtree_level(alpha, Word::parse("13"), 2);
    REQUIRE(level_a.size() == level_b.size());
    for (std::size_t i = 0; i < level_a.size(); ++i) {
        CHECK(phi.apply(level_a[i]) == level_b[i]);
        CHECK(phi.apply(level_b[i]) == level_a[i]);
    }
}

TEST_CASE("geodesic mapper examples") {
    const Alphabet alpha(3);
    const auto ball3 = make_ball(alpha, 3);

    const BoundaryPrefix xi = BoundaryPrefix::parse("121");
    const DepthAutomorphism id_map = geodesic_mapper(ball3, xi, xi);
    for (const Word& s : ball3->sites()) CHECK(id_map.apply(s) == s);

    const DepthAutomorphism phi = geodesic_mapper(ball3, xi, BoundaryPrefix::parse("323"));
    CHECK(phi.apply(Word()).empty());
    CHECK(phi.apply(Word::parse("1")) == Word::parse("3"));
    CHECK(phi.apply(Word::parse("12")) == Word::parse("32"));
    CHECK(phi.apply(Word::parse("121")) == Word::parse("323"));
    CHECK(phi.verify().ok());

    CHECK_THROWS_AS((void)geodesic_mapper(ball3, BoundaryPrefix::parse("12"), xi),
                    std::invalid_argument);
}

TEST_CASE("geodesic mapper stabilizes across radii") {
    const Alphabet alpha(3);
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const BoundaryPrefix xi = ps_sample(alpha, 6, rng);
        const BoundaryPrefix zeta = ps_sample(alpha, 6, rng);
        const DepthAutomorphism big = geodesic_mapper(make_ball(alpha, 6), xi, zeta);
        for (int radius = 2; radius < 6; ++radius) {
            const auto small = make_ball(alpha, radius);
            const DepthAutomorphism stage = geodesic_mapper(small, xi, zeta);
            for (const Word& s : small->sites()) CHECK(stage.apply(s) == big.apply(s));
        }
    }
}

TEST_CASE("horosphere mapper carries labelled sites") {
    for (const int d : {3, 4}) {
        const Alphabet alpha(d);
        const auto ball4 = make_ball(alpha, 4);
        Rng rng(11 + d);
        for (int trial = 0; trial < 10; ++trial) {
            const BoundaryPrefix xi = ps_sample(alpha, 5, rng);
            const BoundaryPrefix zeta = ps_sample(alpha, 5, rng);
            const DepthAutomorphism phi = horosphere_mapper(ball4, xi, zeta, 2);
            CHECK(phi.verify().ok());
            CHECK(phi.parity_preserving());
            for (const GroupElement& g : group_elements(d, 2))
                CHECK(phi.apply(site_of(alpha, g, xi)) == site_of(alpha, g, zeta));
        }
    }
}

TEST_CASE("horosphere mapper with equal prefixes fixes the labelled sites") {
    const Alphabet alpha(3);
    const auto ball4 = make_ball(alpha, 4);
    const BoundaryPrefix xi = BoundaryPrefix::parse("12121");
    const DepthAutomorphism phi = horosphere_mapper(ball4, xi, xi, 2);
    for (const GroupElement& g : group_elements(3, 2)) {
        const Word site = site_of(alpha, g, xi);
        CHECK(phi.apply(site) == site);
    }
}

TEST_CASE("horosphere mapper preconditions") {
    const Alphabet alpha(3);
    const BoundaryPrefix xi = BoundaryPrefix::parse("12121");
    CHECK_THROWS_AS((void)horosphere_mapper(make_ball(alpha, 3), xi, xi, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)horosphere_mapper(make_ball(alpha, 4), BoundaryPrefix::parse("1212"),
                                            xi, 2),
                    std::invalid_argument);
}

TEST_CASE("compose, apply, inverse") {
    const Alphabet alpha(3);
    const auto ball3 = make_ball(alpha, 3);
    const DepthAutomorphism phi = geodesic_mapper(ball3, BoundaryPrefix::parse("121"),
                                                  BoundaryPrefix::parse("212"));
    const DepthAutomorphism identity = identity_automorphism(ball3);
    for (const Word& s : ball3->sites()) CHECK(identity.apply(s) == s);

    const DepthAutomorphism round_trip = compose(phi.inverse(), phi);
    for (const Word& s : ball3->sites()) CHECK(round_trip.apply(s) == s);

    CHECK_THROWS_AS((void)phi.apply(Word::parse("1212")), std::out_of_range);

    // Composition truncates to the smaller radius.
    const DepthAutomorphism small = identity_automorphism(make_ball(alpha, 2));
    CHECK(compose(phi, small).radius() == 2);
}

TEST_CASE("left translation composes into the labelling identity") {
    const Alphabet alpha(3);
    const auto ball4 = make_ball(alpha, 4);
    const BoundaryPrefix xi = BoundaryPrefix::parse("12121");
    for (const GroupElement& h : group_elements(3, 2)) {
        const BoundaryPrefix shifted = act(alpha, g_inv(3, h), xi);
        const DepthAutomorphism phi = horosphere_mapper(ball4, xi, shifted, 2);
        const DepthAutomorphism theta = left_translation(ball4, site_of(alpha, h, xi));
        const DepthAutomorphism combined = compose(theta, phi);
        for (const GroupElement& g : group_elements(3, 2))
            CHECK(combined.apply(site_of(alpha, g, xi)) == site_of(alpha, g_mul(3, h, g), xi));
    }
}

TEST_CASE("left translation is flagged by verify unless trivial") {
    const Alphabet alpha(3);
    const auto ball2 = make_ball(alpha, 2);
    CHECK(left_translation(ball2, Word()).verify().ok());
    const auto report = left_translation(ball2, Word::parse("12")).verify();
    CHECK_FALSE(report.bijective_on_ball);
}

TEST_CASE("random automorphisms pass verify at d in {3,4}") {
    for (const int d : {3, 4}) {
        const Alphabet alpha(d);
        Rng rng(100 + d);
        for (int radius = 4; radius <= 6; radius += 2) {
            const auto ball_index = make_ball(alpha, radius);
            for (int trial = 0; trial < 3; ++trial) {
                const BoundaryPrefix xi = ps_sample(alpha, radius + 1, rng);
                const BoundaryPrefix zeta = ps_sample(alpha, radius + 1, rng);
                CHECK(geodesic_mapper(ball_index, xi, zeta).verify().ok());
                CHECK(horosphere_mapper(ball_index, xi, zeta, radius / 2).verify().ok());
            }
        }
    }
}

TEST_CASE("table export") {
    const Alphabet alpha(3);
    const auto ball2 = make_ball(alpha, 2);
    const auto dump = flip(ball2, Word(), 1, 2).table_dump();
    CHECK(dump.size() == ball2->sites().size());
    CHECK(dump.front().first.empty());  // root first, shortlex
    for (const auto& [site, image] : dump)
        if (site == "1") CHECK(image == "2");

    const auto j = table_json(flip(ball2, Word(), 1, 2));
    CHECK(j.is_array());
    CHECK(j.size() == dump.size());
    CHECK(j[1][0] == "1");
    CHECK(j[1][1] == "2");
}
