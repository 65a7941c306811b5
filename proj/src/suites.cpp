#include "treq/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "treq/automorphism.hpp"
#include "treq/boundary.hpp"
#include "treq/experiment.hpp"
#include "treq/process.hpp"
#include "treq/words.hpp"

namespace treq {

namespace {

CheckResult check(const std::string& name, bool pass, const std::string& detail = "") {
    return CheckResult{name, pass, detail};
}

std::vector<BoundaryPrefix> depth5_prefixes(const Alphabet& alpha) {
    std::vector<BoundaryPrefix> out;
    for (const Word& w : sphere(alpha, 5)) out.emplace_back(w);
    return out;
}

std::string tag(int d) { return "d=" + std::to_string(d); }

}  // namespace

bool all_pass(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

std::vector<CheckResult> group_suite() {
    std::vector<CheckResult> results;
    for (const int d : {3, 4}) {
        const Alphabet alpha(d);
        const auto prefixes = depth5_prefixes(alpha);

        // g_n = g_{n+1}^{d-1}, as elements and on every prefix.
        {
            bool ok = true;
            for (int n = 0; n <= 3 && ok; ++n) {
                const GroupElement gen_n = generator(d, n);
                const GroupElement compressed = g_pow(d, generator(d, n + 1), d - 1);
                ok = compressed == gen_n;
                for (const BoundaryPrefix& xi : prefixes) {
                    if (!ok) break;
                    BoundaryPrefix stepped = xi;
                    for (int i = 0; i < d - 1; ++i) stepped = act(alpha, generator(d, n + 1), stepped);
                    ok = stepped == act(alpha, gen_n, xi);
                }
            }
            results.push_back(check("generator compression " + tag(d), ok));
        }

        // The action of the level-n generator has exact order (d-1)^n.
        {
            bool ok = true;
            for (int n = 0; n <= 3 && ok; ++n) {
                const std::int64_t order = cyclic_order(d, n);
                for (const BoundaryPrefix& xi : prefixes) {
                    BoundaryPrefix current = xi;
                    std::int64_t period = 0;
                    do {
                        current = act(alpha, generator(d, n), current);
                        ++period;
                    } while (!(current == xi) && period <= order);
                    if (period != order) {
                        ok = false;
                        break;
                    }
                }
            }
            results.push_back(check("action order (d-1)^n " + tag(d), ok));
        }

        // act(gh, xi) = act(g, act(h, xi)) over the level-3 subgroup.
        {
            bool ok = true;
            const auto elements = group_elements(d, 3);
            for (const GroupElement& g : elements) {
                for (const GroupElement& h : elements) {
                    const GroupElement gh = g_mul(d, g, h);
                    for (const BoundaryPrefix& xi : prefixes) {
                        if (!(act(alpha, gh, xi) == act(alpha, g, act(alpha, h, xi)))) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) break;
                }
                if (!ok) break;
            }
            results.push_back(check("action homomorphism " + tag(d), ok));
        }

        // Orbit of the level-n subgroup = all prefixes sharing the tail.
        {
            bool ok = true;
            for (int n = 1; n <= 3 && ok; ++n) {
                const auto elements = group_elements(d, n);
                for (const BoundaryPrefix& xi : prefixes) {
                    std::set<std::string> orbit;
                    for (const GroupElement& g : elements) orbit.insert(act(alpha, g, xi).str());
                    std::set<std::string> expected;
                    const std::string tail = xi.suffix(n + 1).str();
                    for (const Word& head : sphere(alpha, n))
                        if (head.last() != xi.entry(n + 1)) expected.insert(head.str() + tail);
                    if (orbit != expected) {
                        ok = false;
                        break;
                    }
                }
            }
            results.push_back(check("orbit equals tail class " + tag(d), ok));
        }

        // phi(gh, xi) = phi(g, h xi) phi(h, xi) with phi(g, xi) = u(g xi, xi).
        {
            bool ok = true;
            const auto elements = group_elements(d, 2);
            const auto cocycle = [&](const GroupElement& g, const BoundaryPrefix& xi) {
                return cocycle_u(act(alpha, g, xi), xi, 4);
            };
            for (const GroupElement& g : elements) {
                for (const GroupElement& h : elements) {
                    for (const BoundaryPrefix& xi : prefixes) {
                        const Word lhs = cocycle(g_mul(d, g, h), xi);
                        const Word rhs =
                            concat_reduce(cocycle(g, act(alpha, h, xi)), cocycle(h, xi));
                        if (!(lhs == rhs)) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) break;
                }
                if (!ok) break;
            }
            results.push_back(check("cocycle identity " + tag(d), ok));
        }

        // site labelling is injective on each subgroup.
        if (d == 3) {
            bool ok = true;
            for (int n = 1; n <= 4 && ok; ++n)
                for (const BoundaryPrefix& xi : prefixes) {
                    const auto sites = horoball(alpha, xi, n);
                    const std::set<Word> unique(sites.begin(), sites.end());
                    if (static_cast<std::int64_t>(unique.size()) != cyclic_order(d, n)) {
                        ok = false;
                        break;
                    }
                }
            results.push_back(check("site labelling injective " + tag(d), ok));
        }
    }
    return results;
}

std::vector<CheckResult> partition_suite() {
    std::vector<CheckResult> results;
    const auto run_case = [&](int d, int n) {
        const Alphabet alpha(d);
        const auto partition = sphere_partition(alpha, n);
        std::ostringstream name;
        name << "partition d=" << d << " n=" << n;

        bool sizes_ok = static_cast<std::int64_t>(partition.size()) == sphere_size(d, n + 1);
        std::vector<Word> covered;
        for (const auto& [u, block] : partition) {
            if (static_cast<std::int64_t>(block.size()) != cyclic_order(d, n - 1)) sizes_ok = false;
            covered.insert(covered.end(), block.begin(), block.end());
        }
        std::sort(covered.begin(), covered.end());
        const bool disjoint = std::adjacent_find(covered.begin(), covered.end()) == covered.end();
        const bool covers = covered == sphere(alpha, 2 * n);

        bool separated = true;
        std::vector<const std::vector<Word>*> blocks;
        for (const auto& [u, block] : partition) blocks.push_back(&block);
        for (std::size_t i = 0; i < blocks.size() && separated; ++i)
            for (std::size_t j = i + 1; j < blocks.size(); ++j)
                if (set_distance(*blocks[i], *blocks[j]) < 2 * n) {
                    separated = false;
                    break;
                }

        results.push_back(check(name.str() + " covers sphere", disjoint && covers));
        results.push_back(check(name.str() + " block sizes", sizes_ok));
        results.push_back(check(name.str() + " 2n-separation", separated));
    };
    for (int n = 1; n <= 4; ++n) run_case(3, n);
    for (int n = 1; n <= 3; ++n) run_case(4, n);

    // Hand table at d=3, n=1.
    {
        const Alphabet alpha(3);
        const auto partition = sphere_partition(alpha, 1);
        const std::map<std::string, std::string> expected = {{"12", "13"}, {"13", "12"},
                                                             {"21", "23"}, {"23", "21"},
                                                             {"31", "32"}, {"32", "31"}};
        bool ok = partition.size() == expected.size();
        for (const auto& [u, block] : partition) {
            if (!ok) break;
            ok = block.size() == 1 && expected.at(u.str()) == block.front().str();
        }
        results.push_back(check("partition d=3 n=1 block table", ok));
    }
    return results;
}

std::vector<CheckResult> automorphism_suite(std::uint64_t seed) {
    std::vector<CheckResult> results;
    Rng rng(seed);
    for (const int d : {3, 4}) {
        const Alphabet alpha(d);
        const int radius = 6;
        const auto ball_index = make_ball(alpha, radius);
        const auto random_prefix = [&](int depth) { return ps_sample(alpha, depth, rng); };

        // Flips: identity off the two subtrees, involution, full verify.
        {
            bool ok = true;
            for (int trial = 0; trial < 10 && ok; ++trial) {
                const int len = rng.next_int(radius - 1);
                const Word u = ps_sample(alpha, std::max(len, 1), rng).prefix_word(len);
                std::vector<Letter> candidates;
                for (Letter x = 1; x <= d; ++x)
                    if (compatible(u, x)) candidates.push_back(x);
                const Letter a = candidates[rng.next_int(static_cast<int>(candidates.size()))];
                const Letter b = candidates[rng.next_int(static_cast<int>(candidates.size()))];
                const DepthAutomorphism phi = flip(ball_index, u, a, b);
                ok = phi.verify().ok();
                if (!ok) break;
                const Word ua = concat_reduce(u, Word({a}));
                const Word ub = concat_reduce(u, Word({b}));
                for (const Word& s : ball_index->sites()) {
                    const bool in_support =
                        (s.length() > u.length() && (s.prefix(ua.length()) == ua ||
                                                     s.prefix(ub.length()) == ub));
                    if (!in_support && !(phi.apply(s) == s)) {
                        ok = false;
                        break;
                    }
                    if (!(phi.apply(phi.apply(s)) == s)) {
                        ok = false;
                        break;
                    }
                }
            }
            results.push_back(check("flip support/involution/verify " + tag(d), ok));
        }

        // Geodesic mappers: verify, the ray condition, and radius stability.
        {
            bool ok = true;
            for (int trial = 0; trial < 10 && ok; ++trial) {
                const BoundaryPrefix xi = random_prefix(radius + 1);
                const BoundaryPrefix zeta = random_prefix(radius + 1);
                const DepthAutomorphism phi = geodesic_mapper(ball_index, xi, zeta);
                ok = phi.verify().ok() && phi.apply(Word()).empty();
                for (int k = 1; k <= radius && ok; ++k)
                    ok = phi.apply(xi.prefix_word(k)) == zeta.prefix_word(k);
                if (!ok) break;
                for (int smaller = 2; smaller < radius && ok; ++smaller) {
                    const auto small_ball = make_ball(alpha, smaller);
                    const DepthAutomorphism stage = geodesic_mapper(small_ball, xi, zeta);
                    for (const Word& s : small_ball->sites())
                        if (!(stage.apply(s) == phi.apply(s))) {
                            ok = false;
                            break;
                        }
                }
            }
            results.push_back(check("geodesic mapper verify/ray/stability " + tag(d), ok));
        }

        // Horosphere mappers: verify plus the labelled-site condition over
        // the level-3 subgroup, 20 random prefix pairs.
        {
            bool ok = true;
            const auto elements = group_elements(d, 3);
            for (int trial = 0; trial < 20 && ok; ++trial) {
                const BoundaryPrefix xi = random_prefix(radius + 1);
                const BoundaryPrefix zeta = random_prefix(radius + 1);
                const DepthAutomorphism phi = horosphere_mapper(ball_index, xi, zeta, 3);
                ok = phi.verify().ok() && phi.parity_preserving();
                for (const GroupElement& g : elements) {
                    if (!ok) break;
                    ok = phi.apply(site_of(alpha, g, xi)) == site_of(alpha, g, zeta);
                }
            }
            results.push_back(check("horosphere mapper verify/labels " + tag(d), ok));
        }

        // Composition with the inverse table is the identity.
        {
            const BoundaryPrefix xi = random_prefix(radius + 1);
            const BoundaryPrefix zeta = random_prefix(radius + 1);
            const DepthAutomorphism phi = geodesic_mapper(ball_index, xi, zeta);
            const DepthAutomorphism round_trip = compose(phi.inverse(), phi);
            bool ok = true;
            for (const Word& s : ball_index->sites())
                if (!(round_trip.apply(s) == s)) {
                    ok = false;
                    break;
                }
            results.push_back(check("compose with inverse table " + tag(d), ok));
        }
    }

    // Translation identity: s(hg, xi) = (theta . phi)(s(g, xi)) with theta the
    // left translation by s(h, xi) and phi the horosphere mapper onto the
    // translated ray. Exhaustive over the level-2 subgroup at d=3.
    {
        const Alphabet alpha(3);
        const int radius = 4;
        const auto ball_index = make_ball(alpha, radius);
        const auto elements = group_elements(3, 2);
        bool ok = true;
        for (const Word& w : sphere(alpha, radius + 1)) {
            const BoundaryPrefix xi(w);
            for (const GroupElement& h : elements) {
                const BoundaryPrefix shifted = act(alpha, g_inv(3, h), xi);
                const DepthAutomorphism phi = horosphere_mapper(ball_index, xi, shifted, 2);
                const DepthAutomorphism theta = left_translation(ball_index, site_of(alpha, h, xi));
                const DepthAutomorphism combined = compose(theta, phi);
                for (const GroupElement& g : elements) {
                    const Word expected = site_of(alpha, g_mul(3, h, g), xi);
                    if (!(combined.apply(site_of(alpha, g, xi)) == expected)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (!ok) break;
        }
        results.push_back(check("translation identity d=3", ok));
    }
    return results;
}

std::vector<CheckResult> process_suite() {
    std::vector<CheckResult> results;
    const Alphabet alpha(3);
    const ProcessModel ising = build_ising(3, 0.2);
    const ProcessModel potts = build_potts(3, 3, 1.0);
    Rng rng(7u);

    // Entropy is invariant under constructed automorphisms.
    {
        bool ok = true;
        const auto ball_index = make_ball(alpha, 4);
        const std::vector<Word> region = {Word(), Word::parse("1"), Word::parse("12"),
                                          Word::parse("2"), Word::parse("31")};
        std::vector<DepthAutomorphism> maps;
        maps.push_back(flip(ball_index, Word(), 1, 3));
        maps.push_back(geodesic_mapper(ball_index, BoundaryPrefix::parse("1212"),
                                       BoundaryPrefix::parse("3131")));
        maps.push_back(horosphere_mapper(ball_index, BoundaryPrefix::parse("12121"),
                                         BoundaryPrefix::parse("23232"), 2));
        for (const ProcessModel& model : {ising, potts}) {
            const double base = entropy_exact(model, region);
            for (const DepthAutomorphism& phi : maps) {
                std::vector<Word> mapped;
                for (const Word& s : region) mapped.push_back(phi.apply(s));
                if (std::abs(entropy_exact(model, mapped) - base) > 1e-10) ok = false;
            }
        }
        results.push_back(check("entropy invariant under automorphisms", ok));
    }

    // Nested-region monotonicity and marginal consistency.
    {
        bool ok = true;
        const auto ball3 = ball(alpha, 3);
        for (int trial = 0; trial < 25 && ok; ++trial) {
            std::vector<Word> big;
            for (const Word& s : ball3)
                if (rng.next_unit() < 0.3) big.push_back(s);
            if (big.size() < 2) continue;
            const std::vector<Word> small(big.begin(), big.begin() + big.size() / 2);
            const Configuration omega = sample_region(ising, big, rng);
            const double log_big = exact_region_log_prob(ising, omega);
            const double log_small = exact_region_log_prob(ising, omega.restrict_to(small));
            ok = log_big <= log_small + 1e-12;
            if (!ok) break;

            // Extending by one site and summing over its states recovers the
            // base probability.
            Word extra = Word::parse("123");
            if (omega.state_at(extra) >= 0) extra = Word::parse("321");
            if (omega.state_at(extra) >= 0) continue;
            double total = 0.0;
            for (int x = 0; x < ising.states.size(); ++x) {
                auto values = omega.values();
                values.emplace_back(extra, x);
                total += std::exp(exact_region_log_prob(ising, Configuration(std::move(values))));
            }
            ok = std::abs(total - std::exp(log_big)) <= 1e-10;
        }
        results.push_back(check("chain rule and marginal consistency", ok));
    }

    // psi is exactly symmetric in its arguments.
    {
        bool ok = true;
        const std::vector<Word> u = {Word(), Word::parse("1")};
        const std::vector<Word> v = {Word::parse("23"), Word::parse("2")};
        for (const ProcessModel& model : {ising, potts})
            ok = ok && psi_coeff(model, u, v) == psi_coeff(model, v, u);
        results.push_back(check("psi symmetry", ok));
    }

    // Correlations decay monotonically with distance.
    {
        bool ok = true;
        double previous = 0.0;
        for (int k = 1; k <= 8; ++k) {
            std::vector<Letter> letters;
            for (int i = 0; i < k; ++i) letters.push_back(static_cast<Letter>(i % 2 == 0 ? 1 : 2));
            const std::vector<Word> u = {Word()};
            const std::vector<Word> v = {Word(std::move(letters))};
            double worst = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const Configuration joint({{u[0], i}, {v[0], j}});
                    const Configuration left({{u[0], i}});
                    const Configuration right({{v[0], j}});
                    const double gap = std::abs(std::exp(exact_region_log_prob(ising, joint)) -
                                                std::exp(exact_region_log_prob(ising, left)) *
                                                    std::exp(exact_region_log_prob(ising, right)));
                    worst = std::max(worst, gap);
                }
            if (k > 1 && worst >= previous) ok = false;
            previous = worst;
        }
        ok = ok && previous < 1e-5;
        results.push_back(check("correlation decay along translates", ok));
    }

    // Telescoping product bound over every two-state configuration of the
    // radius-2 sphere at n=1.
    {
        bool ok = true;
        const auto partition = sphere_partition(alpha, 1);
        std::vector<std::vector<Word>> blocks;
        for (const auto& [u, block] : partition) blocks.push_back(block);
        const auto sphere2 = sphere(alpha, 2);

        std::vector<double> psis;
        std::vector<Word> prefix_union;
        for (std::size_t j = 0; j + 1 < blocks.size(); ++j) {
            prefix_union.insert(prefix_union.end(), blocks[j].begin(), blocks[j].end());
            psis.push_back(psi_coeff(ising, prefix_union, blocks[j + 1]));
        }
        double upper = 1.0;
        double lower = 1.0;
        for (double psi : psis) {
            upper *= 1.0 + psi;
            lower *= 1.0 - psi;
        }

        for (std::int64_t atom = 0; atom < (std::int64_t{1} << sphere2.size()); ++atom) {
            std::vector<std::pair<Word, int>> values;
            for (std::size_t i = 0; i < sphere2.size(); ++i)
                values.emplace_back(sphere2[i], static_cast<int>((atom >> i) & 1));
            const Configuration omega{std::move(values)};
            const double joint = std::exp(exact_region_log_prob(ising, omega));
            double product = 1.0;
            for (const auto& block : blocks)
                product *= std::exp(exact_region_log_prob(ising, omega.restrict_to(block)));
            const double ratio = joint / product;
            if (ratio > upper * (1.0 + 1e-12) || ratio < lower * (1.0 - 1e-12)) {
                ok = false;
                break;
            }
        }
        results.push_back(check("telescoping product bound d=3 n=1", ok));
    }
    return results;
}

}  // namespace treq
