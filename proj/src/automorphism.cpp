#include "treq/automorphism.hpp"

#include <algorithm>
#include <map>

namespace treq {

BallIndex::BallIndex(const Alphabet& alpha, int radius)
    : alpha_(alpha), radius_(radius), sites_(ball(alpha, radius)) {
    index_.reserve(sites_.size());
    for (std::size_t i = 0; i < sites_.size(); ++i)
        index_.emplace(sites_[i], static_cast<std::int32_t>(i));
}

std::int32_t BallIndex::index_of(const Word& w) const {
    const auto it = index_.find(w);
    if (it == index_.end()) throw std::out_of_range("BallIndex: site outside radius");
    return it->second;
}

std::shared_ptr<const BallIndex> make_ball(const Alphabet& alpha, int radius) {
    return std::make_shared<const BallIndex>(alpha, radius);
}

DepthAutomorphism::DepthAutomorphism(std::shared_ptr<const BallIndex> ball, std::vector<Word> images)
    : ball_(std::move(ball)), images_(std::move(images)) {
    if (images_.size() != ball_->sites().size())
        throw std::invalid_argument("DepthAutomorphism: table size mismatch");
    parity_preserving_ = true;
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (parity(ball_->sites()[i]) != parity(images_[i])) {
            parity_preserving_ = false;
            break;
        }
    }
}

const Word& DepthAutomorphism::apply(const Word& site) const {
    return images_[ball_->index_of(site)];
}

DepthAutomorphism DepthAutomorphism::inverse() const {
    std::vector<Word> inv(images_.size());
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (!ball_->contains(images_[i]))
            throw std::invalid_argument("DepthAutomorphism::inverse: image leaves the ball");
        const auto j = static_cast<std::size_t>(ball_->index_of(images_[i]));
        if (seen[j]) throw std::invalid_argument("DepthAutomorphism::inverse: table not injective");
        seen[j] = true;
        inv[j] = ball_->sites()[i];
    }
    return DepthAutomorphism(ball_, std::move(inv));
}

VerifyReport DepthAutomorphism::verify() const {
    VerifyReport report;
    const auto& sites = ball_->sites();

    report.bijective_on_ball = true;
    std::vector<bool> hit(sites.size(), false);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (!ball_->contains(images_[i])) {
            report.bijective_on_ball = false;
            report.violations.push_back("image outside ball: " + sites[i].str() + " -> " +
                                        images_[i].str());
            continue;
        }
        const auto j = static_cast<std::size_t>(ball_->index_of(images_[i]));
        if (hit[j]) {
            report.bijective_on_ball = false;
            report.violations.push_back("duplicate image: " + images_[i].str());
        }
        hit[j] = true;
    }

    // Edges of the ball are the (site, parent) pairs; check both endpoints'
    // images stay adjacent.
    report.adjacency_preserving = true;
    for (const Word& s : sites) {
        if (s.empty()) continue;
        const Word parent = s.prefix(s.length() - 1);
        if (!ball_->contains(images_[ball_->index_of(s)]) ||
            !ball_->contains(images_[ball_->index_of(parent)])) {
            continue;  // already reported above
        }
        if (distance(apply(s), apply(parent)) != 1) {
            report.adjacency_preserving = false;
            report.violations.push_back("edge broken at: " + s.str());
        }
    }

    report.parity_preserving = true;
    for (const Word& s : sites) {
        if (parity(apply(s)) != parity(s)) {
            report.parity_preserving = false;
            report.violations.push_back("parity flipped at: " + s.str());
            break;
        }
    }
    return report;
}

std::vector<std::pair<std::string, std::string>> DepthAutomorphism::table_dump() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
        out.emplace_back(ball_->sites()[i].str(), images_[i].str());
    return out;
}

DepthAutomorphism identity_automorphism(std::shared_ptr<const BallIndex> ball) {
    std::vector<Word> images(ball->sites());
    return DepthAutomorphism(std::move(ball), std::move(images));
}

DepthAutomorphism flip(std::shared_ptr<const BallIndex> ball, const Word& u, Letter a, Letter b) {
    const Alphabet& alpha = ball->alphabet();
    if (!compatible(u, a) || !compatible(u, b))
        throw std::invalid_argument("flip: letters must be compatible with u");
    if (ball->radius() < u.length() + 1)
        throw std::invalid_argument("flip: radius too small for the flipped subtrees");

    std::vector<Word> images(ball->sites());
    if (a == b) return DepthAutomorphism(std::move(ball), std::move(images));

    const Word ua = concat_reduce(u, Word({a}));
    const Word ub = concat_reduce(u, Word({b}));
    for (int k = 0; u.length() + 1 + k <= ball->radius(); ++k) {
        const auto level_a = subtree_level(alpha, ua, k, ball->radius());
        const auto level_b = subtree_level(alpha, ub, k, ball->radius());
        for (std::size_t i = 0; i < level_a.size(); ++i) {
            images[ball->index_of(level_a[i])] = level_b[i];
            images[ball->index_of(level_b[i])] = level_a[i];
        }
    }
    return DepthAutomorphism(std::move(ball), std::move(images));
}

DepthAutomorphism compose(const DepthAutomorphism& outer, const DepthAutomorphism& inner) {
    const auto ball = outer.radius() <= inner.radius() ? outer.ball_ : inner.ball_;
    std::vector<Word> images;
    images.reserve(ball->sites().size());
    for (const Word& s : ball->sites()) images.push_back(outer.apply(inner.apply(s)));
    return DepthAutomorphism(ball, std::move(images));
}

DepthAutomorphism geodesic_mapper(std::shared_ptr<const BallIndex> ball, const BoundaryPrefix& xi,
                                  const BoundaryPrefix& zeta) {
    const int radius = ball->radius();
    if (xi.depth() < radius || zeta.depth() < radius)
        throw std::invalid_argument("geodesic_mapper: prefix depth below radius");

    DepthAutomorphism phi = flip(ball, Word(), xi.entry(1), zeta.entry(1));
    for (int k = 1; k < radius; ++k) {
        const Word target = zeta.prefix_word(k + 1);
        const Word current = phi.apply(xi.prefix_word(k + 1));
        // current is a child of zeta_1..zeta_k; flip it onto the geodesic.
        phi = compose(flip(ball, zeta.prefix_word(k), current.last(), target.last()), phi);
    }
    return phi;
}

namespace {

// Realizes a permutation of the children of `parent` as a chain of flips
// composed onto phi. pi maps current child letter -> required child letter.
DepthAutomorphism apply_child_permutation(std::shared_ptr<const BallIndex> ball,
                                          DepthAutomorphism phi, const Word& parent,
                                          std::map<Letter, Letter> pi) {
    // Extend by the identity on unconstrained children and check bijectivity.
    std::vector<Letter> children;
    for (Letter x = 1; x <= ball->alphabet().degree; ++x)
        if (compatible(parent, x)) children.push_back(x);
    for (Letter x : children)
        if (!pi.contains(x)) pi.emplace(x, x);
    {
        std::vector<Letter> targets;
        for (const auto& [from, to] : pi) targets.push_back(to);
        std::sort(targets.begin(), targets.end());
        if (targets != children)
            throw std::logic_error("apply_child_permutation: assignment is not a permutation");
    }

    // Selection pass: slot[l] = letter whose subtree currently occupies l.
    std::map<Letter, Letter> slot_of;  // origin letter -> current slot
    std::map<Letter, Letter> occupant;
    for (Letter x : children) {
        slot_of[x] = x;
        occupant[x] = x;
    }
    for (Letter target : children) {
        Letter origin = 0;
        for (const auto& [from, to] : pi)
            if (to == target) origin = from;
        const Letter from_slot = slot_of[origin];
        if (from_slot == target) continue;
        phi = compose(flip(ball, parent, from_slot, target), phi);
        const Letter displaced = occupant[target];
        std::swap(occupant[target], occupant[from_slot]);
        slot_of[origin] = target;
        slot_of[displaced] = from_slot;
    }
    return phi;
}

}  // namespace

DepthAutomorphism horosphere_mapper(std::shared_ptr<const BallIndex> ball, const BoundaryPrefix& xi,
                                    const BoundaryPrefix& zeta, int n) {
    const Alphabet& alpha = ball->alphabet();
    const int d = alpha.degree;
    const int radius = ball->radius();
    if (n < 0) throw std::invalid_argument("horosphere_mapper: negative level");
    if (radius < 2 * n) throw std::invalid_argument("horosphere_mapper: radius below 2n");
    if (xi.depth() < radius + 1 || zeta.depth() < radius + 1)
        throw std::invalid_argument("horosphere_mapper: prefix depth below radius + 1");

    DepthAutomorphism phi = geodesic_mapper(ball, xi, zeta);

    // Stage m settles every site labelled by a level-m group element. Within
    // the stage, cosets are refined one letter at a time: entering step s the
    // image of each labelled block with a length-(m+s-1) parent already sits
    // on the right parent over zeta, and a permutation of that parent's
    // children finishes length m+s. Words w are visited in lexicographic
    // order; the leading digit stays below d-1 (those cosets are the lower
    // levels, settled at earlier stages).
    for (int m = 1; m <= n; ++m) {
        std::vector<std::vector<int>> words{{}};
        for (int step = 1; step <= m; ++step) {
            std::vector<std::vector<int>> next_words;
            for (const std::vector<int>& w : words) {
                GroupElement g_w{};
                for (std::size_t t = 0; t < w.size(); ++t)
                    g_w = g_mul(d, g_w, g_pow(d, generator(d, m - static_cast<int>(t)), w[t]));

                const int parent_len = m + static_cast<int>(w.size());
                Word target_parent = zeta.prefix_word(m);
                if (!w.empty()) {
                    const BoundaryPrefix eta = act(alpha, g_inv(d, g_w), zeta);
                    std::vector<Letter> tail;
                    for (int t = 0; t < static_cast<int>(w.size()); ++t)
                        tail.push_back(eta.entry(m - t));
                    target_parent = concat_reduce(target_parent, Word(std::move(tail)));
                }

                std::map<Letter, Letter> pi;
                for (int i = 1; i <= d - 1; ++i) {
                    if (w.empty() && i == d - 1) continue;
                    const GroupElement g_wi =
                        g_mul(d, g_w, g_pow(d, generator(d, m - static_cast<int>(w.size())), i));
                    const BoundaryPrefix eta_xi = act(alpha, g_inv(d, g_wi), xi);
                    const BoundaryPrefix eta_zeta = act(alpha, g_inv(d, g_wi), zeta);
                    std::vector<Letter> src_tail;
                    for (int t = 0; t <= static_cast<int>(w.size()); ++t)
                        src_tail.push_back(eta_xi.entry(m - t));
                    const Word source_parent =
                        concat_reduce(xi.prefix_word(m), Word(std::move(src_tail)));
                    const Word mapped = phi.apply(source_parent);
                    if (mapped.prefix(parent_len) != target_parent)
                        throw std::logic_error("horosphere_mapper: block landed off its parent");
                    pi[mapped.last()] = eta_zeta.entry(m - static_cast<int>(w.size()));

                    if (step < m) {
                        std::vector<int> wi = w;
                        wi.push_back(i);
                        next_words.push_back(std::move(wi));
                    }
                }
                phi = apply_child_permutation(ball, std::move(phi), target_parent, pi);
            }
            words = std::move(next_words);
        }
    }
    return phi;
}

nlohmann::json table_json(const DepthAutomorphism& phi) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [site, image] : phi.table_dump()) j.push_back({site, image});
    return j;
}

DepthAutomorphism left_translation(std::shared_ptr<const BallIndex> ball, const Word& g) {
    std::vector<Word> images;
    images.reserve(ball->sites().size());
    for (const Word& s : ball->sites()) images.push_back(concat_reduce(g, s));
    return DepthAutomorphism(std::move(ball), std::move(images));
}

}  // namespace treq
