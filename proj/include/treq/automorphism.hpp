#pragma once

// Depth-limited tree automorphisms stored as total tables on a ball around
// the root. Tables make every structural check (bijectivity, adjacency,
// parity) an exhaustive loop, and composition a single table pass. The three
// constructive families are:
//   flip              exchanges two sibling subtrees level by level in
//                     lexicographic order, identity elsewhere;
//   geodesic_mapper   carries one boundary ray onto another by a chain of
//                     flips, fixing the root;
//   horosphere_mapper extends a geodesic mapper so that the whole labelled
//                     horosphere of one boundary point lands on the labelled
//                     horosphere of another.
// left_translation is the tree automorphism induced by a group word; its
// table is not ball-preserving (the root moves), so verify() flags it.

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "treq/boundary.hpp"
#include "treq/words.hpp"

namespace treq {

// Shared enumeration of ball(R) with index lookup.
class BallIndex {
public:
    BallIndex(const Alphabet& alpha, int radius);

    const Alphabet& alphabet() const { return alpha_; }
    int radius() const { return radius_; }
    const std::vector<Word>& sites() const { return sites_; }

    bool contains(const Word& w) const { return index_.contains(w); }
    std::int32_t index_of(const Word& w) const;

private:
    Alphabet alpha_;
    int radius_;
    std::vector<Word> sites_;
    std::unordered_map<Word, std::int32_t, WordHash> index_;
};

struct VerifyReport {
    bool bijective_on_ball = false;
    bool adjacency_preserving = false;
    bool parity_preserving = false;
    std::vector<std::string> violations;

    bool ok() const { return bijective_on_ball && adjacency_preserving && parity_preserving; }
};

class DepthAutomorphism {
public:
    DepthAutomorphism(std::shared_ptr<const BallIndex> ball, std::vector<Word> images);

    int radius() const { return ball_->radius(); }
    const BallIndex& ball() const { return *ball_; }

    // Total on ball(R); throws for sites outside the radius.
    const Word& apply(const Word& site) const;

    // Inverse table; requires the image set to equal ball(R).
    DepthAutomorphism inverse() const;

    // Re-checks bijectivity on the ball, edge preservation, and parity.
    VerifyReport verify() const;

    bool parity_preserving() const { return parity_preserving_; }

    // (site, image) string pairs in shortlex site order.
    std::vector<std::pair<std::string, std::string>> table_dump() const;

private:
    friend DepthAutomorphism compose(const DepthAutomorphism&, const DepthAutomorphism&);
    std::shared_ptr<const BallIndex> ball_;
    std::vector<Word> images_;
    bool parity_preserving_ = false;
};

std::shared_ptr<const BallIndex> make_ball(const Alphabet& alpha, int radius);

DepthAutomorphism identity_automorphism(std::shared_ptr<const BallIndex> ball);

// Exchanges the subtrees under u a and u b (level sets paired in
// lexicographic order), fixing everything else. a = b yields the identity.
DepthAutomorphism flip(std::shared_ptr<const BallIndex> ball, const Word& u, Letter a, Letter b);

// Fixes the root and maps xi_1..xi_k to zeta_1..zeta_k for k <= R, built by
// the inductive flip chain. Requires depth >= R on both prefixes.
DepthAutomorphism geodesic_mapper(std::shared_ptr<const BallIndex> ball, const BoundaryPrefix& xi,
                                  const BoundaryPrefix& zeta);

// Maps the site labelled g over xi to the site labelled g over zeta for every
// g of level <= n. Requires R >= 2n and depths >= R + 1.
DepthAutomorphism horosphere_mapper(std::shared_ptr<const BallIndex> ball, const BoundaryPrefix& xi,
                                    const BoundaryPrefix& zeta, int n);

// v -> reduced(g v). Not ball-preserving unless g = e.
DepthAutomorphism left_translation(std::shared_ptr<const BallIndex> ball, const Word& g);

// outer after inner, on the smaller radius; every intermediate image must lie
// in outer's domain.
DepthAutomorphism compose(const DepthAutomorphism& outer, const DepthAutomorphism& inner);

// Debug export: JSON array of [site, image] string pairs in shortlex order.
nlohmann::json table_json(const DepthAutomorphism& phi);

}  // namespace treq
