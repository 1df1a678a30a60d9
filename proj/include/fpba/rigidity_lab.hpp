#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpba/combinators.hpp"

namespace fpba {

// Finite ideal: everything below the join of its generators.
struct Ideal {
    std::vector<Element> generators;
    Element support;

    static Ideal generated_by(const CanonicalAlgebra& a, std::vector<Element> gens);
    bool contains(const Element& e) const { return e.subset_of(support); }
    bool proper() const { return !support.all(); }
};

using HomConstraint = std::pair<Element, Element>;  // f(first) must equal second

// All unit-preserving homomorphisms a → b satisfying the constraints.
std::vector<Morphism> enumerate_homs(const CanonicalAlgebra& a, const CanonicalAlgebra& b,
                                     std::span<const HomConstraint> constraints = {},
                                     std::size_t max_homs = 100000);
std::size_t count_homs(const CanonicalAlgebra& a, const CanonicalAlgebra& b,
                       std::span<const HomConstraint> constraints = {});

struct Quotient {
    CanonicalAlgebra algebra;
    Morphism surjection;
};
Quotient quotient(const CanonicalAlgebra& a, const Ideal& j);

struct TrrQuotient {
    std::optional<IndexModel> index;  // nullopt: the empty index set
    bool degenerate = false;          // improper ideal, quotient has no points
    std::vector<IndexNode> i1, a0, a1;
    std::vector<std::pair<IndexNode, IndexNode>> a3, a4;
    std::vector<std::pair<IndexNode, Ordinal>> alpha;  // α_η for the nodes that got a child
    std::vector<IndexNode> added;                      // children added for A_1 and A_4
    // The zero point of the algebra lies in the ideal: one surviving terminal
    // takes its place and its chain is dropped.
    bool coroot_repair = false;
    std::vector<IndexNode> removed;
    std::vector<IndexNode> joined_with_coroot;  // images are x_η ∨ −x_root
};

// Index set J' with BA_trr(J') isomorphic to realize(build_trr(I)) / J.
TrrQuotient trr_quotient_index(const IndexModel& model, const CanonicalAlgebra& a, const Ideal& j);

struct TrrVerification {
    bool isomorphic = false;        // an isomorphism respecting the x_η correspondence exists
    bool same_size = false;         // point counts agree
    std::optional<Morphism> iso;    // quotient → BA_trr(J'), as a dual point map
    std::size_t quotient_points = 0, rebuilt_points = 0;
    std::string detail;
};

TrrVerification verify_trr_quotient(const IndexModel& model, const CanonicalAlgebra& a, const Ideal& j,
                                    const TrrQuotient& q);

struct BonnetWitness {
    Element kept;  // B' = a ↾ kept, a quotient of a
    Morphism injective, surjective;
};
struct BonnetResult {
    bool rigid = true;
    std::optional<BonnetWitness> witness;
};
BonnetResult bonnet_rigid(const CanonicalAlgebra& a, std::size_t max_points = 10);

struct ObstructionWitness {
    Element a, b, image;  // image ⊆ b: a ↾ image is a homomorphic image of a ↾ b
    Morphism embedding;   // (algebra ↾ a) ↪ (algebra ↾ image)
};
struct ObstructionReport {
    bool star_holds = true;  // no disjoint a, b with such an embedding
    std::optional<ObstructionWitness> witness;
    bool bonnet_rigid = true;
    bool implication_holds = true;  // star_holds ⇒ bonnet_rigid
    std::size_t pairs_checked = 0;
};
ObstructionReport rigidity_obstruction(const CanonicalAlgebra& a, std::size_t max_points = 8);

// Injective endomorphisms other than the identity.
std::vector<Morphism> mono_endo_search(const CanonicalAlgebra& a, std::size_t max_points = 8,
                                       std::size_t limit = 50000);

struct Disjointifier {
    Element x;  // x ≠ f(x)
    Element a;  // a ≠ 0, a ∧ f(a) = 0
};
Disjointifier disjointifier(const CanonicalAlgebra& a, const Morphism& f);

}  // namespace fpba
