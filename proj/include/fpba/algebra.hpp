#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpba/element.hpp"
#include "fpba/presentation.hpp"
#include "fpba/term.hpp"

namespace fpba {

// The canonical finite model: points, and for each generator the set of
// points where it is 1. Distinct points differ on some generator.
class CanonicalAlgebra {
public:
    CanonicalAlgebra(std::vector<GeneratorId> generators, std::vector<Element> denotations, std::size_t points,
                     std::optional<Presentation> presentation = std::nullopt, std::string provenance = {});

    std::size_t num_points() const { return points_; }
    std::size_t num_generators() const { return generators_.size(); }
    std::span<const GeneratorId> generators() const { return generators_; }
    const Element& denotation(std::size_t g) const { return denotations_.at(g); }
    // Throws PreconditionError for a generator the algebra does not have.
    const Element& denotation(const GeneratorId& id) const;
    std::optional<std::size_t> generator_index(const GeneratorId& id) const;
    bool value(std::size_t point, std::size_t g) const { return denotations_[g].test(point); }

    const std::optional<Presentation>& presentation() const { return presentation_; }
    const std::string& provenance() const { return provenance_; }

    // Per-point generator bits, present when there are at most 64 generators.
    bool has_masks() const { return !masks_.empty() || points_ == 0; }
    std::uint64_t mask(std::size_t point) const { return masks_[point]; }

    Element zero() const { return Element(points_); }
    Element one() const { return Element::full(points_); }

    // True when every pair of points is told apart by some generator.
    bool separates_points() const;

private:
    std::vector<GeneratorId> generators_;
    std::vector<Element> denotations_;
    std::size_t points_;
    std::optional<Presentation> presentation_;
    std::string provenance_;
    std::map<GeneratorId, std::size_t> index_;
    std::vector<std::uint64_t> masks_;
};

struct RealizeOptions {
    std::size_t max_generators = 40;
    std::size_t max_points = std::size_t{1} << 22;
};

// Exhaustive search for the assignments that respect every relation.
CanonicalAlgebra realize(const Presentation& p, const RealizeOptions& opts = {});
CanonicalAlgebra free_algebra(std::size_t n);
CanonicalAlgebra atoms_algebra(std::size_t n);

Element eval(const CanonicalAlgebra& a, const Term& t);
bool is_zero(const CanonicalAlgebra& a, const Term& t);
bool leq(const CanonicalAlgebra& a, const Term& s, const Term& t);
bool eq(const CanonicalAlgebra& a, const Term& s, const Term& t);

using Assignment = std::vector<std::pair<GeneratorId, bool>>;
Assignment assignment_of(const CanonicalAlgebra& a, std::size_t point);
// A point where t is 1, as a generator assignment; nullopt when t = 0.
std::optional<Assignment> witness(const CanonicalAlgebra& a, const Term& t);
// Value of t under an assignment (each generator of t must be assigned).
bool evaluate_under(const Term& t, const Assignment& assignment);

// is_zero of ⋀ pos ∧ ⋀ ¬neg given as generator indices.
bool literals_zero(const CanonicalAlgebra& a, std::span<const std::size_t> pos, std::span<const std::size_t> neg);

// Search-free zero tests for conjunctions of literals over node generators.
bool closed_form_zero_tr(const IndexModel& model, std::span<const IndexNode> positives,
                         std::span<const IndexNode> negatives);
bool closed_form_zero_ptr(const IndexModel& model, std::span<const IndexNode> positives,
                          std::span<const IndexNode> negatives);

struct IndependenceResult {
    bool independent = true;
    std::size_t valuations_checked = 0;
    // First failing case: values on the base generators, then on X.
    std::optional<Assignment> counterexample;
};

// Every valuation of xs that satisfies the exceptions (terms forced to 0),
// combined with any pattern the points show on base, must occur in some point.
IndependenceResult independence_check(const CanonicalAlgebra& a, std::span<const GeneratorId> xs,
                                      std::span<const GeneratorId> base, std::span<const Term> exceptions,
                                      std::size_t max_xs = 20);

std::vector<Element> atoms(const CanonicalAlgebra& a);
// 2^|points| in decimal.
std::string cardinality(const CanonicalAlgebra& a);

}  // namespace fpba
