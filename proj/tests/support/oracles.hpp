#pragma once

// Brute-force reference computations, written without the library's
// evaluators or search code.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fpba/algebra.hpp"
#include "fpba/combinators.hpp"

namespace oracle {

using Valuation = std::map<fpba::GeneratorId, bool>;

bool eval(const fpba::Term& t, const Valuation& v);

// Every 0/1 assignment to the generators that sends each relation to 0.
std::vector<Valuation> respecting(const fpba::Presentation& p);
std::size_t point_count(const fpba::Presentation& p);
bool is_zero(const fpba::Presentation& p, const fpba::Term& t);

fpba::Element element_of_mask(std::size_t universe, std::uint64_t mask);
std::vector<fpba::Element> all_elements(std::size_t points);

// Element-wise checks of a map given through its dual.
bool is_homomorphism(const fpba::Morphism& f);
bool injective_on_elements(const fpba::Morphism& f);
bool surjective_on_elements(const fpba::Morphism& f);

// Longest strictly increasing chain in the power set of `points` points,
// by dynamic programming over all pairs y ⊊ x.
std::size_t longest_chain_powerset(std::size_t points);

// k(s) and k¹(s) worked out by hand for s = 0, 1, 2.
inline const std::vector<std::size_t> hand_k{0, 5, 15};
inline const std::vector<std::size_t> hand_k1{1, 7, 18};

}  // namespace oracle
