#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fpba/presentation.hpp"

namespace corpus {

// Random term over the given generators, nesting at most `depth` deep.
fpba::Term random_term(std::mt19937_64& rng, const std::vector<fpba::GeneratorId>& gens, unsigned depth);

// Presentations with at most 12 generators: builder output on small closed
// models, free and atom presentations, an inconsistent one, and random ones.
std::vector<fpba::Presentation> small_presentations(std::uint64_t seed, std::size_t random_count = 150);

}  // namespace corpus
