#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fpba/algebra.hpp"

namespace fpba {

struct ChainResult {
    std::size_t size = 0;
    std::vector<Element> witness;  // strictly increasing
};

ChainResult longest_chain(const CanonicalAlgebra& a);
ChainResult longest_chain(std::span<const Element> family);

// Witnesses are indices into the family.
struct FamilyReport {
    std::size_t family_size = 0;
    std::size_t longest_chain = 0;
    std::vector<std::size_t> chain_witness;
    std::size_t max_antichain = 0;
    std::vector<std::size_t> antichain_witness;
    std::size_t max_compatible = 0;
    std::vector<std::size_t> compatible_witness;

    nlohmann::json to_json(std::span<const Element> family) const;
};

FamilyReport knaster_subfamily(std::span<const Element> family, std::size_t max_family = 64);

// Exact maximum clique of a graph with at most 64 vertices, as vertex indices.
std::vector<std::size_t> max_clique(const std::vector<std::uint64_t>& adjacency);

using FiniteSet = std::vector<int>;  // sorted, no duplicates

struct DeltaSystem {
    std::vector<std::size_t> members;  // indices into the family
    FiniteSet heart;
};

std::optional<DeltaSystem> delta_system(std::span<const FiniteSet> sets, std::size_t r);

// w[i] ⊆ {0, …, |w|-1}; returns S of size r with j ∉ w(i) for distinct i, j ∈ S.
std::optional<std::vector<std::size_t>> free_subset(std::span<const FiniteSet> w, std::size_t r);

// Number of quantifier-free types of m-tuples drawn from domain (all of the
// model when empty) over the parameters, in the language of the index model
// with Res images of the tuple entries as extra terms.
std::size_t qf_type_count(const IndexModel& model, std::span<const IndexNode> params, std::size_t m,
                          std::optional<std::span<const IndexNode>> domain = std::nullopt);
// The atomic diagram used by qf_type_count, for one tuple.
std::vector<bool> qf_signature(const IndexModel& model, std::span<const IndexNode> params,
                               std::span<const IndexNode> tuple);
// Permutations of the node list (by index) preserving every relation and Res.
std::vector<std::vector<std::size_t>> model_automorphisms(const IndexModel& model, std::size_t limit = 10000);

struct IndiscernibleResult {
    bool indiscernible = true;
    std::size_t selections = 0;
    // two injective selections (family indices) with different types
    std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> counterexample;
};

// Type of a tuple of elements: the set of nonempty Venn regions.
std::vector<std::uint64_t> venn_type(const CanonicalAlgebra& a, std::span<const Element> elems);

IndiscernibleResult indiscernible_check(const CanonicalAlgebra& a, std::span<const std::vector<Element>> family,
                                        std::size_t n, std::size_t max_coordinates = 16);
// Largest subfamily (indices) all of whose injective n-selections share a type.
std::vector<std::size_t> indiscernible_extract(const CanonicalAlgebra& a,
                                               std::span<const std::vector<Element>> family, std::size_t n,
                                               std::size_t max_family = 14);

}  // namespace fpba
