#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpba/algebra.hpp"

namespace fpba {

// A homomorphism between finite algebras, stored through its dual: each
// target point is sent to a source point, or dropped. f(a) is the set of
// target points whose image lies in a.
class Morphism {
public:
    static constexpr std::size_t drop = SIZE_MAX;

    Morphism(std::size_t source_points, std::size_t target_points, std::vector<std::size_t> dual);
    static Morphism identity(std::size_t points);

    std::size_t source_points() const { return source_; }
    std::size_t target_points() const { return dual_.size(); }
    std::span<const std::size_t> dual() const { return dual_; }

    Element apply(const Element& a) const;
    bool preserves_unit() const;
    bool is_injective() const;
    bool is_surjective() const;
    // this: A → B, next: B → C, result A → C
    Morphism then(const Morphism& next) const;

    // "[0,2,-,1]": source point of each target point
    std::string str() const;

    bool operator==(const Morphism&) const = default;

private:
    std::size_t source_;
    std::vector<std::size_t> dual_;
};

struct Restriction {
    CanonicalAlgebra algebra;
    Morphism projection;  // b ↦ b ∧ a
};
Restriction restrict(const CanonicalAlgebra& a, const Element& to);

struct ProductResult {
    CanonicalAlgebra algebra;
    Morphism inject_left, inject_right;    // a ↦ (a, 0), b ↦ (0, b)
    Morphism project_left, project_right;  // onto the factors
};
ProductResult product(const CanonicalAlgebra& a, const CanonicalAlgebra& b);

struct FreeProductResult {
    CanonicalAlgebra algebra;
    Morphism embed_left, embed_right;
};
FreeProductResult free_product(const CanonicalAlgebra& a, const CanonicalAlgebra& b);

struct SurgeryResult {
    CanonicalAlgebra algebra;
    Morphism embedding;
};
// [B1↾−a*] × [(B1↾a*) * B]. Generators of B1 keep their names, those of B
// get the prefix.
SurgeryResult surgery(const CanonicalAlgebra& b1, const Element& a_star, const CanonicalAlgebra& b,
                      const std::string& prefix = "b.");
// The same algebra as a presentation over the atoms of B1 and of B.
Presentation surgery_presentation(const CanonicalAlgebra& b1, const Element& a_star, const CanonicalAlgebra& b);

struct Selector {
    enum class Kind { Atom, Elem, ComplementOfStage } kind = Kind::Atom;
    std::size_t index = 0;            // atom number or stage number
    std::vector<std::size_t> points;  // for Elem
    static Selector parse(std::string_view text);
    std::string str() const;
};

struct ScheduleStep {
    IndexModel model;
    Selector selector;
    BuilderSpec builder;
};

struct ScheduleResult {
    std::vector<CanonicalAlgebra> stages;
    std::vector<Morphism> embeddings;     // stage i → stage i+1
    std::vector<Element> surgery_points;  // a*_i in stage i
    std::vector<std::size_t> factor_points;
};

ScheduleResult sur_schedule(const CanonicalAlgebra& b0, std::span<const ScheduleStep> schedule,
                            const RealizeOptions& opts = {});
// One record per line: <model file> <selector> <tag> [g=..] [e=..] [base=<atoms>] [abar={..};{..}]
std::vector<ScheduleStep> parse_schedule(std::string_view text, const std::filesystem::path& base_dir);

// Every maximal antichain of the image stays maximal in the target.
bool is_regular_sub(const Morphism& m, std::size_t max_source_points = 10);
// Least element d of the source with c ≤ m(d).
Element project_upper(const Morphism& m, const Element& c);

struct Extension {
    CanonicalAlgebra algebra;
    Morphism embedding;  // base ↪ ba[base, ā, I]
};
Extension build_ba_ext(const CanonicalAlgebra& base, std::span<const Element> abar, const IndexModel& model,
                       const RealizeOptions& opts = {});
bool subset_star(const IndexModel& smaller, const IndexModel& larger);

// The map sending each generator of small to the generator of big with the
// same name. Throws PropertyViolation when that is not a homomorphism.
Morphism generator_inclusion(const CanonicalAlgebra& small, const CanonicalAlgebra& big);

}  // namespace fpba
