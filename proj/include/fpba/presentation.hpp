#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fpba/element.hpp"
#include "fpba/index_model.hpp"
#include "fpba/term.hpp"

namespace fpba {

class CanonicalAlgebra;

enum class BuilderTag { Raw, Free, Tr, Ptr, TrH, Trr, TrHG, TrHE, Ba };

std::string tag_name(BuilderTag tag);
BuilderTag parse_tag(std::string_view name);

// Generators plus relations, each relation a term asserted equal to 0.
class Presentation {
public:
    Presentation(std::vector<GeneratorId> generators, std::vector<Term> relations, BuilderTag tag = BuilderTag::Raw,
                 std::string params = {}, std::optional<IndexModel> model = std::nullopt);

    std::span<const GeneratorId> generators() const { return generators_; }
    std::span<const Term> relations() const { return relations_; }
    BuilderTag tag() const { return tag_; }
    const std::string& params() const { return params_; }
    const std::optional<IndexModel>& model() const { return model_; }
    std::optional<std::size_t> index_of(const GeneratorId& id) const;

    std::string dump() const;
    static Presentation parse(std::string_view text);

private:
    std::vector<GeneratorId> generators_;
    std::vector<Term> relations_;
    BuilderTag tag_;
    std::string params_;
    std::optional<IndexModel> model_;
    std::map<GeneratorId, std::size_t> index_;
};

// One (u1, u2) pair per level, subsets of {0, …, h(n)-1}.
struct EquivProfile {
    struct Pair {
        std::vector<unsigned> u1, u2;
    };
    std::vector<std::vector<Pair>> levels;

    static EquivProfile e0(const ArityProfile& profile);
    static EquivProfile e1(const ArityProfile& profile);
    static EquivProfile e2(const ArityProfile& profile);
    // "e0" | "e1" | "e2" | "u1|u2;u1|u2;…" with comma-separated subsets
    static EquivProfile parse(std::string_view text, const ArityProfile& profile);
    std::string str() const;
};

Presentation free_presentation(std::size_t n);
// Atoms a:0 … a:n-1, pairwise disjoint with join 1.
Presentation atom_partition(std::size_t n);

Presentation build_tr(const IndexModel& model);
Presentation build_ptr(const IndexModel& model);
Presentation build_tr_h(const IndexModel& model);
Presentation build_tr_h_g(const IndexModel& model, std::span<const unsigned> g);
Presentation build_tr_h_e(const IndexModel& model, const EquivProfile& e);
Presentation build_trr(const IndexModel& model);
Presentation build_ba(const CanonicalAlgebra& base, std::span<const Element> abar, const IndexModel& model);

// Immediate successors used by build_trr (h ≡ 1 identification).
std::vector<IndexNode> trr_successors(const IndexModel& model, const IndexNode& node);

// Builder selection for schedules and the command line.
struct BuilderSpec {
    BuilderTag tag = BuilderTag::Tr;
    std::vector<unsigned> g;
    std::optional<EquivProfile> e;
    std::shared_ptr<const CanonicalAlgebra> base;
    std::vector<Element> abar;
};

Presentation build(const BuilderSpec& spec, const IndexModel& model);

}  // namespace fpba
