#include "corpus.hpp"

namespace corpus {

using namespace fpba;

Term random_term(std::mt19937_64& rng, const std::vector<GeneratorId>& gens, unsigned depth) {
    std::uniform_int_distribution<int> pick(0, depth == 0 ? 0 : 3);
    std::uniform_int_distribution<std::size_t> g(0, gens.size() - 1);
    switch (pick(rng)) {
        case 1: return ~random_term(rng, gens, depth - 1);
        case 2: {
            std::vector<Term> ts;
            for (int i = 0; i < 2; ++i) ts.push_back(random_term(rng, gens, depth - 1));
            return Term::meet(std::move(ts));
        }
        case 3: {
            std::vector<Term> ts;
            for (int i = 0; i < 2; ++i) ts.push_back(random_term(rng, gens, depth - 1));
            return Term::join(std::move(ts));
        }
        default: return Term::gen(gens[g(rng)]);
    }
}

std::vector<Presentation> small_presentations(std::uint64_t seed, std::size_t random_count) {
    std::vector<Presentation> out;
    for (std::size_t n = 0; n <= 4; ++n) out.push_back(free_presentation(n));
    for (std::size_t n = 1; n <= 5; ++n) out.push_back(atom_partition(n));
    out.push_back(Presentation({GeneratorId::named("p")}, {Term::one()}));

    for (const auto& m : enumerate_closed_models(ArityProfile::constant(2, 1), 2, 7)) {
        out.push_back(build_tr(m));
        out.push_back(build_tr_h(m));
        out.push_back(build_trr(m));
    }
    for (const auto& m : enumerate_closed_models(ArityProfile::constant(1, 2), 3, 12, 2)) {
        out.push_back(build_ptr(m));
        out.push_back(build_tr_h(m));
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> gcount(1, 12), rcount(0, 6);
    for (std::size_t i = 0; i < random_count; ++i) {
        std::vector<GeneratorId> gens;
        const auto n = gcount(rng);
        for (std::size_t k = 0; k < n; ++k) gens.push_back(GeneratorId::named("r" + std::to_string(k)));
        std::vector<Term> rels;
        const auto rc = rcount(rng);
        for (std::size_t k = 0; k < rc; ++k) rels.push_back(random_term(rng, gens, 3));
        out.emplace_back(std::move(gens), std::move(rels));
    }
    return out;
}

}  // namespace corpus
