#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "fpba/errors.hpp"
#include "fpba/rigidity_lab.hpp"
#include "oracles.hpp"

using namespace fpba;

namespace {
IndexNode node(const char* s) { return IndexNode::parse(s); }

// Maps between element lists that keep 1, complement and meet, found by
// trying every function from elements to elements.
std::size_t brute_hom_count(std::size_t from, std::size_t to) {
    auto src = oracle::all_elements(from), dst = oracle::all_elements(to);
    std::map<Element, std::size_t> pos;
    for (std::size_t i = 0; i < src.size(); ++i) pos[src[i]] = i;
    std::vector<std::size_t> f(src.size(), 0);
    std::size_t count = 0;
    while (true) {
        bool ok = dst[f[pos[Element::full(from)]]] == Element::full(to);
        for (std::size_t i = 0; i < src.size() && ok; ++i) {
            ok = dst[f[pos[~src[i]]]] == ~dst[f[i]];
            for (std::size_t j = 0; j < src.size() && ok; ++j)
                ok = dst[f[pos[src[i] & src[j]]]] == (dst[f[i]] & dst[f[j]]);
        }
        count += ok;
        std::size_t k = 0;
        while (k < f.size() && ++f[k] == dst.size()) f[k++] = 0;
        if (k == f.size()) break;
    }
    return count;
}

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }
}  // namespace

TEST_CASE("homomorphism enumeration") {
    CHECK(count_homs(atoms_algebra(2), atoms_algebra(1)) == 2);
    for (std::size_t a = 1; a <= 3; ++a)
        for (std::size_t b = 1; b <= 3; ++b) {
            if (a == 3 && b == 3) continue;
            auto A = atoms_algebra(a), B = atoms_algebra(b);
            std::size_t total = 1;
            for (std::size_t i = 0; i < b; ++i) total *= a;
            CHECK(count_homs(A, B) == total);
            CHECK(count_homs(A, B) == brute_hom_count(a, b));
            bool any_injective = false;
            for (const auto& m : enumerate_homs(A, B)) {
                CHECK(oracle::is_homomorphism(m));
                any_injective = any_injective || oracle::injective_on_elements(m);
            }
            CHECK(any_injective == (b >= a));
        }
    // constraints fix the image of an element
    auto A = atoms_algebra(2), B = atoms_algebra(3);
    std::vector<HomConstraint> c{{Element::singleton(2, 0), Element::parse(3, "{0,2}")}};
    auto homs = enumerate_homs(A, B, c);
    CHECK(homs.size() == 1);
    for (const auto& m : homs) CHECK(m.apply(Element::singleton(2, 0)) == Element::parse(3, "{0,2}"));
    CHECK_THROWS_AS(enumerate_homs(atoms_algebra(4), atoms_algebra(8), {}, 1000), BudgetExceeded);
}

TEST_CASE("quotients by ideals") {
    auto a = atoms_algebra(3);
    auto q0 = quotient(a, Ideal::generated_by(a, {}));
    CHECK(q0.algebra.num_points() == 3);
    auto qa = quotient(a, Ideal::generated_by(a, {Element::singleton(3, 1)}));
    CHECK(qa.algebra.num_points() == 2);
    CHECK(oracle::is_homomorphism(qa.surjection));
    CHECK(oracle::surjective_on_elements(qa.surjection));
    CHECK(qa.surjection.apply(Element::singleton(3, 1)).none());
    auto full = Ideal::generated_by(a, {a.one()});
    CHECK_FALSE(full.proper());
    CHECK(quotient(a, full).algebra.num_points() == 0);
}

TEST_CASE("trr quotients") {
    auto h1 = ArityProfile::constant(1, 1);
    auto fan = IndexModel(h1, 2, {IndexNode::root(), node("0"), node("1")});
    auto a = realize(build_trr(fan));

    auto none = Ideal::generated_by(a, {});
    auto q0 = trr_quotient_index(fan, a, none);
    REQUIRE(q0.index.has_value());
    auto v0 = verify_trr_quotient(fan, a, none, q0);
    CHECK(v0.isomorphic);
    CHECK(v0.quotient_points == a.num_points());

    auto kill = Ideal::generated_by(a, {a.denotation(GeneratorId::node(node("1")))});
    auto q1 = trr_quotient_index(fan, a, kill);
    auto v1 = verify_trr_quotient(fan, a, kill, q1);
    CHECK(v1.isomorphic);
    CHECK(v1.same_size);
    REQUIRE(v1.iso.has_value());
    CHECK(oracle::is_homomorphism(*v1.iso));
    CHECK(v1.iso->is_injective());
    CHECK(v1.iso->is_surjective());

    auto all = Ideal::generated_by(a, {a.one()});
    auto qd = trr_quotient_index(fan, a, all);
    CHECK(qd.degenerate);

    // the zero point inside the ideal needs the co-root repair
    auto coroot = Ideal::generated_by(a, {~a.denotation(GeneratorId::node(IndexNode::root()))});
    auto qc = trr_quotient_index(fan, a, coroot);
    CHECK(qc.coroot_repair);
    CHECK(verify_trr_quotient(fan, a, coroot, qc).isomorphic);

    CHECK_THROWS_AS(trr_quotient_index(fan, realize(build_tr(fan)), none), PreconditionError);
}

TEST_CASE("trr quotients over every principal ideal of small models") {
    std::size_t checked = 0;
    for (const auto& m : enumerate_closed_models(ArityProfile::constant(2, 1), 2, 6)) {
        auto a = realize(build_trr(m));
        for (const auto& e : oracle::all_elements(a.num_points())) {
            auto j = Ideal::generated_by(a, {e});
            auto q = trr_quotient_index(m, a, j);
            if (q.degenerate) {
                CHECK_FALSE(j.proper());
                continue;
            }
            auto v = verify_trr_quotient(m, a, j, q);
            REQUIRE_MESSAGE(v.isomorphic, m.str() << " ideal " << e.str() << ": " << v.detail);
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("Bonnet rigidity") {
    auto two = atoms_algebra(1);
    CHECK(bonnet_rigid(two).rigid);
    for (std::size_t n = 2; n <= 5; ++n) {
        auto a = atoms_algebra(n);
        auto r = bonnet_rigid(a);
        CHECK_FALSE(r.rigid);
        REQUIRE(r.witness.has_value());
        const auto& w = *r.witness;
        CHECK(oracle::is_homomorphism(w.injective));
        CHECK(oracle::is_homomorphism(w.surjective));
        CHECK(oracle::injective_on_elements(w.injective));
        CHECK(oracle::surjective_on_elements(w.surjective));
        CHECK(w.injective.target_points() == w.surjective.target_points());
        CHECK_FALSE(w.injective == w.surjective);
    }
}

TEST_CASE("rigidity obstruction") {
    auto two = atoms_algebra(1);
    auto r1 = rigidity_obstruction(two);
    CHECK(r1.star_holds);
    CHECK(r1.implication_holds);

    auto four = atoms_algebra(2);
    auto r2 = rigidity_obstruction(four);
    CHECK_FALSE(r2.star_holds);
    REQUIRE(r2.witness.has_value());
    CHECK_FALSE(r2.witness->a.intersects(r2.witness->b));
    CHECK(r2.witness->image.subset_of(r2.witness->b));
    CHECK(r2.implication_holds);

    for (std::size_t n = 1; n <= 4; ++n) {
        auto r = rigidity_obstruction(free_algebra(n > 2 ? 2 : n));
        CHECK((!r.star_holds || r.bonnet_rigid));
    }
}

TEST_CASE("injective endomorphisms and the disjointifier") {
    for (std::size_t n = 1; n <= 4; ++n) {
        auto a = atoms_algebra(n);
        auto monos = mono_endo_search(a);
        CHECK(monos.size() == factorial(n) - 1);
        for (const auto& f : monos) {
            auto d = disjointifier(a, f);
            CHECK(d.a.any());
            CHECK_FALSE(d.a.intersects(f.apply(d.a)));
            CHECK(d.x != f.apply(d.x));
        }
    }
    auto four = atoms_algebra(2);
    Morphism swap(2, 2, {1, 0});
    auto d = disjointifier(four, swap);
    CHECK(d.a.count() == 1);
    CHECK_THROWS_AS(disjointifier(four, Morphism::identity(2)), PreconditionError);
}
