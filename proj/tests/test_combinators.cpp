#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fpba/chain_lab.hpp"
#include "fpba/errors.hpp"
#include "oracles.hpp"

using namespace fpba;

namespace {
IndexNode node(const char* s) { return IndexNode::parse(s); }

// least d with c ≤ m(d), by scanning every element of the source
std::optional<Element> brute_upper(const Morphism& m, const Element& c) {
    std::optional<Element> best;
    std::vector<Element> uppers;
    for (const auto& d : oracle::all_elements(m.source_points()))
        if (c.subset_of(m.apply(d))) uppers.push_back(d);
    for (const auto& d : uppers) {
        bool least = true;
        for (const auto& e : uppers) least = least && d.subset_of(e);
        if (least) best = d;
    }
    return best;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("morphism basics") {
    auto id = Morphism::identity(3);
    CHECK(oracle::is_homomorphism(id));
    CHECK(id.is_injective());
    CHECK(id.is_surjective());
    Morphism collapse(3, 2, {0, 0});
    CHECK(oracle::is_homomorphism(collapse));
    CHECK(collapse.is_surjective() == oracle::surjective_on_elements(collapse));
    CHECK(collapse.is_injective() == oracle::injective_on_elements(collapse));
    Morphism grow(2, 3, {0, 1, 1});
    CHECK(grow.is_injective());
    CHECK(oracle::injective_on_elements(grow));
    CHECK(grow.then(Morphism::identity(3)) == grow);
    auto composed = collapse.then(grow);
    for (const auto& e : oracle::all_elements(3)) CHECK(composed.apply(e) == grow.apply(collapse.apply(e)));
    CHECK(Morphism(2, 3, {0, Morphism::drop, 1}).str() == "[0,-,1]");
    CHECK_FALSE(Morphism(2, 2, {0, Morphism::drop}).preserves_unit());
}

TEST_CASE("restrict") {
    auto f2 = realize(free_presentation(2));
    auto whole = restrict(f2, f2.one());
    CHECK(whole.algebra.num_points() == f2.num_points());
    auto atom = restrict(f2, Element::singleton(4, 2));
    CHECK(atom.algebra.num_points() == 1);
    auto part = Element::parse(4, "{0,1,3}");
    auto r1 = restrict(f2, part);
    auto r2 = restrict(r1.algebra, Element::parse(3, "{0,2}"));
    auto direct = restrict(f2, Element::parse(4, "{0,3}"));
    CHECK(r1.projection.then(r2.projection) == direct.projection);
    CHECK(oracle::is_homomorphism(r1.projection));
    CHECK_THROWS_AS(restrict(f2, f2.zero()), PreconditionError);
}

TEST_CASE("product and free product") {
    auto a = atoms_algebra(2), b = atoms_algebra(3);
    auto p = product(a, b);
    CHECK(p.algebra.num_points() == 5);
    for (const auto* m : {&p.project_left, &p.project_right}) CHECK(oracle::is_homomorphism(*m));
    CHECK(p.project_left.is_surjective());
    // injections keep meets and joins but send 1 to a proper element
    CHECK_FALSE(p.inject_left.preserves_unit());
    for (const auto& x : oracle::all_elements(2)) CHECK(p.project_left.apply(p.inject_left.apply(x)) == x);

    auto fp = free_product(a, b);
    CHECK(fp.algebra.num_points() == 6);
    for (const auto* m : {&fp.embed_left, &fp.embed_right}) {
        CHECK(oracle::is_homomorphism(*m));
        CHECK(oracle::injective_on_elements(*m));
    }
    // the two factors are independent
    for (const auto& x : oracle::all_elements(2))
        for (const auto& y : oracle::all_elements(3))
            if (x.any() && y.any()) CHECK((fp.embed_left.apply(x) & fp.embed_right.apply(y)).any());
}

TEST_CASE("surgery") {
    auto b1 = atoms_algebra(2), b = atoms_algebra(2);
    auto a_star = Element::singleton(2, 0);
    auto s = surgery(b1, a_star, b);
    CHECK(s.algebra.num_points() == 3);
    CHECK(cardinality(s.algebra) == "8");
    CHECK(oracle::is_homomorphism(s.embedding));
    CHECK(oracle::injective_on_elements(s.embedding));
    CHECK(realize(surgery_presentation(b1, a_star, b)).num_points() == 3);

    auto unit = surgery(b1, a_star, atoms_algebra(1));
    CHECK(unit.algebra.num_points() == b1.num_points());

    auto whole = surgery(b1, b1.one(), b);
    CHECK(whole.algebra.num_points() == b1.num_points() * b.num_points());

    // point arithmetic and injectivity for every small case
    for (std::size_t n1 = 1; n1 <= 4; ++n1)
        for (std::size_t n = 1; n <= 3; ++n) {
            auto left = atoms_algebra(n1), right = atoms_algebra(n);
            for (const auto& a : oracle::all_elements(n1)) {
                if (a.none()) continue;
                auto r = surgery(left, a, right);
                CHECK(r.algebra.num_points() == (n1 - a.count()) + a.count() * n);
                CHECK(oracle::injective_on_elements(r.embedding));
                CHECK(realize(surgery_presentation(left, a, right)).num_points() == r.algebra.num_points());
            }
        }
}

TEST_CASE("regular subalgebras and upper projection") {
    auto b1 = atoms_algebra(2);
    auto s = surgery(b1, Element::singleton(2, 0), atoms_algebra(2));
    CHECK(is_regular_sub(s.embedding));
    CHECK(is_regular_sub(Morphism::identity(3)));
    Morphism grow(2, 5, {0, 0, 1, 1, 1});
    CHECK(is_regular_sub(grow));

    for (const auto& c : oracle::all_elements(s.algebra.num_points())) {
        if (c.none()) continue;
        auto d = project_upper(s.embedding, c);
        auto expected = brute_upper(s.embedding, c);
        REQUIRE(expected.has_value());
        CHECK(d == *expected);
        CHECK(project_upper(s.embedding, s.embedding.apply(d)) == d);
    }
    // an element of the image projects to its preimage
    auto img = s.embedding.apply(Element::singleton(2, 1));
    CHECK(s.embedding.apply(project_upper(s.embedding, img)) == img);

    // the two-element algebra inside anything: every nonzero c goes to 1
    Morphism from_two(1, 4, {0, 0, 0, 0});
    for (const auto& c : oracle::all_elements(4))
        if (c.any()) CHECK(project_upper(from_two, c) == Element::full(1));
}

TEST_CASE("compatible families survive the embedding") {
    auto b1 = atoms_algebra(3);
    auto s = surgery(b1, Element::parse(3, "{0,1}"), atoms_algebra(2));
    auto elems = oracle::all_elements(3);
    std::vector<Element> fam, img;
    for (const auto& e : elems)
        if (e.any()) fam.push_back(e), img.push_back(s.embedding.apply(e));
    CHECK(knaster_subfamily(img).max_compatible >= knaster_subfamily(fam).max_compatible);
}

TEST_CASE("schedules") {
    auto b0 = atoms_algebra(2);
    auto empty = sur_schedule(b0, {});
    REQUIRE(empty.stages.size() == 1);
    CHECK(empty.stages[0].num_points() == 2);

    auto steps = parse_schedule(read_file(FPBA_DATA_DIR "/schedule.txt"), FPBA_DATA_DIR);
    REQUIRE(steps.size() == 3);
    std::vector<ScheduleStep> first(steps.begin(), steps.begin() + 1);
    auto one = sur_schedule(b0, first);
    auto factor = realize(build(first[0].builder, first[0].model));
    auto direct = surgery(b0, Element::singleton(2, 0), factor);
    REQUIRE(one.stages.size() == 2);
    CHECK(one.stages[1].num_points() == direct.algebra.num_points());

    auto all = sur_schedule(b0, steps);
    REQUIRE(all.stages.size() == 4);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& a = all.surgery_points[i];
        CHECK(all.stages[i + 1].num_points() ==
              (all.stages[i].num_points() - a.count()) + a.count() * all.factor_points[i]);
        CHECK(oracle::injective_on_elements(all.embeddings[i]) == true);
    }
    CHECK_THROWS_AS(parse_schedule("missing.model atom:0 tr\n", FPBA_DATA_DIR), Error);
    CHECK_THROWS_AS(Selector::parse("sideways:1"), ParseError);
}

TEST_CASE("ba extension") {
    auto base = atoms_algebra(3);
    auto h1 = ArityProfile::constant(1, 1);
    auto root_only = IndexModel(h1, 1, {IndexNode::root()});
    std::vector<Element> abar{Element::singleton(3, 0)};
    auto ext = build_ba_ext(base, abar, root_only);
    CHECK(ext.algebra.num_points() == 3);
    CHECK(ext.embedding.is_injective());
    CHECK(ext.embedding.is_surjective());

    auto chain = IndexModel(ArityProfile::constant(2, 1), 1, {IndexNode::root(), node("0"), node("0/0"), node("0/0/*")});
    std::vector<Element> two{Element::singleton(3, 0), Element::singleton(3, 2)};
    auto e2 = build_ba_ext(base, two, chain);
    CHECK(oracle::is_homomorphism(e2.embedding));
    CHECK(oracle::injective_on_elements(e2.embedding));
}

TEST_CASE("subset_star") {
    auto h1 = ArityProfile::constant(2, 1);
    auto big = IndexModel(h1, 1, {IndexNode::root(), node("0"), node("0/0"), node("0/0/*")});
    CHECK(subset_star(big, big));
    CHECK(subset_star(IndexModel(h1, 1, {IndexNode::root(), node("0")}), big));
    CHECK_FALSE(subset_star(IndexModel(h1, 1, {IndexNode::root(), node("0"), node("0/0")}), big));
    CHECK_THROWS_AS(subset_star(IndexModel(ArityProfile::constant(1, 1), 1, {IndexNode::root()}), big),
                    PreconditionError);
}

TEST_CASE("generator inclusion") {
    auto h1 = ArityProfile::constant(2, 1);
    auto small = IndexModel(h1, 1, {IndexNode::root(), node("0")});
    auto big = IndexModel(h1, 1, {IndexNode::root(), node("0"), node("0/0"), node("0/0/*")});
    auto a = realize(build_tr(small)), b = realize(build_tr(big));
    auto m = generator_inclusion(a, b);
    CHECK(oracle::is_homomorphism(m));
    for (std::size_t g = 0; g < a.num_generators(); ++g)
        CHECK(m.apply(a.denotation(g)) == b.denotation(a.generators()[g]));
    CHECK_THROWS_AS(generator_inclusion(b, a), PreconditionError);
}
