#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fpba/errors.hpp"
#include "oracles.hpp"

using namespace fpba;

namespace {
IndexNode node(const char* s) { return IndexNode::parse(s); }

IndexModel chain_model() {
    return IndexModel(ArityProfile::constant(2, 1), 1, {IndexNode::root(), node("0"), node("0/0"), node("0/0/*")});
}

std::set<std::string> relation_strings(const Presentation& p) {
    std::set<std::string> out;
    for (const auto& r : p.relations()) out.insert(r.str());
    return out;
}

// Same set of respecting valuations after renaming nothing: generator lists must agree.
bool equivalent(const Presentation& a, const Presentation& b) {
    auto va = oracle::respecting(a);
    auto vb = oracle::respecting(b);
    std::sort(va.begin(), va.end());
    std::sort(vb.begin(), vb.end());
    return va == vb;
}

std::set<GeneratorId> generators_of(const Term& t) {
    std::set<GeneratorId> g;
    t.collect_generators(g);
    return g;
}
}  // namespace

TEST_CASE("term text round trip") {
    auto t = (Term::x(node("0")) & ~Term::atom(2)) | Term::gen(GeneratorId::named("p"));
    CHECK(Term::parse(t.str()) == t);
    CHECK(Term::parse("(and x:0/1 (not a:3))") == (Term::x(node("0/1")) & ~Term::atom(3)));
    CHECK(Term::meet({}) == Term::one());
    CHECK(Term::join({}) == Term::zero());
    CHECK(Term::meet({Term::atom(1)}) == Term::atom(1));
    CHECK_THROWS_AS(Term::parse("(and x:0"), ParseError);
    CHECK_THROWS_AS(Term::parse("x:0 x:1"), ParseError);
    for (const char* s : {"x:<>", "x:0,1/2/*", "a:4", "g:left"}) CHECK(GeneratorId::parse(s).str() == s);
}

TEST_CASE("builder round trip through text") {
    for (const auto& p : {build_tr(chain_model()), build_trr(chain_model()), atom_partition(3), free_presentation(2)}) {
        auto q = Presentation::parse(p.dump());
        CHECK(std::equal(q.generators().begin(), q.generators().end(), p.generators().begin(), p.generators().end()));
        CHECK(std::equal(q.relations().begin(), q.relations().end(), p.relations().begin(), p.relations().end()));
    }
    try {
        Presentation::parse("# raw\ngen x:0\nrel (and x:0\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("build_tr") {
    auto h1 = ArityProfile::constant(1, 1);
    auto root_only = IndexModel(h1, 1, {IndexNode::root()});
    auto p0 = build_tr(root_only);
    CHECK(p0.generators().size() == 1);
    CHECK(p0.relations().empty());

    // the branch lies below every finite node it extends
    auto p = build_tr(chain_model());
    CHECK(p.relations().size() == 3);
    const auto b = Term::x(node("0/0/*"));
    for (const char* eta : {"<>", "0", "0/0"}) CHECK(oracle::is_zero(p, minus(b, Term::x(node(eta)))));
    CHECK(oracle::point_count(p) == 9);

    // two incomparable branches: each relation names one branch
    auto two = IndexModel(h1, 2, {IndexNode::root(), node("0"), node("1"), node("0/*"), node("1/*")});
    auto pt = build_tr(two);
    std::set<std::string> with0, with1;
    for (const auto& r : pt.relations()) {
        auto g = generators_of(r);
        bool b0 = g.count(GeneratorId::node(node("0/*"))) > 0;
        bool b1 = g.count(GeneratorId::node(node("1/*"))) > 0;
        CHECK(b0 != b1);
        (b0 ? with0 : with1).insert(r.str());
    }
    CHECK(with0.size() == 2);
    CHECK(with1.size() == 2);
}

TEST_CASE("build_ptr") {
    auto h2 = ArityProfile::constant(1, 2);
    auto branchless = IndexModel(h2, 2, {IndexNode::root(), node("0"), node("1")});
    CHECK(build_ptr(branchless).relations().empty());
    CHECK(oracle::point_count(build_ptr(branchless)) == 8);

    auto single = IndexModel(h2, 2, {IndexNode::root(), node("0"), node("1"), node("0,1/*")});
    auto p = build_ptr(single);
    CHECK(p.relations().size() == 2);
    // only nodes of the model occur
    for (const auto& r : p.relations())
        for (const auto& g : generators_of(r)) CHECK(single.contains(*g.as_node()));
}

TEST_CASE("tr_h specialisations") {
    // h ≡ 1: tr_h is tr without the root relations, and adding them back is equivalent
    auto m = chain_model();
    auto tr = relation_strings(build_tr(m));
    auto trh = relation_strings(build_tr_h(m));
    CHECK(std::includes(tr.begin(), tr.end(), trh.begin(), trh.end()));
    const auto ph = build_tr_h(m);
    std::vector<Term> combined(ph.relations().begin(), ph.relations().end());
    for (const auto& s : tr)
        if (!trh.count(s)) {
            auto g = generators_of(Term::parse(s));
            CHECK(g.count(GeneratorId::node(IndexNode::root())) == 1);
            combined.push_back(Term::parse(s));
        }
    const auto pt = build_tr(m);
    std::vector<GeneratorId> gens(pt.generators().begin(), pt.generators().end());
    CHECK(equivalent(Presentation(gens, combined), pt));

    // h ≡ 2: tr_h and ptr agree relation for relation
    auto h2 = ArityProfile::constant(2, 2);
    for (const auto& mdl : enumerate_closed_models(h2, 2, 5))
        if (!mdl.branches().empty()) CHECK(relation_strings(build_tr_h(mdl)) == relation_strings(build_ptr(mdl)));
}

TEST_CASE("tr_h_g and tr_h_e builders") {
    auto h2 = ArityProfile::constant(1, 2);
    auto single = IndexModel(h2, 2, {IndexNode::root(), node("0"), node("1"), node("0,1/*")});
    std::vector<unsigned> g{0};
    auto pg = build_tr_h_g(single, g);
    CHECK(pg.tag() == BuilderTag::TrHG);
    CHECK(oracle::point_count(pg) == realize(pg).num_points());
    // g ≡ 0 forces the branch to 0
    CHECK(oracle::is_zero(pg, Term::x(node("0,1/*"))));
    std::vector<unsigned> too_big{3};
    CHECK_THROWS_AS(build_tr_h_g(single, too_big), PreconditionError);

    // h = 4 with u1 = {0,1}, u2 = {2,3}
    auto h4 = ArityProfile({4});
    auto wide = IndexModel(h4, 4,
                           {IndexNode::root(), node("0"), node("1"), node("2"), node("3"), node("0,1,2,3/*")});
    auto e = EquivProfile::e2(h4);
    CHECK(EquivProfile::parse(e.str(), h4).str() == e.str());
    auto pe = build_tr_h_e(wide, e);
    CHECK(pe.relations().size() == 2);
    const auto b = Term::x(node("0,1,2,3/*"));
    CHECK(oracle::is_zero(pe, minus(b, Term::x(node("0")) | Term::x(node("1")))));
    CHECK(oracle::is_zero(pe, b & Term::x(node("3"))));
    CHECK_FALSE(oracle::is_zero(pe, b & ~Term::x(node("0"))));
    CHECK(oracle::point_count(pe) == realize(pe).num_points());

    // both singletons, or more than one pair per level, is malformed
    CHECK_THROWS_AS(build_tr_h_e(single, EquivProfile::e2(h2)), PreconditionError);
    CHECK_THROWS_AS(build_tr_h_e(single, EquivProfile::e0(h2)), PreconditionError);
}

TEST_CASE("build_trr") {
    auto h1 = ArityProfile::constant(2, 1);
    // binary node: x_η = x_η0 ∨ x_η1
    auto fan = IndexModel(h1, 2, {IndexNode::root(), node("0"), node("1")});
    auto pf = build_trr(fan);
    CHECK(oracle::is_zero(pf, minus(Term::x(IndexNode::root()), Term::x(node("0")) | Term::x(node("1")))));
    CHECK(oracle::is_zero(pf, minus(Term::x(node("0")) | Term::x(node("1")), Term::x(IndexNode::root()))));

    // unary chain: x_η = x_ν
    auto chain = IndexModel(h1, 1, {IndexNode::root(), node("0"), node("0/0")});
    auto pc = build_trr(chain);
    CHECK(oracle::is_zero(pc, minus(Term::x(node("0")), Term::x(node("0/0")))));
    CHECK(oracle::is_zero(pc, minus(Term::x(node("0/0")), Term::x(node("0")))));

    // leaves contribute no clause of their own
    for (const auto& r : pc.relations()) {
        auto g = generators_of(r);
        CHECK_FALSE((g.size() == 1 && g.count(GeneratorId::node(node("0/0")))));
    }
    CHECK(trr_successors(fan, IndexNode::root()).size() == 2);
    CHECK(trr_successors(fan, node("0")).empty());
}

TEST_CASE("build_ba") {
    auto base = atoms_algebra(2);
    auto h1 = ArityProfile::constant(1, 1);
    auto branchless = IndexModel(h1, 2, {IndexNode::root(), node("0"), node("1")});
    std::vector<Element> abar{Element::singleton(2, 0)};
    auto p = build_ba(base, abar, branchless);
    // base atoms times free x_⟨0⟩, x_⟨1⟩, with x_root = 0
    CHECK(oracle::point_count(p) == 2 * 4);
    CHECK(oracle::is_zero(p, Term::x(IndexNode::root())));

    auto two = atoms_algebra(1);
    auto deep = chain_model();
    std::vector<Element> bad{Element::full(1), Element::full(1)};
    CHECK_THROWS_AS(build_ba(two, bad, deep), PreconditionError);
    std::vector<Element> zero{Element(1)};
    CHECK_THROWS_AS(build_ba(two, zero, deep), PreconditionError);
}
