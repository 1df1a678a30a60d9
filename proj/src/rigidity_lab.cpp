#include "fpba/rigidity_lab.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "fpba/errors.hpp"

namespace fpba {

Ideal Ideal::generated_by(const CanonicalAlgebra& a, std::vector<Element> gens) {
    Ideal j{std::move(gens), a.zero()};
    for (const auto& g : j.generators) {
        if (g.universe() != a.num_points()) throw PreconditionError("ideal generator is not from this algebra");
        j.support |= g;
    }
    return j;
}

namespace {

std::vector<std::vector<std::size_t>> allowed_sources(const CanonicalAlgebra& a, const CanonicalAlgebra& b,
                                                      std::span<const HomConstraint> constraints) {
    for (const auto& [x, y] : constraints)
        if (x.universe() != a.num_points() || y.universe() != b.num_points())
            throw PreconditionError("constraint elements belong to the wrong algebras");
    std::vector<std::vector<std::size_t>> allowed(b.num_points());
    for (std::size_t q = 0; q < b.num_points(); ++q)
        for (std::size_t p = 0; p < a.num_points(); ++p) {
            bool ok = true;
            for (const auto& [x, y] : constraints)
                if (x.test(p) != y.test(q)) ok = false;
            if (ok) allowed[q].push_back(p);
        }
    return allowed;
}

// Depth-first search for a surjective map from `from` onto `onto` (both lists
// of point indices) that differs from `avoid` when given.
std::optional<std::vector<std::size_t>> find_surjection(const std::vector<std::size_t>& from,
                                                        const std::vector<std::size_t>& onto,
                                                        const std::vector<std::size_t>* avoid) {
    const std::size_t n = from.size(), k = onto.size();
    if (n < k) return std::nullopt;
    std::vector<std::size_t> phi(n);
    std::vector<std::size_t> hits(k, 0);
    std::size_t covered = 0;
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (covered + (n - i) < k) return false;
        if (i == n) {
            if (covered != k) return false;
            if (avoid && std::equal(phi.begin(), phi.end(), avoid->begin())) return false;
            return true;
        }
        for (std::size_t t = 0; t < k; ++t) {
            phi[i] = onto[t];
            covered += hits[t]++ == 0;
            if (self(self, i + 1)) return true;
            covered -= --hits[t] == 0;
        }
        return false;
    };
    if (!rec(rec, 0)) return std::nullopt;
    return phi;
}

std::vector<IndexNode> successors_in(const std::set<IndexNode>& nodes, const IndexNode& eta, unsigned depth) {
    std::vector<IndexNode> out;
    if (eta.is_branch()) return out;
    for (const auto& s : nodes) {
        if (s.is_branch()) {
            if (eta.size() == depth && s.entries() == eta.entries()) out.push_back(s);
        } else if (s.size() == eta.size() + 1 && initial_segment(eta, s)) {
            out.push_back(s);
        }
    }
    return out;
}

IndexNode parent_of(const IndexNode& n, unsigned depth) {
    return n.is_branch() ? n.truncate(depth) : n.truncate(n.size() - 1);
}

}  // namespace

std::vector<Morphism> enumerate_homs(const CanonicalAlgebra& a, const CanonicalAlgebra& b,
                                     std::span<const HomConstraint> constraints, std::size_t max_homs) {
    auto allowed = allowed_sources(a, b, constraints);
    std::size_t total = count_homs(a, b, constraints);
    if (total > max_homs)
        throw BudgetExceeded(std::to_string(total) + " homomorphisms exceed the budget of " + std::to_string(max_homs));
    std::vector<Morphism> out;
    std::vector<std::size_t> dual(b.num_points());
    auto rec = [&](auto&& self, std::size_t q) -> void {
        if (q == dual.size()) {
            out.emplace_back(a.num_points(), b.num_points(), dual);
            return;
        }
        for (auto p : allowed[q]) {
            dual[q] = p;
            self(self, q + 1);
        }
    };
    rec(rec, 0);
    return out;
}

std::size_t count_homs(const CanonicalAlgebra& a, const CanonicalAlgebra& b, std::span<const HomConstraint> constraints) {
    auto allowed = allowed_sources(a, b, constraints);
    std::size_t total = 1;
    for (const auto& opts : allowed) {
        if (opts.empty()) return 0;
        if (total > SIZE_MAX / opts.size()) throw BudgetExceeded("homomorphism count overflows");
        total *= opts.size();
    }
    return total;
}

Quotient quotient(const CanonicalAlgebra& a, const Ideal& j) {
    Element kept = ~j.support;
    if (kept.none()) {
        std::vector<GeneratorId> gens(a.generators().begin(), a.generators().end());
        std::vector<Element> den(gens.size(), Element(0));
        return {CanonicalAlgebra(std::move(gens), std::move(den), 0, std::nullopt, "trivial quotient"),
                Morphism(a.num_points(), 0, {})};
    }
    auto r = restrict(a, kept);
    return {std::move(r.algebra), std::move(r.projection)};
}

TrrQuotient trr_quotient_index(const IndexModel& model, const CanonicalAlgebra& a, const Ideal& j) {
    const auto& pres = a.presentation();
    if (!pres || pres->tag() != BuilderTag::Trr || !pres->model() || !(*pres->model() == model))
        throw PreconditionError("algebra was not realized from build_trr of this index model");
    const unsigned depth = model.depth();
    auto x = [&](const IndexNode& n) { return a.denotation(GeneratorId::node(n)); };

    TrrQuotient q;
    if (!j.proper()) {
        q.degenerate = true;
        return q;
    }
    std::set<IndexNode> i1;
    for (const auto& n : model.nodes())
        if (!j.contains(x(n))) {
            i1.insert(n);
            q.i1.push_back(n);
        }

    for (const auto& eta : q.i1) {
        Element rest = x(eta);
        for (const auto& s : successors_in(i1, eta, depth)) rest = rest - x(s);
        (j.contains(rest) ? q.a0 : q.a1).push_back(eta);
    }

    std::set<IndexNode> a0(q.a0.begin(), q.a0.end());
    auto a3_condition = [&](const IndexNode& eta, const IndexNode& nu) {
        if (!a0.count(eta) || !proper_initial_segment(eta, nu)) return false;
        for (std::size_t i = eta.size(); i <= depth; ++i)
            if (!j.contains(x(eta) - x(nu.truncate(i)))) return false;
        return true;
    };
    for (const auto& nu : q.i1) {
        if (!nu.is_branch()) continue;
        for (const auto& eta : q.i1) {
            if (!a3_condition(eta, nu)) continue;
            bool minimal = true;
            for (const auto& e2 : q.i1)
                if (proper_initial_segment(e2, eta) && a3_condition(e2, nu)) minimal = false;
            if (!minimal) continue;
            q.a3.emplace_back(eta, nu);
            if (!j.contains(x(eta) - x(nu))) q.a4.emplace_back(eta, nu);
        }
    }

    Ordinal j_size = model.j_size();
    auto alpha_of = [&](const IndexNode& eta) {
        Ordinal al = 0;
        while (model.contains(eta.extend({al}))) ++al;
        return al;
    };
    std::set<IndexNode> nodes = i1;
    for (const auto& eta : q.a1) {
        // branches and nodes at the horizon have no room for a child; a unique child changes nothing
        if (eta.is_branch() || eta.size() >= depth) continue;
        Ordinal al = alpha_of(eta);
        q.alpha.emplace_back(eta, al);
        j_size = std::max(j_size, al + 1);
        auto child = eta.extend({al});
        q.added.push_back(child);
        nodes.insert(child);
    }
    for (const auto& [eta, nu] : q.a4) {
        if (eta.is_branch() || eta.size() >= depth) continue;
        Ordinal al = alpha_of(eta) + 1;
        q.alpha.emplace_back(eta, al);
        j_size = std::max(j_size, al + 1);
        auto child = eta.extend({al});
        q.added.push_back(child);
        nodes.insert(child);
    }

    // the point where every generator is 0
    Element zero_point = ~x(IndexNode::root());
    if (zero_point.intersects(j.support)) {
        q.coroot_repair = true;
        IndexNode last;
        bool found = false;
        for (const auto& n : nodes)
            if (successors_in(nodes, n, depth).empty()) last = n, found = true;
        if (!found) throw PropertyViolation("nonempty index set without a terminal node");
        IndexNode cur = last;
        std::optional<IndexNode> branching;
        for (;;) {
            q.removed.push_back(cur);
            if (cur.is_root()) break;
            IndexNode up = parent_of(cur, depth);
            if (successors_in(nodes, up, depth).size() >= 2) {
                branching = up;
                break;
            }
            cur = up;
        }
        for (const auto& r : q.removed) nodes.erase(r);
        if (!branching) nodes.clear();
        else
            for (const auto& n : nodes)
                if (initial_segment(n, *branching)) q.joined_with_coroot.push_back(n);
    }
    if (!nodes.empty())
        q.index = IndexModel(model.profile(), j_size, std::vector<IndexNode>(nodes.begin(), nodes.end()));
    return q;
}

TrrVerification verify_trr_quotient(const IndexModel& model, const CanonicalAlgebra& a, const Ideal& j,
                                    const TrrQuotient& q) {
    TrrVerification v;
    auto quo = quotient(a, j);
    v.quotient_points = quo.algebra.num_points();
    if (q.degenerate) {
        v.detail = "improper ideal: the quotient is the one-element algebra, which no BA_trr presents";
        return v;
    }
    auto rebuilt = q.index ? realize(build_trr(*q.index)) : free_algebra(0);
    v.rebuilt_points = rebuilt.num_points();
    v.same_size = v.quotient_points == v.rebuilt_points;

    Element coroot = q.index ? eval(rebuilt, ~Term::x(IndexNode::root())) : rebuilt.one();
    std::set<IndexNode> removed(q.removed.begin(), q.removed.end());
    std::set<IndexNode> joined(q.joined_with_coroot.begin(), q.joined_with_coroot.end());
    std::vector<std::pair<Element, Element>> corr;
    for (const auto& eta : model.nodes()) {
        const Element& lhs = quo.algebra.denotation(GeneratorId::node(eta));
        Element rhs(rebuilt.num_points());
        if (removed.count(eta)) {
            rhs = coroot;
        } else if (q.index && q.index->contains(eta)) {
            rhs = rebuilt.denotation(GeneratorId::node(eta));
            if (joined.count(eta)) rhs |= coroot;
        }
        // nodes outside I_1 vanish in the quotient and map to 0
        corr.emplace_back(lhs, rhs);
    }
    auto sig = [&](bool left, std::size_t p) {
        std::vector<bool> s;
        for (const auto& [l, r] : corr) s.push_back(left ? l.test(p) : r.test(p));
        return s;
    };
    if (!v.same_size) {
        v.detail = "point counts differ: quotient " + std::to_string(v.quotient_points) + ", rebuilt " +
                   std::to_string(v.rebuilt_points);
        return v;
    }
    std::map<std::vector<bool>, std::vector<std::size_t>> pool;
    for (std::size_t p = 0; p < rebuilt.num_points(); ++p) pool[sig(false, p)].push_back(p);
    std::vector<std::size_t> dual(rebuilt.num_points(), Morphism::drop);
    for (std::size_t p = 0; p < quo.algebra.num_points(); ++p) {
        auto& bucket = pool[sig(true, p)];
        if (bucket.empty()) {
            v.detail = "no rebuilt point matches quotient point " + std::to_string(p);
            return v;
        }
        dual[bucket.back()] = p;
        bucket.pop_back();
    }
    v.iso = Morphism(quo.algebra.num_points(), rebuilt.num_points(), std::move(dual));
    v.isomorphic = v.iso->is_injective() && v.iso->is_surjective();
    if (!v.isomorphic) v.detail = "matching is not a bijection";
    return v;
}

BonnetResult bonnet_rigid(const CanonicalAlgebra& a, std::size_t max_points) {
    const std::size_t n = a.num_points();
    if (n > max_points || n > 20) throw BudgetExceeded("bonnet_rigid over " + std::to_string(n) + " points");
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s) subsets.push_back(s);
    std::stable_sort(subsets.begin(), subsets.end(),
                     [](std::uint32_t x, std::uint32_t y) { return std::popcount(x) > std::popcount(y); });
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    BonnetResult r;
    for (auto s : subsets) {
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < n; ++i)
            if (s >> i & 1) kept.push_back(i);
        // f1 is the quotient map onto a ↾ kept; f0 must be injective, i.e. its dual onto
        auto phi = find_surjection(kept, all, &kept);
        if (!phi) continue;
        r.rigid = false;
        r.witness = BonnetWitness{Element::of(n, kept), Morphism(n, kept.size(), *phi), Morphism(n, kept.size(), kept)};
        return r;
    }
    return r;
}

ObstructionReport rigidity_obstruction(const CanonicalAlgebra& a, std::size_t max_points) {
    const std::size_t n = a.num_points();
    if (n > max_points || n > 12) throw BudgetExceeded("rigidity_obstruction over " + std::to_string(n) + " points");
    ObstructionReport rep;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) combos *= 3;
    for (std::size_t code = 0; code < combos && rep.star_holds; ++code) {
        std::vector<std::size_t> in_a, in_b;
        for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) {
            if (c % 3 == 1) in_a.push_back(i);
            if (c % 3 == 2) in_b.push_back(i);
        }
        if (in_a.empty() || in_b.empty()) continue;
        ++rep.pairs_checked;
        for (std::uint32_t s = 1; s < (std::uint32_t{1} << in_b.size()); ++s) {
            std::vector<std::size_t> image;
            for (std::size_t k = 0; k < in_b.size(); ++k)
                if (s >> k & 1) image.push_back(in_b[k]);
            auto phi = find_surjection(image, in_a, nullptr);
            if (!phi) continue;
            // dual of (a ↾ in_a) ↪ (a ↾ image), in local point numbering
            std::vector<std::size_t> local(image.size());
            for (std::size_t k = 0; k < image.size(); ++k)
                local[k] = static_cast<std::size_t>(std::find(in_a.begin(), in_a.end(), (*phi)[k]) - in_a.begin());
            rep.star_holds = false;
            rep.witness = ObstructionWitness{Element::of(n, in_a), Element::of(n, in_b), Element::of(n, image),
                                             Morphism(in_a.size(), image.size(), std::move(local))};
            break;
        }
    }
    rep.bonnet_rigid = bonnet_rigid(a, max_points).rigid;
    rep.implication_holds = !rep.star_holds || rep.bonnet_rigid;
    return rep;
}

std::vector<Morphism> mono_endo_search(const CanonicalAlgebra& a, std::size_t max_points, std::size_t limit) {
    const std::size_t n = a.num_points();
    if (n > max_points) throw BudgetExceeded("mono_endo_search over " + std::to_string(n) + " points");
    std::vector<Morphism> out;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    // injective endomorphisms of a finite algebra have bijective duals
    while (std::next_permutation(perm.begin(), perm.end()) && out.size() < limit) out.emplace_back(n, n, perm);
    return out;
}

Disjointifier disjointifier(const CanonicalAlgebra& a, const Morphism& f) {
    const std::size_t n = a.num_points();
    if (f.source_points() != n || f.target_points() != n) throw PreconditionError("f is not an endomorphism of the algebra");
    if (!f.is_injective()) throw PreconditionError("f is not injective");
    if (f == Morphism::identity(n)) throw PreconditionError("f is the identity");
    std::optional<Element> x;
    for (std::size_t p = 0; p < n && !x; ++p) {
        auto atom = Element::singleton(n, p);
        if (f.apply(atom) != atom) x = atom;
    }
    if (!x) throw PropertyViolation("f fixes every atom but differs from the identity");
    Element d = *x - f.apply(*x);
    Element res = d.any() ? d : f.apply(*x) - *x;
    if (res.none() || res.intersects(f.apply(res)))
        throw PropertyViolation("disjointifier produced " + res.str() + ", which meets its image");
    return {*x, res};
}

}  // namespace fpba
