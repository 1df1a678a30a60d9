#include "fpba/combinators.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "fpba/errors.hpp"

namespace fpba {

Morphism::Morphism(std::size_t source_points, std::size_t target_points, std::vector<std::size_t> dual)
    : source_(source_points), dual_(std::move(dual)) {
    if (dual_.size() != target_points) throw PreconditionError("dual map must cover every target point");
    for (auto s : dual_)
        if (s != drop && s >= source_) throw PreconditionError("dual map points outside the source");
}

Morphism Morphism::identity(std::size_t points) {
    std::vector<std::size_t> d(points);
    for (std::size_t i = 0; i < points; ++i) d[i] = i;
    return Morphism(points, points, std::move(d));
}

Element Morphism::apply(const Element& a) const {
    if (a.universe() != source_) throw PreconditionError("element is not from the source algebra");
    Element out(dual_.size());
    for (std::size_t q = 0; q < dual_.size(); ++q)
        if (dual_[q] != drop && a.test(dual_[q])) out.set(q);
    return out;
}

bool Morphism::preserves_unit() const {
    return std::none_of(dual_.begin(), dual_.end(), [](std::size_t s) { return s == drop; });
}

bool Morphism::is_injective() const {
    std::vector<char> hit(source_, 0);
    for (auto s : dual_)
        if (s != drop) hit[s] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c; });
}

bool Morphism::is_surjective() const {
    if (!preserves_unit()) return false;
    std::vector<char> hit(source_, 0);
    for (auto s : dual_) {
        if (hit[s]) return false;
        hit[s] = 1;
    }
    return true;
}

Morphism Morphism::then(const Morphism& next) const {
    if (next.source_ != dual_.size()) throw PreconditionError("morphisms do not compose");
    std::vector<std::size_t> d(next.dual_.size(), drop);
    for (std::size_t q = 0; q < d.size(); ++q)
        if (next.dual_[q] != drop) d[q] = dual_[next.dual_[q]];
    const std::size_t target = d.size();
    return Morphism(source_, target, std::move(d));
}

std::string Morphism::str() const {
    std::string s = "[";
    for (std::size_t q = 0; q < dual_.size(); ++q) {
        if (q) s += ',';
        s += dual_[q] == drop ? std::string("-") : std::to_string(dual_[q]);
    }
    return s + "]";
}

Restriction restrict(const CanonicalAlgebra& a, const Element& to) {
    if (to.universe() != a.num_points()) throw PreconditionError("element is not from this algebra");
    if (to.none()) throw PreconditionError("cannot restrict to 0");
    auto pts = to.points();
    std::vector<Element> den;
    for (std::size_t g = 0; g < a.num_generators(); ++g) {
        Element e(pts.size());
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (a.value(pts[j], g)) e.set(j);
        den.push_back(std::move(e));
    }
    std::vector<GeneratorId> gens(a.generators().begin(), a.generators().end());
    CanonicalAlgebra r(std::move(gens), std::move(den), pts.size(), std::nullopt, "restrict(" + a.provenance() + ")");
    return {std::move(r), Morphism(a.num_points(), pts.size(), pts)};
}

namespace {

GeneratorId prefixed(const std::string& prefix, const GeneratorId& id) { return GeneratorId::named(prefix + id.str()); }

}  // namespace

ProductResult product(const CanonicalAlgebra& a, const CanonicalAlgebra& b) {
    const std::size_t na = a.num_points(), nb = b.num_points(), n = na + nb;
    std::vector<GeneratorId> gens;
    std::vector<Element> den;
    for (std::size_t g = 0; g < a.num_generators(); ++g) {
        gens.push_back(prefixed("L.", a.generators()[g]));
        Element e(n);
        for (auto p : a.denotation(g).points()) e.set(p);
        den.push_back(std::move(e));
    }
    for (std::size_t g = 0; g < b.num_generators(); ++g) {
        gens.push_back(prefixed("R.", b.generators()[g]));
        Element e(n);
        for (auto p : b.denotation(g).points()) e.set(na + p);
        den.push_back(std::move(e));
    }
    gens.push_back(GeneratorId::named("side"));
    Element side(n);
    for (std::size_t p = 0; p < na; ++p) side.set(p);
    den.push_back(side);

    std::vector<std::size_t> il(n, Morphism::drop), ir(n, Morphism::drop), pl(na), pr(nb);
    for (std::size_t p = 0; p < na; ++p) il[p] = p, pl[p] = p;
    for (std::size_t p = 0; p < nb; ++p) ir[na + p] = p, pr[p] = na + p;
    CanonicalAlgebra alg(std::move(gens), std::move(den), n, std::nullopt,
                         "product(" + a.provenance() + ", " + b.provenance() + ")");
    return {std::move(alg), Morphism(na, n, il), Morphism(nb, n, ir), Morphism(n, na, pl), Morphism(n, nb, pr)};
}

FreeProductResult free_product(const CanonicalAlgebra& a, const CanonicalAlgebra& b) {
    const std::size_t na = a.num_points(), nb = b.num_points(), n = na * nb;
    std::vector<GeneratorId> gens;
    std::vector<Element> den;
    std::vector<std::size_t> el(n), er(n);
    for (std::size_t p = 0; p < na; ++p)
        for (std::size_t q = 0; q < nb; ++q) el[p * nb + q] = p, er[p * nb + q] = q;
    for (std::size_t g = 0; g < a.num_generators(); ++g) {
        gens.push_back(prefixed("L.", a.generators()[g]));
        Element e(n);
        for (std::size_t i = 0; i < n; ++i)
            if (a.value(el[i], g)) e.set(i);
        den.push_back(std::move(e));
    }
    for (std::size_t g = 0; g < b.num_generators(); ++g) {
        gens.push_back(prefixed("R.", b.generators()[g]));
        Element e(n);
        for (std::size_t i = 0; i < n; ++i)
            if (b.value(er[i], g)) e.set(i);
        den.push_back(std::move(e));
    }
    CanonicalAlgebra alg(std::move(gens), std::move(den), n, std::nullopt,
                         "free_product(" + a.provenance() + ", " + b.provenance() + ")");
    return {std::move(alg), Morphism(na, n, el), Morphism(nb, n, er)};
}

SurgeryResult surgery(const CanonicalAlgebra& b1, const Element& a_star, const CanonicalAlgebra& b,
                      const std::string& prefix) {
    if (a_star.universe() != b1.num_points()) throw PreconditionError("a* is not an element of B1");
    if (a_star.none()) throw PreconditionError("surgery at 0");
    const auto outside = (~a_star).points();
    const auto inside = a_star.points();
    const std::size_t nb = b.num_points();
    const std::size_t n = outside.size() + inside.size() * nb;

    std::vector<std::size_t> dual;  // B2 point → B1 point
    std::vector<std::size_t> factor;  // B2 point → B point, drop on the left part
    for (auto p : outside) dual.push_back(p), factor.push_back(Morphism::drop);
    for (auto p : inside)
        for (std::size_t q = 0; q < nb; ++q) dual.push_back(p), factor.push_back(q);

    std::vector<GeneratorId> gens(b1.generators().begin(), b1.generators().end());
    std::vector<Element> den;
    for (std::size_t g = 0; g < b1.num_generators(); ++g) {
        Element e(n);
        for (std::size_t i = 0; i < n; ++i)
            if (b1.value(dual[i], g)) e.set(i);
        den.push_back(std::move(e));
    }
    for (std::size_t g = 0; g < b.num_generators(); ++g) {
        gens.push_back(prefixed(prefix, b.generators()[g]));
        Element e(n);
        for (std::size_t i = 0; i < n; ++i)
            if (factor[i] != Morphism::drop && b.value(factor[i], g)) e.set(i);
        den.push_back(std::move(e));
    }
    CanonicalAlgebra alg(std::move(gens), std::move(den), n, std::nullopt,
                         "surgery(" + b1.provenance() + ", " + a_star.str() + ", " + b.provenance() + ")");
    return {std::move(alg), Morphism(b1.num_points(), n, std::move(dual))};
}

Presentation surgery_presentation(const CanonicalAlgebra& b1, const Element& a_star, const CanonicalAlgebra& b) {
    if (a_star.none()) throw PreconditionError("surgery at 0");
    std::vector<GeneratorId> gens;
    std::vector<Term> rels;
    std::vector<Term> left, right, below;
    for (std::size_t k = 0; k < b1.num_points(); ++k) {
        gens.push_back(GeneratorId::atom(k));
        left.push_back(Term::atom(k));
        if (a_star.test(k)) below.push_back(Term::atom(k));
    }
    for (std::size_t k = 0; k < b.num_points(); ++k) {
        gens.push_back(GeneratorId::named("b.atom:" + std::to_string(k)));
        right.push_back(Term::gen(gens.back()));
    }
    auto partition = [&](const std::vector<Term>& parts) {
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (std::size_t j = i + 1; j < parts.size(); ++j) rels.push_back(parts[i] & parts[j]);
    };
    partition(left);
    rels.push_back(~Term::join(left));
    partition(right);
    // 1_B = a*
    auto top_b = Term::join(right);
    auto a = Term::join(below);
    rels.push_back(minus(top_b, a));
    rels.push_back(minus(a, top_b));
    return Presentation(std::move(gens), std::move(rels), BuilderTag::Raw, "surgery");
}

Selector Selector::parse(std::string_view text) {
    Selector s;
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("selector needs a ':'");
    auto kind = text.substr(0, colon);
    auto body = std::string(text.substr(colon + 1));
    try {
        if (kind == "atom") {
            s.kind = Kind::Atom;
            s.index = std::stoul(body);
        } else if (kind == "complement-of-stage") {
            s.kind = Kind::ComplementOfStage;
            s.index = std::stoul(body);
        } else if (kind == "elem") {
            s.kind = Kind::Elem;
            if (body.size() < 2 || body.front() != '{' || body.back() != '}')
                throw ParseError("elem selector must look like elem:{0,2}");
            std::stringstream ss(body.substr(1, body.size() - 2));
            std::string part;
            while (std::getline(ss, part, ','))
                if (!part.empty()) s.points.push_back(std::stoul(part));
        } else {
            throw ParseError("unknown selector '" + std::string(kind) + "'");
        }
    } catch (const std::invalid_argument&) {
        throw ParseError("bad selector '" + std::string(text) + "'");
    } catch (const std::out_of_range&) {
        throw ParseError("bad selector '" + std::string(text) + "'");
    }
    return s;
}

std::string Selector::str() const {
    switch (kind) {
        case Kind::Atom: return "atom:" + std::to_string(index);
        case Kind::ComplementOfStage: return "complement-of-stage:" + std::to_string(index);
        case Kind::Elem: {
            std::string s = "elem:{";
            for (std::size_t i = 0; i < points.size(); ++i) s += (i ? "," : "") + std::to_string(points[i]);
            return s + "}";
        }
    }
    return {};
}

ScheduleResult sur_schedule(const CanonicalAlgebra& b0, std::span<const ScheduleStep> schedule,
                            const RealizeOptions& opts) {
    ScheduleResult out;
    out.stages.push_back(b0);
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const auto& step = schedule[i];
        const auto& cur = out.stages.back();
        const std::size_t n = cur.num_points();
        Element a_star(n);
        switch (step.selector.kind) {
            case Selector::Kind::Atom:
                if (step.selector.index < n) a_star.set(step.selector.index);
                break;
            case Selector::Kind::Elem:
                for (auto p : step.selector.points) {
                    if (p >= n) throw PreconditionError("step " + std::to_string(i) + ": point " + std::to_string(p) +
                                                        " outside stage with " + std::to_string(n) + " points");
                    a_star.set(p);
                }
                break;
            case Selector::Kind::ComplementOfStage: {
                std::size_t s = step.selector.index;
                if (s >= i) throw PreconditionError("step " + std::to_string(i) + " refers to a later surgery");
                Element img = out.surgery_points[s];
                for (std::size_t k = s; k < i; ++k) img = out.embeddings[k].apply(img);
                a_star = ~img;
                break;
            }
        }
        if (a_star.none())
            throw PreconditionError("step " + std::to_string(i) + ": selector " + step.selector.str() + " resolves to 0");
        auto b = realize(build(step.builder, step.model), opts);
        auto res = surgery(cur, a_star, b, "s" + std::to_string(i) + ".");
        out.surgery_points.push_back(a_star);
        out.factor_points.push_back(b.num_points());
        out.embeddings.push_back(res.embedding);
        out.stages.push_back(std::move(res.algebra));
    }
    return out;
}

std::vector<ScheduleStep> parse_schedule(std::string_view text, const std::filesystem::path& base_dir) {
    std::vector<ScheduleStep> steps;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::vector<std::string> f;
        for (std::string w; ls >> w;) f.push_back(w);
        if (f.empty()) continue;
        try {
            if (f.size() < 3) throw ParseError("expected '<model> <selector> <tag> [key=value …]'");
            auto path = std::filesystem::path(f[0]);
            if (path.is_relative()) path = base_dir / path;
            BuilderSpec spec;
            spec.tag = parse_tag(f[2]);
            auto model = IndexModel::load(path);
            std::size_t base_atoms = 0;
            std::string abar_text;
            for (std::size_t k = 3; k < f.size(); ++k) {
                auto eq = f[k].find('=');
                if (eq == std::string::npos) throw ParseError("option without '=': " + f[k]);
                auto key = f[k].substr(0, eq), val = f[k].substr(eq + 1);
                if (key == "g") {
                    std::stringstream ss(val);
                    for (std::string p; std::getline(ss, p, ',');) spec.g.push_back(static_cast<unsigned>(std::stoul(p)));
                } else if (key == "e") {
                    spec.e = EquivProfile::parse(val, model.profile());
                } else if (key == "base") {
                    base_atoms = std::stoul(val);
                } else if (key == "abar") {
                    abar_text = val;
                } else {
                    throw ParseError("unknown option '" + key + "'");
                }
            }
            if (spec.tag == BuilderTag::Ba) {
                if (!base_atoms) throw ParseError("ba needs base=<atoms>");
                spec.base = std::make_shared<CanonicalAlgebra>(atoms_algebra(base_atoms));
                std::stringstream ss(abar_text);
                for (std::string p; std::getline(ss, p, ';');)
                    if (!p.empty()) spec.abar.push_back(Element::parse(base_atoms, p));
            }
            steps.push_back({std::move(model), Selector::parse(f[1]), std::move(spec)});
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad number", lineno);
        }
    }
    return steps;
}

bool is_regular_sub(const Morphism& m, std::size_t max_source_points) {
    if (!m.is_injective()) throw PreconditionError("is_regular_sub needs an injective morphism");
    const std::size_t n = m.source_points();
    if (n > max_source_points)
        throw BudgetExceeded("antichain enumeration over " + std::to_string(n) + " atoms, budget " +
                             std::to_string(max_source_points));
    if (n == 0) return true;
    // maximal antichains of a finite algebra are exactly its partitions of 1
    std::vector<std::size_t> block(n, 0);
    for (;;) {
        std::size_t blocks = *std::max_element(block.begin(), block.end()) + 1;
        std::vector<Element> parts(blocks, Element(n));
        for (std::size_t p = 0; p < n; ++p) parts[block[p]].set(p);
        Element covered(m.target_points());
        for (const auto& part : parts) covered |= m.apply(part);
        // a nonzero target element disjoint from every image would extend the antichain
        if ((~covered).any()) return false;
        // next restricted growth string
        std::size_t i = n;
        bool advanced = false;
        while (i-- > 1) {
            std::size_t mx = *std::max_element(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(i));
            if (block[i] <= mx) {
                ++block[i];
                std::fill(block.begin() + static_cast<std::ptrdiff_t>(i) + 1, block.end(), 0);
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    return true;
}

Element project_upper(const Morphism& m, const Element& c) {
    if (c.universe() != m.target_points()) throw PreconditionError("element is not from the target algebra");
    if (c.none()) throw PreconditionError("project_upper of 0");
    Element d(m.source_points());
    for (auto q : c.points()) {
        if (m.dual()[q] == Morphism::drop) throw PreconditionError("element is not below any image");
        d.set(m.dual()[q]);
    }
    return d;
}

Extension build_ba_ext(const CanonicalAlgebra& base, std::span<const Element> abar, const IndexModel& model,
                       const RealizeOptions& opts) {
    auto alg = realize(build_ba(base, abar, model), opts);
    std::vector<std::size_t> dual(alg.num_points(), Morphism::drop);
    for (std::size_t q = 0; q < alg.num_points(); ++q)
        for (std::size_t k = 0; k < base.num_points(); ++k)
            if (alg.value(q, *alg.generator_index(GeneratorId::atom(k)))) dual[q] = k;
    Morphism emb(base.num_points(), alg.num_points(), std::move(dual));
    if (!emb.preserves_unit() || !emb.is_injective())
        throw PropertyViolation("the base algebra does not embed into ba[B*, a, I] (provenance " + alg.provenance() + ")");
    return {std::move(alg), std::move(emb)};
}

bool subset_star(const IndexModel& smaller, const IndexModel& larger) {
    if (!(smaller.profile() == larger.profile())) throw PreconditionError("subset_star: profile mismatch");
    for (const auto& n : smaller.nodes())
        if (!larger.contains(n)) return false;
    for (const auto& eta : larger.nodes()) {
        if (!eta.is_branch() || smaller.contains(eta)) continue;
        bool escapes = false;
        for (std::size_t n = 0; n < larger.depth() && !escapes; ++n)
            for (std::size_t l = 0; l < larger.profile().arity(n); ++l)
                if (!smaller.contains(res(larger.profile(), eta, n, l))) {
                    escapes = true;
                    break;
                }
        if (!escapes) return false;
    }
    return true;
}

Morphism generator_inclusion(const CanonicalAlgebra& small, const CanonicalAlgebra& big) {
    std::vector<std::size_t> gi;
    for (const auto& g : small.generators()) {
        auto i = big.generator_index(g);
        if (!i) throw PreconditionError("generator " + g.str() + " missing in the larger algebra");
        gi.push_back(*i);
    }
    std::map<std::vector<bool>, std::size_t> small_points;
    for (std::size_t p = 0; p < small.num_points(); ++p) {
        std::vector<bool> row(small.num_generators());
        for (std::size_t g = 0; g < row.size(); ++g) row[g] = small.value(p, g);
        small_points.emplace(std::move(row), p);
    }
    std::vector<std::size_t> dual(big.num_points());
    for (std::size_t q = 0; q < big.num_points(); ++q) {
        std::vector<bool> row(gi.size());
        for (std::size_t g = 0; g < gi.size(); ++g) row[g] = big.value(q, gi[g]);
        auto it = small_points.find(row);
        if (it == small_points.end())
            throw PropertyViolation("point " + std::to_string(q) + " of the larger algebra violates the smaller presentation");
        dual[q] = it->second;
    }
    return Morphism(small.num_points(), big.num_points(), std::move(dual));
}

}  // namespace fpba
