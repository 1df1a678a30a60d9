#include "fpba/presentation.hpp"

#include <algorithm>
#include <sstream>

#include "fpba/algebra.hpp"
#include "fpba/errors.hpp"

namespace fpba {

namespace {

struct Relations {
    std::vector<Term> out;
    void zero(Term t) { out.push_back(std::move(t)); }
    void leq(Term a, Term b) { out.push_back(minus(std::move(a), std::move(b))); }
    void eq(const Term& a, const Term& b) {
        leq(a, b);
        leq(b, a);
    }
};

std::vector<GeneratorId> node_generators(const IndexModel& model) {
    std::vector<GeneratorId> g;
    for (const auto& n : model.nodes()) g.push_back(GeneratorId::node(n));
    return g;
}

Term x_res(const IndexModel& model, const IndexNode& n, std::size_t level, std::size_t m) {
    return Term::x(res(model.profile(), n, level, m));
}

void require_constant(const IndexModel& model, unsigned k, const char* builder) {
    if (!model.profile().is_constant(k))
        throw PreconditionError(std::string(builder) + " needs h = " + std::to_string(k) + " at every level, got h=" +
                                model.profile().str());
}

std::string join_unsigned(std::span<const unsigned> v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

}  // namespace

std::string tag_name(BuilderTag tag) {
    switch (tag) {
        case BuilderTag::Raw: return "raw";
        case BuilderTag::Free: return "free";
        case BuilderTag::Tr: return "tr";
        case BuilderTag::Ptr: return "ptr";
        case BuilderTag::TrH: return "trh";
        case BuilderTag::Trr: return "trr";
        case BuilderTag::TrHG: return "trhg";
        case BuilderTag::TrHE: return "trhe";
        case BuilderTag::Ba: return "ba";
    }
    return "raw";
}

BuilderTag parse_tag(std::string_view name) {
    for (auto t : {BuilderTag::Raw, BuilderTag::Free, BuilderTag::Tr, BuilderTag::Ptr, BuilderTag::TrH, BuilderTag::Trr,
                   BuilderTag::TrHG, BuilderTag::TrHE, BuilderTag::Ba})
        if (tag_name(t) == name) return t;
    throw ParseError("unknown builder tag '" + std::string(name) + "'");
}

Presentation::Presentation(std::vector<GeneratorId> generators, std::vector<Term> relations, BuilderTag tag,
                           std::string params, std::optional<IndexModel> model)
    : generators_(std::move(generators)),
      relations_(std::move(relations)),
      tag_(tag),
      params_(std::move(params)),
      model_(std::move(model)) {
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (!index_.emplace(generators_[i], i).second)
            throw PreconditionError("duplicate generator " + generators_[i].str());
    for (const auto& r : relations_) {
        std::set<GeneratorId> used;
        r.collect_generators(used);
        for (const auto& g : used)
            if (!index_.count(g)) throw PreconditionError("relation uses unknown generator " + g.str());
    }
}

std::optional<std::size_t> Presentation::index_of(const GeneratorId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string Presentation::dump() const {
    std::string s = "# builder " + tag_name(tag_);
    if (!params_.empty()) s += " " + params_;
    s += "\n";
    for (const auto& g : generators_) s += "gen " + g.str() + "\n";
    for (const auto& r : relations_) s += "rel " + r.str() + "\n";
    return s;
}

Presentation Presentation::parse(std::string_view text) {
    std::vector<GeneratorId> gens;
    std::vector<Term> rels;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        try {
            if (line.rfind("gen ", 0) == 0)
                gens.push_back(GeneratorId::parse(line.substr(4)));
            else if (line.rfind("rel ", 0) == 0)
                rels.push_back(Term::parse(line.substr(4)));
            else
                throw ParseError("expected 'gen' or 'rel'");
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        } catch (const PreconditionError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return Presentation(std::move(gens), std::move(rels));
}

EquivProfile EquivProfile::e0(const ArityProfile& profile) {
    EquivProfile e;
    for (unsigned n = 0; n < profile.depth(); ++n) {
        std::vector<Pair> level;
        for (unsigned l = 0; l < profile.arity(n); ++l)
            for (unsigned k = 0; k < profile.arity(n); ++k) level.push_back({{l}, {k}});
        e.levels.push_back(std::move(level));
    }
    return e;
}

EquivProfile EquivProfile::e1(const ArityProfile& profile) {
    EquivProfile e;
    for (unsigned n = 0; n < profile.depth(); ++n) {
        Pair p;
        for (unsigned l = 0; l + 1 < profile.arity(n); ++l) p.u1.push_back(l);
        for (unsigned l = 1; l < profile.arity(n); ++l) p.u2.push_back(l);
        e.levels.push_back({p});
    }
    return e;
}

EquivProfile EquivProfile::e2(const ArityProfile& profile) {
    EquivProfile e;
    for (unsigned n = 0; n < profile.depth(); ++n) {
        unsigned half = profile.arity(n) / 2;
        Pair p;
        for (unsigned l = 0; l < half; ++l) p.u1.push_back(l);
        for (unsigned l = half; l < 2 * half; ++l) p.u2.push_back(l);
        e.levels.push_back({p});
    }
    return e;
}

EquivProfile EquivProfile::parse(std::string_view text, const ArityProfile& profile) {
    if (text == "e0") return e0(profile);
    if (text == "e1") return e1(profile);
    if (text == "e2") return e2(profile);
    auto subset = [](std::string_view s) {
        std::vector<unsigned> v;
        std::size_t start = 0;
        while (start < s.size()) {
            auto end = s.find(',', start);
            if (end == std::string_view::npos) end = s.size();
            v.push_back(static_cast<unsigned>(std::stoul(std::string(s.substr(start, end - start)))));
            start = end + 1;
        }
        return v;
    };
    EquivProfile e;
    std::size_t start = 0;
    try {
        while (start <= text.size()) {
            auto end = text.find(';', start);
            if (end == std::string_view::npos) end = text.size();
            auto level = text.substr(start, end - start);
            auto bar = level.find('|');
            if (bar == std::string_view::npos) throw ParseError("equivalence level needs 'u1|u2'");
            e.levels.push_back({{subset(level.substr(0, bar)), subset(level.substr(bar + 1))}});
            start = end + 1;
        }
    } catch (const std::invalid_argument&) {
        throw ParseError("bad equivalence profile '" + std::string(text) + "'");
    }
    return e;
}

std::string EquivProfile::str() const {
    std::string s;
    for (std::size_t n = 0; n < levels.size(); ++n) {
        if (n) s += ';';
        for (std::size_t i = 0; i < levels[n].size(); ++i) {
            if (i) s += '+';
            s += join_unsigned(levels[n][i].u1) + "|" + join_unsigned(levels[n][i].u2);
        }
    }
    return s;
}

Presentation free_presentation(std::size_t n) {
    std::vector<GeneratorId> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back(GeneratorId::named(std::to_string(i)));
    return Presentation(std::move(g), {}, BuilderTag::Free, "n=" + std::to_string(n));
}

Presentation atom_partition(std::size_t n) {
    std::vector<GeneratorId> g;
    Relations r;
    std::vector<Term> all;
    for (std::size_t i = 0; i < n; ++i) {
        g.push_back(GeneratorId::atom(i));
        all.push_back(Term::atom(i));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) r.zero(Term::atom(i) & Term::atom(j));
    r.zero(~Term::join(all));
    return Presentation(std::move(g), std::move(r.out), BuilderTag::Raw, "atoms=" + std::to_string(n));
}

Presentation build_tr(const IndexModel& model) {
    require_constant(model, 1, "build_tr");
    Relations r;
    for (const auto& nu : model.nodes()) {
        if (!nu.is_branch()) continue;
        for (const auto& eta : model.nodes())
            if (proper_initial_segment(eta, nu)) r.leq(Term::x(nu), Term::x(eta));
    }
    return Presentation(node_generators(model), std::move(r.out), BuilderTag::Tr, {}, model);
}

Presentation build_ptr(const IndexModel& model) {
    require_constant(model, 2, "build_ptr");
    Relations r;
    for (const auto& eta : model.nodes()) {
        if (!eta.is_branch()) continue;
        for (std::size_t n = 0; n < model.depth(); ++n) {
            r.leq(Term::x(eta), x_res(model, eta, n, 0));
            r.zero(Term::x(eta) & x_res(model, eta, n, 1));
        }
    }
    return Presentation(node_generators(model), std::move(r.out), BuilderTag::Ptr, {}, model);
}

Presentation build_tr_h(const IndexModel& model) {
    Relations r;
    for (const auto& eta : model.nodes()) {
        if (!eta.is_branch()) continue;
        for (std::size_t n = 0; n < model.depth(); ++n) {
            r.leq(Term::x(eta), x_res(model, eta, n, 0));
            unsigned h = model.profile().arity(n);
            if (h == 1) continue;  // the second clause is trivial here
            std::vector<Term> rest{Term::x(eta)};
            for (std::size_t l = 1; l < h; ++l) rest.push_back(x_res(model, eta, n, l));
            r.zero(Term::meet(std::move(rest)));
        }
    }
    return Presentation(node_generators(model), std::move(r.out), BuilderTag::TrH, {}, model);
}

Presentation build_tr_h_g(const IndexModel& model, std::span<const unsigned> g) {
    const auto& prof = model.profile();
    if (g.size() != prof.depth())
        throw PreconditionError("g must have one entry per level (" + std::to_string(prof.depth()) + ")");
    for (std::size_t n = 0; n < g.size(); ++n)
        if (g[n] > prof.arity(n))
            throw PreconditionError("g(" + std::to_string(n) + ")=" + std::to_string(g[n]) + " exceeds h(" +
                                    std::to_string(n) + ")=" + std::to_string(prof.arity(n)));
    Relations r;
    for (const auto& eta : model.nodes()) {
        if (!eta.is_branch()) continue;
        for (std::size_t l = 0; l < prof.depth(); ++l) {
            std::vector<Term> low;
            for (std::size_t m = 0; m < g[l]; ++m) low.push_back(x_res(model, eta, l, m));
            r.leq(Term::x(eta), Term::join(std::move(low)));
            if (g[l] + 1 < prof.arity(l)) {
                std::vector<Term> high{Term::x(eta)};
                for (std::size_t m = g[l]; m < prof.arity(l); ++m) high.push_back(x_res(model, eta, l, m));
                r.zero(Term::meet(std::move(high)));
            }
        }
    }
    return Presentation(node_generators(model), std::move(r.out), BuilderTag::TrHG, "g=" + join_unsigned(g), model);
}

Presentation build_tr_h_e(const IndexModel& model, const EquivProfile& e) {
    const auto& prof = model.profile();
    if (e.levels.size() != prof.depth()) throw PreconditionError("equivalence profile needs one entry per level");
    for (std::size_t n = 0; n < e.levels.size(); ++n) {
        const auto& lv = e.levels[n];
        std::string at = " at level " + std::to_string(n);
        if (lv.size() != 1) throw PreconditionError("equivalence profile must have exactly one pair" + at);
        const auto& p = lv.front();
        if (p.u1.size() == 1 && p.u2.size() == 1) throw PreconditionError("u1 and u2 are both singletons" + at);
        if (p.u1.size() != p.u2.size()) throw PreconditionError("u1 and u2 differ in size" + at);
        for (auto v : p.u1)
            if (v >= prof.arity(n)) throw PreconditionError("u1 index out of range" + at);
        for (auto v : p.u2)
            if (v >= prof.arity(n)) throw PreconditionError("u2 index out of range" + at);
    }
    Relations r;
    for (const auto& eta : model.nodes()) {
        if (!eta.is_branch()) continue;
        for (std::size_t n = 0; n < prof.depth(); ++n) {
            const auto& p = e.levels[n].front();
            std::vector<Term> up, down;
            for (auto l : p.u1) up.push_back(x_res(model, eta, n, l));
            for (auto l : p.u2) down.push_back(x_res(model, eta, n, l));
            r.leq(Term::x(eta), Term::join(std::move(up)));
            r.zero(Term::x(eta) & Term::join(std::move(down)));
        }
    }
    return Presentation(node_generators(model), std::move(r.out), BuilderTag::TrHE, "e=" + e.str(), model);
}

std::vector<IndexNode> trr_successors(const IndexModel& model, const IndexNode& node) {
    std::vector<IndexNode> out;
    if (node.is_branch()) return out;
    for (const auto& s : model.nodes()) {
        if (s.is_branch()) {
            if (node.size() == model.depth() && s.entries() == node.entries()) out.push_back(s);
        } else if (s.size() == node.size() + 1 && initial_segment(node, s)) {
            out.push_back(s);
        }
    }
    return out;
}

Presentation build_trr(const IndexModel& model) {
    require_constant(model, 1, "build_trr");
    Relations r;
    std::map<IndexNode, std::size_t> succ_count;
    for (const auto& n : model.nodes()) succ_count[n] = trr_successors(model, n).size();
    for (const auto& eta : model.nodes()) {
        auto succ = trr_successors(model, eta);
        // (a) siblings are disjoint
        for (std::size_t i = 0; i < succ.size(); ++i)
            for (std::size_t j = i + 1; j < succ.size(); ++j) r.zero(Term::x(succ[i]) & Term::x(succ[j]));
        // (b) below every initial segment
        for (const auto& nu : model.nodes())
            if (proper_initial_segment(nu, eta)) r.leq(Term::x(eta), Term::x(nu));
        // (c) a finite cover with at least two pieces
        if (succ.size() >= 2) {
            std::vector<Term> parts;
            for (const auto& s : succ) parts.push_back(Term::x(s));
            r.eq(Term::x(eta), Term::join(std::move(parts)));
        }
        // (d) unique-successor intervals collapse
        for (const auto& nu : model.nodes()) {
            if (!proper_initial_segment(eta, nu)) continue;
            bool unique = true;
            for (const auto& rho : model.nodes())
                if (initial_segment(eta, rho) && proper_initial_segment(rho, nu) && succ_count[rho] != 1) unique = false;
            if (unique) r.eq(Term::x(eta), Term::x(nu));
        }
    }
    return Presentation(node_generators(model), std::move(r.out), BuilderTag::Trr, {}, model);
}

Presentation build_ba(const CanonicalAlgebra& base, std::span<const Element> abar, const IndexModel& model) {
    const std::size_t atoms = base.num_points();
    if (abar.size() > model.depth())
        throw PreconditionError("the sequence of base elements is longer than the depth of the model");
    for (std::size_t n = 0; n < abar.size(); ++n) {
        if (abar[n].universe() != atoms) throw PreconditionError("base element is not from the base algebra");
        if (abar[n].none()) throw PreconditionError("base element a_" + std::to_string(n) + " is 0");
        for (std::size_t m = 0; m < n; ++m)
            if (abar[n].intersects(abar[m]))
                throw PreconditionError("base elements a_" + std::to_string(m) + " and a_" + std::to_string(n) +
                                        " are not disjoint");
    }
    std::vector<GeneratorId> gens;
    for (std::size_t k = 0; k < atoms; ++k) gens.push_back(GeneratorId::atom(k));
    for (const auto& n : model.nodes()) gens.push_back(GeneratorId::node(n));

    Relations r;
    std::vector<Term> all;
    for (std::size_t i = 0; i < atoms; ++i) {
        all.push_back(Term::atom(i));
        for (std::size_t j = i + 1; j < atoms; ++j) r.zero(Term::atom(i) & Term::atom(j));
    }
    r.zero(~Term::join(std::move(all)));
    // x_η ≤ 1 holds in every Boolean algebra, nothing to add

    auto a_term = [&](std::size_t n) {
        std::vector<Term> parts;
        for (auto k : abar[n].points()) parts.push_back(Term::atom(k));
        return Term::join(std::move(parts));
    };
    for (const auto& eta : model.nodes()) {
        if (!eta.is_branch()) continue;
        for (std::size_t n = 0; n < abar.size(); ++n) {
            std::vector<Term> diffs;
            for (std::size_t l = 0; l < model.profile().arity(n) / 2; ++l)
                diffs.push_back(minus(x_res(model, eta, n, 2 * l), x_res(model, eta, n, 2 * l + 1)));
            if (n % 2 == 0) {
                r.leq(minus(a_term(n), Term::join(diffs)), Term::x(eta));
            } else {
                std::vector<Term> parts{a_term(n)};
                for (auto& d : diffs) parts.push_back(~d);
                parts.push_back(Term::x(eta));
                r.zero(Term::meet(std::move(parts)));
            }
        }
    }
    r.zero(Term::x(IndexNode::root()));
    std::string params = "base=" + std::to_string(atoms) + " abar=";
    for (std::size_t n = 0; n < abar.size(); ++n) params += (n ? ";" : "") + abar[n].str();
    return Presentation(std::move(gens), std::move(r.out), BuilderTag::Ba, params, model);
}

Presentation build(const BuilderSpec& spec, const IndexModel& model) {
    switch (spec.tag) {
        case BuilderTag::Tr: return build_tr(model);
        case BuilderTag::Ptr: return build_ptr(model);
        case BuilderTag::TrH: return build_tr_h(model);
        case BuilderTag::Trr: return build_trr(model);
        case BuilderTag::TrHG: return build_tr_h_g(model, spec.g);
        case BuilderTag::TrHE:
            if (!spec.e) throw PreconditionError("trhe needs an equivalence profile");
            return build_tr_h_e(model, *spec.e);
        case BuilderTag::Ba:
            if (!spec.base) throw PreconditionError("ba needs a base algebra");
            return build_ba(*spec.base, spec.abar, model);
        default: break;
    }
    throw PreconditionError("builder '" + tag_name(spec.tag) + "' does not take an index model");
}

}  // namespace fpba
