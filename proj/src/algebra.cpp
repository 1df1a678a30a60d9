#include "fpba/algebra.hpp"

#include <algorithm>
#include <set>

#include "fpba/errors.hpp"

namespace fpba {

CanonicalAlgebra::CanonicalAlgebra(std::vector<GeneratorId> generators, std::vector<Element> denotations,
                                   std::size_t points, std::optional<Presentation> presentation,
                                   std::string provenance)
    : generators_(std::move(generators)),
      denotations_(std::move(denotations)),
      points_(points),
      presentation_(std::move(presentation)),
      provenance_(std::move(provenance)) {
    if (generators_.size() != denotations_.size()) throw PreconditionError("one denotation per generator expected");
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        if (denotations_[i].universe() != points_) throw PreconditionError("denotation over the wrong point set");
        if (!index_.emplace(generators_[i], i).second)
            throw PreconditionError("duplicate generator " + generators_[i].str());
    }
    if (generators_.size() <= 64 && points_) {
        masks_.assign(points_, 0);
        for (std::size_t g = 0; g < generators_.size(); ++g)
            for (auto p : denotations_[g].points()) masks_[p] |= std::uint64_t{1} << g;
    }
}

const Element& CanonicalAlgebra::denotation(const GeneratorId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw PreconditionError("unresolved generator " + id.str());
    return denotations_[it->second];
}

std::optional<std::size_t> CanonicalAlgebra::generator_index(const GeneratorId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool CanonicalAlgebra::separates_points() const {
    std::set<std::vector<bool>> seen;
    for (std::size_t p = 0; p < points_; ++p) {
        std::vector<bool> row(generators_.size());
        for (std::size_t g = 0; g < generators_.size(); ++g) row[g] = denotations_[g].test(p);
        if (!seen.insert(std::move(row)).second) return false;
    }
    return true;
}

namespace {

// Relation terms flattened for three-valued evaluation during search.
struct Flat {
    struct Node {
        Term::Op op;
        int gen = -1;
        std::vector<int> kids;
    };
    std::vector<Node> nodes;
    std::vector<int> gens;

    int add(const Term& t, const Presentation& p) {
        Node n{t.op(), -1, {}};
        if (t.op() == Term::Op::Gen) n.gen = static_cast<int>(*p.index_of(t.generator()));
        for (const auto& k : t.children()) n.kids.push_back(add(k, p));
        nodes.push_back(std::move(n));
        return static_cast<int>(nodes.size()) - 1;
    }
};

constexpr signed char kUnknown = 2;

signed char eval3(const Flat& f, int i, const std::vector<signed char>& val) {
    const auto& n = f.nodes[i];
    switch (n.op) {
        case Term::Op::Zero: return 0;
        case Term::Op::One: return 1;
        case Term::Op::Gen: return val[n.gen];
        case Term::Op::Not: {
            auto v = eval3(f, n.kids[0], val);
            return v == kUnknown ? kUnknown : static_cast<signed char>(1 - v);
        }
        case Term::Op::And: {
            signed char r = 1;
            for (int k : n.kids) {
                auto v = eval3(f, k, val);
                if (v == 0) return 0;
                if (v == kUnknown) r = kUnknown;
            }
            return r;
        }
        case Term::Op::Or: {
            signed char r = 0;
            for (int k : n.kids) {
                auto v = eval3(f, k, val);
                if (v == 1) return 1;
                if (v == kUnknown) r = kUnknown;
            }
            return r;
        }
    }
    return kUnknown;
}

Element eval_rec(const CanonicalAlgebra& a, const Term& t) {
    switch (t.op()) {
        case Term::Op::Zero: return a.zero();
        case Term::Op::One: return a.one();
        case Term::Op::Gen: return a.denotation(t.generator());
        case Term::Op::Not: return ~eval_rec(a, t.children()[0]);
        case Term::Op::And: {
            Element e = a.one();
            for (const auto& k : t.children()) e &= eval_rec(a, k);
            return e;
        }
        case Term::Op::Or: {
            Element e = a.zero();
            for (const auto& k : t.children()) e |= eval_rec(a, k);
            return e;
        }
    }
    return a.zero();
}

void require_nodes(const IndexModel& model, std::span<const IndexNode> nodes) {
    for (const auto& n : nodes)
        if (!model.contains(n)) throw PreconditionError("node " + n.str() + " is not in the model");
}

}  // namespace

CanonicalAlgebra realize(const Presentation& p, const RealizeOptions& opts) {
    const std::size_t n = p.generators().size();
    if (n > opts.max_generators || n > 64)
        throw BudgetExceeded("presentation has " + std::to_string(n) + " generators, budget is " +
                             std::to_string(std::min<std::size_t>(opts.max_generators, 64)));

    std::vector<Flat> rels;
    std::vector<signed char> val(n, kUnknown);
    bool inconsistent = false;
    for (const auto& r : p.relations()) {
        Flat f;
        f.add(r, p);
        std::set<int> g;
        for (const auto& node : f.nodes)
            if (node.gen >= 0) g.insert(node.gen);
        f.gens.assign(g.begin(), g.end());
        if (f.gens.empty()) {
            if (eval3(f, static_cast<int>(f.nodes.size()) - 1, val) == 1) inconsistent = true;
            continue;
        }
        rels.push_back(std::move(f));
    }

    std::vector<std::vector<int>> rels_of(n);
    std::vector<std::size_t> shortest(n, SIZE_MAX), uses(n, 0);
    for (std::size_t r = 0; r < rels.size(); ++r)
        for (int g : rels[r].gens) {
            rels_of[g].push_back(static_cast<int>(r));
            shortest[g] = std::min(shortest[g], rels[r].gens.size());
            ++uses[g];
        }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (shortest[a] != shortest[b]) return shortest[a] < shortest[b];
        return uses[a] > uses[b];
    });

    std::vector<std::uint64_t> found;
    if (!inconsistent) {
        auto dfs = [&](auto&& self, std::size_t depth, std::uint64_t mask) -> void {
            if (depth == n) {
                if (found.size() >= opts.max_points)
                    throw BudgetExceeded("more than " + std::to_string(opts.max_points) + " points");
                found.push_back(mask);
                return;
            }
            std::size_t g = order[depth];
            for (signed char v = 0; v <= 1; ++v) {
                val[g] = v;
                bool ok = true;
                for (int r : rels_of[g]) {
                    const auto& f = rels[r];
                    if (eval3(f, static_cast<int>(f.nodes.size()) - 1, val) == 1) {
                        ok = false;
                        break;
                    }
                }
                if (ok) self(self, depth + 1, v ? mask | (std::uint64_t{1} << g) : mask);
            }
            val[g] = kUnknown;
        };
        dfs(dfs, 0, 0);
    }

    // lexicographic in generator order, generator 0 most significant
    auto key = [n](std::uint64_t m) {
        std::uint64_t k = 0;
        for (std::size_t g = 0; g < n; ++g)
            if (m >> g & 1) k |= std::uint64_t{1} << (n - 1 - g);
        return k;
    };
    std::sort(found.begin(), found.end(), [&](std::uint64_t a, std::uint64_t b) { return key(a) < key(b); });

    std::vector<Element> den(n, Element(found.size()));
    for (std::size_t pt = 0; pt < found.size(); ++pt)
        for (std::size_t g = 0; g < n; ++g)
            if (found[pt] >> g & 1) den[g].set(pt);
    std::string prov = tag_name(p.tag());
    if (!p.params().empty()) prov += " " + p.params();
    std::vector<GeneratorId> gens(p.generators().begin(), p.generators().end());
    return CanonicalAlgebra(std::move(gens), std::move(den), found.size(), p, std::move(prov));
}

CanonicalAlgebra free_algebra(std::size_t n) { return realize(free_presentation(n)); }

CanonicalAlgebra atoms_algebra(std::size_t n) { return realize(atom_partition(n)); }

Element eval(const CanonicalAlgebra& a, const Term& t) { return eval_rec(a, t); }

bool is_zero(const CanonicalAlgebra& a, const Term& t) { return eval(a, t).none(); }

bool leq(const CanonicalAlgebra& a, const Term& s, const Term& t) { return is_zero(a, minus(s, t)); }

bool eq(const CanonicalAlgebra& a, const Term& s, const Term& t) { return leq(a, s, t) && leq(a, t, s); }

Assignment assignment_of(const CanonicalAlgebra& a, std::size_t point) {
    Assignment out;
    for (std::size_t g = 0; g < a.num_generators(); ++g) out.emplace_back(a.generators()[g], a.value(point, g));
    return out;
}

std::optional<Assignment> witness(const CanonicalAlgebra& a, const Term& t) {
    auto p = eval(a, t).first();
    if (!p) return std::nullopt;
    return assignment_of(a, *p);
}

bool evaluate_under(const Term& t, const Assignment& assignment) {
    switch (t.op()) {
        case Term::Op::Zero: return false;
        case Term::Op::One: return true;
        case Term::Op::Gen:
            for (const auto& [id, v] : assignment)
                if (id == t.generator()) return v;
            throw PreconditionError("generator " + t.generator().str() + " not assigned");
        case Term::Op::Not: return !evaluate_under(t.children()[0], assignment);
        case Term::Op::And:
            for (const auto& k : t.children())
                if (!evaluate_under(k, assignment)) return false;
            return true;
        case Term::Op::Or:
            for (const auto& k : t.children())
                if (evaluate_under(k, assignment)) return true;
            return false;
    }
    return false;
}

bool literals_zero(const CanonicalAlgebra& a, std::span<const std::size_t> pos, std::span<const std::size_t> neg) {
    if (a.has_masks()) {
        std::uint64_t pm = 0, nm = 0;
        for (auto g : pos) pm |= std::uint64_t{1} << g;
        for (auto g : neg) nm |= std::uint64_t{1} << g;
        for (std::size_t p = 0; p < a.num_points(); ++p) {
            auto m = a.mask(p);
            if ((m & pm) == pm && !(m & nm)) return false;
        }
        return true;
    }
    Element e = a.one();
    for (auto g : pos) e &= a.denotation(g);
    for (auto g : neg) e = e - a.denotation(g);
    return e.none();
}

bool closed_form_zero_tr(const IndexModel& model, std::span<const IndexNode> positives,
                         std::span<const IndexNode> negatives) {
    if (!model.profile().is_constant(1)) throw PreconditionError("closed_form_zero_tr applies to build_tr models (h = 1)");
    require_nodes(model, positives);
    require_nodes(model, negatives);
    for (const auto& nu : negatives)
        for (const auto& eta : positives)
            if ((eta.is_branch() && proper_initial_segment(nu, eta)) || nu == eta) return true;
    return false;
}

bool closed_form_zero_ptr(const IndexModel& model, std::span<const IndexNode> positives,
                          std::span<const IndexNode> negatives) {
    const auto& prof = model.profile();
    if (!prof.is_constant(2)) throw PreconditionError("closed_form_zero_ptr applies to build_ptr models (h = 2)");
    require_nodes(model, positives);
    require_nodes(model, negatives);
    // (d)
    for (const auto& eta : positives)
        for (const auto& nu : negatives)
            if (eta == nu) return true;
    for (const auto& eta : positives) {
        if (!eta.is_branch()) continue;
        // (a)
        for (const auto& other : positives)
            if (suc_right(prof, other, eta)) return true;
        // (b)
        for (const auto& nu : negatives)
            if (suc_left(prof, nu, eta)) return true;
        // (c)
        for (const auto& other : positives) {
            if (!other.is_branch()) continue;
            for (std::size_t j = 0; j < model.depth(); ++j) {
                if (!eq_level(eta, other, j)) break;
                if (eta.entry(j)[1] == other.entry(j)[0]) return true;
            }
        }
    }
    return false;
}

IndependenceResult independence_check(const CanonicalAlgebra& a, std::span<const GeneratorId> xs,
                                      std::span<const GeneratorId> base, std::span<const Term> exceptions,
                                      std::size_t max_xs) {
    if (xs.size() > max_xs || xs.size() > 63)
        throw BudgetExceeded("independence check over " + std::to_string(xs.size()) + " generators, budget " +
                             std::to_string(max_xs));
    std::vector<std::size_t> xi, bi;
    std::set<GeneratorId> allowed;
    for (const auto& g : xs) {
        auto i = a.generator_index(g);
        if (!i) throw PreconditionError("unresolved generator " + g.str());
        xi.push_back(*i);
        allowed.insert(g);
    }
    for (const auto& g : base) {
        auto i = a.generator_index(g);
        if (!i) throw PreconditionError("unresolved generator " + g.str());
        if (allowed.count(g)) throw PreconditionError("generator " + g.str() + " is both free and in the base");
        bi.push_back(*i);
        allowed.insert(g);
    }
    for (const auto& t : exceptions) {
        std::set<GeneratorId> used;
        t.collect_generators(used);
        for (const auto& g : used)
            if (!allowed.count(g)) throw PreconditionError("exception uses " + g.str() + " outside X and the base");
    }

    std::set<std::pair<std::vector<bool>, std::uint64_t>> seen;
    std::set<std::vector<bool>> base_patterns;
    for (std::size_t p = 0; p < a.num_points(); ++p) {
        std::vector<bool> b(bi.size());
        for (std::size_t k = 0; k < bi.size(); ++k) b[k] = a.value(p, bi[k]);
        std::uint64_t v = 0;
        for (std::size_t k = 0; k < xi.size(); ++k)
            if (a.value(p, xi[k])) v |= std::uint64_t{1} << k;
        base_patterns.insert(b);
        seen.emplace(std::move(b), v);
    }

    IndependenceResult res;
    for (const auto& b : base_patterns) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << xi.size()); ++v) {
            Assignment asg;
            for (std::size_t k = 0; k < bi.size(); ++k) asg.emplace_back(base[k], b[k]);
            for (std::size_t k = 0; k < xi.size(); ++k) asg.emplace_back(xs[k], (v >> k) & 1);
            bool excluded = false;
            for (const auto& t : exceptions)
                if (evaluate_under(t, asg)) excluded = true;
            if (excluded) continue;
            ++res.valuations_checked;
            if (!seen.count({b, v})) {
                res.independent = false;
                res.counterexample = std::move(asg);
                return res;
            }
        }
    }
    return res;
}

std::vector<Element> atoms(const CanonicalAlgebra& a) {
    std::vector<Element> out;
    for (std::size_t p = 0; p < a.num_points(); ++p) out.push_back(Element::singleton(a.num_points(), p));
    return out;
}

std::string cardinality(const CanonicalAlgebra& a) {
    std::string digits = "1";  // little-endian decimal
    for (std::size_t i = 0; i < a.num_points(); ++i) {
        int carry = 0;
        for (auto& c : digits) {
            int d = (c - '0') * 2 + carry;
            c = static_cast<char>('0' + d % 10);
            carry = d / 10;
        }
        if (carry) digits.push_back(static_cast<char>('0' + carry));
    }
    return {digits.rbegin(), digits.rend()};
}

}  // namespace fpba
