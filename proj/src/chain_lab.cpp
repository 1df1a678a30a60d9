#include "fpba/chain_lab.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "fpba/errors.hpp"

namespace fpba {

ChainResult longest_chain(const CanonicalAlgebra& a) {
    // cardinalities strictly increase along a chain of subsets, so n+1 is an upper bound
    ChainResult r;
    Element cur(a.num_points());
    r.witness.push_back(cur);
    for (std::size_t p = 0; p < a.num_points(); ++p) {
        cur.set(p);
        r.witness.push_back(cur);
    }
    r.size = r.witness.size();
    return r;
}

ChainResult longest_chain(std::span<const Element> family) {
    const std::size_t n = family.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return family[a].count() < family[b].count(); });
    std::vector<std::size_t> best(n, 1), prev(n, SIZE_MAX);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < x; ++y) {
            const auto& lo = family[order[y]];
            const auto& hi = family[order[x]];
            if (lo.count() < hi.count() && lo.subset_of(hi) && best[y] + 1 > best[x]) {
                best[x] = best[y] + 1;
                prev[x] = y;
            }
        }
    ChainResult r;
    if (!n) return r;
    std::size_t end = static_cast<std::size_t>(std::max_element(best.begin(), best.end()) - best.begin());
    r.size = best[end];
    for (std::size_t at = end; at != SIZE_MAX; at = prev[at]) r.witness.push_back(family[order[at]]);
    std::reverse(r.witness.begin(), r.witness.end());
    return r;
}

std::vector<std::size_t> max_clique(const std::vector<std::uint64_t>& adj) {
    const std::size_t n = adj.size();
    if (n > 64) throw BudgetExceeded("clique search limited to 64 vertices, got " + std::to_string(n));
    std::uint64_t best = 0;
    int best_size = 0;
    auto rec = [&](auto&& self, std::uint64_t r, std::uint64_t p, std::uint64_t x) -> void {
        if (!p && !x) {
            if (std::popcount(r) > best_size) {
                best = r;
                best_size = std::popcount(r);
            }
            return;
        }
        if (std::popcount(r) + std::popcount(p) <= best_size) return;
        std::uint64_t px = p | x;
        int pivot = std::countr_zero(px);
        int most = -1;
        for (std::uint64_t s = px; s; s &= s - 1) {
            int u = std::countr_zero(s);
            int c = std::popcount(p & adj[u]);
            if (c > most) most = c, pivot = u;
        }
        for (std::uint64_t cand = p & ~adj[pivot]; cand; cand &= cand - 1) {
            int v = std::countr_zero(cand);
            std::uint64_t bit = std::uint64_t{1} << v;
            self(self, r | bit, p & adj[v], x & adj[v]);
            p &= ~bit;
            x |= bit;
        }
    };
    std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    rec(rec, 0, all, 0);
    std::vector<std::size_t> out;
    for (std::uint64_t s = best; s; s &= s - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(s)));
    return out;
}

nlohmann::json FamilyReport::to_json(std::span<const Element> family) const {
    auto elems = [&](const std::vector<std::size_t>& idx) {
        nlohmann::json j = nlohmann::json::array();
        for (auto i : idx) j.push_back(family[i].str());
        return j;
    };
    return {{"family_size", family_size},
            {"longest_chain", {{"size", longest_chain}, {"witness", elems(chain_witness)}}},
            {"max_antichain", {{"size", max_antichain}, {"witness", elems(antichain_witness)}}},
            {"max_compatible", {{"size", max_compatible}, {"witness", elems(compatible_witness)}}}};
}

FamilyReport knaster_subfamily(std::span<const Element> family, std::size_t max_family) {
    const std::size_t n = family.size();
    if (n > max_family || n > 64)
        throw BudgetExceeded("family of " + std::to_string(n) + " elements, budget " + std::to_string(max_family));
    for (const auto& e : family)
        if (e.none()) throw PreconditionError("family members must be nonzero");
    FamilyReport r;
    r.family_size = n;
    std::vector<std::uint64_t> compat(n, 0), disjoint(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (family[i].intersects(family[j]))
                compat[i] |= std::uint64_t{1} << j;
            else
                disjoint[i] |= std::uint64_t{1} << j;
        }
    r.compatible_witness = max_clique(compat);
    r.antichain_witness = max_clique(disjoint);
    r.max_compatible = r.compatible_witness.size();
    r.max_antichain = r.antichain_witness.size();

    auto chain = longest_chain(family);
    r.longest_chain = chain.size;
    std::vector<char> used(n, 0);
    for (const auto& w : chain.witness)
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && family[i] == w) {
                used[i] = 1;
                r.chain_witness.push_back(i);
                break;
            }
    return r;
}

std::optional<DeltaSystem> delta_system(std::span<const FiniteSet> sets, std::size_t r) {
    if (r < 2) throw PreconditionError("delta_system needs r >= 2");
    const std::size_t n = sets.size();
    if (n > 64) throw BudgetExceeded("delta_system limited to 64 sets");
    auto inter = [](const FiniteSet& a, const FiniteSet& b) {
        FiniteSet out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    };
    std::set<FiniteSet> hearts;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) hearts.insert(inter(sets[i], sets[j]));
    for (const auto& heart : hearts) {
        std::vector<std::size_t> verts;
        for (std::size_t i = 0; i < n; ++i)
            if (std::includes(sets[i].begin(), sets[i].end(), heart.begin(), heart.end())) verts.push_back(i);
        if (verts.size() < r) continue;
        std::vector<std::uint64_t> adj(verts.size(), 0);
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = 0; b < verts.size(); ++b)
                if (a != b && inter(sets[verts[a]], sets[verts[b]]) == heart) adj[a] |= std::uint64_t{1} << b;
        auto clique = max_clique(adj);
        if (clique.size() >= r) {
            DeltaSystem d;
            for (std::size_t k = 0; k < r; ++k) d.members.push_back(verts[clique[k]]);
            std::sort(d.members.begin(), d.members.end());
            d.heart = heart;
            return d;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<std::size_t>> free_subset(std::span<const FiniteSet> w, std::size_t r) {
    const std::size_t n = w.size();
    if (n > 64) throw BudgetExceeded("free_subset limited to a domain of 64 points");
    if (r == 0) return std::vector<std::size_t>{};
    auto in = [&](std::size_t i, std::size_t j) {
        return std::binary_search(w[i].begin(), w[i].end(), static_cast<int>(j));
    };
    std::vector<std::uint64_t> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && !in(i, j) && !in(j, i)) adj[i] |= std::uint64_t{1} << j;
    auto clique = max_clique(adj);
    if (clique.size() < r) return std::nullopt;
    clique.resize(r);
    return clique;
}

std::vector<bool> qf_signature(const IndexModel& model, std::span<const IndexNode> params,
                               std::span<const IndexNode> tuple) {
    const auto& prof = model.profile();
    std::vector<IndexNode> terms{IndexNode::root()};
    terms.insert(terms.end(), params.begin(), params.end());
    for (const auto& b : tuple) {
        terms.push_back(b);
        for (std::size_t a = 0; a < prof.depth(); ++a)
            for (std::size_t l = 0; l < prof.arity(a); ++l) terms.push_back(res(prof, b, a, l));
    }
    std::vector<bool> sig;
    for (const auto& s : terms) {
        for (std::size_t j = 0; j <= prof.depth(); ++j) sig.push_back(in_level(s, j));
        sig.push_back(in_omega_level(s));
    }
    for (const auto& s : terms)
        for (const auto& t : terms) {
            sig.push_back(s == t);
            sig.push_back(initial_segment(s, t));
            sig.push_back(less_1(s, t));
            for (std::size_t j = 0; j <= prof.depth(); ++j) sig.push_back(eq_level(s, t, j));
            for (std::size_t j = 0; j < prof.depth(); ++j)
                for (std::size_t m = 0; m < prof.arity(j); ++m) sig.push_back(suc(prof, s, t, j, m));
        }
    return sig;
}

std::size_t qf_type_count(const IndexModel& model, std::span<const IndexNode> params, std::size_t m,
                          std::optional<std::span<const IndexNode>> domain) {
    if (m > 3) throw BudgetExceeded("qf_type_count supports tuples of length at most 3");
    std::span<const IndexNode> dom = domain ? *domain : model.nodes();
    for (const auto& p : params)
        if (!model.contains(p)) throw PreconditionError("parameter " + p.str() + " is not in the model");
    std::set<std::vector<bool>> types;
    std::vector<IndexNode> tuple(m);
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == m) {
            types.insert(qf_signature(model, params, tuple));
            return;
        }
        for (const auto& d : dom) {
            tuple[k] = d;
            self(self, k + 1);
        }
    };
    rec(rec, 0);
    return types.size();
}

std::vector<std::vector<std::size_t>> model_automorphisms(const IndexModel& model, std::size_t limit) {
    const auto nodes = model.nodes();
    const auto& prof = model.profile();
    const std::size_t n = nodes.size();
    auto same_pair = [&](std::size_t a, std::size_t b, std::size_t pa, std::size_t pb) {
        const auto &x = nodes[a], &y = nodes[b], &u = nodes[pa], &v = nodes[pb];
        if ((x == y) != (u == v)) return false;
        if (initial_segment(x, y) != initial_segment(u, v)) return false;
        if (less_1(x, y) != less_1(u, v)) return false;
        for (std::size_t j = 0; j <= prof.depth(); ++j)
            if (eq_level(x, y, j) != eq_level(u, v, j)) return false;
        for (std::size_t j = 0; j < prof.depth(); ++j)
            for (std::size_t m = 0; m < prof.arity(j); ++m)
                if (suc(prof, x, y, j, m) != suc(prof, u, v, j, m)) return false;
        return true;
    };
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> perm(n);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (out.size() >= limit) return;
        if (k == n) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t a = 0; a < prof.depth(); ++a)
                    for (std::size_t l = 0; l < prof.arity(a); ++l) {
                        auto ri = *model.index_of(res(prof, nodes[i], a, l));
                        if (nodes[perm[ri]] != res(prof, nodes[perm[i]], a, l)) return;
                    }
            out.push_back(perm);
            return;
        }
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c] || nodes[c].is_branch() != nodes[k].is_branch() || nodes[c].size() != nodes[k].size()) continue;
            bool ok = same_pair(k, k, c, c);
            for (std::size_t j = 0; ok && j < k; ++j) ok = same_pair(k, j, c, perm[j]) && same_pair(j, k, perm[j], c);
            if (!ok) continue;
            used[c] = 1;
            perm[k] = c;
            self(self, k + 1);
            used[c] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<std::uint64_t> venn_type(const CanonicalAlgebra& a, std::span<const Element> elems) {
    const std::size_t k = elems.size();
    if (k > 20) throw BudgetExceeded("Venn type over more than 20 elements");
    std::vector<std::uint64_t> type(((std::size_t{1} << k) + 63) / 64, 0);
    for (std::size_t p = 0; p < a.num_points(); ++p) {
        std::size_t region = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (elems[j].test(p)) region |= std::size_t{1} << j;
        type[region >> 6] |= std::uint64_t{1} << (region & 63);
    }
    return type;
}

namespace {

// Ordered selections of n distinct indices from [0, size), lexicographic.
template <class F>
bool for_each_selection(std::span<const std::size_t> pool, std::size_t n, F&& f) {
    std::vector<std::size_t> sel;
    std::vector<char> used(pool.size(), 0);
    auto rec = [&](auto&& self) -> bool {
        if (sel.size() == n) return f(sel);
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            used[i] = 1;
            sel.push_back(pool[i]);
            bool go = self(self);
            sel.pop_back();
            used[i] = 0;
            if (!go) return false;
        }
        return true;
    };
    return rec(rec);
}

std::vector<Element> flatten(std::span<const std::vector<Element>> family, const std::vector<std::size_t>& sel) {
    std::vector<Element> out;
    for (auto i : sel) out.insert(out.end(), family[i].begin(), family[i].end());
    return out;
}

std::size_t tuple_width(std::span<const std::vector<Element>> family) {
    std::size_t m = family.empty() ? 0 : family.front().size();
    for (const auto& t : family)
        if (t.size() != m) throw PreconditionError("family tuples must share one length");
    return m;
}

}  // namespace

IndiscernibleResult indiscernible_check(const CanonicalAlgebra& a, std::span<const std::vector<Element>> family,
                                        std::size_t n, std::size_t max_coordinates) {
    std::size_t m = tuple_width(family);
    if (m * n > max_coordinates || m * n > 20)
        throw BudgetExceeded("selections of " + std::to_string(m * n) + " coordinates exceed the budget");
    std::vector<std::size_t> pool(family.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    IndiscernibleResult r;
    std::optional<std::vector<std::uint64_t>> first_type;
    std::vector<std::size_t> first_sel;
    for_each_selection(pool, n, [&](const std::vector<std::size_t>& sel) {
        ++r.selections;
        auto t = venn_type(a, flatten(family, sel));
        if (!first_type) {
            first_type = std::move(t);
            first_sel = sel;
            return true;
        }
        if (t != *first_type) {
            r.indiscernible = false;
            r.counterexample = std::make_pair(first_sel, sel);
            return false;
        }
        return true;
    });
    return r;
}

std::vector<std::size_t> indiscernible_extract(const CanonicalAlgebra& a,
                                               std::span<const std::vector<Element>> family, std::size_t n,
                                               std::size_t max_family) {
    const std::size_t f = family.size();
    if (f > max_family || f > 20) throw BudgetExceeded("indiscernible_extract over " + std::to_string(f) + " tuples");
    std::size_t m = tuple_width(family);
    if (m * n > 20) throw BudgetExceeded("selections too wide");
    std::vector<std::size_t> pool(f);
    for (std::size_t i = 0; i < f; ++i) pool[i] = i;
    std::map<std::vector<std::size_t>, std::size_t> type_id;
    std::map<std::vector<std::uint64_t>, std::size_t> ids;
    for_each_selection(pool, n, [&](const std::vector<std::size_t>& sel) {
        auto t = venn_type(a, flatten(family, sel));
        auto it = ids.emplace(std::move(t), ids.size()).first;
        type_id[sel] = it->second;
        return true;
    });
    std::vector<std::uint32_t> masks;
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << f); ++s) masks.push_back(s);
    std::stable_sort(masks.begin(), masks.end(),
                     [](std::uint32_t x, std::uint32_t y) { return std::popcount(x) > std::popcount(y); });
    for (auto s : masks) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < f; ++i)
            if (s >> i & 1) members.push_back(i);
        std::optional<std::size_t> seen;
        bool ok = for_each_selection(members, n, [&](const std::vector<std::size_t>& sel) {
            auto id = type_id.at(sel);
            if (!seen) seen = id;
            return *seen == id;
        });
        if (ok) return members;
    }
    return {};
}

}  // namespace fpba
