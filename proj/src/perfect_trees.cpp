#include "fpba/perfect_trees.hpp"

#include <algorithm>
#include <iterator>

#include "fpba/errors.hpp"

namespace fpba {

namespace {

std::string bits(std::size_t value, std::size_t len) {
    std::string s(len, '0');
    for (std::size_t i = 0; i < len; ++i)
        if (value >> (len - 1 - i) & 1) s[i] = '1';
    return s;
}

std::vector<std::string> level_etas(unsigned m) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < (std::size_t{1} << m); ++i) out.push_back(bits(i, m));
    return out;
}

bool member(const std::vector<std::size_t>& sorted, std::size_t x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::vector<std::size_t> intersect(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<std::size_t> below(const std::vector<std::size_t>& a, std::size_t bound) {
    return {a.begin(), std::lower_bound(a.begin(), a.end(), bound)};
}

std::string join(const std::vector<std::size_t>& xs) {
    std::string s = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
    return s + "}";
}

void fail(TreeCheck& c, const std::string& msg) {
    if (c.pass) c.violation = msg;
    c.pass = false;
}

bool splits(const std::set<std::string>& u, const std::string& s) {
    return u.count(s + '0') && u.count(s + '1');
}

}  // namespace

const TreeData& PerfectTreeFamily::tree(const std::string& eta) const {
    auto it = trees.find(eta);
    if (it == trees.end()) throw PreconditionError("no tree for η = '" + eta + "' at depth " + std::to_string(depth));
    return it->second;
}

std::set<std::string> PerfectTreeFamily::nodes(const std::string& eta) const {
    std::set<std::string> out;
    for (const auto& b : tree(eta).branches)
        for (std::size_t l = 0; l <= b.size(); ++l) out.insert(b.substr(0, l));
    return out;
}

PerfectTreeFamily PerfectTreeFamily::truncated(unsigned m) const {
    if (m > depth) throw PreconditionError("cannot truncate to a larger depth");
    PerfectTreeFamily f;
    f.depth = m;
    f.order = order;
    f.k.assign(k.begin(), k.begin() + m + 1);
    f.k1.assign(k1.begin(), k1.begin() + m);
    f.w_star.assign(w_star.begin(), w_star.begin() + m + 1);
    for (const auto& [eta, t] : trees)
        if (eta.size() <= m) f.trees.emplace(eta, t);
    return f;
}

nlohmann::json PerfectTreeFamily::to_json() const {
    nlohmann::json j;
    j["depth"] = depth;
    j["order"] = order == BandOrder::Repaired ? "repaired" : "as-printed";
    j["k"] = k;
    j["k1"] = k1;
    j["w_star"] = w_star.back();
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& [eta, t] : trees) ts.push_back({{"eta", eta}, {"w", t.w}, {"branches", t.branches}});
    j["trees"] = std::move(ts);
    return j;
}

PerfectTreeFamily build_family(unsigned depth, BandOrder order) {
    if (depth > max_tree_depth)
        throw BudgetExceeded("tree depth " + std::to_string(depth) + " exceeds " + std::to_string(max_tree_depth));
    PerfectTreeFamily f;
    f.depth = depth;
    f.order = order;
    f.k = {0};
    f.w_star = {{}};
    f.trees[""] = TreeData{{}, {""}};
    for (unsigned s = 0; s < depth; ++s) {
        const std::size_t k = f.k[s], k1 = k + s + 1, window = std::size_t{2} << (s + 1);
        f.k1.push_back(k1);
        auto ws = f.w_star.back();
        for (std::size_t i = k; i < k1; ++i) ws.push_back(i);
        f.w_star.push_back(std::move(ws));
        f.k.push_back(k1 + window);
        for (std::size_t idx = 0; idx < (std::size_t{1} << (s + 1)); ++idx) {
            std::string eta = bits(idx, s + 1);
            const TreeData& parent = f.trees.at(eta.substr(0, s));
            std::string band = order == BandOrder::Repaired ? eta : eta.substr(0, s) + '0';
            const std::size_t marker = k1 + 2 * idx + 1;
            TreeData t;
            t.w = parent.w;
            t.w.push_back(marker);
            for (const auto& nu : parent.branches) {
                std::string base = nu + band + std::string(window, '0');
                t.branches.push_back(base);
                base[marker] = '1';
                t.branches.push_back(std::move(base));
            }
            std::sort(t.branches.begin(), t.branches.end());
            f.trees.emplace(std::move(eta), std::move(t));
        }
    }
    return f;
}

std::vector<std::string> branches(const PerfectTreeFamily& f, const std::string& eta, std::size_t horizon) {
    if (horizon == std::string::npos) horizon = f.k.at(eta.size());
    std::vector<std::string> out;
    for (const auto& n : f.nodes(eta))
        if (n.size() == horizon) out.push_back(n);
    return out;
}

bool TreeReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const TreeCheck& c) { return c.pass; });
}

const TreeCheck& TreeReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw PreconditionError("no check named " + name);
}

nlohmann::json TreeReport::to_json() const {
    nlohmann::json j;
    for (const auto& c : checks)
        j["checks"][c.name] = {{"pass", c.pass}, {"checked", c.checked}, {"violation", c.violation}};
    for (const auto& w : windows)
        j["windows"].push_back({{"stage", w.stage}, {"begin", w.begin}, {"end", w.end},
                                {"min_splits", w.min_splits}, {"max_splits", w.max_splits}});
    j["clauses"] = {{"a", clause_a}, {"b", clause_b}, {"comparable", comparable_meets}, {"multiple", multiple_clauses}};
    j["pass"] = pass();
    return j;
}

TreeReport verify_family(const PerfectTreeFamily& f) {
    auto named = [](const char* n) {
        TreeCheck t;
        t.name = n;
        return t;
    };
    TreeCheck a = named("A"), b = named("B"), c = named("C"), d = named("D"), e = named("E"), fa = named("F(a)"),
              fb = named("F(b)"), fc = named("F(c)"), coh = named("coherence");
    TreeReport rep;

    for (unsigned s = 0; s < f.depth; ++s) {
        ++a.checked;
        if (f.w_star[s + 1].size() <= f.w_star[s].size())
            fail(a, "W(*) does not grow at stage " + std::to_string(s));
        for (const auto& eta : level_etas(s + 1)) {
            ++a.checked;
            const auto& t = f.tree(eta);
            const auto& p = f.tree(eta.substr(0, s));
            if (t.w.size() <= p.w.size() || intersect(t.w, p.w) != p.w)
                fail(a, "W_" + eta + " does not properly extend W_" + eta.substr(0, s));
        }
    }

    std::map<std::string, std::set<std::string>> node_sets;
    for (const auto& [eta, t] : f.trees) node_sets.emplace(eta, f.nodes(eta));

    for (const auto& [eta, t] : f.trees) {
        const auto& u = node_sets.at(eta);
        const unsigned m = static_cast<unsigned>(eta.size());
        const auto& ws = f.w_star[m];

        for (auto x : t.w) {
            ++e.checked;
            if (member(ws, x)) fail(e, std::to_string(x) + " ∈ W(*) ∩ W_" + eta);
        }
        // splitting levels; a pair of distinct equal-length members meets at one
        for (const auto& s : u) {
            if (!splits(u, s)) continue;
            ++c.checked;
            if (!member(t.w, s.size()))
                fail(c, "U_" + eta + " splits at level " + std::to_string(s.size()) + " ∉ W_" + eta);
        }
        if (m > 0) {
            std::map<std::string, bool> has_split;
            for (auto it = u.rbegin(); it != u.rend(); ++it) {
                const auto& s = *it;
                bool h = splits(u, s);
                for (char ch : {'0', '1'}) {
                    auto child = has_split.find(s + ch);
                    if (child != has_split.end() && child->second) h = true;
                }
                has_split[s] = h;
            }
            for (const auto& s : u) {
                if (s.size() > f.k1[m - 1]) continue;
                ++b.checked;
                if (!has_split[s]) fail(b, "'" + s + "' in U_" + eta + " has no splitting extension");
            }
        }
        if (m > 0) {
            const std::string parent = eta.substr(0, m - 1);
            const std::size_t horizon = f.k[m - 1];
            ++coh.checked;
            std::set<std::string> low;
            for (const auto& s : u)
                if (s.size() <= horizon) low.insert(s);
            if (low != node_sets.at(parent)) fail(coh, "U_" + eta + " does not cut down to U_" + parent);
            if (below(t.w, horizon) != f.tree(parent).w) fail(coh, "W_" + eta + " does not cut down to W_" + parent);
            if (below(ws, horizon) != f.w_star[m - 1]) fail(coh, "W(*) does not cut down at depth " + std::to_string(m));
        }
    }

    for (unsigned m = 1; m <= f.depth; ++m) {
        const auto etas = level_etas(m);
        const auto& ws = f.w_star[m];
        for (std::size_t i = 0; i < etas.size(); ++i)
            for (std::size_t j = i + 1; j < etas.size(); ++j) {
                const auto &e1 = etas[i], &e2 = etas[j];
                const auto &t1 = f.tree(e1), &t2 = f.tree(e2);
                const auto &u1 = node_sets.at(e1), &u2 = node_sets.at(e2);
                const std::string pair = e1 + "," + e2;
                std::vector<std::string> common;
                std::set_intersection(u1.begin(), u1.end(), u2.begin(), u2.end(), std::back_inserter(common));
                const auto both = intersect(t1.w, t2.w);

                for (const auto& s : common) {
                    rep.comparable_meets++;
                    bool incomparable = (u1.count(s + '0') && u2.count(s + '1')) || (u1.count(s + '1') && u2.count(s + '0'));
                    if (!incomparable) continue;
                    ++d.checked;
                    const std::size_t lvl = s.size();
                    bool ca = member(both, lvl);
                    bool cb = member(ws, lvl) && below(t1.w, lvl) == below(t2.w, lvl);
                    rep.clause_a += ca;
                    rep.clause_b += cb;
                    if (ca && cb) rep.multiple_clauses++;
                    if (!ca && !cb)
                        fail(d, "η=" + pair + " meet at level " + std::to_string(lvl) + " fits no clause");
                    else if (ca && cb)
                        fail(d, "η=" + pair + " meet at level " + std::to_string(lvl) + " fits two clauses");
                }

                ++fa.checked;
                for (auto x : both) {
                    if (below(t1.w, x) != below(both, x) || below(t2.w, x) != below(both, x)) {
                        fail(fa, "W_" + e1 + " ∩ W_" + e2 + " = " + join(both) + " is not an initial segment");
                        break;
                    }
                }

                std::size_t common_len = 0;
                for (const auto& s : common) common_len = std::max(common_len, s.size());
                for (auto l : ws) {
                    if (!both.empty() && l <= both.back()) continue;
                    ++fb.checked;
                    for (const auto& s : common)
                        if (s.size() >= l && std::binary_search(common.begin(), common.end(), s + '0') &&
                            std::binary_search(common.begin(), common.end(), s + '1'))
                            fail(fb, "U_" + e1 + " ∩ U_" + e2 + " splits at " + std::to_string(s.size()) +
                                         " ≥ " + std::to_string(l));
                    std::vector<std::size_t> either;
                    std::set_union(t1.w.begin(), t1.w.end(), t2.w.begin(), t2.w.end(), std::back_inserter(either));
                    auto next = std::upper_bound(either.begin(), either.end(), l);
                    if (next != either.end() && common_len >= *next)
                        fail(fb, "U_" + e1 + " ∩ U_" + e2 + " reaches length " + std::to_string(common_len) +
                                     " ≥ " + std::to_string(*next));
                }

                for (auto l : ws) {
                    if (both.empty() || l >= both.back()) continue;
                    ++fc.checked;
                    std::set<std::string> low1, low2;
                    for (const auto& s : u1)
                        if (s.size() <= l) low1.insert(s);
                    for (const auto& s : u2)
                        if (s.size() <= l) low2.insert(s);
                    if (low1 != low2)
                        fail(fc, "U_" + e1 + " and U_" + e2 + " differ below " + std::to_string(l));
                }
            }
    }
    // every common node was counted once per pair; the incomparable ones are not comparable meets
    rep.comparable_meets -= d.checked;

    if (f.depth > 0) {
        for (unsigned s = 0; s < f.depth; ++s) {
            WindowStat w{s, f.k1[s], f.k[s + 1], SIZE_MAX, 0};
            for (const auto& eta : level_etas(f.depth)) {
                const auto& u = node_sets.at(eta);
                std::size_t n = 0;
                for (const auto& x : u)
                    if (x.size() >= w.begin && x.size() < w.end && splits(u, x)) ++n;
                w.min_splits = std::min(w.min_splits, n);
                w.max_splits = std::max(w.max_splits, n);
            }
            rep.windows.push_back(w);
        }
    }

    rep.checks = {a, b, c, d, e, fa, fb, fc, coh};
    return rep;
}

}  // namespace fpba
