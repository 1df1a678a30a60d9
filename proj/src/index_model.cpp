#include "fpba/index_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fpba/errors.hpp"

namespace fpba {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

unsigned long parse_number(std::string_view s, const char* what) {
    s = trim(s);
    unsigned long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
}

Entry parse_entry(std::string_view s) {
    Entry e;
    for (auto part : split(s, ',')) e.push_back(static_cast<Ordinal>(parse_number(part, "coordinate")));
    return e;
}

void combinations(Ordinal j_size, unsigned k, Entry& cur, Ordinal from, std::vector<Entry>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (Ordinal v = from; v < j_size; ++v) {
        cur.push_back(v);
        combinations(j_size, k, cur, v + 1, out);
        cur.pop_back();
    }
}

std::vector<Entry> increasing_tuples(Ordinal j_size, unsigned k) {
    std::vector<Entry> out;
    Entry cur;
    combinations(j_size, k, cur, 0, out);
    return out;
}

}  // namespace

ArityProfile::ArityProfile(std::vector<unsigned> h) : h_(std::move(h)) {
    if (h_.empty()) throw PreconditionError("arity profile needs depth >= 1");
    for (unsigned a : h_)
        if (a == 0) throw PreconditionError("arity profile entries must be >= 1");
}

ArityProfile ArityProfile::constant(unsigned depth, unsigned arity) {
    return ArityProfile(std::vector<unsigned>(depth, arity));
}

unsigned ArityProfile::max_arity() const { return *std::max_element(h_.begin(), h_.end()); }

bool ArityProfile::is_constant(unsigned k) const {
    return std::all_of(h_.begin(), h_.end(), [k](unsigned a) { return a == k; });
}

std::string ArityProfile::str() const {
    std::string s;
    for (std::size_t i = 0; i < h_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(h_[i]);
    }
    return s;
}

IndexNode::IndexNode(std::vector<Entry> entries, NodeKind kind) : entries_(std::move(entries)), kind_(kind) {
    if (kind_ == NodeKind::Branch && entries_.empty()) throw PreconditionError("a branch needs at least one tuple");
    if (kind_ == NodeKind::Finite && !entries_.empty() && entries_.back().size() != 1)
        throw PreconditionError("the last entry of a finite node must be a single tip");
    for (const auto& e : entries_)
        if (e.empty()) throw PreconditionError("empty entry in node");
}

IndexNode IndexNode::finite(std::vector<Entry> tuples, Ordinal tip) {
    tuples.push_back({tip});
    return IndexNode(std::move(tuples), NodeKind::Finite);
}

IndexNode IndexNode::branch(std::vector<Entry> tuples) { return IndexNode(std::move(tuples), NodeKind::Branch); }

std::optional<Ordinal> IndexNode::tip() const {
    if (kind_ == NodeKind::Branch || entries_.empty()) return std::nullopt;
    return entries_.back().front();
}

IndexNode IndexNode::truncate(std::size_t n) const {
    n = std::min(n, entries_.size());
    return IndexNode(std::vector<Entry>(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(n)),
                     NodeKind::Finite);
}

IndexNode IndexNode::extend(Entry next) const {
    auto e = entries_;
    e.push_back(std::move(next));
    return IndexNode(std::move(e), NodeKind::Finite);
}

std::string IndexNode::str() const {
    if (is_root()) return "<>";
    std::string s;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) s += '/';
        for (std::size_t j = 0; j < entries_[i].size(); ++j) {
            if (j) s += ',';
            s += std::to_string(entries_[i][j]);
        }
    }
    if (is_branch()) s += "/*";
    return s;
}

IndexNode IndexNode::parse(std::string_view text) {
    text = trim(text);
    if (text == "<>") return root();
    if (text.empty()) throw ParseError("empty node");
    auto parts = split(text, '/');
    bool branch = trim(parts.back()) == "*";
    if (branch) parts.pop_back();
    if (parts.empty()) throw ParseError("branch without tuples");
    std::vector<Entry> entries;
    for (auto p : parts) entries.push_back(parse_entry(p));
    if (!branch && entries.back().size() != 1)
        throw ParseError("finite node must end in a single tip: '" + std::string(text) + "'");
    return IndexNode(std::move(entries), branch ? NodeKind::Branch : NodeKind::Finite);
}

std::string node_shape_error(const ArityProfile& profile, Ordinal j_size, const IndexNode& node) {
    const auto& e = node.entries();
    std::size_t tuples = node.is_branch() ? e.size() : (e.empty() ? 0 : e.size() - 1);
    if (node.is_branch() && e.size() != profile.depth()) return "branch must have exactly D tuples";
    if (!node.is_branch() && e.size() > profile.depth()) return "finite node longer than D";
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (Ordinal v : e[i])
            if (v >= j_size) return "coordinate out of range at level " + std::to_string(i);
        if (i < tuples) {
            if (e[i].size() != profile.arity(i))
                return "tuple at level " + std::to_string(i) + " has arity " + std::to_string(e[i].size()) +
                       ", expected " + std::to_string(profile.arity(i));
            for (std::size_t j = 1; j < e[i].size(); ++j)
                if (e[i][j - 1] >= e[i][j]) return "tuple at level " + std::to_string(i) + " not increasing";
        }
    }
    return {};
}

IndexNode res(const ArityProfile& profile, const IndexNode& node, std::size_t level, std::size_t coord) {
    if (!node.is_branch() && node.size() <= level) return node;
    if (node.is_branch() && level >= node.size()) return node;
    // tip case: (η↾α)⌢⟨s₀⟩ is η itself
    if (!node.is_branch() && level + 1 == node.size()) return node;
    const Entry& tuple = node.entry(level);
    std::size_t c = (coord < profile.arity(level) && coord < tuple.size()) ? coord : 0;
    std::vector<Entry> e(node.entries().begin(), node.entries().begin() + static_cast<std::ptrdiff_t>(level));
    e.push_back({tuple[c]});
    return IndexNode(std::move(e), NodeKind::Finite);
}

std::vector<IndexNode> res_requirements(const ArityProfile& profile, const IndexNode& node) {
    std::vector<IndexNode> out;
    std::size_t levels = node.is_branch() ? node.size() : (node.size() == 0 ? 0 : node.size() - 1);
    for (std::size_t i = 0; i < levels; ++i)
        for (std::size_t m = 0; m < profile.arity(i); ++m) out.push_back(res(profile, node, i, m));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

IndexModel::IndexModel(ArityProfile profile, Ordinal j_size, std::vector<IndexNode> nodes)
    : profile_(std::move(profile)), j_size_(j_size), nodes_(std::move(nodes)) {
    if (j_size_ == 0) throw PreconditionError("J_size must be positive");
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    if (nodes_.empty() || !nodes_.front().is_root()) throw PreconditionError("index model must contain the root");
    for (const auto& n : nodes_) {
        auto why = node_shape_error(profile_, j_size_, n);
        if (!why.empty()) throw PreconditionError("node " + n.str() + ": " + why);
    }
    for (const auto& n : nodes_)
        for (const auto& r : res_requirements(profile_, n))
            if (!contains(r))
                throw PreconditionError("not Res-closed: " + n.str() + " needs " + r.str());
}

bool IndexModel::contains(const IndexNode& node) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), node);
}

std::optional<std::size_t> IndexModel::index_of(const IndexNode& node) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node);
    if (it == nodes_.end() || *it != node) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<IndexNode> IndexModel::branches() const {
    std::vector<IndexNode> out;
    for (const auto& n : nodes_)
        if (n.is_branch()) out.push_back(n);
    return out;
}

std::string IndexModel::str() const {
    std::string s = "h=" + profile_.str() + "; J=" + std::to_string(j_size_) + "; D=" + std::to_string(depth()) + "\n";
    for (const auto& n : nodes_) s += n.str() + "\n";
    return s;
}

IndexModel IndexModel::parse(std::string_view text) {
    std::optional<std::vector<unsigned>> h;
    std::optional<Ordinal> j;
    std::optional<unsigned> d;
    std::vector<IndexNode> nodes;
    bool header_seen = false;
    std::size_t lineno = 0;
    for (auto raw : split(text, '\n')) {
        ++lineno;
        auto hash = raw.find('#');
        auto line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        try {
            if (!header_seen) {
                header_seen = true;
                for (auto field : split(line, ';')) {
                    field = trim(field);
                    if (field.empty()) continue;
                    auto eq = field.find('=');
                    if (eq == std::string_view::npos) throw ParseError("header field without '='");
                    auto key = trim(field.substr(0, eq));
                    auto val = trim(field.substr(eq + 1));
                    if (key == "h") {
                        std::vector<unsigned> hv;
                        for (auto p : split(val, ',')) hv.push_back(static_cast<unsigned>(parse_number(p, "arity")));
                        h = hv;
                    } else if (key == "J") {
                        j = static_cast<Ordinal>(parse_number(val, "J"));
                    } else if (key == "D") {
                        d = static_cast<unsigned>(parse_number(val, "D"));
                    } else {
                        throw ParseError("unknown header key '" + std::string(key) + "'");
                    }
                }
                if (!h || !j || !d) throw ParseError("header needs h=..; J=..; D=..");
                if (h->size() != *d) throw ParseError("h lists " + std::to_string(h->size()) + " arities but D=" + std::to_string(*d));
                continue;
            }
            nodes.push_back(IndexNode::parse(line));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        } catch (const PreconditionError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (!header_seen) throw ParseError("missing header line");
    if (nodes.empty()) nodes.push_back(IndexNode::root());
    return IndexModel(ArityProfile(*h), *j, std::move(nodes));
}

IndexModel IndexModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool initial_segment(const IndexNode& a, const IndexNode& b) {
    if (a.is_branch()) return b.is_branch() && a.entries() == b.entries();
    if (a.size() > b.size()) return false;
    return std::equal(a.entries().begin(), a.entries().end(), b.entries().begin());
}

bool proper_initial_segment(const IndexNode& a, const IndexNode& b) { return a != b && initial_segment(a, b); }

bool in_level(const IndexNode& node, std::size_t level) { return !node.is_branch() && node.size() == level; }

bool in_omega_level(const IndexNode& node) { return node.is_branch(); }

bool less_1(const IndexNode& a, const IndexNode& b) {
    if (a.is_branch() || b.is_branch() || a.size() != b.size() || a.size() == 0) return false;
    std::size_t n = a.size() - 1;
    if (!std::equal(a.entries().begin(), a.entries().begin() + static_cast<std::ptrdiff_t>(n), b.entries().begin()))
        return false;
    return *a.tip() < *b.tip();
}

bool eq_level(const IndexNode& a, const IndexNode& b, std::size_t level) {
    auto cut = [level](const IndexNode& x) { return x.is_branch() ? level : std::min(level, x.size()); };
    if (cut(a) != cut(b)) return false;
    std::size_t n = std::min({cut(a), a.size(), b.size()});
    for (std::size_t i = 0; i < n; ++i)
        if (a.entry(i) != b.entry(i)) return false;
    // restriction of a branch beyond its stored depth: the whole branch
    if (cut(a) > a.size() || cut(b) > b.size()) return a.is_branch() && b.is_branch() && a == b;
    return true;
}

bool suc(const ArityProfile& profile, const IndexNode& a, const IndexNode& b, std::size_t level, std::size_t coord) {
    if (a.is_branch() || a.size() != level + 1) return false;
    if (level >= profile.depth() || coord >= profile.arity(level)) return false;
    bool tuple_at_level = b.is_branch() ? level < b.size() : level + 1 < b.size();
    if (!tuple_at_level) return false;
    for (std::size_t i = 0; i < level; ++i)
        if (a.entry(i) != b.entry(i)) return false;
    const Entry& t = b.entry(level);
    return coord < t.size() && *a.tip() == t[coord];
}

namespace {
bool suc_side(const ArityProfile& profile, const IndexNode& a, const IndexNode& b, std::size_t coord) {
    if (!profile.is_constant(2)) throw PreconditionError("Suc_L/Suc_R need h = 2 at every level");
    for (std::size_t i = 0; i < profile.depth(); ++i)
        if (suc(profile, a, b, i, coord)) return true;
    return false;
}
}  // namespace

bool suc_left(const ArityProfile& profile, const IndexNode& a, const IndexNode& b) { return suc_side(profile, a, b, 0); }
bool suc_right(const ArityProfile& profile, const IndexNode& a, const IndexNode& b) { return suc_side(profile, a, b, 1); }

IndexModel sum(const ArityProfile& profile, std::span<const Summand> family) {
    Ordinal zeta = 0;
    Ordinal j_size = 1;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& s = family[i];
        if (!(s.model.profile() == profile)) throw PreconditionError("sum: profile mismatch");
        if (i && family[i - 1].index >= s.index) throw PreconditionError("sum: indices must increase");
        zeta = std::max(zeta, s.index);
        j_size = std::max(j_size, s.model.j_size());
        for (const auto& n : s.model.nodes())
            if (n.size()) zeta = std::max(zeta, *std::max_element(n.entry(0).begin(), n.entry(0).end()));
    }
    zeta += 1;
    std::vector<IndexNode> nodes{IndexNode::root()};
    for (const auto& s : family) {
        Ordinal shift = zeta * s.index;
        j_size = std::max(j_size, zeta * (s.index + 1));
        for (const auto& n : s.model.nodes()) {
            if (n.is_root()) continue;
            auto e = n.entries();
            for (auto& v : e[0]) v += shift;
            nodes.emplace_back(std::move(e), n.kind());
        }
    }
    return IndexModel(profile, j_size, std::move(nodes));
}

IndexModel full_tree(const ArityProfile& profile, Ordinal j_size, const BranchPolicy& policy) {
    const unsigned d = profile.depth();
    std::vector<std::vector<Entry>> tuples(d);
    for (unsigned i = 0; i < d; ++i) {
        if (j_size < profile.arity(i))
            throw PreconditionError("J_size " + std::to_string(j_size) + " too small for an increasing " +
                                    std::to_string(profile.arity(i)) + "-tuple at level " + std::to_string(i));
        tuples[i] = increasing_tuples(j_size, profile.arity(i));
    }
    std::vector<IndexNode> nodes{IndexNode::root()};
    // prefixes[i] = all sequences of i tuples
    std::vector<std::vector<Entry>> prefix{{}};
    for (unsigned len = 0; len < d; ++len) {
        for (const auto& p : prefix)
            for (Ordinal t = 0; t < j_size; ++t) {
                auto e = p;
                e.push_back({t});
                nodes.emplace_back(std::move(e), NodeKind::Finite);
            }
        std::vector<std::vector<Entry>> next;
        for (const auto& p : prefix)
            for (const auto& tup : tuples[len]) {
                auto e = p;
                e.push_back(tup);
                next.push_back(std::move(e));
            }
        prefix = std::move(next);
    }
    if (policy.mode == BranchPolicy::Mode::All) {
        for (auto& p : prefix) nodes.emplace_back(std::move(p), NodeKind::Branch);
    } else if (policy.mode == BranchPolicy::Mode::Explicit) {
        for (const auto& b : policy.explicit_branches) {
            if (!b.is_branch()) throw PreconditionError("explicit branch list contains finite node " + b.str());
            nodes.push_back(b);
        }
    }
    return IndexModel(profile, j_size, std::move(nodes));
}

std::string canonical_form(const IndexModel& model) {
    std::vector<std::set<Ordinal>> values(model.depth());
    for (const auto& n : model.nodes())
        for (std::size_t i = 0; i < n.size(); ++i) values[i].insert(n.entry(i).begin(), n.entry(i).end());
    std::vector<std::map<Ordinal, Ordinal>> rank(model.depth());
    for (std::size_t i = 0; i < values.size(); ++i) {
        Ordinal r = 0;
        for (Ordinal v : values[i]) rank[i][v] = r++;
    }
    std::vector<IndexNode> nodes;
    for (const auto& n : model.nodes()) {
        auto e = n.entries();
        for (std::size_t i = 0; i < e.size(); ++i)
            for (auto& v : e[i]) v = rank[i][v];
        nodes.emplace_back(std::move(e), n.kind());
    }
    std::sort(nodes.begin(), nodes.end());
    std::string s = "h=" + model.profile().str() + "\n";
    for (const auto& n : nodes) s += n.str() + "\n";
    return s;
}

std::vector<IndexModel> enumerate_closed_models(const ArityProfile& profile, Ordinal j_size, std::size_t max_nodes,
                                                std::size_t max_branches) {
    auto full = full_tree(profile, j_size, BranchPolicy::all());
    std::vector<IndexNode> order(full.nodes().begin(), full.nodes().end());
    // requirements always come earlier in this order
    std::stable_sort(order.begin(), order.end(), [](const IndexNode& a, const IndexNode& b) {
        return std::pair(a.is_branch(), a.size()) < std::pair(b.is_branch(), b.size());
    });
    std::map<IndexNode, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::vector<std::vector<std::size_t>> needs(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        for (const auto& r : res_requirements(profile, order[i])) needs[i].push_back(pos.at(r));

    std::vector<IndexModel> out;
    std::vector<char> in(order.size(), 0);
    std::vector<IndexNode> chosen;
    std::size_t branches = 0;
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == order.size()) {
            out.emplace_back(profile, j_size, chosen);
            return;
        }
        self(self, k + 1);
        if (chosen.size() >= max_nodes) return;
        if (order[k].is_branch() && branches >= max_branches) return;
        for (auto r : needs[k])
            if (!in[r]) return;
        in[k] = 1;
        chosen.push_back(order[k]);
        branches += order[k].is_branch();
        self(self, k + 1);
        branches -= order[k].is_branch();
        chosen.pop_back();
        in[k] = 0;
    };
    // root first and mandatory
    in[0] = 1;
    chosen.push_back(order[0]);
    rec(rec, 1);
    return out;
}

}  // namespace fpba
