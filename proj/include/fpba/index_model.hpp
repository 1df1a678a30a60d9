#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fpba {

using Ordinal = std::uint32_t;
// One level of a node: a strictly increasing tuple, or a single-value tip.
using Entry = std::vector<Ordinal>;

class ArityProfile {
public:
    explicit ArityProfile(std::vector<unsigned> h);
    static ArityProfile constant(unsigned depth, unsigned arity);

    unsigned depth() const { return static_cast<unsigned>(h_.size()); }
    unsigned arity(std::size_t level) const { return h_.at(level); }
    const std::vector<unsigned>& arities() const { return h_; }
    unsigned max_arity() const;
    bool is_constant(unsigned k) const;
    std::string str() const;

    bool operator==(const ArityProfile&) const = default;

private:
    std::vector<unsigned> h_;
};

enum class NodeKind : std::uint8_t { Finite, Branch };

// A finite node of length n stores n entries: n-1 tuples and a final tip.
// A branch stores D tuples and stands for an element of the omega level.
// The root is the finite node with no entries.
class IndexNode {
public:
    IndexNode() = default;
    IndexNode(std::vector<Entry> entries, NodeKind kind);

    static IndexNode root() { return {}; }
    static IndexNode finite(std::vector<Entry> tuples, Ordinal tip);
    static IndexNode branch(std::vector<Entry> tuples);

    bool is_root() const { return kind_ == NodeKind::Finite && entries_.empty(); }
    bool is_branch() const { return kind_ == NodeKind::Branch; }
    NodeKind kind() const { return kind_; }
    // Length of a finite node; number of stored tuples of a branch.
    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    const Entry& entry(std::size_t i) const { return entries_.at(i); }
    std::optional<Ordinal> tip() const;

    // Finite node made of the first n entries (the caller guarantees the
    // last of them is a legal tip).
    IndexNode truncate(std::size_t n) const;
    // Finite node with one more entry appended.
    IndexNode extend(Entry next) const;

    std::string str() const;
    static IndexNode parse(std::string_view text);

    auto operator<=>(const IndexNode&) const = default;
    bool operator==(const IndexNode&) const = default;

private:
    std::vector<Entry> entries_;
    NodeKind kind_ = NodeKind::Finite;
};

// Empty string when legal, otherwise a reason.
std::string node_shape_error(const ArityProfile& profile, Ordinal j_size, const IndexNode& node);

IndexNode res(const ArityProfile& profile, const IndexNode& node, std::size_t level, std::size_t coord);

// Every res(node, i, m) demanded by the closure clause, without node itself.
std::vector<IndexNode> res_requirements(const ArityProfile& profile, const IndexNode& node);

class IndexModel {
public:
    // Validates shapes, root membership and Res-closure; nodes are sorted and deduplicated.
    IndexModel(ArityProfile profile, Ordinal j_size, std::vector<IndexNode> nodes);

    const ArityProfile& profile() const { return profile_; }
    Ordinal j_size() const { return j_size_; }
    unsigned depth() const { return profile_.depth(); }
    std::span<const IndexNode> nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    bool contains(const IndexNode& node) const;
    std::optional<std::size_t> index_of(const IndexNode& node) const;
    std::vector<IndexNode> branches() const;

    std::string str() const;
    static IndexModel parse(std::string_view text);
    static IndexModel load(const std::filesystem::path& path);

    bool operator==(const IndexModel&) const = default;

private:
    ArityProfile profile_;
    Ordinal j_size_;
    std::vector<IndexNode> nodes_;
};

// The relations of an index model. All are pure predicates on nodes.
bool initial_segment(const IndexNode& a, const IndexNode& b);         // a ⊴ b
bool proper_initial_segment(const IndexNode& a, const IndexNode& b);  // a ◁ b
bool in_level(const IndexNode& node, std::size_t level);              // P_level, finite levels
bool in_omega_level(const IndexNode& node);                           // P_omega
bool less_1(const IndexNode& a, const IndexNode& b);
bool eq_level(const IndexNode& a, const IndexNode& b, std::size_t level);
bool suc(const ArityProfile& profile, const IndexNode& a, const IndexNode& b, std::size_t level,
         std::size_t coord);
// h ≡ 2 only: successor through the left / right coordinate at some level.
bool suc_left(const ArityProfile& profile, const IndexNode& a, const IndexNode& b);
bool suc_right(const ArityProfile& profile, const IndexNode& a, const IndexNode& b);

struct Summand {
    Ordinal index;
    IndexModel model;
};

// Ordered sum with the level-0 shift; indices must be strictly increasing.
IndexModel sum(const ArityProfile& profile, std::span<const Summand> family);

struct BranchPolicy {
    enum class Mode { All, None, Explicit } mode = Mode::All;
    std::vector<IndexNode> explicit_branches;

    static BranchPolicy all() { return {}; }
    static BranchPolicy none() { return {Mode::None, {}}; }
    static BranchPolicy only(std::vector<IndexNode> b) { return {Mode::Explicit, std::move(b)}; }
};

IndexModel full_tree(const ArityProfile& profile, Ordinal j_size, const BranchPolicy& policy);

// Label-forgetting normal form: coordinates at each level replaced by their rank.
std::string canonical_form(const IndexModel& model);

// Every Res-closed subset of full_tree(profile, j_size, all) that contains the
// root, has at most max_nodes nodes and at most max_branches branches.
std::vector<IndexModel> enumerate_closed_models(const ArityProfile& profile, Ordinal j_size,
                                                std::size_t max_nodes,
                                                std::size_t max_branches = SIZE_MAX);

}  // namespace fpba
