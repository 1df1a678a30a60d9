#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fpba/index_model.hpp"

namespace fpba {

struct BaseAtom {
    std::size_t k = 0;
    auto operator<=>(const BaseAtom&) const = default;
};

// x_η for a node, an atom of a base algebra, or a plain name used by
// derived algebras (products, surgeries).
class GeneratorId {
public:
    GeneratorId() = default;
    static GeneratorId node(IndexNode n) { return GeneratorId(std::move(n)); }
    static GeneratorId atom(std::size_t k) { return GeneratorId(BaseAtom{k}); }
    static GeneratorId named(std::string s) { return GeneratorId(std::move(s)); }

    const IndexNode* as_node() const { return std::get_if<IndexNode>(&v_); }
    const BaseAtom* as_atom() const { return std::get_if<BaseAtom>(&v_); }
    const std::string* as_name() const { return std::get_if<std::string>(&v_); }

    // "x:<node>", "a:<k>" or "g:<name>"
    std::string str() const;
    static GeneratorId parse(std::string_view text);

    auto operator<=>(const GeneratorId&) const = default;
    bool operator==(const GeneratorId&) const = default;

private:
    template <class T>
    explicit GeneratorId(T v) : v_(std::move(v)) {}
    std::variant<IndexNode, BaseAtom, std::string> v_;
};

class Term {
public:
    enum class Op : std::uint8_t { Zero, One, Gen, Not, And, Or };

    Term() = default;  // the constant 0
    static Term zero() { return Term(Op::Zero); }
    static Term one() { return Term(Op::One); }
    static Term gen(GeneratorId id);
    static Term x(IndexNode n) { return gen(GeneratorId::node(std::move(n))); }
    static Term atom(std::size_t k) { return gen(GeneratorId::atom(k)); }
    static Term negate(Term t);
    // Empty meet is 1, empty join is 0; singletons are returned unchanged.
    static Term meet(std::vector<Term> ts);
    static Term join(std::vector<Term> ts);

    Op op() const { return op_; }
    const GeneratorId& generator() const { return id_; }
    std::span<const Term> children() const { return kids_; }

    void collect_generators(std::set<GeneratorId>& out) const;
    std::string str() const;
    static Term parse(std::string_view text);

    bool operator==(const Term&) const = default;

private:
    explicit Term(Op op) : op_(op) {}
    Op op_ = Op::Zero;
    GeneratorId id_;
    std::vector<Term> kids_;
};

inline Term operator&(Term a, Term b) { return Term::meet({std::move(a), std::move(b)}); }
inline Term operator|(Term a, Term b) { return Term::join({std::move(a), std::move(b)}); }
inline Term operator~(Term a) { return Term::negate(std::move(a)); }
// a − b
inline Term minus(Term a, Term b) { return std::move(a) & ~std::move(b); }

}  // namespace fpba
