#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fpba {

// A set of points of a finite algebra, i.e. an element of its canonical
// power-set model. universe() is the number of points of the owning algebra.
class Element {
public:
    Element() = default;
    explicit Element(std::size_t universe);

    static Element full(std::size_t universe);
    static Element singleton(std::size_t universe, std::size_t point);
    static Element of(std::size_t universe, std::span<const std::size_t> points);

    std::size_t universe() const { return n_; }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::size_t count() const;
    bool none() const;
    bool any() const { return !none(); }
    bool all() const { return count() == n_; }
    std::optional<std::size_t> first() const;
    std::vector<std::size_t> points() const;

    bool subset_of(const Element& o) const;
    bool intersects(const Element& o) const;

    Element& operator&=(const Element& o);
    Element& operator|=(const Element& o);
    Element operator~() const;

    friend Element operator&(Element a, const Element& b) { return a &= b; }
    friend Element operator|(Element a, const Element& b) { return a |= b; }
    friend Element operator-(Element a, const Element& b) { return a &= ~b; }

    bool operator==(const Element&) const = default;
    // Order by universe, then by sorted point list.
    bool operator<(const Element& o) const;

    // "{0,2,3}"
    std::string str() const;
    static Element parse(std::size_t universe, std::string_view text);

    std::size_t hash() const;

private:
    void check_same(const Element& o) const;
    void trim();
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct ElementHash {
    std::size_t operator()(const Element& e) const { return e.hash(); }
};

}  // namespace fpba
