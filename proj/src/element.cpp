#include "fpba/element.hpp"

#include <bit>
#include <charconv>

#include "fpba/errors.hpp"

namespace fpba {

Element::Element(std::size_t universe) : n_(universe), w_((universe + 63) / 64, 0) {}

Element Element::full(std::size_t universe) {
    Element e(universe);
    for (auto& w : e.w_) w = ~std::uint64_t{0};
    e.trim();
    return e;
}

Element Element::singleton(std::size_t universe, std::size_t point) {
    Element e(universe);
    if (point >= universe) throw PreconditionError("point index out of range");
    e.set(point);
    return e;
}

Element Element::of(std::size_t universe, std::span<const std::size_t> points) {
    Element e(universe);
    for (auto p : points) {
        if (p >= universe) throw PreconditionError("point index out of range");
        e.set(p);
    }
    return e;
}

void Element::trim() {
    if (n_ & 63) w_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
}

void Element::check_same(const Element& o) const {
    if (n_ != o.n_) throw PreconditionError("elements of different algebras");
}

std::size_t Element::count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool Element::none() const {
    for (auto w : w_)
        if (w) return false;
    return true;
}

std::optional<std::size_t> Element::first() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w_[i]));
    return std::nullopt;
}

std::vector<std::size_t> Element::points() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        auto w = w_[i];
        while (w) {
            out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

bool Element::subset_of(const Element& o) const {
    check_same(o);
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i] & ~o.w_[i]) return false;
    return true;
}

bool Element::intersects(const Element& o) const {
    check_same(o);
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i] & o.w_[i]) return true;
    return false;
}

Element& Element::operator&=(const Element& o) {
    check_same(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
}

Element& Element::operator|=(const Element& o) {
    check_same(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
}

Element Element::operator~() const {
    Element e = *this;
    for (auto& w : e.w_) w = ~w;
    e.trim();
    return e;
}

bool Element::operator<(const Element& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return points() < o.points();
}

std::string Element::str() const {
    std::string s = "{";
    bool firstp = true;
    for (auto p : points()) {
        if (!firstp) s += ',';
        firstp = false;
        s += std::to_string(p);
    }
    return s + "}";
}

Element Element::parse(std::size_t universe, std::string_view text) {
    auto t = text;
    while (!t.empty() && t.front() == ' ') t.remove_prefix(1);
    while (!t.empty() && t.back() == ' ') t.remove_suffix(1);
    if (t.size() < 2 || t.front() != '{' || t.back() != '}') throw ParseError("element literal must look like {0,2}");
    t = t.substr(1, t.size() - 2);
    Element e(universe);
    std::size_t start = 0;
    while (start < t.size()) {
        auto end = t.find(',', start);
        if (end == std::string_view::npos) end = t.size();
        auto part = t.substr(start, end - start);
        while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
        while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
        std::size_t p = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), p);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size())
            throw ParseError("bad point index '" + std::string(part) + "'");
        if (p >= universe) throw ParseError("point " + std::to_string(p) + " out of range");
        e.set(p);
        start = end + 1;
    }
    return e;
}

std::size_t Element::hash() const {
    std::size_t h = n_ * 0x9e3779b97f4a7c15ULL;
    for (auto w : w_) h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

}  // namespace fpba
