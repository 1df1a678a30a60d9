#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

using fpba::Element;
using fpba::Term;

bool eval(const Term& t, const Valuation& v) {
    switch (t.op()) {
        case Term::Op::Zero: return false;
        case Term::Op::One: return true;
        case Term::Op::Gen: {
            auto it = v.find(t.generator());
            if (it == v.end()) throw std::logic_error("unassigned generator " + t.generator().str());
            return it->second;
        }
        case Term::Op::Not: return !eval(t.children()[0], v);
        case Term::Op::And:
            for (const auto& c : t.children())
                if (!eval(c, v)) return false;
            return true;
        case Term::Op::Or:
            for (const auto& c : t.children())
                if (eval(c, v)) return true;
            return false;
    }
    return false;
}

std::vector<Valuation> respecting(const fpba::Presentation& p) {
    const auto gens = p.generators();
    if (gens.size() > 20) throw std::logic_error("oracle limited to 20 generators");
    std::vector<Valuation> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << gens.size()); ++m) {
        Valuation v;
        for (std::size_t i = 0; i < gens.size(); ++i) v[gens[i]] = (m >> i) & 1;
        bool ok = true;
        for (const auto& r : p.relations())
            if (eval(r, v)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(std::move(v));
    }
    return out;
}

std::size_t point_count(const fpba::Presentation& p) { return respecting(p).size(); }

bool is_zero(const fpba::Presentation& p, const Term& t) {
    for (const auto& v : respecting(p))
        if (eval(t, v)) return false;
    return true;
}

Element element_of_mask(std::size_t universe, std::uint64_t mask) {
    Element e(universe);
    for (std::size_t i = 0; i < universe; ++i)
        if ((mask >> i) & 1) e.set(i);
    return e;
}

std::vector<Element> all_elements(std::size_t points) {
    std::vector<Element> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << points); ++m) out.push_back(element_of_mask(points, m));
    return out;
}

bool is_homomorphism(const fpba::Morphism& f) {
    const auto elems = all_elements(f.source_points());
    if (f.apply(Element::full(f.source_points())) != Element::full(f.target_points())) return false;
    for (const auto& x : elems) {
        if (f.apply(~x) != ~f.apply(x)) return false;
        for (const auto& y : elems)
            if (f.apply(x & y) != (f.apply(x) & f.apply(y))) return false;
    }
    return true;
}

bool injective_on_elements(const fpba::Morphism& f) {
    std::vector<Element> images;
    for (const auto& x : all_elements(f.source_points())) images.push_back(f.apply(x));
    std::sort(images.begin(), images.end());
    return std::adjacent_find(images.begin(), images.end()) == images.end();
}

bool surjective_on_elements(const fpba::Morphism& f) {
    std::vector<Element> images;
    for (const auto& x : all_elements(f.source_points())) images.push_back(f.apply(x));
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    return images.size() == (std::size_t{1} << f.target_points());
}

std::size_t longest_chain_powerset(std::size_t points) {
    const std::uint64_t n = std::uint64_t{1} << points;
    std::vector<std::size_t> best(n, 1);
    std::size_t top = 1;
    // masks in increasing numeric order visit every proper subset first
    for (std::uint64_t x = 0; x < n; ++x) {
        for (std::uint64_t y = (x - 1) & x; y != x; y = (y - 1) & x) {
            best[x] = std::max(best[x], best[y] + 1);
            if (y == 0) break;
        }
        top = std::max(top, best[x]);
    }
    return top;
}

}  // namespace oracle
