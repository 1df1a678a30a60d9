#include "fpba/term.hpp"

#include <charconv>

#include "fpba/errors.hpp"

namespace fpba {

std::string GeneratorId::str() const {
    if (auto n = as_node()) return "x:" + n->str();
    if (auto a = as_atom()) return "a:" + std::to_string(a->k);
    return "g:" + *as_name();
}

GeneratorId GeneratorId::parse(std::string_view text) {
    if (text.size() < 3 || text[1] != ':') throw ParseError("bad generator '" + std::string(text) + "'");
    auto body = text.substr(2);
    switch (text[0]) {
        case 'x':
            return node(IndexNode::parse(body));
        case 'a': {
            std::size_t k = 0;
            auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), k);
            if (ec != std::errc{} || p != body.data() + body.size())
                throw ParseError("bad atom index '" + std::string(body) + "'");
            return atom(k);
        }
        case 'g':
            return named(std::string(body));
        default:
            throw ParseError("bad generator '" + std::string(text) + "'");
    }
}

Term Term::gen(GeneratorId id) {
    Term t(Op::Gen);
    t.id_ = std::move(id);
    return t;
}

Term Term::negate(Term t) {
    Term n(Op::Not);
    n.kids_.push_back(std::move(t));
    return n;
}

Term Term::meet(std::vector<Term> ts) {
    if (ts.empty()) return one();
    if (ts.size() == 1) return std::move(ts.front());
    Term t(Op::And);
    t.kids_ = std::move(ts);
    return t;
}

Term Term::join(std::vector<Term> ts) {
    if (ts.empty()) return zero();
    if (ts.size() == 1) return std::move(ts.front());
    Term t(Op::Or);
    t.kids_ = std::move(ts);
    return t;
}

void Term::collect_generators(std::set<GeneratorId>& out) const {
    if (op_ == Op::Gen) out.insert(id_);
    for (const auto& k : kids_) k.collect_generators(out);
}

std::string Term::str() const {
    switch (op_) {
        case Op::Zero: return "0";
        case Op::One: return "1";
        case Op::Gen: return id_.str();
        default: break;
    }
    std::string s = op_ == Op::Not ? "(not" : op_ == Op::And ? "(and" : "(or";
    for (const auto& k : kids_) s += " " + k.str();
    return s + ")";
}

namespace {

struct Parser {
    std::string_view s;
    std::size_t i = 0;

    void skip() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    }
    std::string_view word() {
        std::size_t start = i;
        while (i < s.size() && s[i] != '(' && s[i] != ')' && s[i] != ' ' && s[i] != '\t' && s[i] != '\n' &&
               s[i] != '\r')
            ++i;
        return s.substr(start, i - start);
    }
    Term term() {
        skip();
        if (i >= s.size()) throw ParseError("unexpected end of term");
        if (s[i] == ')') throw ParseError("unexpected ')'");
        if (s[i] != '(') {
            auto w = word();
            if (w == "0") return Term::zero();
            if (w == "1") return Term::one();
            return Term::gen(GeneratorId::parse(w));
        }
        ++i;
        skip();
        auto op = word();
        std::vector<Term> kids;
        for (;;) {
            skip();
            if (i >= s.size()) throw ParseError("missing ')'");
            if (s[i] == ')') {
                ++i;
                break;
            }
            kids.push_back(term());
        }
        if (op == "not") {
            if (kids.size() != 1) throw ParseError("'not' takes one argument");
            return Term::negate(std::move(kids.front()));
        }
        if (op == "and") return Term::meet(std::move(kids));
        if (op == "or") return Term::join(std::move(kids));
        throw ParseError("unknown operator '" + std::string(op) + "'");
    }
};

}  // namespace

Term Term::parse(std::string_view text) {
    Parser p{text};
    Term t = p.term();
    p.skip();
    if (p.i != text.size()) throw ParseError("trailing input after term");
    return t;
}

}  // namespace fpba
