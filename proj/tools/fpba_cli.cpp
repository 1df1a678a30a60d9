#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fpba/algebra.hpp"
#include "fpba/chain_lab.hpp"
#include "fpba/combinators.hpp"
#include "fpba/errors.hpp"
#include "fpba/perfect_trees.hpp"
#include "fpba/rigidity_lab.hpp"
#include "fpba/suites.hpp"

using namespace fpba;
using nlohmann::json;

namespace {

struct Globals {
    std::string out;
    std::size_t budget_generators = 40;
    std::uint64_t seed = 1;
};

struct BuilderArgs {
    std::string tag = "tr";
    std::string g, e, abar;
    std::size_t base_atoms = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, sep);)
        if (!part.empty()) out.push_back(part);
    return out;
}

BuilderSpec make_spec(const BuilderArgs& b, const IndexModel& model) {
    BuilderSpec spec;
    spec.tag = parse_tag(b.tag);
    for (const auto& v : split_on(b.g, ',')) spec.g.push_back(static_cast<unsigned>(std::stoul(v)));
    if (!b.e.empty()) spec.e = EquivProfile::parse(b.e, model.profile());
    if (spec.tag == BuilderTag::Ba) {
        if (b.base_atoms == 0) throw PreconditionError("the ba builder needs --base <atoms>");
        spec.base = std::make_shared<const CanonicalAlgebra>(atoms_algebra(b.base_atoms));
        for (const auto& part : split_on(b.abar, ';')) spec.abar.push_back(Element::parse(b.base_atoms, part));
    }
    return spec;
}

struct Loaded {
    CanonicalAlgebra algebra;
    std::optional<IndexModel> model;
    std::optional<Presentation> presentation;
};

// atoms:<n> | free:<n> | pres:<file> | <model file>[@<tag>]
Loaded load_algebra(const std::string& spec, BuilderArgs b, const Globals& g) {
    RealizeOptions ro;
    ro.max_generators = g.budget_generators;
    auto number = [&](std::size_t from) { return static_cast<std::size_t>(std::stoul(spec.substr(from))); };
    if (spec.rfind("atoms:", 0) == 0) return {atoms_algebra(number(6)), std::nullopt, atom_partition(number(6))};
    if (spec.rfind("free:", 0) == 0) return {free_algebra(number(5)), std::nullopt, free_presentation(number(5))};
    if (spec.rfind("pres:", 0) == 0) {
        auto p = Presentation::parse(read_file(spec.substr(5)));
        auto a = realize(p, ro);
        return {std::move(a), p.model(), std::move(p)};
    }
    std::string path = spec;
    if (auto at = spec.rfind('@'); at != std::string::npos) {
        path = spec.substr(0, at);
        b.tag = spec.substr(at + 1);
    }
    auto model = IndexModel::load(path);
    auto p = build(make_spec(b, model), model);
    auto a = realize(p, ro);
    return {std::move(a), std::move(model), std::move(p)};
}

void add_builder_options(CLI::App* cmd, BuilderArgs& b) {
    cmd->add_option("--builder", b.tag, "tr|ptr|trh|trr|trhg|trhe|ba");
    cmd->add_option("--g", b.g, "levels for trhg, comma separated");
    cmd->add_option("--e", b.e, "e0|e1|e2 or u1|u2;… for trhe");
    cmd->add_option("--base", b.base_atoms, "atoms of the base algebra for ba");
    cmd->add_option("--abar", b.abar, "base elements for ba, e.g. {0};{1,2}");
}

void emit(const json& j, const Globals& g) {
    if (g.out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(g.out);
    if (!out) throw Error("cannot write " + g.out);
    out << j.dump(2) << "\n";
}

json stats_of(const CanonicalAlgebra& a) {
    return {{"points", a.num_points()},
            {"cardinality", cardinality(a)},
            {"atoms", atoms(a).size()},
            {"length", longest_chain(a).size},
            {"generators", a.num_generators()},
            {"provenance", a.provenance()}};
}

json assignment_json(const Assignment& as) {
    json j = json::object();
    for (const auto& [id, v] : as) j[id.str()] = v;
    return j;
}

// Conjunction of literals over node generators, when t has that shape.
bool literal_conjunction(const Term& t, std::vector<IndexNode>& pos, std::vector<IndexNode>& neg) {
    auto literal = [&](const Term& l) {
        if (l.op() == Term::Op::Gen && l.generator().as_node()) {
            pos.push_back(*l.generator().as_node());
            return true;
        }
        if (l.op() == Term::Op::Not && l.children()[0].op() == Term::Op::Gen && l.children()[0].generator().as_node()) {
            neg.push_back(*l.children()[0].generator().as_node());
            return true;
        }
        return false;
    };
    if (t.op() == Term::Op::And) {
        for (const auto& c : t.children())
            if (!literal(c)) return false;
        return true;
    }
    return literal(t);
}

int cmd_build(const std::string& model_path, const BuilderArgs& b, bool dump, const Globals& g) {
    auto model = IndexModel::load(model_path);
    auto p = build(make_spec(b, model), model);
    RealizeOptions ro;
    ro.max_generators = g.budget_generators;
    auto a = realize(p, ro);
    json j = stats_of(a);
    j["builder"] = tag_name(p.tag());
    j["model"] = model.str();
    j["relations"] = p.relations().size();
    if (dump) j["presentation"] = p.dump();
    std::cerr << tag_name(p.tag()) << ": " << a.num_points() << " points, " << a.num_generators() << " generators\n";
    emit(j, g);
    return 0;
}

struct CheckArgs {
    std::string query = "zero";
    std::string term, term2;
    std::vector<std::string> xs, base, exceptions;
    bool both = false;
};

int cmd_check(const std::string& spec, const BuilderArgs& b, const CheckArgs& c, const Globals& g) {
    auto loaded = load_algebra(spec, b, g);
    const auto& a = loaded.algebra;
    json j;
    j["query"] = c.query;
    int code = 0;
    if (c.query == "independence") {
        std::vector<GeneratorId> xs, base;
        std::vector<Term> ex;
        for (const auto& s : c.xs) xs.push_back(GeneratorId::parse(s));
        for (const auto& s : c.base) base.push_back(GeneratorId::parse(s));
        for (const auto& s : c.exceptions) ex.push_back(Term::parse(s));
        auto r = independence_check(a, xs, base, ex);
        j["independent"] = r.independent;
        j["valuations_checked"] = r.valuations_checked;
        if (r.counterexample) j["counterexample"] = assignment_json(*r.counterexample);
        emit(j, g);
        return 0;
    }
    if (c.term.empty()) throw PreconditionError("--term is required");
    Term s = Term::parse(c.term);
    Term probe;
    if (c.query == "zero") {
        probe = s;
    } else if (c.query == "leq" || c.query == "eq") {
        if (c.term2.empty()) throw PreconditionError("--term2 is required for " + c.query);
        Term t = Term::parse(c.term2);
        probe = c.query == "leq" ? minus(s, t) : (minus(s, t) | minus(t, s));
    } else {
        throw PreconditionError("unknown query '" + c.query + "'");
    }
    bool zero = is_zero(a, probe);
    j["verdict"] = zero;
    j["term"] = probe.str();
    if (!zero) {
        auto w = witness(a, probe);
        j["witness"] = assignment_json(*w);
        j["witness_value"] = evaluate_under(probe, *w);
    }
    std::vector<IndexNode> pos, neg;
    const bool has_closed = c.query == "zero" && loaded.model && loaded.presentation &&
                            (loaded.presentation->tag() == BuilderTag::Tr || loaded.presentation->tag() == BuilderTag::Ptr) &&
                            literal_conjunction(s, pos, neg);
    if (has_closed) {
        bool closed = loaded.presentation->tag() == BuilderTag::Tr ? closed_form_zero_tr(*loaded.model, pos, neg)
                                                                   : closed_form_zero_ptr(*loaded.model, pos, neg);
        j["closed_form"] = closed;
        j["agree"] = closed == zero;
        if (c.both && closed != zero) {
            std::cerr << "closed form and oracle disagree\n";
            code = 1;
        }
    } else {
        j["closed_form"] = nullptr;
        if (c.both) std::cerr << "closed form not applicable to this query\n";
    }
    std::cerr << c.query << ": " << (zero ? "holds" : "fails") << "\n";
    emit(j, g);
    return code;
}

int cmd_surgery(const std::string& b1_spec, const std::string& b_spec, const std::string& a_star,
                const BuilderArgs& b, const Globals& g) {
    auto b1 = load_algebra(b1_spec, b, g).algebra;
    auto bb = load_algebra(b_spec, b, g).algebra;
    auto a = Element::parse(b1.num_points(), a_star);
    auto s = surgery(b1, a, bb);
    std::size_t expected = (~a).count() + a.count() * bb.num_points();
    json j = stats_of(s.algebra);
    j["expected_points"] = expected;
    j["embedding_injective"] = s.embedding.is_injective();
    j["embedding"] = s.embedding.str();
    emit(j, g);
    return (s.algebra.num_points() == expected && s.embedding.is_injective()) ? 0 : 1;
}

int cmd_schedule(const std::string& path, const std::string& b0_spec, const BuilderArgs& b, const Globals& g) {
    auto b0 = load_algebra(b0_spec, b, g).algebra;
    auto steps = parse_schedule(read_file(path), std::filesystem::path(path).parent_path());
    RealizeOptions ro;
    ro.max_generators = g.budget_generators;
    auto r = sur_schedule(b0, steps, ro);
    json stages = json::array();
    bool ok = true;
    for (std::size_t i = 0; i < r.stages.size(); ++i) {
        json st = stats_of(r.stages[i]);
        if (i < r.embeddings.size()) {
            st["a_star"] = r.surgery_points[i].str();
            st["factor_points"] = r.factor_points[i];
            st["embedding_injective"] = r.embeddings[i].is_injective();
            ok = ok && r.embeddings[i].is_injective();
        }
        stages.push_back(std::move(st));
    }
    emit({{"stages", stages}}, g);
    return ok ? 0 : 1;
}

int cmd_quotient(const std::string& model_path, const std::vector<std::string>& ideal, const Globals& g) {
    auto model = IndexModel::load(model_path);
    RealizeOptions ro;
    ro.max_generators = g.budget_generators;
    auto a = realize(build_trr(model), ro);
    std::vector<Element> gens;
    for (const auto& s : ideal) gens.push_back(Element::parse(a.num_points(), s));
    auto j = Ideal::generated_by(a, gens);
    auto q = trr_quotient_index(model, a, j);
    auto v = verify_trr_quotient(model, a, j, q);
    auto nodes = [](const std::vector<IndexNode>& ns) {
        json arr = json::array();
        for (const auto& n : ns) arr.push_back(n.str());
        return arr;
    };
    json out;
    out["points"] = a.num_points();
    out["ideal"] = j.support.str();
    out["degenerate"] = q.degenerate;
    out["index"] = q.index ? json(q.index->str()) : json(nullptr);
    out["i1"] = nodes(q.i1);
    out["a0"] = nodes(q.a0);
    out["a1"] = nodes(q.a1);
    out["added"] = nodes(q.added);
    out["coroot_repair"] = q.coroot_repair;
    out["removed"] = nodes(q.removed);
    out["isomorphic"] = v.isomorphic;
    out["quotient_points"] = v.quotient_points;
    out["rebuilt_points"] = v.rebuilt_points;
    if (v.iso) out["isomorphism"] = v.iso->str();
    if (!v.detail.empty()) out["detail"] = v.detail;
    emit(out, g);
    return (v.isomorphic || q.degenerate) ? 0 : 1;
}

int cmd_trees(unsigned depth, const std::string& order, bool dump, const Globals& g) {
    BandOrder o = order == "as-printed" ? BandOrder::AsPrinted : BandOrder::Repaired;
    if (order != "as-printed" && order != "repaired") throw PreconditionError("unknown band order '" + order + "'");
    auto f = build_family(depth, o);
    auto rep = verify_family(f);
    json j = rep.to_json();
    j["k"] = f.k;
    j["k1"] = f.k1;
    if (dump) j["family"] = f.to_json();
    for (const auto& c : rep.checks)
        std::cerr << c.name << ": " << (c.pass ? "pass" : "FAIL " + c.violation) << "\n";
    emit(j, g);
    return rep.pass() ? 0 : 1;
}

int cmd_suite(const std::string& name, unsigned depth, unsigned threads, const Globals& g) {
    SuiteOptions o;
    o.seed = g.seed;
    o.depth = depth;
    o.threads = threads;
    o.budget_generators = g.budget_generators;
    auto r = run_suite(name, o);
    std::cerr << r.suite << ": " << r.instances << " instances, " << r.failures.size() << " failures, "
              << r.seconds << " s\n";
    emit(r.to_json(), g);
    return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finitely presented Boolean algebras over index models"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--out", g.out, "write the JSON report here instead of stdout");
    app.add_option("--budget-generators", g.budget_generators, "largest presentation realize accepts")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "seed for randomized suites");

    BuilderArgs b;
    std::string model_path, spec, spec2, a_star, order = "repaired", b0 = "atoms:1", suite;
    bool dump = false;
    unsigned depth = 5, threads = 0;
    CheckArgs c;
    std::vector<std::string> ideal;

    auto* build = app.add_subcommand("build", "build a presentation from an index model and realize it");
    build->add_option("model", model_path)->required();
    add_builder_options(build, b);
    build->add_flag("--dump", dump, "include the presentation text");

    auto* check = app.add_subcommand("check", "decide zero, leq, eq or independence");
    check->add_option("algebra", spec, "atoms:n | free:n | pres:<file> | <model>[@<tag>]")->required();
    add_builder_options(check, b);
    check->add_option("--query", c.query, "zero|leq|eq|independence");
    check->add_option("--term", c.term);
    check->add_option("--term2", c.term2);
    check->add_option("--x", c.xs, "generator of the independent family (repeatable)");
    check->add_option("--base-gen", c.base, "base generator (repeatable)");
    check->add_option("--exception", c.exceptions, "term allowed to vanish (repeatable)");
    check->add_flag("--oracle-and-closed-form", c.both, "fail when the closed form disagrees with the oracle");

    auto* stats = app.add_subcommand("stats", "points, cardinality, atoms and length of an algebra");
    stats->add_option("algebra", spec)->required();
    add_builder_options(stats, b);

    auto* surg = app.add_subcommand("surgery", "[B1 ↾ -a*] × [(B1 ↾ a*) * B]");
    surg->add_option("b1", spec)->required();
    surg->add_option("b", spec2)->required();
    surg->add_option("--a-star", a_star, "element of B1, e.g. {0,2}")->required();
    add_builder_options(surg, b);

    auto* sched = app.add_subcommand("schedule", "run a surgery schedule file");
    sched->add_option("file", model_path)->required();
    sched->add_option("--b0", b0, "starting algebra");
    add_builder_options(sched, b);

    auto* quot = app.add_subcommand("quotient", "normal form of a trr algebra modulo an ideal");
    quot->add_option("model", model_path)->required();
    quot->add_option("--ideal", ideal, "ideal generator as a point set (repeatable)")->required();

    auto* trees = app.add_subcommand("trees", "build and verify the perfect tree family");
    trees->add_option("--depth", depth)->check(CLI::Range(0u, max_tree_depth));
    trees->add_option("--order", order, "repaired|as-printed");
    trees->add_flag("--dump", dump, "include the family");

    auto* suite_cmd = app.add_subcommand("suite", "run a property suite");
    suite_cmd->add_option("name", suite)->required();
    suite_cmd->add_option("--depth", depth, "tree depth for the trees suite")->check(CLI::Range(0u, max_tree_depth));
    suite_cmd->add_option("--threads", threads, "worker threads, 0 for all cores");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // help and version exit 0, every other usage error exits 2
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*build) return cmd_build(model_path, b, dump, g);
        if (*check) return cmd_check(spec, b, c, g);
        if (*stats) {
            emit(stats_of(load_algebra(spec, b, g).algebra), g);
            return 0;
        }
        if (*surg) return cmd_surgery(spec, spec2, a_star, b, g);
        if (*sched) return cmd_schedule(model_path, b0, b, g);
        if (*quot) return cmd_quotient(model_path, ideal, g);
        if (*trees) return cmd_trees(depth, order, dump, g);
        if (*suite_cmd) {
            if (!is_suite(suite)) {
                std::cerr << "unknown suite '" << suite << "'; expected one of:";
                for (const auto& n : suite_names()) std::cerr << " " << n;
                std::cerr << "\n";
                return 2;
            }
            return cmd_suite(suite, depth, threads, g);
        }
    } catch (const PropertyViolation& e) {
        std::cerr << "property violation: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
