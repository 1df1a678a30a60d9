#include "fpba/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "fpba/algebra.hpp"
#include "fpba/chain_lab.hpp"
#include "fpba/combinators.hpp"
#include "fpba/errors.hpp"
#include "fpba/perfect_trees.hpp"
#include "fpba/rigidity_lab.hpp"

namespace fpba {

namespace {

constexpr std::size_t listed_failures = 50;

Element from_mask(std::size_t universe, std::uint64_t mask) {
    Element e(universe);
    for (std::size_t i = 0; i < universe; ++i)
        if (mask >> i & 1) e.set(i);
    return e;
}

std::vector<Element> all_elements(std::size_t points) {
    std::vector<Element> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << points); ++m) out.push_back(from_mask(points, m));
    return out;
}

// Per-instance results are kept by index, so the merged report does not depend
// on scheduling.
struct Partial {
    std::size_t instances = 0;
    std::vector<std::string> failures;
    std::map<std::string, std::size_t> counters;
};

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t, Partial&)>& body,
                  SuiteReport& report, std::map<std::string, std::size_t>* counters = nullptr) {
    std::vector<Partial> parts(n);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                body(i, parts[i]);
            } catch (const Error& e) {
                parts[i].failures.push_back(std::string("exception: ") + e.what());
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (err) std::rethrow_exception(err);
    for (auto& p : parts) {
        report.instances += p.instances;
        for (auto& f : p.failures) report.failures.push_back(std::move(f));
        if (counters)
            for (const auto& [k, v] : p.counters) (*counters)[k] += v;
    }
}

template <class F>
SuiteReport timed(std::string name, const SuiteOptions& opts, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteReport r;
    r.suite = std::move(name);
    r.seed = opts.seed;
    body(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<IndexModel> dedupe(std::vector<IndexModel> models) {
    std::set<std::string> seen;
    std::vector<IndexModel> out;
    for (auto& m : models)
        if (seen.insert(canonical_form(m)).second) out.push_back(std::move(m));
    return out;
}

std::string pattern_str(std::span<const IndexNode> pos, std::span<const IndexNode> neg) {
    std::string s;
    for (const auto& n : pos) s += " +" + n.str();
    for (const auto& n : neg) s += " -" + n.str();
    return s;
}

void sweep_closed_form(SuiteReport& r, const std::vector<IndexModel>& models, BuilderTag tag, std::size_t max_literals,
                       const SuiteOptions& opts) {
    std::map<std::string, std::size_t> counters;
    const std::string name = tag_name(tag);
    const std::size_t before = r.instances;
    const std::size_t failures_before = r.failures.size();
    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(
        models.size(), opts.threads,
        [&](std::size_t mi, Partial& part) {
            const auto& model = models[mi];
            RealizeOptions ro;
            ro.max_generators = opts.budget_generators;
            auto a = realize(tag == BuilderTag::Tr ? build_tr(model) : build_ptr(model), ro);
            const auto nodes = model.nodes();
            std::vector<std::size_t> idx;
            for (const auto& n : nodes) idx.push_back(*a.generator_index(GeneratorId::node(n)));
            std::vector<std::size_t> pos_i, neg_i;
            std::vector<IndexNode> pos_n, neg_n;
            auto check = [&] {
                ++part.instances;
                bool oracle = literals_zero(a, pos_i, neg_i);
                bool closed = tag == BuilderTag::Tr ? closed_form_zero_tr(model, pos_n, neg_n)
                                                    : closed_form_zero_ptr(model, pos_n, neg_n);
                if (oracle != closed && part.failures.size() < 5)
                    part.failures.push_back(name + " model " + model.str() + ":" + pattern_str(pos_n, neg_n) +
                                            " oracle " + (oracle ? "zero" : "nonzero") + ", closed form " +
                                            (closed ? "zero" : "nonzero"));
            };
            auto rec = [&](auto&& self, std::size_t from) -> void {
                check();
                if (pos_i.size() + neg_i.size() == max_literals) return;
                for (std::size_t i = from; i < nodes.size(); ++i) {
                    pos_i.push_back(idx[i]);
                    pos_n.push_back(nodes[i]);
                    self(self, i + 1);
                    pos_i.pop_back();
                    pos_n.pop_back();
                    neg_i.push_back(idx[i]);
                    neg_n.push_back(nodes[i]);
                    self(self, i + 1);
                    neg_i.pop_back();
                    neg_n.pop_back();
                }
            };
            rec(rec, 0);
        },
        r, &counters);
    r.details[name] = {{"models", models.size()},
                       {"patterns", r.instances - before},
                       {"failures", r.failures.size() - failures_before},
                       {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
}

std::vector<IndexModel> tr_corpus() {
    std::vector<IndexModel> out;
    for (unsigned d = 1; d <= 3; ++d)
        for (Ordinal j = 1; j <= 2; ++j)
            for (auto& m : enumerate_closed_models(ArityProfile::constant(d, 1), j, 6)) out.push_back(std::move(m));
    return out;
}

std::vector<IndexModel> ptr_corpus() {
    std::vector<IndexModel> out;
    for (unsigned d = 1; d <= 2; ++d)
        for (Ordinal j = 2; j <= 3; ++j)
            for (auto& m : enumerate_closed_models(ArityProfile::constant(d, 2), j, SIZE_MAX, 2))
                out.push_back(std::move(m));
    return out;
}

std::vector<CanonicalAlgebra> small_algebras(std::size_t max_points) {
    std::vector<CanonicalAlgebra> out;
    for (std::size_t n = 1; n <= max_points; ++n) out.push_back(atoms_algebra(n));
    for (std::size_t n = 1; (std::size_t{1} << n) <= max_points; ++n) out.push_back(free_algebra(n));
    for (unsigned d = 1; d <= 2; ++d)
        for (auto& m : enumerate_closed_models(ArityProfile::constant(d, 1), 2, 5)) {
            for (auto tag : {BuilderTag::Tr, BuilderTag::Trr}) {
                auto a = realize(tag == BuilderTag::Tr ? build_tr(m) : build_trr(m));
                if (a.num_points() <= max_points) out.push_back(std::move(a));
            }
        }
    return out;
}

Term random_term(std::mt19937_64& rng, std::size_t gens, unsigned depth) {
    std::uniform_int_distribution<int> kind(0, depth == 0 ? 0 : 3);
    switch (kind(rng)) {
        case 0: {
            std::uniform_int_distribution<std::size_t> g(0, gens - 1);
            Term t = Term::gen(GeneratorId::named("g" + std::to_string(g(rng))));
            return std::bernoulli_distribution(0.3)(rng) ? ~t : t;
        }
        case 1: return ~random_term(rng, gens, depth - 1);
        case 2: {
            Term l = random_term(rng, gens, depth - 1);
            return l & random_term(rng, gens, depth - 1);
        }
        default: {
            Term l = random_term(rng, gens, depth - 1);
            return l | random_term(rng, gens, depth - 1);
        }
    }
}

bool strictly_increasing(std::span<const Element> chain) {
    for (std::size_t i = 1; i < chain.size(); ++i)
        if (!chain[i - 1].subset_of(chain[i]) || chain[i - 1] == chain[i]) return false;
    return true;
}

}  // namespace

nlohmann::json SuiteReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["seed"] = seed;
    j["instances"] = instances;
    j["failure_count"] = failures.size();
    std::vector<std::string> shown(failures.begin(),
                                   failures.begin() + static_cast<std::ptrdiff_t>(std::min(failures.size(), listed_failures)));
    j["failures"] = shown;
    j["details"] = details;
    j["seconds"] = seconds;
    j["pass"] = pass();
    return j;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"oracle-vs-closed-form", "surgery", "ba-ext", "trr-quotient",
                                                "trees", "chains", "rigidity"};
    return names;
}

bool is_suite(std::string_view name) {
    const auto& n = suite_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

SuiteReport run_suite(std::string_view name, const SuiteOptions& opts) {
    if (name == "oracle-vs-closed-form") return suite_closed_form(opts);
    if (name == "surgery") return suite_surgery(opts);
    if (name == "ba-ext") return suite_ba_ext(opts);
    if (name == "trr-quotient") return suite_trr_quotient(opts);
    if (name == "trees") return suite_trees(opts);
    if (name == "chains") return suite_chains(opts);
    if (name == "rigidity") return suite_rigidity(opts);
    throw PreconditionError("unknown suite '" + std::string(name) + "'");
}

SuiteReport suite_closed_form(const SuiteOptions& opts) {
    return timed("oracle-vs-closed-form", opts, [&](SuiteReport& r) {
        sweep_closed_form(r, tr_corpus(), BuilderTag::Tr, 4, opts);
        sweep_closed_form(r, ptr_corpus(), BuilderTag::Ptr, 4, opts);
    });
}

SuiteReport suite_surgery(const SuiteOptions& opts) {
    return timed("surgery", opts, [&](SuiteReport& r) {
        auto b1s = small_algebras(4);
        std::vector<CanonicalAlgebra> bs;
        for (std::size_t n = 1; n <= 3; ++n) bs.push_back(atoms_algebra(n));
        bs.push_back(free_algebra(1));
        parallel_for(b1s.size(), opts.threads, [&](std::size_t i, Partial& part) {
            const auto& b1 = b1s[i];
            for (const auto& a_star : all_elements(b1.num_points())) {
                if (a_star.none()) continue;
                for (const auto& b : bs) {
                    ++part.instances;
                    const std::string tag = b1.provenance() + " a*=" + a_star.str() + " B=" + b.provenance() + ": ";
                    auto s = surgery(b1, a_star, b);
                    std::size_t expected = (~a_star).count() + a_star.count() * b.num_points();
                    if (s.algebra.num_points() != expected)
                        part.failures.push_back(tag + std::to_string(s.algebra.num_points()) + " points, expected " +
                                                std::to_string(expected));
                    if (!s.embedding.is_injective() || !s.embedding.preserves_unit())
                        part.failures.push_back(tag + "embedding is not injective");
                    for (std::size_t g = 0; g < b1.num_generators(); ++g)
                        if (s.embedding.apply(b1.denotation(g)) != s.algebra.denotation(b1.generators()[g]))
                            part.failures.push_back(tag + "embedding moves generator " + b1.generators()[g].str());
                    auto via = realize(surgery_presentation(b1, a_star, b));
                    if (via.num_points() != expected)
                        part.failures.push_back(tag + "presentation gives " + std::to_string(via.num_points()) +
                                                " points");
                }
            }
        }, r);
        r.details = {{"b1", b1s.size()}, {"b", bs.size()}};
    });
}

SuiteReport suite_ba_ext(const SuiteOptions& opts) {
    return timed("ba-ext", opts, [&](SuiteReport& r) {
        std::vector<IndexModel> models;
        for (unsigned d = 1; d <= 2; ++d)
            for (Ordinal j = 2; j <= 3; ++j)
                for (auto& m : enumerate_closed_models(ArityProfile::constant(d, 2), j, 5)) models.push_back(std::move(m));
        for (auto& m : enumerate_closed_models(ArityProfile({3}), 3, 5)) models.push_back(std::move(m));

        struct Job {
            std::size_t atoms;
            std::vector<Element> abar;
        };
        std::vector<Job> jobs;
        for (std::size_t k = 1; k <= 3; ++k) {
            auto elems = all_elements(k);
            jobs.push_back({k, {}});
            for (const auto& x : elems) {
                if (x.none()) continue;
                jobs.push_back({k, {x}});
                for (const auto& y : elems)
                    if (y.any() && !x.intersects(y)) jobs.push_back({k, {x, y}});
            }
        }
        std::size_t ext_count = 0;
        std::mutex mu;
        parallel_for(jobs.size(), opts.threads, [&](std::size_t i, Partial& part) {
            const auto& job = jobs[i];
            auto base = atoms_algebra(job.atoms);
            auto base_elems = all_elements(job.atoms);
            std::size_t local = 0;
            for (const auto& model : models) {
                if (job.abar.size() > model.depth()) continue;
                std::string tag = "B*=" + std::to_string(job.atoms) + " atoms, ā=";
                for (const auto& a : job.abar) tag += a.str();
                tag += ", I=" + model.str() + ": ";
                ++local;
                auto ext = build_ba_ext(base, job.abar, model);
                if (!ext.embedding.is_injective()) part.failures.push_back(tag + "B* does not embed");
                std::vector<Element> cs;
                const std::size_t pts = ext.algebra.num_points();
                if (pts <= 12) {
                    cs = all_elements(pts);
                } else {
                    cs = atoms(ext.algebra);
                    for (std::size_t g = 0; g < ext.algebra.num_generators(); ++g) {
                        cs.push_back(ext.algebra.denotation(g));
                        cs.push_back(~ext.algebra.denotation(g));
                    }
                }
                for (const auto& c : cs) {
                    if (c.none()) continue;
                    ++part.instances;
                    auto d = project_upper(ext.embedding, c);
                    // (i) c ≤ m(e), (ii) every nonzero b ≤ e has m(b) meeting c
                    std::vector<Element> fitting;
                    for (const auto& e : base_elems) {
                        if (!c.subset_of(ext.embedding.apply(e))) continue;
                        bool meets = true;
                        for (const auto& b : base_elems)
                            if (b.any() && b.subset_of(e) && !ext.embedding.apply(b).intersects(c)) meets = false;
                        if (meets) fitting.push_back(e);
                    }
                    if (fitting.size() != 1 || fitting.front() != d)
                        part.failures.push_back(tag + "projection of " + c.str() + " is " + d.str() + ", " +
                                                std::to_string(fitting.size()) + " elements satisfy (i) and (ii)");
                }
            }
            std::lock_guard lock(mu);
            ext_count += local;
        }, r);
        r.details = {{"models", models.size()}, {"base_sequences", jobs.size()}, {"extensions", ext_count}};
    });
}

SuiteReport suite_trr_quotient(const SuiteOptions& opts) {
    return timed("trr-quotient", opts, [&](SuiteReport& r) {
        std::vector<IndexModel> raw;
        for (unsigned d = 1; d <= 4; ++d)
            for (Ordinal j = 1; j <= 4; ++j)
                for (auto& m : enumerate_closed_models(ArityProfile::constant(d, 1), j, 8)) raw.push_back(std::move(m));
        auto models = dedupe(std::move(raw));
        std::map<std::string, std::size_t> counters;
        parallel_for(models.size(), opts.threads, [&](std::size_t i, Partial& part) {
            const auto& model = models[i];
            auto a = realize(build_trr(model));
            // every ideal of a finite algebra is principal, so this covers the
            // ideals generated by one or two elements
            for (const auto& s : all_elements(a.num_points())) {
                auto j = Ideal::generated_by(a, {s});
                auto q = trr_quotient_index(model, a, j);
                if (q.degenerate) {
                    ++part.counters["degenerate"];
                    continue;
                }
                ++part.instances;
                if (q.coroot_repair) ++part.counters["coroot_repair"];
                if (!q.index) ++part.counters["empty_index"];
                auto v = verify_trr_quotient(model, a, j, q);
                if (!v.isomorphic)
                    part.failures.push_back("I=" + model.str() + " J=" + s.str() + ": " + v.detail);
            }
        }, r, &counters);
        r.details = {{"models", models.size()}};
        for (const auto& [k, v] : counters) r.details[k] = v;
    });
}

SuiteReport suite_trees(const SuiteOptions& opts) {
    return timed("trees", opts, [&](SuiteReport& r) {
        auto f = build_family(opts.depth);
        auto rep = verify_family(f);
        for (const auto& c : rep.checks) {
            r.instances += c.checked;
            if (!c.pass) r.failures.push_back(c.name + ": " + c.violation);
        }
        const std::vector<std::size_t> k_hand{0, 5, 15}, k1_hand{1, 7, 18};
        for (std::size_t s = 0; s < k_hand.size() && s <= f.depth; ++s) {
            ++r.instances;
            if (f.k[s] != k_hand[s]) r.failures.push_back("k(" + std::to_string(s) + ") = " + std::to_string(f.k[s]));
        }
        for (std::size_t s = 0; s < k1_hand.size() && s < f.depth; ++s) {
            ++r.instances;
            if (f.k1[s] != k1_hand[s])
                r.failures.push_back("k1(" + std::to_string(s) + ") = " + std::to_string(f.k1[s]));
        }
        for (unsigned m = 0; m < f.depth; ++m) {
            ++r.instances;
            if (!(build_family(m) == f.truncated(m)))
                r.failures.push_back("depth " + std::to_string(m) + " is not a restriction of depth " +
                                     std::to_string(f.depth));
        }
        r.details = rep.to_json();
        r.details["k"] = f.k;
        r.details["k1"] = f.k1;
        auto printed = verify_family(build_family(std::min(opts.depth, 3u), BandOrder::AsPrinted));
        r.details["as_printed_band_order"] = {{"pass", printed.pass()}, {"D", printed.check("D").violation}};
    });
}

SuiteReport suite_chains(const SuiteOptions& opts) {
    return timed("chains", opts, [&](SuiteReport& r) {
        std::mt19937_64 rng(opts.seed);
        std::size_t deltas = 0, free_sets = 0;
        for (int inst = 0; inst < 50; ++inst) {
            const std::size_t gens = std::uniform_int_distribution<std::size_t>(2, 7)(rng);
            const std::size_t rels = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
            std::vector<GeneratorId> ids;
            for (std::size_t g = 0; g < gens; ++g) ids.push_back(GeneratorId::named("g" + std::to_string(g)));
            std::vector<Term> relations;
            for (std::size_t k = 0; k < rels; ++k) relations.push_back(random_term(rng, gens, 2));
            Presentation p(ids, relations);
            auto a = realize(p);
            const std::string tag = "instance " + std::to_string(inst) + " (" + std::to_string(a.num_points()) + " points): ";

            ++r.instances;
            auto chain = longest_chain(a);
            std::size_t expected = atoms(a).size() + 1;
            if (chain.size != expected || chain.witness.size() != expected || !strictly_increasing(chain.witness))
                r.failures.push_back(tag + "longest chain " + std::to_string(chain.size) + ", expected " +
                                     std::to_string(expected));
            if (a.num_points() == 0) continue;

            std::uniform_int_distribution<std::uint64_t> pick(1, (std::uint64_t{1} << std::min<std::size_t>(a.num_points(), 63)) - 1);
            std::vector<Element> family;
            for (int k = 0; k < 10; ++k) family.push_back(from_mask(a.num_points(), pick(rng)));
            auto fam = knaster_subfamily(family);
            ++r.instances;
            for (auto x : fam.compatible_witness)
                for (auto y : fam.compatible_witness)
                    if (x != y && !family[x].intersects(family[y]))
                        r.failures.push_back(tag + "compatible witness has disjoint members");
            for (auto x : fam.antichain_witness)
                for (auto y : fam.antichain_witness)
                    if (x != y && family[x].intersects(family[y]))
                        r.failures.push_back(tag + "antichain witness has overlapping members");
            std::vector<Element> cw;
            for (auto x : fam.chain_witness) cw.push_back(family[x]);
            if (cw.size() != fam.longest_chain || !strictly_increasing(cw))
                r.failures.push_back(tag + "family chain witness is not a chain");

            std::vector<std::vector<Element>> singles;
            for (std::size_t k = 0; k < std::min<std::size_t>(family.size(), 8); ++k) singles.push_back({family[k]});
            auto sub = indiscernible_extract(a, singles, 2);
            std::vector<std::vector<Element>> chosen;
            for (auto x : sub) chosen.push_back(singles[x]);
            ++r.instances;
            if (chosen.size() >= 2 && !indiscernible_check(a, chosen, 2).indiscernible)
                r.failures.push_back(tag + "extracted subfamily is not indiscernible");
        }
        for (int inst = 0; inst < 50; ++inst) {
            const std::string tag = "set family " + std::to_string(inst) + ": ";
            std::vector<FiniteSet> sets;
            std::uniform_int_distribution<int> elem(0, 9);
            for (int k = 0; k < 14; ++k) {
                std::set<int> s;
                for (int e = 0; e < 3; ++e) s.insert(elem(rng));
                sets.emplace_back(s.begin(), s.end());
            }
            ++r.instances;
            if (auto d = delta_system(sets, 3)) {
                ++deltas;
                for (auto x : d->members)
                    for (auto y : d->members) {
                        if (x == y) continue;
                        FiniteSet in;
                        std::set_intersection(sets[x].begin(), sets[x].end(), sets[y].begin(), sets[y].end(),
                                              std::back_inserter(in));
                        if (in != d->heart) r.failures.push_back(tag + "Δ-system members meet outside the heart");
                    }
            }
            std::vector<FiniteSet> w(12);
            std::uniform_int_distribution<int> pt(0, 11);
            for (std::size_t i = 0; i < w.size(); ++i) {
                std::set<int> s;
                for (int e = 0; e < 2; ++e) s.insert(pt(rng));
                s.erase(static_cast<int>(i));
                w[i].assign(s.begin(), s.end());
            }
            ++r.instances;
            if (auto fs = free_subset(w, 4)) {
                ++free_sets;
                for (auto i : *fs)
                    for (auto j : *fs)
                        if (i != j && std::binary_search(w[i].begin(), w[i].end(), static_cast<int>(j)))
                            r.failures.push_back(tag + "free subset is not free");
            }
        }
        r.details = {{"delta_systems_found", deltas}, {"free_subsets_found", free_sets}};
    });
}

SuiteReport suite_rigidity(const SuiteOptions& opts) {
    return timed("rigidity", opts, [&](SuiteReport& r) {
        auto corpus = small_algebras(8);
        std::map<std::string, std::size_t> counters;
        parallel_for(corpus.size(), opts.threads, [&](std::size_t i, Partial& part) {
            const auto& a = corpus[i];
            const std::string tag = a.provenance() + " (" + std::to_string(a.num_points()) + " points): ";
            ++part.instances;
            auto b = bonnet_rigid(a, 10);
            if (a.num_points() >= 2) {
                if (b.rigid || !b.witness) {
                    part.failures.push_back(tag + "reported Bonnet-rigid");
                } else {
                    const auto& w = *b.witness;
                    if (!w.injective.is_injective() || !w.surjective.is_surjective() || w.injective == w.surjective)
                        part.failures.push_back(tag + "Bonnet witness does not verify");
                }
            } else if (!b.rigid) {
                part.failures.push_back(tag + "an algebra with at most one atom reported non-rigid");
            }
            auto obs = rigidity_obstruction(a, 8);
            if (obs.star_holds) ++part.counters["star_holds"];
            if (!obs.implication_holds) part.failures.push_back(tag + "(*) holds but the algebra is not Bonnet-rigid");
            for (const auto& f : mono_endo_search(a, 8, 20)) {
                auto d = disjointifier(a, f);
                if (d.a.none() || d.a.intersects(f.apply(d.a)))
                    part.failures.push_back(tag + "disjointifier failed for " + f.str());
            }
        }, r, &counters);
        r.details = {{"algebras", corpus.size()}, {"star_holds", counters["star_holds"]}};
    });
}

}  // namespace fpba
