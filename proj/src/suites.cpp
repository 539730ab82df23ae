#include <algorithm>
#include <atomic>
#include <functional>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "pstt/surface.hpp"
#include "pstt/testkit.hpp"

namespace pstt::testkit {

void SuiteResult::fail(std::string what) {
    ++failures;
    if (examples.size() < 5) examples.push_back(std::move(what));
}

std::string to_string(const SuiteResult& r) {
    std::ostringstream o;
    o << r.name << ": " << r.cases << " cases, " << r.failures << " failures";
    for (const auto& [k, v] : r.counts) o << ", " << k << "=" << v;
    o << "\n";
    for (const auto& e : r.examples) o << "  " << e << "\n";
    return o.str();
}

namespace {

GenConfig case_config(const GenConfig& cfg, std::size_t i, const std::string& prefix = "x") {
    GenConfig c = cfg;
    c.seed = sub_seed(cfg.seed, i);
    c.prefix = prefix;
    return c;
}

void note_rejections(SuiteResult& r, const Generator& g) {
    if (g.stats().rejected == 0) return;
    r.counts["rejected_candidates"] += g.stats().rejected;
    r.fail("generator produced " + std::to_string(g.stats().rejected) + " ill-typed candidates");
}

// A let-* node of `t` whose scrutinee mentions only variables free in all of `t`.
std::optional<Path> free_let_star(const TermPtr& t) {
    std::optional<Path> found;
    std::set<std::string> fv;
    for (const auto& v : free_vars(t)) fv.insert(v);
    std::function<void(const TermPtr&, Path&)> walk = [&](const TermPtr& n, Path& p) {
        if (found) return;
        if (n->kind == TermKind::LetStar) {
            auto sv = free_vars(n->scrutinee());
            if (!sv.empty() && std::all_of(sv.begin(), sv.end(), [&](const std::string& v) { return fv.count(v); })) {
                found = p;
                return;
            }
        }
        for (std::size_t i = 0; i < n->children.size(); ++i) {
            p.push_back(static_cast<int>(i));
            walk(n->children[i], p);
            p.pop_back();
        }
    };
    Path p;
    walk(t, p);
    return found;
}

}  // namespace

SuiteResult linearity_suite(const GenConfig& cfg, std::size_t cases) {
    SuiteResult r{"linearity", 0, 0, {}, {}};
    for (std::size_t i = 0; i < cases; ++i) {
        Generator g(case_config(cfg, i));
        Judgement j = g.judgement();
        note_rejections(r, g);
        ++r.cases;
        if (!accepts(j, cfg.chip)) {
            r.fail("not accepted: " + print(j));
            continue;
        }
        auto fv = free_vars(j.term);
        std::set<std::string> ctx;
        for (const auto& e : j.context) ctx.insert(e.name);
        bool ok = fv.size() == j.context.size() && std::set<std::string>(fv.begin(), fv.end()) == ctx;
        for (const auto& v : fv) ok = ok && count_free(j.term, v) == 1;
        if (!ok) r.fail(print(j));
        r.counts["context_entries"] += j.context.size();
    }
    return r;
}

SuiteResult substitution_suite(const GenConfig& cfg, std::size_t cases) {
    SuiteResult r{"substitution", 0, 0, {}, {}};
    GenConfig args = cfg;
    args.seed = sub_seed(cfg.seed, ~std::uint64_t{0});
    // Draw until `cases` pairs were produced; closed bodies are skipped.
    for (std::size_t i = 0; r.cases < cases && i < 10 * cases; ++i) {
        Generator body(case_config(cfg, i, "x"));
        Generator arg(case_config(args, i, "s"));
        auto c = gen_composable(body, arg);
        note_rejections(r, body);
        note_rejections(r, arg);
        if (!c) {
            ++r.counts["skipped_closed_bodies"];
            continue;
        }
        ++r.cases;
        if (auto res = check(c->substituted, cfg.chip); !res.ok())
            r.fail(print(c->s) + " into " + c->x + " of " + print(c->t) + ": " + res.error->message());
    }
    return r;
}

SuiteResult preservation_suite(const GenConfig& cfg, std::size_t cases) {
    SuiteResult r{"preservation", 0, 0, {}, {}};
    for (std::size_t i = 0; i < cases; ++i) {
        Generator g(case_config(cfg, i));
        Judgement j = g.judgement();
        note_rejections(r, g);
        ++r.cases;
        NormalizeOptions opts;
        bool broke = false;
        opts.observer = [&](const RuleInstance& rule, const TermPtr&, const TermPtr& after) {
            ++r.counts["steps"];
            if (!broke && !accepts(Judgement{j.context, after, j.type}, cfg.chip)) {
                broke = true;
                r.fail(rule.describe() + " broke " + print(j) + " giving " + print(after));
            }
        };
        NormalForm nf = normalize(j, cfg.chip, opts);
        if (nf.exhausted) ++r.counts["exhausted"];
        NormalForm again = normalize(Judgement{j.context, nf.term, j.type}, cfg.chip);
        if (!broke && !alpha_eq(again.term, nf.term)) r.fail("not idempotent: " + print(j));
    }
    return r;
}

SuiteResult pulse_soundness_suite(const GenConfig& cfg, std::size_t cases, int steps) {
    SuiteResult r{"pulse-soundness", 0, 0, {}, {}};
    PulseModel m(cfg.chip);
    for (std::size_t i = 0; i < cases; ++i) {
        Generator g(case_config(cfg, i));
        Judgement j = g.judgement();
        note_rejections(r, g);
        ++r.cases;
        const PulseMorphism before = interpret(m, j, cfg.chip);
        TermPtr cur = j.term;
        for (int k = 0; k < steps; ++k) {
            auto rws = one_step_rewrites(Judgement{j.context, cur, j.type}, cfg.chip);
            if (rws.empty()) break;
            const Rewrite& rw = rws[std::uniform_int_distribution<std::size_t>(0, rws.size() - 1)(g.rng())];
            cur = rw.result;
            ++r.counts["rewrites"];
            PulseMorphism after = interpret(m, Judgement{j.context, cur, j.type}, cfg.chip);
            if (!*m.equal(before, after)) {
                r.fail(rw.rule.describe() + " changed the pulses of " + print(j) + " to " + print(cur));
                break;
            }
        }
    }
    return r;
}

SuiteResult self_interpretation_suite(const GenConfig& cfg, std::size_t cases) {
    SuiteResult r{"self-interpretation", 0, 0, {}, {}};
    SyntacticModel m(cfg.chip);
    for (std::size_t i = 0; i < cases; ++i) {
        Generator g(case_config(cfg, i));
        Judgement j = gen_single_variable(g);
        note_rejections(r, g);
        ++r.cases;
        const ContextEntry& x = j.context.at(0);
        SyntacticMorphism f = interpret(m, j, cfg.chip);
        SyntacticMorphism iso = structural(
            m, Shape::leaf_at(0), Shape::tensor(Shape::unit(), Shape::act(Grade{0}, Shape::leaf_at(0))), {x.type});
        SyntacticMorphism h = then(m, iso, f);
        TermPtr interpreted = substitute(h.term, h.var, var(x.name));
        EqVerdict v = judgementally_equal(j.context, interpreted, j.term, j.type, cfg.chip);
        ++r.counts[std::string(to_string(v.kind))];
        if (v.kind == EqVerdict::Kind::NotEqualByNormalForm || v.kind == EqVerdict::Kind::NotEqualBySemantics)
            r.fail(std::string(to_string(v.kind)) + ": " + print(j) + " (" + v.detail + ")");
        else if (v.kind == EqVerdict::Kind::Unknown && r.examples.size() < 5)
            r.examples.push_back("Unknown: " + print(j));
    }
    return r;
}

SuiteResult functionality_suite(const GenConfig& cfg, std::size_t cases) {
    SuiteResult r{"functionality", 0, 0, {}, {}};
    for (std::size_t i = 0; i < cases; ++i) {
        Generator body(case_config(cfg, i, "x"));
        Generator arg(case_config(cfg, i + cases, "s"));
        auto c = gen_composable(body, arg);
        if (!c) {
            ++r.counts["skipped_closed_bodies"];
            continue;
        }
        auto rws = one_step_rewrites(c->s, cfg.chip);
        if (rws.empty()) {
            ++r.counts["skipped_no_rewrite"];
            continue;
        }
        ++r.cases;
        const Rewrite& rw = rws[std::uniform_int_distribution<std::size_t>(0, rws.size() - 1)(arg.rng())];
        TermPtr other = substitute(c->t.term, c->x, rw.result);
        const Judgement& lhs = c->substituted;
        if (!accepts(Judgement{lhs.context, other, lhs.type}, cfg.chip)) {
            r.fail("rewritten substitution ill-typed: " + print(lhs));
            continue;
        }
        EqVerdict v = judgementally_equal(lhs.context, lhs.term, other, lhs.type, cfg.chip);
        ++r.counts[std::string(to_string(v.kind))];
        if (v.kind != EqVerdict::Kind::Equal)
            r.fail(std::string(to_string(v.kind)) + " after " + rw.rule.describe() + ": " + print(lhs));
    }
    return r;
}

SuiteResult commuting_substitution_suite(const GenConfig& cfg, std::size_t cases) {
    SuiteResult r{"commuting-substitution", 0, 0, {}, {}};
    const Generator::Root roots[] = {Generator::Root::LetStar, Generator::Root::LetPair, Generator::Root::LetBox};
    const char* names[] = {"let-star", "let-pair", "let-box"};
    for (std::size_t i = 0; i < cases; ++i) {
        Generator outer(case_config(cfg, i, "x"));
        Generator inner(case_config(cfg, i + cases, "s"));
        Judgement u = outer.judgement();
        if (u.context.empty()) {
            ++r.counts["skipped_closed_bodies"];
            continue;
        }
        const ContextEntry y = u.context[std::uniform_int_distribution<std::size_t>(0, u.context.size() - 1)(outer.rng())];
        const std::size_t which = i % 3;
        auto l = inner.rooted(y.type, roots[which]);
        if (!l) {
            ++r.counts["skipped_no_let"];
            continue;
        }
        ++r.cases;
        ++r.counts[names[which]];
        const Term& let = *l->term;
        Context ctx = shift_context(y.grade, l->context);
        for (const auto& e : u.context)
            if (e.name != y.name) ctx.push_back(e);
        TermPtr lhs = substitute(u.term, y.name, l->term);
        std::vector<TermPtr> kids = let.children;
        kids[1] = substitute(u.term, y.name, let.body());
        TermPtr rhs = with_children(let, kids);
        Judgement jl{ctx, lhs, u.type}, jr{ctx, rhs, u.type};
        if (!accepts(jl, cfg.chip) || !accepts(jr, cfg.chip)) {
            r.fail(std::string(names[which]) + " instance ill-typed: " + print(jl) + " / " + print(rhs));
            continue;
        }
        EqVerdict v = judgementally_equal(ctx, lhs, rhs, u.type, cfg.chip);
        if (v.kind != EqVerdict::Kind::Equal)
            r.fail(std::string(names[which]) + " " + std::string(to_string(v.kind)) + ": " + print(jl) + " vs " +
                   print(rhs));
    }
    return r;
}

SuiteResult slack_shift_suite(const GenConfig& cfg, std::size_t cases) {
    SuiteResult r{"let-star-shift", 0, 0, {}, {}};
    for (std::size_t i = 0; i < cases; ++i) {
        Generator g(case_config(cfg, i));
        Judgement j = g.judgement();
        auto at = free_let_star(j.term);
        if (!at) {
            ++r.counts["skipped_no_let_star"];
            continue;
        }
        ++r.cases;
        const std::int64_t delta = std::uniform_int_distribution<std::int64_t>(-50, 50)(g.rng());
        auto moved = free_vars(subterm_at(j.term, *at)->scrutinee());
        Judgement k = j;
        for (auto& e : k.context)
            if (std::find(moved.begin(), moved.end(), e.name) != moved.end()) e.grade += Grade{delta};
        if (!accepts(k, cfg.chip)) r.fail("shift by " + std::to_string(delta) + " rejected: " + print(k));
    }
    return r;
}

SuiteResult roundtrip_suite(const GenConfig& cfg, std::size_t cases) {
    SuiteResult r{"roundtrip", 0, 0, {}, {}};
    for (std::size_t i = 0; i < cases; ++i) {
        Generator g(case_config(cfg, i));
        Judgement j = g.judgement();
        ++r.cases;
        const std::string text = print(j.term);
        try {
            TermPtr back = parse_term(text);
            if (!alpha_eq(back, j.term) || print(back) != text) r.fail("term " + text);
            if (!type_equal(parse_type(print(j.type)), j.type)) r.fail("type " + print(j.type));
            Context ctx = parse_context(print(j.context));
            if (print(ctx) != print(j.context)) r.fail("context " + print(j.context));
        } catch (const ParseError& e) {
            r.fail("parse error on " + text + ": " + e.what());
        }
    }
    return r;
}

SuiteResult schedule_suite(const GenConfig& cfg, std::size_t cases) {
    SuiteResult r{"schedule", 0, 0, {}, {}};
    for (std::size_t i = 0; i < cases; ++i) {
        Generator g(case_config(cfg, i));
        Judgement j = g.judgement();
        ++r.cases;
        Schedule s = emit(j, cfg.chip);
        if (auto rep = validate(s, j); !rep.ok()) r.fail("invalid schedule for " + print(j) + "\n" + to_string(rep));
        const std::string text = to_json(s);
        Schedule back = schedule_from_json(text);
        if (!(back == s) || to_json(back) != text) r.fail("JSON round trip of " + print(j));
    }
    return r;
}

// Pulse-model laws -------------------------------------------------------------------

LawReport pulse_law_check(const ChipSpec& chip, std::int64_t lo, std::int64_t hi, std::uint64_t seed) {
    PulseModel m(chip);
    using Obj = PulseObject;
    std::vector<QubitId> qs = chip.qubits();
    if (qs.size() > 3) qs.resize(3);

    std::vector<Grade> grades;
    for (std::int64_t g = lo; g <= hi; ++g) grades.emplace_back(g);

    // every object over distinct qubits in every order with every grade
    std::vector<std::vector<Obj>> by_count(qs.size() + 1);
    by_count[0].push_back(m.unit());
    for (std::size_t k = 1; k <= qs.size(); ++k)
        for (const Obj& o : by_count[k - 1])
            for (const auto& q : qs) {
                bool used = std::any_of(o.entries.begin(), o.entries.end(), [&](const PulseEntry& e) { return e.qubit == q; });
                if (used) continue;
                for (Grade g : grades) {
                    Obj n = o;
                    n.entries.push_back({g, q});
                    by_count[k].push_back(n);
                }
            }
    auto overlap = [](const Obj& a, const Obj& b) {
        for (const auto& x : a.entries)
            for (const auto& y : b.entries)
                if (x.qubit == y.qubit) return true;
        return false;
    };

    LawSamples<PulseModel> s;
    for (const auto& v : by_count) s.objects.insert(s.objects.end(), v.begin(), v.end());
    for (std::size_t i = 0; i < by_count.size(); ++i)
        for (std::size_t j = 0; i + j < by_count.size(); ++j)
            for (const Obj& a : by_count[i])
                for (const Obj& b : by_count[j])
                    if (!overlap(a, b)) s.pairs.push_back({a, b});
    // triples of single-qubit objects, and triples with a unit in one position
    const auto& singles = by_count.size() > 1 ? by_count[1] : by_count[0];
    for (const Obj& a : singles)
        for (const Obj& b : singles)
            for (const Obj& c : singles)
                if (!overlap(a, b) && !overlap(a, c) && !overlap(b, c)) s.triples.push_back({a, b, c});
    for (const auto& [a, b] : s.pairs) {
        if (a.entries.size() + b.entries.size() > 2) continue;
        s.triples.push_back({m.unit(), a, b});
        s.triples.push_back({a, m.unit(), b});
        s.triples.push_back({a, b, m.unit()});
    }
    s.grades = grades;
    s.grade_triple_objects.push_back(m.unit());
    for (const auto& q : qs) s.grade_triple_objects.push_back(m.qubit(q));
    if (by_count.size() > 2) s.grade_triple_objects.push_back(by_count[2].front());
    s.strict = true;
    s.morphisms_from = [seed](const Obj& a) {
        std::mt19937_64 rng(sub_seed(seed, std::hash<std::string>{}(to_string(a))));
        std::uniform_int_distribution<std::int64_t> len(0, 6);
        std::uniform_int_distribution<Sample> amp(-1000, 1000);
        std::vector<PulseMorphism> out;
        for (int k = 0; k < 2; ++k) {
            Obj b = a;
            std::map<QubitId, std::vector<Sample>> samples;
            for (auto& e : b.entries) {
                std::int64_t n = len(rng);
                e.grade += Grade{n};
                auto& v = samples[e.qubit];
                for (std::int64_t t = 0; t < n; ++t) v.push_back(amp(rng));
            }
            out.push_back(make_pulse_morphism(a, b, samples));
        }
        return out;
    };
    return check_model_laws(m, s, [](const Obj& o) { return to_string(o); });
}

// Oracle agreement ---------------------------------------------------------------------

double OracleAgreement::discrepancy_rate() const {
    const std::size_t with_proof = both_equal + unknown_with_proof + refuted_with_proof;
    return with_proof == 0 ? 0.0 : static_cast<double>(unknown_with_proof) / static_cast<double>(with_proof);
}

namespace {

// Tallies for one group of same-context, same-type judgements.
OracleAgreement agreement_in_group(const std::vector<Judgement>& group, const ChipSpec& chip, int depth,
                                   std::size_t cap) {
    OracleAgreement r;
    const int near = (depth + 1) / 2, far = depth / 2;
    auto example = [&](const std::string& what, const Judgement& a, const Judgement& b) {
        if (r.examples.size() < 10) r.examples.push_back(what + ": " + print(a) + "  vs  " + print(b.term));
    };
    const std::size_t n = group.size();
    RewriteGraph graph(group[0].context, group[0].type, chip, cap);
    std::vector<PreparedSide> sides;
    // key -> members reaching it, with their distance
    std::unordered_map<std::string, std::vector<std::pair<std::size_t, int>>> reached;
    for (std::size_t i = 0; i < n; ++i) {
        sides.push_back(prepare_side(group[i], chip));
        for (const auto& [k, d] : graph.ball(group[i].term, near)) reached[k].push_back({i, d});
    }
    std::vector<bool> proved(n * n, false);
    for (const auto& [k, who] : reached)
        for (const auto& [a, da] : who)
            for (const auto& [b, db] : who)
                if (a < b && ((da <= near && db <= far) || (db <= near && da <= far))) proved[a * n + b] = true;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            ++r.pairs;
            const bool proof = proved[a * n + b];
            EqVerdict v = compare_sides(sides[a], sides[b]);
            switch (v.kind) {
                case EqVerdict::Kind::Equal:
                    if (proof) ++r.both_equal;
                    else {
                        ++r.equal_without_proof;
                        example("Equal without proof", group[a], group[b]);
                    }
                    break;
                case EqVerdict::Kind::Unknown:
                    if (proof) {
                        ++r.unknown_with_proof;
                        example("Unknown with proof", group[a], group[b]);
                    } else
                        ++r.unknown_without_proof;
                    break;
                default:
                    if (proof) {
                        ++r.refuted_with_proof;
                        example(std::string(to_string(v.kind)) + " with proof", group[a], group[b]);
                    } else
                        ++r.both_distinct;
            }
        }
    return r;
}

}  // namespace

OracleAgreement oracle_agreement(const EnumConfig& cfg, const ChipSpec& chip, int depth, unsigned threads) {
    const auto all = enumerate_judgements(cfg, chip);
    const auto groups = equality_groups(all);
    const std::size_t cap = cfg.max_size + 6;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    std::vector<OracleAgreement> parts(groups.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < groups.size();)
            parts[i] = agreement_in_group(groups[i], chip, depth, cap);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    OracleAgreement r;
    r.judgements = all.size();
    for (const auto& p : parts) {
        r.pairs += p.pairs;
        r.both_equal += p.both_equal;
        r.both_distinct += p.both_distinct;
        r.unknown_with_proof += p.unknown_with_proof;
        r.unknown_without_proof += p.unknown_without_proof;
        r.equal_without_proof += p.equal_without_proof;
        r.refuted_with_proof += p.refuted_with_proof;
        for (const auto& e : p.examples)
            if (r.examples.size() < 10) r.examples.push_back(e);
    }
    return r;
}

}  // namespace pstt::testkit
