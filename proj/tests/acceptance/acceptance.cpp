// One line per acceptance criterion: number, PASS or FAIL, what was measured.
//
// Criterion 8 cannot pass as stated: Equal pairs that exchange unit-typed
// variables need 7 or more rewrites (see Oracle.SwappedUnitsNeedEightSteps).
// With --allow-known-gap that clause alone is tolerated in the exit status;
// the line still reads FAIL, and the 2% bound and the soundness clause still
// fail the run.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "pstt/surface.hpp"
#include "pstt/testkit.hpp"
#include "pstt/typecheck.hpp"

using namespace pstt;
using namespace pstt::testkit;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    bool known_gap = false;  // failed only on the documented oracle depth gap
};

std::string suite_detail(const SuiteResult& r) {
    std::string s = to_string(r);
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

Outcome from_suite(const SuiteResult& r, std::size_t want) {
    return {r.ok() && r.cases == want, suite_detail(r)};
}

Outcome point_checks(const ChipSpec& chip) {
    struct Eq {
        const char* name;
        const char* ctx;
        const char* lhs;
        const char* rhs;
        const char* type;
        EqVerdict::Kind want;
    };
    const Eq checks[] = {
        {"unit beta", "x:^-20 q1", "let * = * in H1(x)", "H1(x)", "q1", EqVerdict::Kind::Equal},
        {"unit eta", "u:^0 1", "let * = u in *", "u", "1", EqVerdict::Kind::Equal},
        {"pair eta", "p:^0 q1 * q2", "let (a, b) = p in (a, b)", "p", "q1 * q2", EqVerdict::Kind::Equal},
        {"box eta", "b:^0 [20] q1", "let box[20] z = b in box[20] z", "b", "[20] q1", EqVerdict::Kind::Equal},
        {"let reordering", "x:^0 1, y:^0 1", "let * = x in let * = y in *", "let * = y in let * = x in *", "1",
         EqVerdict::Kind::Equal},
        {"H1 vs K1", "x:^-20 q1", "H1(x)", "K1(x)", "q1", EqVerdict::Kind::NotEqualBySemantics},
    };
    Outcome o{true, ""};
    for (const auto& c : checks) {
        EqVerdict v = judgementally_equal(parse_context(c.ctx), parse_term(c.lhs), parse_term(c.rhs), parse_type(c.type),
                                          chip);
        const bool ok = v.kind == c.want;
        o.pass = o.pass && ok;
        o.detail += std::string(o.detail.empty() ? "" : ", ") + c.name + " " + std::string(to_string(v.kind));
    }
    Context shifted = shift_context(Grade{100}, parse_context("x:^50 q1, y:^75 q2"));
    const bool shift_ok = print(shifted) == "x:^150 q1, y:^175 q2";
    o.pass = o.pass && shift_ok;
    o.detail += ", 100 + (x:^50 q1, y:^75 q2) = (" + print(shifted) + ")";
    return o;
}

Outcome schedules(const ChipSpec& chip, std::uint64_t seed) {
    std::ifstream in(PSTT_TEST_DATA "/corpus.pstt");
    std::stringstream ss;
    ss << in.rdbuf();
    const SourceFile corpus = parse(ss.str());
    std::size_t valid = 0, caught = 0, mutations = 0;
    std::vector<std::pair<const Judgement*, Schedule>> emitted;  // those with samples
    for (const auto& d : corpus.declarations) {
        Schedule s = emit(d.judgement, chip);
        if (validate(s, d.judgement).ok()) ++valid;
        bool busy = false;
        for (const auto& [q, c] : s.channels) busy = busy || !c.samples.empty();
        if (busy) emitted.emplace_back(&d.judgement, std::move(s));
    }
    // Ten deleted samples and ten duplicated segments at seeded positions of
    // non-empty channels.
    std::mt19937_64 rng(seed);
    std::vector<std::string> missed;
    for (std::size_t k = 0; k < 20; ++k) {
        const auto& [j, s] = emitted[(k * 7) % emitted.size()];
        std::vector<QubitId> busy;
        for (const auto& [q, c] : s.channels)
            if (!c.samples.empty()) busy.push_back(q);
        const QubitId& q = busy[rng() % busy.size()];
        const std::size_t n = s.channels.at(q).samples.size();
        Mutation m = k < 10 ? delete_sample(s, q, rng() % n)
                            : [&] {
                                  std::size_t from = rng() % n;
                                  std::size_t len = 1 + rng() % std::min<std::size_t>(8, n - from);
                                  return duplicate_segment(s, q, from, len);
                              }();
        ++mutations;
        if (!validate(m.schedule, *j).ok()) ++caught;
        else missed.push_back(m.description);
    }
    Outcome o;
    o.pass = valid == corpus.declarations.size() && corpus.declarations.size() == 20 && mutations == 20 &&
             caught == mutations;
    o.detail = std::to_string(valid) + "/" + std::to_string(corpus.declarations.size()) + " corpus schedules valid, " +
               std::to_string(caught) + "/" + std::to_string(mutations) + " mutations caught";
    for (const auto& d : missed) o.detail += "; missed " + d;
    return o;
}

Outcome oracle(const ChipSpec& chip, std::size_t max_size) {
    EnumConfig cfg = default_enum_config();
    cfg.max_size = max_size;
    OracleAgreement a = oracle_agreement(cfg, chip, 6);
    const double rate = a.discrepancy_rate();
    const bool sound = a.refuted_with_proof == 0;
    const bool within = rate <= 0.02;
    const bool iff = a.equal_without_proof == 0;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "size<=%zu: %zu judgements, %zu pairs; Equal+proof %zu, distinct %zu, Unknown+proof %zu (%.2f%%), "
                  "Unknown %zu, refuted+proof %zu, Equal without depth-6 proof %zu",
                  max_size, a.judgements, a.pairs, a.both_equal, a.both_distinct, a.unknown_with_proof, 100 * rate,
                  a.unknown_without_proof, a.refuted_with_proof, a.equal_without_proof);
    Outcome o{sound && within && iff, buf};
    if (!iff) o.detail += " (exchanging unit-typed variables takes 7 or more rewrites)";
    o.known_gap = sound && within && !iff;
    for (const auto& e : a.examples)
        if (e.rfind("Equal without proof", 0) != 0) o.detail += "\n    " + e;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::uint64_t seed = 0;
    std::size_t oracle_size = 7;
    bool allow_gap = false;
    app.add_option("--seed", seed, "Seed for generated cases");
    app.add_option("--oracle-size", oracle_size, "Largest term size for criterion 8");
    app.add_flag("--allow-known-gap", allow_gap, "Exit 0 when criterion 8 fails only on the oracle depth gap");
    CLI11_PARSE(app, argc, argv);

    const ChipSpec chip = chip0();
    GenConfig cfg(chip);
    cfg.seed = seed;

    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, [&] { return from_suite(linearity_suite(cfg, 1000), 1000); }},
        {2, [&] { return from_suite(substitution_suite(cfg, 500), 500); }},
        {3, [&] { return from_suite(preservation_suite(cfg, 300), 300); }},
        {4, [&] { return from_suite(pulse_soundness_suite(cfg, 300, 5), 300); }},
        {5,
         [&] {
             SuiteResult r = self_interpretation_suite(cfg, 200);
             const std::size_t equal = r.counts.count("Equal") ? r.counts.at("Equal") : 0;
             return Outcome{r.ok() && r.cases == 200 && equal * 100 >= 95 * r.cases,
                            suite_detail(r) + " (Equal " + std::to_string(equal) + "/" + std::to_string(r.cases) +
                                ")"};
         }},
        {6,
         [&] {
             // chip0 has two qubits; the three-qubit fixture extends it.
             LawReport r = pulse_law_check(chip3(), -5, 5, seed);
             std::string d = std::to_string(r.checks) + " law instances on chip3, grades [-5,5], " +
                             std::to_string(r.undecided) + " undecided, " + std::to_string(r.failures.size()) +
                             " failures";
             for (const auto& f : r.failures) d += "\n    " + f;
             return Outcome{r.ok() && r.undecided == 0, d};
         }},
        {7, [&] { return schedules(chip, seed); }},
        {8, [&] { return oracle(chip, oracle_size); }},
        {9, [&] { return point_checks(chip); }},
        {10,
         [&] {
             SuiteResult rt = roundtrip_suite(cfg, 500);
             SuiteResult js = schedule_suite(cfg, 200);
             return Outcome{rt.ok() && rt.cases == 500 && js.ok(), suite_detail(rt) + "; " + suite_detail(js)};
         }},
    };

    int failed = 0;
    bool tolerated_only = true;
    for (const auto& [n, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d %s  %s  [%.1fs]\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) {
            ++failed;
            if (!(allow_gap && o.known_gap)) tolerated_only = false;
        }
    }
    std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 || tolerated_only ? 0 : 1;
}
