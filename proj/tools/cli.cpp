#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pstt/chip.hpp"
#include "pstt/equality.hpp"
#include "pstt/schedule.hpp"
#include "pstt/surface.hpp"
#include "pstt/testkit.hpp"
#include "pstt/typecheck.hpp"

namespace pstt::cli {

namespace {

bool color() {
    const char* v = std::getenv("PSTT_COLOR");
    return v && std::string(v) == "1";
}

std::string paint(const std::string& s, const char* code) {
    return color() ? std::string("\033[") + code + "m" + s + "\033[0m" : s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const Declaration& find_declaration(const SourceFile& f, const std::string& name) {
    const Declaration* d = f.find(name);
    if (!d) throw std::runtime_error("no declaration named '" + name + "'");
    return *d;
}

std::string where(const TypeError& e, const Declaration& d) {
    SourcePos p = e.pos().line > 0 ? e.pos() : d.pos;
    return std::to_string(p.line) + ":" + std::to_string(p.column);
}

std::string type_error(const TypeError& e, const Declaration& d) {
    std::string s = d.name + ": " + paint("error", "31") + " at " + where(e, d) + ": " +
                    std::string(to_string(e.kind())) + ": " + e.message();
    if (!e.path().empty()) s += " (subterm " + to_string(e.path()) + ")";
    return s;
}

int cmd_check(const SourceFile& f, const ChipSpec& chip, std::ostream& out) {
    int status = Success;
    for (const auto& d : f.declarations) {
        CheckResult r = check(d.judgement, chip);
        if (r.ok()) {
            out << d.name << ": " << paint("ok", "32") << "\n";
        } else {
            out << type_error(*r.error, d) << "\n";
            status = UserError;
        }
    }
    return status;
}

int cmd_infer(const SourceFile& f, const ChipSpec& chip, std::ostream& out) {
    int status = Success;
    for (const auto& d : f.declarations) {
        TypeEnv env;
        for (const auto& e : d.judgement.context) env[e.name] = e.type;
        try {
            OffsetReport r = synthesize(d.judgement.term, env, chip);
            Context g = infer_context(r);
            out << d.name << ": (" << print(g) << ") : " << print(r.type) << "\n";
            if (!r.slacks.empty())
                out << "  note: " << r.slacks.size() << " let-* shift(s) left free and fixed at 0 (slack-zero convention)\n";
            Judgement inferred{g, d.judgement.term, r.type};
            if (!check(inferred, chip).ok())
                out << "  note: the inferred judgement needs a non-zero let-* shift; see the declared context\n";
        } catch (const TypeError& e) {
            out << type_error(e, d) << "\n";
            status = UserError;
        }
    }
    return status;
}

int cmd_normalize(const SourceFile& f, const ChipSpec& chip, std::ostream& out) {
    int status = Success;
    for (const auto& d : f.declarations) {
        try {
            NormalForm n = normalize(d.judgement, chip);
            out << d.name << " = " << print(n.term) << "\n";
            if (n.exhausted) {
                out << "  note: normalisation budget exhausted after " << n.trace.size() << " steps\n";
                status = UserError;
            }
        } catch (const TypeError& e) {
            out << type_error(e, d) << "\n";
            status = UserError;
        }
    }
    return status;
}

int cmd_eq(const SourceFile& f, const ChipSpec& chip, const std::vector<std::string>& names, std::ostream& out) {
    if (names.size() != 2) throw std::runtime_error("eq needs exactly two --name options");
    const Declaration& a = find_declaration(f, names[0]);
    const Declaration& b = find_declaration(f, names[1]);
    const Judgement& ja = a.judgement;
    const Judgement& jb = b.judgement;
    if (print(ja.context) != print(jb.context) || print(ja.type) != print(jb.type))
        throw std::runtime_error(a.name + " and " + b.name + " have different contexts or types");
    EqVerdict v = judgementally_equal(ja.context, ja.term, jb.term, ja.type, chip);
    out << to_string(v.kind) << "\n";
    out << "  " << a.name << " ~> " << print(v.left.term) << "\n";
    out << "  " << b.name << " ~> " << print(v.right.term) << "\n";
    if (!v.detail.empty()) out << "  " << v.detail << "\n";
    return Success;
}

int cmd_emit(const SourceFile& f, const ChipSpec& chip, const std::string& name, const std::string& path,
             std::ostream& out, std::ostream& err) {
    const Declaration& d = find_declaration(f, name);
    const std::string text = to_json(emit(d.judgement, chip));
    if (path == "-") {
        out << text;
    } else {
        std::ofstream o(path, std::ios::binary);
        if (!o) throw std::runtime_error("cannot write " + path);
        o << text;
    }
    // Validate what a consumer would read back, not the in-memory schedule.
    Schedule back = schedule_from_json(path == "-" ? text : read_file(path));
    ValidationReport r = validate(back, d.judgement);
    std::ostream& report = path == "-" ? err : out;
    report << to_string(r);
    if (!r.ok()) return UserError;
    if (to_json(back) != text) throw std::logic_error("schedule JSON is not byte-stable");
    return Success;
}

int cmd_selfcheck(const ChipSpec& chip, std::uint64_t seed, std::size_t cases, std::ostream& out) {
    testkit::GenConfig cfg(chip);
    cfg.seed = seed;
    using Suite = testkit::SuiteResult (*)(const testkit::GenConfig&, std::size_t);
    const Suite suites[] = {
        testkit::linearity_suite,          testkit::substitution_suite,
        testkit::preservation_suite,       [](const testkit::GenConfig& c, std::size_t n) {
            return testkit::pulse_soundness_suite(c, n);
        },
        testkit::self_interpretation_suite, testkit::functionality_suite,
        testkit::commuting_substitution_suite, testkit::slack_shift_suite,
        testkit::roundtrip_suite,          testkit::schedule_suite,
    };
    bool ok = true;
    for (Suite s : suites) {
        testkit::SuiteResult r = s(cfg, cases);
        out << paint(r.ok() ? "PASS" : "FAIL", r.ok() ? "32" : "31") << " " << to_string(r);
        ok = ok && r.ok();
    }
    LawReport laws = testkit::pulse_law_check(chip, -5, 5, seed);
    out << paint(laws.ok() ? "PASS" : "FAIL", laws.ok() ? "32" : "31") << " pulse laws: " << laws.checks
        << " checks, " << laws.undecided << " undecided\n";
    for (const auto& w : laws.failures) out << "  " << w << "\n";
    ok = ok && laws.ok();
    return ok ? Success : UserError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pulse-level schedules from a graded linear type theory", "pstt"};
    app.require_subcommand(1);

    std::string file, chip_path, output = "-";
    std::vector<std::string> names;
    std::uint64_t seed = 0;
    std::size_t cases = 100;

    auto with_file = [&](CLI::App* c) {
        c->add_option("FILE", file, "Source file of schedule declarations")->required();
        c->add_option("--chip", chip_path, "Chip description (JSON)")->required();
        return c;
    };
    auto* check_cmd = with_file(app.add_subcommand("check", "Type-check every declaration"));
    auto* infer_cmd = with_file(app.add_subcommand("infer", "Synthesise contexts and types from the terms"));
    auto* norm_cmd = with_file(app.add_subcommand("normalize", "Print normal forms"));
    auto* eq_cmd = with_file(app.add_subcommand("eq", "Decide equality of two declarations"));
    eq_cmd->add_option("--name", names, "Declaration name (twice)")->required()->expected(1)->multi_option_policy(
        CLI::MultiOptionPolicy::TakeAll);
    auto* emit_cmd = with_file(app.add_subcommand("emit", "Write a declaration's schedule as JSON and validate it"));
    std::string emit_name;
    emit_cmd->add_option("--name", emit_name, "Declaration name")->required();
    emit_cmd->add_option("-o,--output", output, "Output path, - for stdout");
    auto* self_cmd = app.add_subcommand("selfcheck", "Run the property suites and pulse-model laws");
    self_cmd->add_option("--chip", chip_path, "Chip description (JSON)")->required();
    self_cmd->add_option("--seed", seed, "Seed for all generated cases");
    self_cmd->add_option("--cases", cases, "Cases per suite");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return UserError;
    }

    try {
        ChipSpec chip = load_chip_spec(chip_path);
        if (*self_cmd) return cmd_selfcheck(chip, seed, cases, out);
        SourceFile f = parse(read_file(file));
        if (*check_cmd) return cmd_check(f, chip, out);
        if (*infer_cmd) return cmd_infer(f, chip, out);
        if (*norm_cmd) return cmd_normalize(f, chip, out);
        if (*eq_cmd) return cmd_eq(f, chip, names, out);
        if (*emit_cmd) return cmd_emit(f, chip, emit_name, output, out, err);
    } catch (const ParseError& e) {
        err << file << ":" << e.diagnostic().format(color()) << "\n";
        return UserError;
    } catch (const std::logic_error& e) {
        err << paint("internal error", "31") << ": " << e.what() << "\n";
        return InvariantBreach;
    } catch (const std::exception& e) {
        err << paint("error", "31") << ": " << e.what() << "\n";
        return UserError;
    }
    return UserError;
}

}  // namespace pstt::cli
