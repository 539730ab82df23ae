#include "pstt/chip.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <climits>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pstt {

ChipError::ChipError(Kind kind, const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message : message),
      kind_(kind),
      line_(line),
      column_(column) {}

std::string_view to_string(ChipError::Kind k) {
    using K = ChipError::Kind;
    switch (k) {
    case K::Syntax: return "syntax error";
    case K::DuplicateQubit: return "duplicate qubit";
    case K::DuplicateGate: return "duplicate gate";
    case K::UndeclaredQubit: return "undeclared qubit";
    case K::RepeatedQubit: return "repeated qubit";
    case K::EmptyGate: return "gate acts on no qubits";
    case K::CalibrationMismatch: return "calibration mismatch";
    case K::UnknownGate: return "unknown gate";
    case K::UnknownQubit: return "unknown qubit";
    case K::InvalidDuration: return "invalid duration";
    case K::DelaysDisabled: return "delay gates disabled";
    }
    return "chip error";
}

static bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; });
}

ChipSpec::ChipSpec(std::vector<QubitId> qubits, std::vector<GateDecl> gates,
                   std::map<std::string, Calibration> calibrations, bool delay_gates_enabled)
    : qubits_(std::move(qubits)), gates_(std::move(gates)), calibrations_(std::move(calibrations)),
      delays_(delay_gates_enabled) {
    using K = ChipError::Kind;
    std::set<QubitId> seen;
    for (const auto& q : qubits_) {
        if (!is_identifier(q)) throw ChipError(K::Syntax, "qubit name '" + q + "' is not an identifier");
        if (!seen.insert(q).second) throw ChipError(K::DuplicateQubit, "qubit '" + q + "' declared twice");
    }
    std::set<std::string> gate_names;
    for (const auto& g : gates_) {
        if (!is_identifier(g.name)) throw ChipError(K::Syntax, "gate name '" + g.name + "' is not an identifier");
        if (g.name == "let" || g.name == "in" || g.name == "box" || g.name == "schedule" || g.name == "delay")
            throw ChipError(K::Syntax, "gate name '" + g.name + "' is reserved");
        if (!gate_names.insert(g.name).second) throw ChipError(K::DuplicateGate, "gate '" + g.name + "' declared twice");
        if (g.duration_ns < 0) throw ChipError(K::InvalidDuration, "gate '" + g.name + "' has negative duration");
        if (g.qubits.empty()) throw ChipError(K::EmptyGate, "gate '" + g.name + "' acts on no qubits");
        std::set<QubitId> acted;
        for (const auto& q : g.qubits) {
            if (!seen.count(q))
                throw ChipError(K::UndeclaredQubit, "gate '" + g.name + "' acts on undeclared qubit '" + q + "'");
            if (!acted.insert(q).second)
                throw ChipError(K::RepeatedQubit, "gate '" + g.name + "' acts on qubit '" + q + "' twice");
        }
    }
    for (const auto& [name, cal] : calibrations_) {
        auto it = std::find_if(gates_.begin(), gates_.end(), [&](const GateDecl& g) { return g.name == name; });
        if (it == gates_.end()) throw ChipError(K::UnknownGate, "calibration for undeclared gate '" + name + "'");
        if (cal.gate != name) throw ChipError(K::CalibrationMismatch, "calibration keyed '" + name + "' names gate '" + cal.gate + "'");
        if (cal.samples.size() != it->qubits.size())
            throw ChipError(K::CalibrationMismatch, "calibration for '" + name + "' must have one entry per acted-on qubit");
        for (const auto& q : it->qubits) {
            auto s = cal.samples.find(q);
            if (s == cal.samples.end())
                throw ChipError(K::CalibrationMismatch, "calibration for '" + name + "' lacks qubit '" + q + "'");
            if (static_cast<std::int64_t>(s->second.size()) != it->duration_ns)
                throw ChipError(K::CalibrationMismatch,
                                "calibration for '" + name + "' on '" + q + "' has " + std::to_string(s->second.size()) +
                                    " samples, expected " + std::to_string(it->duration_ns));
        }
    }
}

bool ChipSpec::has_qubit(std::string_view q) const {
    return std::find(qubits_.begin(), qubits_.end(), q) != qubits_.end();
}

std::string delay_gate_name(const QubitId& q, std::int64_t d) {
    return "delay[" + q + "," + std::to_string(d) + "]";
}

std::optional<std::pair<QubitId, std::int64_t>> parse_delay_gate_name(std::string_view name) {
    constexpr std::string_view prefix = "delay[";
    if (name.size() < prefix.size() + 3 || name.substr(0, prefix.size()) != prefix || name.back() != ']')
        return std::nullopt;
    auto inner = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    auto comma = inner.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    auto q = inner.substr(0, comma);
    auto num = inner.substr(comma + 1);
    std::int64_t d = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), d);
    if (ec != std::errc{} || ptr != num.data() + num.size() || !is_identifier(q)) return std::nullopt;
    return std::make_pair(QubitId(q), d);
}

ChipSpec::Delay ChipSpec::delay_gate(const QubitId& q, std::int64_t duration_ns) const {
    using K = ChipError::Kind;
    if (!delays_) throw ChipError(K::DelaysDisabled, "delay gates are disabled for this chip");
    if (!has_qubit(q)) throw ChipError(K::UnknownQubit, "delay on unknown qubit '" + q + "'");
    if (duration_ns <= 0) throw ChipError(K::InvalidDuration, "delay duration must be positive");
    Delay out;
    out.gate = GateDecl{delay_gate_name(q, duration_ns), {q}, duration_ns};
    out.calibration.gate = out.gate.name;
    out.calibration.samples[q] = std::vector<Sample>(static_cast<std::size_t>(duration_ns), 0);
    return out;
}

std::optional<GateDecl> ChipSpec::find_gate(std::string_view name) const {
    for (const auto& g : gates_)
        if (g.name == name) return g;
    if (auto d = parse_delay_gate_name(name); d && delays_ && has_qubit(d->first) && d->second > 0)
        return GateDecl{std::string(name), {d->first}, d->second};
    return std::nullopt;
}

std::optional<Calibration> ChipSpec::find_calibration(std::string_view name) const {
    if (auto it = calibrations_.find(std::string(name)); it != calibrations_.end()) return it->second;
    if (auto d = parse_delay_gate_name(name); d && delays_ && has_qubit(d->first) && d->second > 0)
        return delay_gate(d->first, d->second).calibration;
    return std::nullopt;
}

// Parsing -----------------------------------------------------------------

namespace {

using nlohmann::json;

std::pair<int, int> line_col(std::string_view text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

[[noreturn]] void schema_error(const std::string& msg) {
    throw ChipError(ChipError::Kind::Syntax, "chip spec: " + msg);
}

std::string expect_string(const json& j, const std::string& what) {
    if (!j.is_string()) schema_error(what + " must be a string");
    return j.get<std::string>();
}

}  // namespace

ChipSpec parse_chip_spec(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ChipError(ChipError::Kind::Syntax, e.what(), line, col);
    }
    if (!doc.is_object()) schema_error("top level must be an object");
    for (const auto& [key, _] : doc.items())
        if (key != "qubits" && key != "gates" && key != "calibrations" && key != "delay_gates")
            schema_error("unknown field '" + key + "'");

    std::vector<QubitId> qubits;
    if (!doc.contains("qubits") || !doc["qubits"].is_array()) schema_error("'qubits' must be an array");
    for (const auto& q : doc["qubits"]) qubits.push_back(expect_string(q, "qubit name"));

    std::vector<GateDecl> gates;
    if (doc.contains("gates")) {
        if (!doc["gates"].is_array()) schema_error("'gates' must be an array");
        for (const auto& g : doc["gates"]) {
            if (!g.is_object()) schema_error("gate entries must be objects");
            GateDecl decl;
            if (!g.contains("name")) schema_error("gate without 'name'");
            decl.name = expect_string(g["name"], "gate name");
            if (!g.contains("qubits") || !g["qubits"].is_array()) schema_error("gate '" + decl.name + "' needs a 'qubits' array");
            for (const auto& q : g["qubits"]) decl.qubits.push_back(expect_string(q, "qubit name"));
            if (!g.contains("duration_ns") || !g["duration_ns"].is_number_integer())
                schema_error("gate '" + decl.name + "' needs an integer 'duration_ns'");
            decl.duration_ns = g["duration_ns"].get<std::int64_t>();
            gates.push_back(std::move(decl));
        }
    }

    std::map<std::string, Calibration> calibrations;
    if (doc.contains("calibrations")) {
        if (!doc["calibrations"].is_object()) schema_error("'calibrations' must be an object");
        for (const auto& [gate, per_qubit] : doc["calibrations"].items()) {
            if (!per_qubit.is_object()) schema_error("calibration for '" + gate + "' must be an object");
            Calibration cal;
            cal.gate = gate;
            for (const auto& [q, arr] : per_qubit.items()) {
                if (!arr.is_array()) schema_error("samples for '" + gate + "'/'" + q + "' must be an array");
                std::vector<Sample> samples;
                samples.reserve(arr.size());
                for (const auto& v : arr) {
                    if (!v.is_number_integer()) schema_error("samples must be integers");
                    auto x = v.get<std::int64_t>();
                    if (x < INT32_MIN || x > INT32_MAX) schema_error("sample out of 32-bit range");
                    samples.push_back(static_cast<Sample>(x));
                }
                cal.samples.emplace(q, std::move(samples));
            }
            calibrations.emplace(gate, std::move(cal));
        }
    }

    bool delays = true;
    if (doc.contains("delay_gates")) {
        if (!doc["delay_gates"].is_boolean()) schema_error("'delay_gates' must be a boolean");
        delays = doc["delay_gates"].get<bool>();
    }
    return ChipSpec(std::move(qubits), std::move(gates), std::move(calibrations), delays);
}

ChipSpec load_chip_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ChipError(ChipError::Kind::Syntax, "cannot open chip spec '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_chip_spec(ss.str());
}

}  // namespace pstt
