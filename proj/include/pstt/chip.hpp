#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pstt {

using QubitId = std::string;

/// Fixed-point amplitude, one per nanosecond.
using Sample = std::int32_t;

struct GateDecl {
    std::string name;
    std::vector<QubitId> qubits;
    std::int64_t duration_ns = 0;
};

/// Pulse realisation of a gate: one sample array per acted-on qubit, each of
/// length `duration_ns`, covering relative time [-duration, 0).
struct Calibration {
    std::string gate;
    std::map<QubitId, std::vector<Sample>> samples;
};

class ChipError : public std::runtime_error {
public:
    enum class Kind {
        Syntax,
        DuplicateQubit,
        DuplicateGate,
        UndeclaredQubit,
        RepeatedQubit,
        EmptyGate,
        CalibrationMismatch,
        UnknownGate,
        UnknownQubit,
        InvalidDuration,
        DelaysDisabled,
    };

    ChipError(Kind kind, const std::string& message, int line = 0, int column = 0);

    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    Kind kind_;
    int line_;
    int column_;
};

std::string_view to_string(ChipError::Kind k);

/// Qubits, gates and calibrations of a quantum chip. Immutable once built;
/// the constructor enforces every invariant and throws ChipError otherwise.
class ChipSpec {
public:
    ChipSpec(std::vector<QubitId> qubits, std::vector<GateDecl> gates,
             std::map<std::string, Calibration> calibrations, bool delay_gates_enabled = true);

    const std::vector<QubitId>& qubits() const { return qubits_; }
    const std::vector<GateDecl>& gates() const { return gates_; }
    const std::map<std::string, Calibration>& calibrations() const { return calibrations_; }
    bool delay_gates_enabled() const { return delays_; }

    bool has_qubit(std::string_view q) const;

    /// Declared gate, or a synthesized `delay[q,d]` gate when delays are enabled.
    std::optional<GateDecl> find_gate(std::string_view name) const;

    /// Calibration for a declared gate, or the all-zero calibration of a delay gate.
    std::optional<Calibration> find_calibration(std::string_view name) const;

    struct Delay {
        GateDecl gate;
        Calibration calibration;
    };

    /// Synthetic one-qubit idle gate of the given duration with zero samples.
    Delay delay_gate(const QubitId& q, std::int64_t duration_ns) const;

private:
    std::vector<QubitId> qubits_;
    std::vector<GateDecl> gates_;
    std::map<std::string, Calibration> calibrations_;
    bool delays_;
};

/// Name of the delay gate on `q` lasting `d` ns, e.g. `delay[q1,30]`.
std::string delay_gate_name(const QubitId& q, std::int64_t d);

/// Inverse of delay_gate_name; nullopt when `name` is not of that shape.
std::optional<std::pair<QubitId, std::int64_t>> parse_delay_gate_name(std::string_view name);

/// Parse and validate a chip-spec JSON document.
ChipSpec parse_chip_spec(std::string_view text);

ChipSpec load_chip_spec(const std::string& path);

}  // namespace pstt
