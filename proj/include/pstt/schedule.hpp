#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pstt/chip.hpp"
#include "pstt/semantics.hpp"
#include "pstt/syntax.hpp"

namespace pstt {

struct Channel {
    QubitId qubit;
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;
    std::vector<Sample> samples;

    friend bool operator==(const Channel&, const Channel&) = default;
};

/// Complete input signals for the qubits of a judgement, relative to the
/// completion time 0 of its qubit-typed results.
struct Schedule {
    std::map<QubitId, Channel> channels;
    std::vector<Provenance> provenance;  // sorted

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Interpret an accepted judgement in the pulse model and read off one channel
/// per qubit. Throws TypeError, SemanticsError (missing calibration, qubit collision).
Schedule emit(const Judgement& j, const ChipSpec& chip);

/// Schedule of an already interpreted morphism.
Schedule schedule_of(const PulseMorphism& f);

struct Interval {
    std::int64_t start = 0;
    std::int64_t end = 0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct ChannelReport {
    QubitId qubit;
    Interval expected;  // from the judgement's context and result grades
    Interval covered;   // [start, start + number of samples)
    std::vector<Interval> gaps;
    std::vector<Interval> overlaps;

    bool ok() const { return gaps.empty() && overlaps.empty(); }
};

struct ValidationReport {
    std::vector<ChannelReport> channels;
    std::vector<std::string> problems;  // channels missing, unexpected, or with a moved origin

    bool ok() const;
};

/// Check that every channel is tiled exactly once, by samples and by gate
/// provenance, over the interval dictated by the judgement. A short sample
/// array shows up as a gap at the end of its channel and a long one as an
/// overlap there, since a bare array carries no timestamps of its own.
ValidationReport validate(const Schedule& s, const Judgement& j);

std::string to_string(const ValidationReport& r);

/// Byte-stable JSON with sorted keys.
std::string to_json(const Schedule& s);

/// Inverse of to_json. Throws std::runtime_error on malformed input.
Schedule schedule_from_json(std::string_view text);

}  // namespace pstt
