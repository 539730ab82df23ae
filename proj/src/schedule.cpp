#include "pstt/schedule.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace pstt {

Schedule schedule_of(const PulseMorphism& f) {
    Schedule s;
    for (const auto& e : f.source.entries) {
        Channel c;
        c.qubit = e.qubit;
        c.start_ns = e.grade.ns;
        for (const auto& t : f.target.entries)
            if (t.qubit == e.qubit) c.end_ns = t.grade.ns;
        c.samples = f.samples.at(e.qubit);
        s.channels[e.qubit] = std::move(c);
    }
    s.provenance = f.provenance;
    std::sort(s.provenance.begin(), s.provenance.end());
    return s;
}

Schedule emit(const Judgement& j, const ChipSpec& chip) {
    PulseModel m(chip);
    return schedule_of(interpret(m, j, chip));
}

bool ValidationReport::ok() const {
    if (!problems.empty()) return false;
    return std::all_of(channels.begin(), channels.end(), [](const ChannelReport& c) { return c.ok(); });
}

namespace {

// Maximal runs of nanoseconds in [lo, hi) where pred(count) holds.
template <class P>
std::vector<Interval> runs(const std::vector<int>& count, std::int64_t lo, P pred) {
    std::vector<Interval> out;
    for (std::size_t i = 0; i < count.size(); ++i) {
        if (!pred(count[i], lo + static_cast<std::int64_t>(i))) continue;
        std::int64_t t = lo + static_cast<std::int64_t>(i);
        if (!out.empty() && out.back().end == t)
            out.back().end = t + 1;
        else
            out.push_back({t, t + 1});
    }
    return out;
}

void merge_into(std::vector<Interval>& into, const std::vector<Interval>& more) {
    into.insert(into.end(), more.begin(), more.end());
    std::sort(into.begin(), into.end(), [](const Interval& a, const Interval& b) {
        return a.start != b.start ? a.start < b.start : a.end < b.end;
    });
    std::vector<Interval> merged;
    for (const auto& iv : into) {
        if (!merged.empty() && iv.start <= merged.back().end)
            merged.back().end = std::max(merged.back().end, iv.end);
        else
            merged.push_back(iv);
    }
    into = std::move(merged);
}

// Gaps and overlaps of a set of intervals measured against `expected`.
void tile(const std::vector<Interval>& pieces, const Interval& expected, ChannelReport& r) {
    std::int64_t lo = expected.start, hi = expected.end;
    for (const auto& p : pieces) {
        lo = std::min(lo, p.start);
        hi = std::max(hi, p.end);
    }
    if (hi <= lo) return;
    std::vector<int> count(static_cast<std::size_t>(hi - lo), 0);
    for (const auto& p : pieces)
        for (std::int64_t t = p.start; t < p.end; ++t) ++count[static_cast<std::size_t>(t - lo)];
    auto inside = [&](std::int64_t t) { return t >= expected.start && t < expected.end; };
    merge_into(r.gaps, runs(count, lo, [&](int c, std::int64_t t) { return c == 0 && inside(t); }));
    merge_into(r.overlaps, runs(count, lo, [&](int c, std::int64_t t) { return c >= 2 || (c == 1 && !inside(t)); }));
}

}  // namespace

ValidationReport validate(const Schedule& s, const Judgement& j) {
    const ChipSpec no_gates({}, {}, {});
    PulseModel shape_only(no_gates);
    PulseObject from, to;
    ValidationReport rep;
    try {
        from = context_object(shape_only, j.context);
        to = type_object(shape_only, *j.type);
    } catch (const SemanticsError& e) {
        rep.problems.push_back(e.what());
        return rep;
    }
    std::map<QubitId, Interval> expected;
    for (const auto& e : from.entries) expected[e.qubit].start = e.grade.ns;
    for (const auto& e : to.entries) {
        auto it = expected.find(e.qubit);
        if (it == expected.end())
            rep.problems.push_back("qubit " + e.qubit + " appears in the result but not the context");
        else
            it->second.end = e.grade.ns;
    }
    for (const auto& [q, iv] : expected) {
        bool in_result = std::any_of(to.entries.begin(), to.entries.end(), [&](const PulseEntry& e) { return e.qubit == q; });
        if (!in_result) rep.problems.push_back("qubit " + q + " is consumed without reaching the result");
        auto it = s.channels.find(q);
        ChannelReport cr;
        cr.qubit = q;
        cr.expected = iv;
        if (it == s.channels.end()) {
            cr.covered = {iv.start, iv.start};
            if (iv.end > iv.start) cr.gaps.push_back(iv);
            rep.channels.push_back(std::move(cr));
            continue;
        }
        const Channel& c = it->second;
        if (c.start_ns != iv.start || c.end_ns != iv.end)
            rep.problems.push_back("channel " + q + " declares [" + std::to_string(c.start_ns) + ", " +
                                   std::to_string(c.end_ns) + ") but the judgement dictates [" +
                                   std::to_string(iv.start) + ", " + std::to_string(iv.end) + ")");
        cr.covered = {c.start_ns, c.start_ns + static_cast<std::int64_t>(c.samples.size())};
        tile({cr.covered}, iv, cr);
        std::vector<Interval> gates;
        for (const auto& p : s.provenance)
            if (p.qubit == q) gates.push_back({p.start_ns, p.end_ns});
        tile(gates, iv, cr);
        rep.channels.push_back(std::move(cr));
    }
    for (const auto& [q, c] : s.channels)
        if (!expected.count(q)) {
            if (c.end_ns > c.start_ns || !c.samples.empty())
                rep.problems.push_back("channel " + q + " is not part of the judgement");
        }
    return rep;
}

std::string to_string(const ValidationReport& r) {
    std::string s;
    auto ivs = [](const std::vector<Interval>& v) {
        std::string o;
        for (const auto& i : v) o += " [" + std::to_string(i.start) + "," + std::to_string(i.end) + ")";
        return o;
    };
    for (const auto& c : r.channels) {
        s += c.qubit + ": expected [" + std::to_string(c.expected.start) + "," + std::to_string(c.expected.end) +
             ") covered [" + std::to_string(c.covered.start) + "," + std::to_string(c.covered.end) + ")";
        if (c.ok()) s += " ok";
        if (!c.gaps.empty()) s += " gaps" + ivs(c.gaps);
        if (!c.overlaps.empty()) s += " overlaps" + ivs(c.overlaps);
        s += "\n";
    }
    for (const auto& p : r.problems) s += "problem: " + p + "\n";
    s += r.ok() ? "pass\n" : "FAIL\n";
    return s;
}

std::string to_json(const Schedule& s) {
    nlohmann::json j;
    j["channels"] = nlohmann::json::object();
    for (const auto& [q, c] : s.channels)
        j["channels"][q] = {{"start_ns", c.start_ns}, {"end_ns", c.end_ns}, {"samples", c.samples}};
    j["provenance"] = nlohmann::json::array();
    for (const auto& p : s.provenance)
        j["provenance"].push_back({{"gate", p.gate}, {"qubit", p.qubit}, {"start_ns", p.start_ns}, {"end_ns", p.end_ns}});
    return j.dump(2) + "\n";
}

Schedule schedule_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("schedule JSON: ") + e.what());
    }
    Schedule s;
    try {
        for (const auto& [q, c] : j.at("channels").items()) {
            Channel ch;
            ch.qubit = q;
            ch.start_ns = c.at("start_ns").get<std::int64_t>();
            ch.end_ns = c.at("end_ns").get<std::int64_t>();
            ch.samples = c.at("samples").get<std::vector<Sample>>();
            s.channels[q] = std::move(ch);
        }
        for (const auto& p : j.at("provenance"))
            s.provenance.push_back({p.at("gate").get<std::string>(), p.at("qubit").get<std::string>(),
                                    p.at("start_ns").get<std::int64_t>(), p.at("end_ns").get<std::int64_t>()});
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("schedule JSON: ") + e.what());
    }
    std::sort(s.provenance.begin(), s.provenance.end());
    return s;
}

}  // namespace pstt
