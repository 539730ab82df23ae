#include "pstt/equality.hpp"
#include "pstt/semantics.hpp"
#include "pstt/surface.hpp"

namespace pstt {

namespace {

std::string first_difference(const PulseMorphism& f, const PulseMorphism& g) {
    if (!(f.source == g.source)) return "sources " + to_string(f.source) + " and " + to_string(g.source) + " differ";
    if (!(f.target == g.target)) return "targets " + to_string(f.target) + " and " + to_string(g.target) + " differ";
    for (const auto& [q, s] : f.samples) {
        const auto& t = g.samples.at(q);
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] != t[i]) {
                std::int64_t at = 0;
                for (const auto& e : f.source.entries)
                    if (e.qubit == q) at = e.grade.ns + static_cast<std::int64_t>(i);
                return "channel " + q + " at t=" + std::to_string(at) + ": " + std::to_string(s[i]) + " vs " +
                       std::to_string(t[i]);
            }
    }
    return "interpretations differ";
}

}  // namespace

PreparedSide prepare_side(const Judgement& j, const ChipSpec& chip, std::size_t budget) {
    DerivationPtr d = check_or_throw(j, chip);
    NormalizeOptions opts;
    opts.budget = budget;
    PreparedSide side{j, normalize(j, chip, opts), std::nullopt, {}};
    try {
        PulseModel pulse(chip);
        side.pulse = interpret(pulse, j, *d);
    } catch (const SemanticsError& e) {
        side.pulse_error = e.what();
    }
    return side;
}

EqVerdict compare_sides(const PreparedSide& l, const PreparedSide& r, std::size_t budget) {
    EqVerdict v;
    v.left = l.normal;
    v.right = r.normal;
    if (v.left.exhausted || v.right.exhausted) {
        v.kind = EqVerdict::Kind::Unknown;
        v.detail = "normalisation budget of " + std::to_string(budget) + " steps exhausted";
        return v;
    }
    if (alpha_eq(v.left.term, v.right.term)) {
        v.kind = EqVerdict::Kind::Equal;
        return v;
    }
    if (!l.pulse || !r.pulse) {
        v.kind = EqVerdict::Kind::NotEqualByNormalForm;
        v.detail = "pulse model unavailable: " + (l.pulse ? r.pulse_error : l.pulse_error);
        return v;
    }
    const PulseMorphism& f = *l.pulse;
    const PulseMorphism& g = *r.pulse;
    if (f.source == g.source && f.target == g.target && f.samples == g.samples) {
        v.kind = EqVerdict::Kind::Unknown;
        v.detail = "normal forms differ but pulse interpretations agree";
    } else {
        v.kind = EqVerdict::Kind::NotEqualBySemantics;
        v.detail = first_difference(*l.pulse, *r.pulse);
    }
    return v;
}

EqVerdict judgementally_equal(const Context& g, const TermPtr& s, const TermPtr& t, const TypePtr& a,
                              const ChipSpec& chip, std::size_t budget) {
    const Judgement js{g, s, a};
    const Judgement jt{g, t, a};
    check_or_throw(jt, chip);
    PreparedSide left = prepare_side(js, chip, budget);
    return compare_sides(left, prepare_side(jt, chip, budget), budget);
}

}  // namespace pstt
