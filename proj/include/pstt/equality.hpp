#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pstt/chip.hpp"
#include "pstt/syntax.hpp"
#include "pstt/typecheck.hpp"

namespace pstt {

// Equality rules -------------------------------------------------------------

enum class LetKind { Star, Pair, Box };

enum class RuleKind { BetaUnit, BetaPair, BetaBox, EtaUnit, EtaPair, EtaBox, Commute };

/// What the outer `let` of a commuting conversion is commuted with:
///   Scrut*  `let L = s in let M = t in u  =  let M = (let L = s in t) in u`
///   Swap*   `let L = s in let M = t in u  =  let M = t in let L = s in u`
///   Gate    `let L = s in G(.., t_i, ..)  =  G(.., let L = s in t_i, ..)`
///   PairLeft / PairRight, Box            analogous for `(t, u)` and `box d t`
enum class Conversion { ScrutStar, SwapStar, Gate, PairLeft, PairRight, ScrutPair, SwapPair, Box, ScrutBox, SwapBox };

/// Forward rewrites the left-hand side of a rule (as stated above, and with
/// the redex or the expanded eta form on the left) into its right-hand side.
enum class Direction { Forward, Backward };

struct RuleInstance {
    RuleKind kind = RuleKind::BetaUnit;
    LetKind outer = LetKind::Star;            // Commute: kind of the let being moved
    Conversion conversion = Conversion::Gate; // Commute only
    Direction direction = Direction::Forward;
    Path path;
    int index = 0;  // gate argument for Conversion::Gate
    Grade grade;    // box grade for eta-box expansion

    /// Rule name, e.g. `beta-pair`, `eta-box`, `cc-star-swap-pair`.
    std::string name() const;
    /// Name, direction and position, e.g. `cc-pair-gate <- /1 arg 0`.
    std::string describe() const;
};

std::optional<LetKind> let_kind(const Term& t);
std::string_view to_string(LetKind k);
std::string_view to_string(Conversion c);

/// The ten conversions an outer let can take part in, in a fixed order.
const std::vector<Conversion>& all_conversions();

/// Apply one rule instance at its path. Returns nullopt when the subterm does
/// not match the rule's pattern or the rewrite would capture a variable.
/// Typing side conditions are not checked here. Fresh binder names avoid
/// every name in `root` and in `avoid`.
std::optional<TermPtr> apply_rule(const TermPtr& root, const RuleInstance& r,
                                  const std::vector<std::string>& avoid = {});

// Normalisation --------------------------------------------------------------

struct NormalForm {
    TermPtr term;
    std::vector<RuleInstance> trace;
    bool exhausted = false;  // budget ran out; `term` is the last term reached
};

using StepObserver = std::function<void(const RuleInstance&, const TermPtr& before, const TermPtr& after)>;

struct NormalizeOptions {
    std::size_t budget = 10000;
    StepObserver observer;
};

/// Rewrite the term of an accepted judgement to its normal form.
///
/// Strategy: beta reduction and hoisting of every let out of gate arguments,
/// pair components, box bodies and let scrutinees; eta expansion of each
/// non-qubit leaf of the let-free core (followed by more hoisting) until the
/// core holds only qubit-typed leaves and `*`; sorting of the let prefix into
/// the canonical dependency-respecting order by adjacent swaps; finally eta
/// contraction, innermost let first, wherever a let can be pushed onto a
/// matching `(x, y)`, `box d x` or `*` in the core.
///
/// Throws TypeError if the judgement is not accepted.
NormalForm normalize(const Judgement& j, const ChipSpec& chip, const NormalizeOptions& opts = {});

// Judgemental equality -------------------------------------------------------

struct EqVerdict {
    enum class Kind { Equal, NotEqualByNormalForm, NotEqualBySemantics, Unknown };

    Kind kind = Kind::Unknown;
    NormalForm left;
    NormalForm right;
    std::string detail;  // semantic witness or reason for Unknown
};

std::string_view to_string(EqVerdict::Kind k);

/// Decide Γ ⊢ s = t : A. Both judgements must be accepted (TypeError otherwise).
/// Equal when the normal forms are alpha-equal; otherwise the pulse-model
/// interpretations decide between NotEqualBySemantics and Unknown. When the
/// pulse model cannot interpret the terms (missing calibration) the verdict is
/// NotEqualByNormalForm.
EqVerdict judgementally_equal(const Context& g, const TermPtr& s, const TermPtr& t, const TypePtr& a,
                              const ChipSpec& chip, std::size_t budget = 10000);

}  // namespace pstt
