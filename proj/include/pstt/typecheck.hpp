#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pstt/chip.hpp"
#include "pstt/syntax.hpp"

namespace pstt {

class TypeError : public std::runtime_error {
public:
    enum class Kind {
        UnboundVariable,
        DuplicateUse,
        UnusedEntry,
        GradeMismatch,
        TypeMismatch,
        GateMismatch,
        UnknownGate,
    };

    TypeError(Kind kind, std::string message, Path path = {}, SourcePos pos = {}, std::string expected = {},
              std::string actual = {});

    Kind kind() const { return kind_; }
    const Path& path() const { return path_; }
    SourcePos pos() const { return pos_; }
    const std::string& expected() const { return expected_; }
    const std::string& actual() const { return actual_; }
    const std::string& message() const { return message_; }

private:
    Kind kind_;
    std::string message_;
    Path path_;
    SourcePos pos_;
    std::string expected_;
    std::string actual_;
};

std::string_view to_string(TypeError::Kind k);

/// Grade expression `constant + sum of slacks`, one slack per `let *` node.
struct SlackExpr {
    std::int64_t constant = 0;
    std::vector<int> slacks;  // sorted slack ids
};

struct SlackInfo {
    int id = 0;
    Path path;                       // the `let *` node introducing it
    std::vector<std::string> vars;   // free variables of the term inside its scrutinee
};

/// Result of synthesis on a bare term. A context
/// {x :^(offset(x) evaluated at an assignment of the slacks) type(x)}
/// derives the term for every slack assignment satisfying `constraints`.
struct OffsetReport {
    TypePtr type;
    std::vector<std::string> order;                   // free variables, first occurrence
    std::map<std::string, SlackExpr> offsets;
    std::map<std::string, TypePtr> types;
    std::vector<SlackInfo> slacks;
    /// Each pair (a, b) demands a == b: grades of the two components of a `let (x, y)`.
    std::vector<std::pair<SlackExpr, SlackExpr>> constraints;

    std::int64_t rigid(const std::string& v) const { return offsets.at(v).constant; }
};

using TypeEnv = std::map<std::string, TypePtr>;

/// Type and grade offsets of `t` given types for its free variables.
/// Throws TypeError.
OffsetReport synthesize(const TermPtr& t, const TypeEnv& env, const ChipSpec& chip);

/// The context obtained from a report with every slack fixed to zero
/// (or the least-adjusted assignment forced by the let-pair constraints).
Context infer_context(const OffsetReport& r);

struct Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

/// Evidence that a judgement is derivable. One node per term node, with the
/// local context in first-occurrence order and the solved rule parameter:
///   LetStar: the shift d applied to the scrutinee's context
///   LetPair, LetBox: the grade e of the bound variable(s) in the body
///   Gate: the gate duration; Box: the box grade
struct Derivation {
    TermPtr term;
    TypePtr type;
    Context context;
    Grade param;
    std::vector<DerivationPtr> premises;  // aligned with term->children
};

struct CheckResult {
    DerivationPtr derivation;
    std::optional<TypeError> error;

    bool ok() const { return derivation != nullptr; }
};

/// Decide Γ ⊢ t : A.
CheckResult check(const Judgement& j, const ChipSpec& chip);

/// Same as check but throwing on failure.
DerivationPtr check_or_throw(const Judgement& j, const ChipSpec& chip);

inline bool accepts(const Judgement& j, const ChipSpec& chip) { return check(j, chip).ok(); }

/// Check that every qubit in `a` is declared on the chip.
void check_type_wellformed(const TypePtr& a, const ChipSpec& chip);

}  // namespace pstt
