#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pstt {

/// A time offset in nanoseconds. Grades form the integers under addition.
struct Grade {
    std::int64_t ns = 0;

    constexpr Grade() = default;
    constexpr explicit Grade(std::int64_t v) : ns(v) {}

    friend constexpr Grade operator+(Grade a, Grade b) { return Grade{a.ns + b.ns}; }
    friend constexpr Grade operator-(Grade a, Grade b) { return Grade{a.ns - b.ns}; }
    friend constexpr Grade operator-(Grade a) { return Grade{-a.ns}; }
    constexpr Grade& operator+=(Grade o) { ns += o.ns; return *this; }
    friend constexpr auto operator<=>(Grade, Grade) = default;
};

std::string to_string(Grade g);

// Types -------------------------------------------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

enum class TypeKind { Unit, Qubit, Tensor, Box };

struct Type {
    TypeKind kind = TypeKind::Unit;
    std::string qubit;   // Qubit
    Grade grade;         // Box
    TypePtr left;        // Tensor left operand, Box body
    TypePtr right;       // Tensor right operand
};

TypePtr unit_type();
TypePtr qubit_type(std::string name);
TypePtr tensor_type(TypePtr a, TypePtr b);
TypePtr box_type(Grade d, TypePtr a);

/// Right-nested tensor of the given types; the unit type when empty.
TypePtr tensor_of(const std::vector<TypePtr>& parts);

bool type_equal(const Type& a, const Type& b);
inline bool type_equal(const TypePtr& a, const TypePtr& b) { return type_equal(*a, *b); }

/// Qubit labels occurring in a type, left to right.
std::vector<std::string> type_qubits(const Type& t);

// Terms -------------------------------------------------------------------

struct SourcePos {
    int line = 0;
    int column = 0;
};

enum class TermKind { Var, Star, LetStar, Gate, Pair, LetPair, Box, LetBox };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable term node.
///
/// Child layout by kind:
///   LetStar  [scrutinee, body]
///   Gate     [arg...]
///   Pair     [left, right]
///   LetPair  [scrutinee, body], binders x, y
///   Box      [body]
///   LetBox   [scrutinee, body], binder x
struct Term {
    TermKind kind = TermKind::Star;
    std::string name;  // variable name (Var) or gate name (Gate)
    std::string x;     // first binder (LetPair, LetBox)
    std::string y;     // second binder (LetPair)
    Grade grade;       // Box, LetBox
    std::vector<TermPtr> children;
    SourcePos pos;

    const TermPtr& scrutinee() const { return children.at(0); }
    const TermPtr& body() const { return kind == TermKind::Box ? children.at(0) : children.at(1); }
    bool is_let() const {
        return kind == TermKind::LetStar || kind == TermKind::LetPair || kind == TermKind::LetBox;
    }
};

TermPtr var(std::string name, SourcePos pos = {});
TermPtr star(SourcePos pos = {});
TermPtr let_star(TermPtr scrutinee, TermPtr body, SourcePos pos = {});
TermPtr gate_app(std::string gate, std::vector<TermPtr> args, SourcePos pos = {});
TermPtr pair(TermPtr left, TermPtr right, SourcePos pos = {});
TermPtr let_pair(std::string x, std::string y, TermPtr scrutinee, TermPtr body, SourcePos pos = {});
TermPtr box(Grade d, TermPtr body, SourcePos pos = {});
TermPtr let_box(Grade d, std::string x, TermPtr scrutinee, TermPtr body, SourcePos pos = {});

/// Copy of `t` with its children replaced.
TermPtr with_children(const Term& t, std::vector<TermPtr> children);

/// Names bound by this node (not its descendants).
std::vector<std::string> node_binders(const Term& t);

/// Free variables in left-to-right order of first occurrence.
std::vector<std::string> free_vars(const TermPtr& t);

/// Number of free occurrences of `name` in `t`.
int count_free(const TermPtr& t, std::string_view name);

/// Every name occurring in `t`, free or bound.
std::vector<std::string> all_names(const TermPtr& t);

/// Number of AST nodes.
std::size_t term_size(const TermPtr& t);

/// Capture-avoiding substitution t[x := s].
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s);

/// Rename the bound variable `from` at this node to `to` (also in the scope it governs).
TermPtr rename_binder(const TermPtr& t, const std::string& from, const std::string& to);

bool alpha_eq(const TermPtr& s, const TermPtr& t);

/// Fresh variant of `base`: the root of `base` with the smallest numeric suffix
/// not present in `avoid`. Returns `base` itself when it is not in `avoid`.
std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid);

/// Rename every binder so that all bound names are distinct from each other and
/// from the free variables. Alpha-equivalent to the input.
TermPtr uniquify_binders(const TermPtr& t);

// Positions ----------------------------------------------------------------

using Path = std::vector<int>;

const TermPtr& subterm_at(const TermPtr& t, const Path& p);
TermPtr replace_at(const TermPtr& t, const Path& p, TermPtr replacement);
std::string to_string(const Path& p);

// Contexts and judgements ---------------------------------------------------

struct ContextEntry {
    std::string name;
    Grade grade;
    TypePtr type;
};

using Context = std::vector<ContextEntry>;

/// d + Γ: every grade increased by d.
Context shift_context(Grade d, const Context& g);

const ContextEntry* find_entry(const Context& g, std::string_view name);

struct Judgement {
    Context context;
    TermPtr term;
    TypePtr type;
};

}  // namespace pstt
