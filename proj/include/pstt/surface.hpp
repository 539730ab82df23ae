#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pstt/syntax.hpp"

namespace pstt {

struct Diagnostic {
    enum class Severity { Error, Warning, Note };

    Severity severity = Severity::Error;
    std::string message;
    int line = 0;
    int column = 0;

    std::string format(bool color = false) const;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(Diagnostic d);
    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

/// `schedule NAME (CTX) : TYPE = TERM`
struct Declaration {
    std::string name;
    Judgement judgement;
    SourcePos pos;
};

struct SourceFile {
    std::vector<Declaration> declarations;

    const Declaration* find(std::string_view name) const;
};

// Grammar:
//   A ::= "1" | qubit | A "*" A | "[" int "]" A | "(" A ")"        (* right-assoc, [d] binds tighter)
//   t ::= x | "*" | "(" t "," t ")" | "(" t ")"
//       | "let" "*" "=" t "in" t
//       | "let" "(" x "," y ")" "=" t "in" t
//       | "box" "[" int "]" t
//       | "let" "box" "[" int "]" x "=" t "in" t
//       | G "(" t {"," t} ")" | "delay" "[" q "," int "]" "(" t ")"
//   Γ ::= [ x ":^" int A {"," x ":^" int A} ]
// `#` starts a line comment.

SourceFile parse(std::string_view text);
TermPtr parse_term(std::string_view text);
TypePtr parse_type(std::string_view text);
Context parse_context(std::string_view text);

std::string print(const TermPtr& t);
std::string print(const TypePtr& t);
std::string print(const Context& g);
std::string print(const Judgement& j);
std::string print(const Declaration& d);
std::string print(const SourceFile& f);

/// Printing with bound variables replaced by canonical names `#0, #1, ...` in
/// binding order. Two terms are alpha-equivalent iff their keys coincide.
std::string canonical_key(const TermPtr& t);

}  // namespace pstt
