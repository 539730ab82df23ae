#include "pstt/surface.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <optional>

namespace pstt {

std::string Diagnostic::format(bool color) const {
    std::string sev;
    switch (severity) {
    case Severity::Error: sev = "error"; break;
    case Severity::Warning: sev = "warning"; break;
    case Severity::Note: sev = "note"; break;
    }
    if (color) {
        const char* code = severity == Severity::Error ? "\x1b[1;31m" : severity == Severity::Warning ? "\x1b[1;33m" : "\x1b[1;36m";
        sev = std::string(code) + sev + "\x1b[0m";
    }
    std::string loc = line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " : "";
    return loc + sev + ": " + message;
}

ParseError::ParseError(Diagnostic d) : std::runtime_error(d.format()), diag_(std::move(d)) {}

const Declaration* SourceFile::find(std::string_view name) const {
    for (const auto& d : declarations)
        if (d.name == name) return &d;
    return nullptr;
}

// Lexer -------------------------------------------------------------------

namespace {

enum class Tok {
    Ident, Int, LParen, RParen, LBracket, RBracket, Comma, Star, Equals, ColonCaret, Colon,
    KwLet, KwIn, KwBox, KwSchedule, Eof
};

struct Token {
    Tok kind;
    std::string text;
    std::int64_t value = 0;
    SourcePos pos;
};

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::Eof: return "end of input";
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Int: return "integer " + t.text;
    default: return "'" + t.text + "'";
    }
}

[[noreturn]] void fail(SourcePos pos, const std::string& msg) {
    throw ParseError(Diagnostic{Diagnostic::Severity::Error, msg, pos.line, pos.column});
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        SourcePos pos{line, col};
        auto simple = [&](Tok k, std::size_t n) {
            out.push_back(Token{k, std::string(src.substr(i, n)), 0, pos});
            advance(n);
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
                ++j;
            std::string word(src.substr(i, j - i));
            Tok k = Tok::Ident;
            if (word == "let") k = Tok::KwLet;
            else if (word == "in") k = Tok::KwIn;
            else if (word == "box") k = Tok::KwBox;
            else if (word == "schedule") k = Tok::KwSchedule;
            out.push_back(Token{k, word, 0, pos});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i + 1;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            std::string_view num = src.substr(i, j - i);
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
            if (ec != std::errc{}) fail(pos, "integer literal out of range");
            out.push_back(Token{Tok::Int, std::string(num), v, pos});
            advance(j - i);
            continue;
        }
        switch (c) {
        case '(': simple(Tok::LParen, 1); break;
        case ')': simple(Tok::RParen, 1); break;
        case '[': simple(Tok::LBracket, 1); break;
        case ']': simple(Tok::RBracket, 1); break;
        case ',': simple(Tok::Comma, 1); break;
        case '*': simple(Tok::Star, 1); break;
        case '=': simple(Tok::Equals, 1); break;
        case ':':
            if (i + 1 < src.size() && src[i + 1] == '^') simple(Tok::ColonCaret, 2);
            else simple(Tok::Colon, 1);
            break;
        default:
            fail(pos, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back(Token{Tok::Eof, "", 0, SourcePos{line, col}});
    return out;
}

// Parser ------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    SourceFile file() {
        SourceFile f;
        while (!at(Tok::Eof)) {
            Declaration d;
            d.pos = expect(Tok::KwSchedule, "'schedule'").pos;
            Token name = expect(Tok::Ident, "declaration name");
            d.name = name.text;
            if (f.find(d.name)) fail(name.pos, "duplicate declaration '" + d.name + "'");
            expect(Tok::LParen, "'('");
            if (!at(Tok::RParen)) d.judgement.context = context();
            expect(Tok::RParen, "')'");
            expect(Tok::Colon, "':'");
            d.judgement.type = type();
            expect(Tok::Equals, "'='");
            d.judgement.term = term();
            f.declarations.push_back(std::move(d));
        }
        return f;
    }

    Context context() {
        Context g;
        do {
            Token x = expect(Tok::Ident, "variable name");
            expect(Tok::ColonCaret, "':^'");
            Token d = expect(Tok::Int, "grade");
            TypePtr a = type();
            if (find_entry(g, x.text)) fail(x.pos, "variable '" + x.text + "' declared twice in context");
            g.push_back(ContextEntry{x.text, Grade{d.value}, a});
        } while (accept(Tok::Comma));
        return g;
    }

    TypePtr type() {
        TypePtr left = type_atom();
        if (accept(Tok::Star)) return tensor_type(left, type());
        return left;
    }

    TypePtr type_atom() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Int:
            if (t.value != 1) fail(t.pos, "expected type, found integer " + t.text);
            next();
            return unit_type();
        case Tok::Ident:
            next();
            return qubit_type(t.text);
        case Tok::LBracket: {
            next();
            Token d = expect(Tok::Int, "grade");
            expect(Tok::RBracket, "']'");
            return box_type(Grade{d.value}, type_atom());
        }
        case Tok::LParen: {
            next();
            TypePtr a = type();
            expect(Tok::RParen, "')'");
            return a;
        }
        default:
            fail(t.pos, "expected type, found " + describe(t));
        }
    }

    TermPtr term() {
        const Token t = peek();
        switch (t.kind) {
        case Tok::KwLet: return let_form();
        case Tok::KwBox: {
            next();
            Grade d = bracketed_grade();
            return box(d, term(), t.pos);
        }
        case Tok::Star:
            next();
            return star(t.pos);
        case Tok::LParen: {
            next();
            TermPtr first = term();
            if (accept(Tok::Comma)) {
                TermPtr second = term();
                expect(Tok::RParen, "')'");
                return pair(first, second, t.pos);
            }
            expect(Tok::RParen, "')' or ','");
            return first;
        }
        case Tok::Ident: {
            next();
            std::string gate = t.text;
            if (gate == "delay" && at(Tok::LBracket)) {
                next();
                Token q = expect(Tok::Ident, "qubit");
                expect(Tok::Comma, "','");
                Token d = expect(Tok::Int, "duration");
                expect(Tok::RBracket, "']'");
                gate = "delay[" + q.text + "," + d.text + "]";
                if (!at(Tok::LParen)) fail(peek().pos, "expected '(' after delay gate");
            }
            if (accept(Tok::LParen)) {
                std::vector<TermPtr> args;
                if (!at(Tok::RParen)) {
                    do {
                        args.push_back(term());
                    } while (accept(Tok::Comma));
                }
                expect(Tok::RParen, "')'");
                return gate_app(gate, std::move(args), t.pos);
            }
            return var(t.text, t.pos);
        }
        default:
            fail(t.pos, "expected term, found " + describe(t));
        }
    }

    void finish() {
        if (!at(Tok::Eof)) fail(peek().pos, "unexpected " + describe(peek()));
    }

private:
    TermPtr let_form() {
        SourcePos pos = next().pos;  // 'let'
        if (accept(Tok::Star)) {
            expect(Tok::Equals, "'='");
            TermPtr s = term();
            expect(Tok::KwIn, "'in'");
            return let_star(s, term(), pos);
        }
        if (accept(Tok::LParen)) {
            Token x = expect(Tok::Ident, "binder");
            expect(Tok::Comma, "','");
            Token y = expect(Tok::Ident, "binder");
            expect(Tok::RParen, "')'");
            if (x.text == y.text) fail(y.pos, "binders of a pair pattern must differ");
            expect(Tok::Equals, "'='");
            TermPtr s = term();
            expect(Tok::KwIn, "'in'");
            return let_pair(x.text, y.text, s, term(), pos);
        }
        if (accept(Tok::KwBox)) {
            Grade d = bracketed_grade();
            Token x = expect(Tok::Ident, "binder");
            expect(Tok::Equals, "'='");
            TermPtr s = term();
            expect(Tok::KwIn, "'in'");
            return let_box(d, x.text, s, term(), pos);
        }
        fail(peek().pos, "expected '*', '(' or 'box' after 'let', found " + describe(peek()));
    }

    Grade bracketed_grade() {
        expect(Tok::LBracket, "'['");
        Token d = expect(Tok::Int, "grade");
        expect(Tok::RBracket, "']'");
        return Grade{d.value};
    }

    const Token& peek() const { return toks_[pos_]; }
    bool at(Tok k) const { return peek().kind == k; }
    const Token& next() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (!at(k)) return false;
        ++pos_;
        return true;
    }
    const Token& expect(Tok k, const std::string& what) {
        if (!at(k)) fail(peek().pos, "expected " + what + ", found " + describe(peek()));
        return next();
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

SourceFile parse(std::string_view text) {
    Parser p(text);
    return p.file();
}

TermPtr parse_term(std::string_view text) {
    Parser p(text);
    TermPtr t = p.term();
    p.finish();
    return t;
}

TypePtr parse_type(std::string_view text) {
    Parser p(text);
    TypePtr t = p.type();
    p.finish();
    return t;
}

Context parse_context(std::string_view text) {
    Parser p(text);
    Context g;
    if (text.find_first_not_of(" \t\r\n") != std::string_view::npos) g = p.context();
    p.finish();
    return g;
}

// Printer -----------------------------------------------------------------

namespace {

void print_type(const Type& t, std::string& out) {
    switch (t.kind) {
    case TypeKind::Unit: out += "1"; return;
    case TypeKind::Qubit: out += t.qubit; return;
    case TypeKind::Tensor:
        if (t.left->kind == TypeKind::Tensor) {
            out += "(";
            print_type(*t.left, out);
            out += ")";
        } else {
            print_type(*t.left, out);
        }
        out += " * ";
        print_type(*t.right, out);
        return;
    case TypeKind::Box:
        out += "[" + to_string(t.grade) + "] ";
        if (t.left->kind == TypeKind::Tensor) {
            out += "(";
            print_type(*t.left, out);
            out += ")";
        } else {
            print_type(*t.left, out);
        }
        return;
    }
}

using Namer = std::map<std::string, std::string>;

struct TermPrinter {
    bool canonical = false;
    int counter = 0;
    std::vector<std::pair<std::string, std::string>> scope;  // source name -> printed name

    std::string name_of(const std::string& n) const {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == n) return it->second;
        return n;
    }

    std::string bind(const std::string& n) {
        std::string shown = canonical ? "#" + std::to_string(counter++) : n;
        scope.emplace_back(n, shown);
        return shown;
    }

    void grouped(const TermPtr& t, std::string& out) {
        if (t->is_let()) {
            out += "(";
            go(t, out);
            out += ")";
        } else {
            go(t, out);
        }
    }

    void go(const TermPtr& t, std::string& out) {
        switch (t->kind) {
        case TermKind::Var: out += name_of(t->name); return;
        case TermKind::Star: out += "*"; return;
        case TermKind::LetStar:
            out += "let * = ";
            grouped(t->scrutinee(), out);
            out += " in ";
            go(t->body(), out);
            return;
        case TermKind::Gate:
            out += t->name + "(";
            for (std::size_t i = 0; i < t->children.size(); ++i) {
                if (i) out += ", ";
                go(t->children[i], out);
            }
            out += ")";
            return;
        case TermKind::Pair:
            out += "(";
            go(t->children[0], out);
            out += ", ";
            go(t->children[1], out);
            out += ")";
            return;
        case TermKind::LetPair: {
            std::string scrut;
            grouped(t->scrutinee(), scrut);
            std::string x = bind(t->x), y = bind(t->y);
            out += "let (" + x + ", " + y + ") = " + scrut + " in ";
            go(t->body(), out);
            scope.resize(scope.size() - 2);
            return;
        }
        case TermKind::Box:
            out += "box[" + to_string(t->grade) + "] ";
            grouped(t->body(), out);
            return;
        case TermKind::LetBox: {
            std::string scrut;
            grouped(t->scrutinee(), scrut);
            std::string x = bind(t->x);
            out += "let box[" + to_string(t->grade) + "] " + x + " = " + scrut + " in ";
            go(t->body(), out);
            scope.pop_back();
            return;
        }
        }
    }
};

}  // namespace

std::string print(const TermPtr& t) {
    std::string out;
    TermPrinter p;
    p.go(t, out);
    return out;
}

std::string canonical_key(const TermPtr& t) {
    std::string out;
    TermPrinter p;
    p.canonical = true;
    p.go(t, out);
    return out;
}

std::string print(const TypePtr& t) {
    std::string out;
    print_type(*t, out);
    return out;
}

std::string print(const Context& g) {
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out += ", ";
        out += g[i].name + ":^" + to_string(g[i].grade) + " " + print(g[i].type);
    }
    return out;
}

std::string print(const Judgement& j) {
    std::string ctx = print(j.context);
    return (ctx.empty() ? "" : ctx + " ") + "|- " + print(j.term) + " : " + print(j.type);
}

std::string print(const Declaration& d) {
    return "schedule " + d.name + " (" + print(d.judgement.context) + ") : " + print(d.judgement.type) + " = " +
           print(d.judgement.term);
}

std::string print(const SourceFile& f) {
    std::string out;
    for (const auto& d : f.declarations) out += print(d) + "\n";
    return out;
}

}  // namespace pstt
