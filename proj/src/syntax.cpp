#include "pstt/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_set>

namespace pstt {

std::string to_string(Grade g) { return std::to_string(g.ns); }

// Types -------------------------------------------------------------------

TypePtr unit_type() {
    static const TypePtr unit = std::make_shared<const Type>();
    return unit;
}

TypePtr qubit_type(std::string name) {
    Type t;
    t.kind = TypeKind::Qubit;
    t.qubit = std::move(name);
    return std::make_shared<const Type>(std::move(t));
}

TypePtr tensor_type(TypePtr a, TypePtr b) {
    Type t;
    t.kind = TypeKind::Tensor;
    t.left = std::move(a);
    t.right = std::move(b);
    return std::make_shared<const Type>(std::move(t));
}

TypePtr box_type(Grade d, TypePtr a) {
    Type t;
    t.kind = TypeKind::Box;
    t.grade = d;
    t.left = std::move(a);
    return std::make_shared<const Type>(std::move(t));
}

TypePtr tensor_of(const std::vector<TypePtr>& parts) {
    if (parts.empty()) return unit_type();
    TypePtr acc = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = tensor_type(*it, acc);
    return acc;
}

bool type_equal(const Type& a, const Type& b) {
    if (&a == &b) return true;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case TypeKind::Unit: return true;
    case TypeKind::Qubit: return a.qubit == b.qubit;
    case TypeKind::Tensor: return type_equal(*a.left, *b.left) && type_equal(*a.right, *b.right);
    case TypeKind::Box: return a.grade == b.grade && type_equal(*a.left, *b.left);
    }
    return false;
}

static void collect_qubits(const Type& t, std::vector<std::string>& out) {
    switch (t.kind) {
    case TypeKind::Unit: break;
    case TypeKind::Qubit: out.push_back(t.qubit); break;
    case TypeKind::Tensor:
        collect_qubits(*t.left, out);
        collect_qubits(*t.right, out);
        break;
    case TypeKind::Box: collect_qubits(*t.left, out); break;
    }
}

std::vector<std::string> type_qubits(const Type& t) {
    std::vector<std::string> out;
    collect_qubits(t, out);
    return out;
}

// Terms -------------------------------------------------------------------

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

}  // namespace

TermPtr var(std::string name, SourcePos pos) {
    Term t;
    t.kind = TermKind::Var;
    t.name = std::move(name);
    t.pos = pos;
    return make(std::move(t));
}

TermPtr star(SourcePos pos) {
    Term t;
    t.kind = TermKind::Star;
    t.pos = pos;
    return make(std::move(t));
}

TermPtr let_star(TermPtr scrutinee, TermPtr body, SourcePos pos) {
    Term t;
    t.kind = TermKind::LetStar;
    t.children = {std::move(scrutinee), std::move(body)};
    t.pos = pos;
    return make(std::move(t));
}

TermPtr gate_app(std::string gate, std::vector<TermPtr> args, SourcePos pos) {
    Term t;
    t.kind = TermKind::Gate;
    t.name = std::move(gate);
    t.children = std::move(args);
    t.pos = pos;
    return make(std::move(t));
}

TermPtr pair(TermPtr left, TermPtr right, SourcePos pos) {
    Term t;
    t.kind = TermKind::Pair;
    t.children = {std::move(left), std::move(right)};
    t.pos = pos;
    return make(std::move(t));
}

TermPtr let_pair(std::string x, std::string y, TermPtr scrutinee, TermPtr body, SourcePos pos) {
    Term t;
    t.kind = TermKind::LetPair;
    t.x = std::move(x);
    t.y = std::move(y);
    t.children = {std::move(scrutinee), std::move(body)};
    t.pos = pos;
    return make(std::move(t));
}

TermPtr box(Grade d, TermPtr body, SourcePos pos) {
    Term t;
    t.kind = TermKind::Box;
    t.grade = d;
    t.children = {std::move(body)};
    t.pos = pos;
    return make(std::move(t));
}

TermPtr let_box(Grade d, std::string x, TermPtr scrutinee, TermPtr body, SourcePos pos) {
    Term t;
    t.kind = TermKind::LetBox;
    t.grade = d;
    t.x = std::move(x);
    t.children = {std::move(scrutinee), std::move(body)};
    t.pos = pos;
    return make(std::move(t));
}

TermPtr with_children(const Term& t, std::vector<TermPtr> children) {
    Term copy = t;
    copy.children = std::move(children);
    return make(std::move(copy));
}

std::vector<std::string> node_binders(const Term& t) {
    switch (t.kind) {
    case TermKind::LetPair: return {t.x, t.y};
    case TermKind::LetBox: return {t.x};
    default: return {};
    }
}

namespace {

bool binds(const Term& t, std::string_view name) {
    return (t.kind == TermKind::LetPair && (t.x == name || t.y == name)) ||
           (t.kind == TermKind::LetBox && t.x == name);
}

void collect_free(const TermPtr& t, std::vector<std::string>& bound, std::vector<std::string>& out) {
    switch (t->kind) {
    case TermKind::Var:
        if (std::find(bound.begin(), bound.end(), t->name) == bound.end() &&
            std::find(out.begin(), out.end(), t->name) == out.end())
            out.push_back(t->name);
        return;
    case TermKind::LetPair:
    case TermKind::LetBox: {
        collect_free(t->scrutinee(), bound, out);
        auto names = node_binders(*t);
        bound.insert(bound.end(), names.begin(), names.end());
        collect_free(t->body(), bound, out);
        bound.resize(bound.size() - names.size());
        return;
    }
    default:
        for (const auto& c : t->children) collect_free(c, bound, out);
    }
}

}  // namespace

std::vector<std::string> free_vars(const TermPtr& t) {
    std::vector<std::string> bound, out;
    collect_free(t, bound, out);
    return out;
}

int count_free(const TermPtr& t, std::string_view name) {
    switch (t->kind) {
    case TermKind::Var: return t->name == name ? 1 : 0;
    case TermKind::LetPair:
    case TermKind::LetBox: {
        int n = count_free(t->scrutinee(), name);
        if (!binds(*t, name)) n += count_free(t->body(), name);
        return n;
    }
    default: {
        int n = 0;
        for (const auto& c : t->children) n += count_free(c, name);
        return n;
    }
    }
}

static void collect_names(const TermPtr& t, std::vector<std::string>& out) {
    auto add = [&](const std::string& n) {
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    };
    if (t->kind == TermKind::Var) add(t->name);
    for (const auto& b : node_binders(*t)) add(b);
    for (const auto& c : t->children) collect_names(c, out);
}

std::vector<std::string> all_names(const TermPtr& t) {
    std::vector<std::string> out;
    collect_names(t, out);
    return out;
}

std::size_t term_size(const TermPtr& t) {
    std::size_t n = 1;
    for (const auto& c : t->children) n += term_size(c);
    return n;
}

std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid) {
    auto taken = [&](const std::string& n) { return std::find(avoid.begin(), avoid.end(), n) != avoid.end(); };
    if (!taken(base)) return base;
    // strip an existing numeric suffix so repeated renaming stays short
    std::string root = base;
    auto us = root.rfind('_');
    if (us != std::string::npos && us + 1 < root.size() &&
        std::all_of(root.begin() + static_cast<std::ptrdiff_t>(us) + 1, root.end(),
                    [](unsigned char c) { return std::isdigit(c); }))
        root.resize(us);
    for (int i = 1;; ++i) {
        std::string cand = root + "_" + std::to_string(i);
        if (!taken(cand)) return cand;
    }
}

namespace {

// Rename free occurrences of `from` to `to` (no capture checks: callers pick `to` fresh).
TermPtr rename_free(const TermPtr& t, const std::string& from, const std::string& to) {
    switch (t->kind) {
    case TermKind::Var:
        return t->name == from ? var(to, t->pos) : t;
    case TermKind::Star:
        return t;
    default: {
        std::vector<TermPtr> kids = t->children;
        if (t->is_let()) {
            kids[0] = rename_free(kids[0], from, to);
            if (!binds(*t, from)) kids[1] = rename_free(kids[1], from, to);
        } else {
            for (auto& k : kids) k = rename_free(k, from, to);
        }
        return with_children(*t, std::move(kids));
    }
    }
}

}  // namespace

TermPtr rename_binder(const TermPtr& t, const std::string& from, const std::string& to) {
    if (!binds(*t, from)) return t;
    Term copy = *t;
    if (copy.x == from) copy.x = to;
    else copy.y = to;
    copy.children[1] = rename_free(t->body(), from, to);
    return std::make_shared<const Term>(std::move(copy));
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s) {
    switch (t->kind) {
    case TermKind::Var:
        return t->name == x ? s : t;
    case TermKind::Star:
        return t;
    case TermKind::LetPair:
    case TermKind::LetBox: {
        TermPtr scrut = substitute(t->scrutinee(), x, s);
        if (binds(*t, x) || count_free(t->body(), x) == 0)
            return with_children(*t, {scrut, t->body()});
        TermPtr node = t;
        auto fv_s = free_vars(s);
        for (const auto& b : node_binders(*t)) {
            if (std::find(fv_s.begin(), fv_s.end(), b) == fv_s.end()) continue;
            auto avoid = fv_s;
            auto body_names = all_names(node->body());
            avoid.insert(avoid.end(), body_names.begin(), body_names.end());
            for (const auto& nb : node_binders(*node)) avoid.push_back(nb);
            avoid.push_back(x);
            node = rename_binder(node, b, fresh_name(b, avoid));
        }
        return with_children(*node, {scrut, substitute(node->body(), x, s)});
    }
    default: {
        std::vector<TermPtr> kids;
        kids.reserve(t->children.size());
        for (const auto& c : t->children) kids.push_back(substitute(c, x, s));
        return with_children(*t, std::move(kids));
    }
    }
}

namespace {

using Scope = std::vector<std::pair<std::string, int>>;

int lookup(const Scope& sc, const std::string& n) {
    for (auto it = sc.rbegin(); it != sc.rend(); ++it)
        if (it->first == n) return it->second;
    return -1;
}

bool alpha_rec(const TermPtr& s, const TermPtr& t, Scope& ls, Scope& rs, int& level) {
    if (s->kind != t->kind) return false;
    switch (s->kind) {
    case TermKind::Var: {
        int a = lookup(ls, s->name), b = lookup(rs, t->name);
        if (a < 0 && b < 0) return s->name == t->name;
        return a == b;
    }
    case TermKind::Star:
        return true;
    case TermKind::Gate:
        if (s->name != t->name) break;
        [[fallthrough]];
    case TermKind::Pair:
    case TermKind::LetStar:
    case TermKind::Box:
        if ((s->kind == TermKind::Box) && s->grade != t->grade) return false;
        if (s->children.size() != t->children.size()) return false;
        for (std::size_t i = 0; i < s->children.size(); ++i)
            if (!alpha_rec(s->children[i], t->children[i], ls, rs, level)) return false;
        return true;
    case TermKind::LetPair:
    case TermKind::LetBox: {
        if (s->grade != t->grade) return false;
        if (!alpha_rec(s->scrutinee(), t->scrutinee(), ls, rs, level)) return false;
        auto lb = node_binders(*s), rb = node_binders(*t);
        for (std::size_t i = 0; i < lb.size(); ++i) {
            ls.emplace_back(lb[i], level);
            rs.emplace_back(rb[i], level);
            ++level;
        }
        bool ok = alpha_rec(s->body(), t->body(), ls, rs, level);
        ls.resize(ls.size() - lb.size());
        rs.resize(rs.size() - rb.size());
        return ok;
    }
    }
    return false;
}

}  // namespace

bool alpha_eq(const TermPtr& s, const TermPtr& t) {
    Scope ls, rs;
    int level = 0;
    return alpha_rec(s, t, ls, rs, level);
}

namespace {

struct Uniquifier {
    std::vector<std::string> seen;  // names already claimed by a free variable or binder
    std::vector<std::string> all;   // every name a rename must avoid

    TermPtr go(const TermPtr& n) {
        if (n->kind == TermKind::Var || n->kind == TermKind::Star) return n;
        TermPtr node = n;
        for (const auto& b : node_binders(*n)) {
            if (std::find(seen.begin(), seen.end(), b) != seen.end()) {
                std::string nb = fresh_name(b, all);
                node = rename_binder(node, b, nb);
                all.push_back(nb);
                seen.push_back(nb);
            } else {
                seen.push_back(b);
            }
        }
        std::vector<TermPtr> kids;
        kids.reserve(node->children.size());
        for (const auto& c : node->children) kids.push_back(go(c));
        return with_children(*node, std::move(kids));
    }
};

}  // namespace

TermPtr uniquify_binders(const TermPtr& t) {
    Uniquifier u;
    u.seen = free_vars(t);
    u.all = all_names(t);
    return u.go(t);
}

// Positions ----------------------------------------------------------------

const TermPtr& subterm_at(const TermPtr& t, const Path& p) {
    const TermPtr* cur = &t;
    for (int i : p) cur = &(*cur)->children.at(static_cast<std::size_t>(i));
    return *cur;
}

TermPtr replace_at(const TermPtr& t, const Path& p, TermPtr replacement) {
    if (p.empty()) return replacement;
    std::vector<TermPtr> kids = t->children;
    auto idx = static_cast<std::size_t>(p.front());
    kids.at(idx) = replace_at(kids[idx], Path(p.begin() + 1, p.end()), std::move(replacement));
    return with_children(*t, std::move(kids));
}

std::string to_string(const Path& p) {
    std::string s = "/";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += '/';
        s += std::to_string(p[i]);
    }
    return s;
}

// Contexts ----------------------------------------------------------------

Context shift_context(Grade d, const Context& g) {
    Context out = g;
    for (auto& e : out) e.grade += d;
    return out;
}

const ContextEntry* find_entry(const Context& g, std::string_view name) {
    for (const auto& e : g)
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace pstt
