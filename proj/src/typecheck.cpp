#include "pstt/typecheck.hpp"

#include <algorithm>

#include <boost/rational.hpp>

#include "pstt/surface.hpp"

namespace pstt {

TypeError::TypeError(Kind kind, std::string message, Path path, SourcePos pos, std::string expected,
                     std::string actual)
    : std::runtime_error(message),
      kind_(kind),
      message_(std::move(message)),
      path_(std::move(path)),
      pos_(pos),
      expected_(std::move(expected)),
      actual_(std::move(actual)) {}

std::string_view to_string(TypeError::Kind k) {
    using K = TypeError::Kind;
    switch (k) {
    case K::UnboundVariable: return "unbound variable";
    case K::DuplicateUse: return "duplicate use";
    case K::UnusedEntry: return "unused context entry";
    case K::GradeMismatch: return "grade mismatch";
    case K::TypeMismatch: return "type mismatch";
    case K::GateMismatch: return "gate arity/qubit mismatch";
    case K::UnknownGate: return "unknown gate";
    }
    return "type error";
}

void check_type_wellformed(const TypePtr& a, const ChipSpec& chip) {
    for (const auto& q : type_qubits(*a))
        if (!chip.has_qubit(q))
            throw TypeError(TypeError::Kind::TypeMismatch, "type mentions unknown qubit '" + q + "'", {}, {}, "", q);
}

namespace {

using K = TypeError::Kind;

SlackExpr add_const(SlackExpr e, std::int64_t c) {
    e.constant += c;
    return e;
}

SlackExpr add_slack(SlackExpr e, int id) {
    e.slacks.insert(std::upper_bound(e.slacks.begin(), e.slacks.end(), id), id);
    return e;
}

// a - b where b's slacks are a sub-multiset of a's (b is an ancestor shift of a).
SlackExpr minus_prefix(const SlackExpr& a, const SlackExpr& b) {
    SlackExpr out;
    out.constant = a.constant - b.constant;
    std::set_difference(a.slacks.begin(), a.slacks.end(), b.slacks.begin(), b.slacks.end(),
                        std::back_inserter(out.slacks));
    return out;
}

struct FreeOcc {
    std::string name;
    SlackExpr shift;
    TypePtr type;
};

struct Node {
    TermPtr term;
    TypePtr type;
    Path path;
    SlackExpr shift;
    SlackExpr param;
    std::vector<FreeOcc> fv;
    std::vector<Node> kids;
};

// Pass 1: types, scoping and linearity ----------------------------------------

class Typer {
public:
    Typer(const TypeEnv& env, const ChipSpec& chip) : env_(env), chip_(chip) {}

    Node run(const TermPtr& t) {
        Path p;
        return go(t, p);
    }

    const std::vector<std::string>& free_order() const { return order_; }

private:
    struct Scoped {
        std::string name;
        TypePtr type;
        int uses = 0;
    };

    [[noreturn]] void fail(K kind, const std::string& msg, const Path& p, const TermPtr& t, std::string expected = {},
                           std::string actual = {}) {
        throw TypeError(kind, msg, p, t->pos, std::move(expected), std::move(actual));
    }

    void mismatch(const TypePtr& expected, const TypePtr& actual, const Path& p, const TermPtr& t,
                  const std::string& what) {
        if (!type_equal(expected, actual))
            fail(K::TypeMismatch, what + ": expected " + print(expected) + ", found " + print(actual), p, t,
                 print(expected), print(actual));
    }

    void bind(const std::string& n, TypePtr a) { scope_.push_back(Scoped{n, std::move(a), 0}); }

    void unbind(const Path& p, const TermPtr& t) {
        const Scoped& s = scope_.back();
        if (s.uses == 0) fail(K::UnusedEntry, "bound variable '" + s.name + "' is never used", p, t, "1", "0");
        scope_.pop_back();
    }

    Node go(const TermPtr& t, Path& p) {
        Node n;
        n.term = t;
        n.path = p;
        auto child = [&](int i) {
            p.push_back(i);
            Node c = go(t->children[i], p);
            p.pop_back();
            return c;
        };
        switch (t->kind) {
        case TermKind::Var: {
            for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
                if (it->name == t->name) {
                    if (++it->uses > 1) fail(K::DuplicateUse, "variable '" + t->name + "' used more than once", p, t);
                    n.type = it->type;
                    return n;
                }
            }
            auto e = env_.find(t->name);
            if (e == env_.end()) fail(K::UnboundVariable, "unbound variable '" + t->name + "'", p, t);
            if (std::find(order_.begin(), order_.end(), t->name) != order_.end())
                fail(K::DuplicateUse, "variable '" + t->name + "' used more than once", p, t);
            order_.push_back(t->name);
            n.type = e->second;
            return n;
        }
        case TermKind::Star:
            n.type = unit_type();
            return n;
        case TermKind::LetStar: {
            n.kids.push_back(child(0));
            mismatch(unit_type(), n.kids[0].type, n.kids[0].path, t->scrutinee(), "scrutinee of let *");
            n.kids.push_back(child(1));
            n.type = n.kids[1].type;
            return n;
        }
        case TermKind::Gate: {
            auto g = chip_.find_gate(t->name);
            if (!g) fail(K::UnknownGate, "unknown gate '" + t->name + "'", p, t);
            if (g->qubits.size() != t->children.size())
                fail(K::GateMismatch,
                     "gate '" + t->name + "' expects " + std::to_string(g->qubits.size()) + " arguments, got " +
                         std::to_string(t->children.size()),
                     p, t, std::to_string(g->qubits.size()), std::to_string(t->children.size()));
            std::vector<TypePtr> parts;
            for (std::size_t i = 0; i < t->children.size(); ++i) {
                n.kids.push_back(child(static_cast<int>(i)));
                TypePtr want = qubit_type(g->qubits[i]);
                if (!type_equal(want, n.kids.back().type))
                    fail(K::GateMismatch,
                         "argument " + std::to_string(i + 1) + " of '" + t->name + "': expected " + print(want) +
                             ", found " + print(n.kids.back().type),
                         n.kids.back().path, t->children[i], print(want), print(n.kids.back().type));
                parts.push_back(want);
            }
            n.type = tensor_of(parts);
            return n;
        }
        case TermKind::Pair:
            n.kids.push_back(child(0));
            n.kids.push_back(child(1));
            n.type = tensor_type(n.kids[0].type, n.kids[1].type);
            return n;
        case TermKind::LetPair: {
            if (t->x == t->y) fail(K::DuplicateUse, "pair pattern binds '" + t->x + "' twice", p, t);
            n.kids.push_back(child(0));
            const TypePtr& s = n.kids[0].type;
            if (s->kind != TypeKind::Tensor)
                fail(K::TypeMismatch, "scrutinee of let (" + t->x + ", " + t->y + ") must be a tensor, found " + print(s),
                     n.kids[0].path, t->scrutinee(), "A * B", print(s));
            bind(t->x, s->left);
            bind(t->y, s->right);
            n.kids.push_back(child(1));
            unbind(p, t);
            unbind(p, t);
            n.type = n.kids[1].type;
            return n;
        }
        case TermKind::Box:
            n.kids.push_back(child(0));
            n.type = box_type(t->grade, n.kids[0].type);
            return n;
        case TermKind::LetBox: {
            n.kids.push_back(child(0));
            const TypePtr& s = n.kids[0].type;
            if (s->kind != TypeKind::Box || s->grade != t->grade) {
                std::string want = "[" + to_string(t->grade) + "] A";
                fail(K::TypeMismatch, "scrutinee of let box[" + to_string(t->grade) + "] must have type " + want +
                                          ", found " + print(s),
                     n.kids[0].path, t->scrutinee(), want, print(s));
            }
            bind(t->x, s->left);
            n.kids.push_back(child(1));
            unbind(p, t);
            n.type = n.kids[1].type;
            return n;
        }
        }
        return n;
    }

    const TypeEnv& env_;
    const ChipSpec& chip_;
    std::vector<Scoped> scope_;
    std::vector<std::string> order_;
};

// Pass 2: grade shifts, top-down -------------------------------------------
//
// shift(n) is chosen so that a variable occurrence v has local grade
// shift(v) - shift(n) in the context of node n; the root has shift 0.

class Shifter {
public:
    std::vector<SlackInfo> slacks;
    std::vector<std::pair<SlackExpr, SlackExpr>> constraints;
    std::vector<Path> constraint_sites;

    void run(Node& root) { go(root, SlackExpr{}); }

private:
    static FreeOcc take(std::vector<FreeOcc>& fv, const std::string& name) {
        auto it = std::find_if(fv.begin(), fv.end(), [&](const FreeOcc& o) { return o.name == name; });
        FreeOcc o = *it;
        fv.erase(it);
        return o;
    }

    static void append(std::vector<FreeOcc>& out, const std::vector<FreeOcc>& in) {
        out.insert(out.end(), in.begin(), in.end());
    }

    void go(Node& n, const SlackExpr& s) {
        n.shift = s;
        const Term& t = *n.term;
        switch (t.kind) {
        case TermKind::Var:
            n.fv.push_back(FreeOcc{t.name, s, n.type});
            return;
        case TermKind::Star: return;
        case TermKind::LetStar: {
            int id = static_cast<int>(slacks.size());
            slacks.push_back(SlackInfo{id, n.path, {}});
            n.param = add_slack(SlackExpr{}, id);
            go(n.kids[0], add_slack(s, id));
            go(n.kids[1], s);
            append(n.fv, n.kids[0].fv);
            append(n.fv, n.kids[1].fv);
            return;
        }
        case TermKind::Gate: {
            const std::int64_t d = n.param.constant;  // duration, filled in by set_gate_durations
            for (auto& k : n.kids) {
                go(k, add_const(s, -d));
                append(n.fv, k.fv);
            }
            return;
        }
        case TermKind::Pair:
            for (auto& k : n.kids) {
                go(k, s);
                append(n.fv, k.fv);
            }
            return;
        case TermKind::Box:
            n.param = SlackExpr{t.grade.ns, {}};
            go(n.kids[0], add_const(s, t.grade.ns));
            n.fv = n.kids[0].fv;
            return;
        case TermKind::LetPair: {
            go(n.kids[1], s);
            std::vector<FreeOcc> body = n.kids[1].fv;
            FreeOcc x = take(body, t.x);
            FreeOcc y = take(body, t.y);
            constraints.emplace_back(x.shift, y.shift);
            constraint_sites.push_back(n.path);
            n.param = minus_prefix(x.shift, s);
            go(n.kids[0], x.shift);
            append(n.fv, n.kids[0].fv);
            append(n.fv, body);
            return;
        }
        case TermKind::LetBox: {
            go(n.kids[1], s);
            std::vector<FreeOcc> body = n.kids[1].fv;
            FreeOcc x = take(body, t.x);
            n.param = minus_prefix(x.shift, s);
            go(n.kids[0], add_const(x.shift, -t.grade.ns));
            append(n.fv, n.kids[0].fv);
            append(n.fv, body);
            return;
        }
        }
    }
};

void set_gate_durations(Node& n, const ChipSpec& chip) {
    if (n.term->kind == TermKind::Gate) n.param = SlackExpr{chip.find_gate(n.term->name)->duration_ns, {}};
    for (auto& k : n.kids) set_gate_durations(k, chip);
}

// Incremental exact elimination over the slack variables ---------------------

using Q = boost::rational<std::int64_t>;

class Solver {
public:
    explicit Solver(std::size_t n) : n_(n) {}

    /// Adds `lhs = rhs` (lhs an expression over slacks). Returns nullopt when
    /// consistent; otherwise the value lhs is already forced to take.
    std::optional<Q> add(const std::vector<Q>& coeffs, Q rhs) {
        std::vector<Q> row = coeffs;
        Q value = 0;  // value of the eliminated part under existing rows
        for (const auto& [pivot, r] : rows_) {
            if (row[pivot].numerator() == 0) continue;
            Q f = row[pivot];
            for (std::size_t j = 0; j < n_; ++j) row[j] -= f * r.coeffs[j];
            value += f * r.rhs;
        }
        std::size_t p = n_;
        for (std::size_t j = 0; j < n_; ++j)
            if (row[j].numerator() != 0) {
                p = j;
                break;
            }
        if (p == n_) {
            if (value != rhs) return value;
            return std::nullopt;
        }
        Q f = row[p];
        Row nr{row, rhs - value};
        for (auto& c : nr.coeffs) c /= f;
        nr.rhs /= f;
        for (auto& [pivot, r] : rows_) {
            if (r.coeffs[p].numerator() == 0) continue;
            Q g = r.coeffs[p];
            for (std::size_t j = 0; j < n_; ++j) r.coeffs[j] -= g * nr.coeffs[j];
            r.rhs -= g * nr.rhs;
        }
        rows_.emplace_back(p, std::move(nr));
        return std::nullopt;
    }

    /// Solution with free variables at zero.
    std::vector<Q> solution() const {
        std::vector<Q> x(n_, Q(0));
        for (const auto& [pivot, r] : rows_) x[pivot] = r.rhs;
        return x;
    }

private:
    struct Row {
        std::vector<Q> coeffs;
        Q rhs;
    };
    std::size_t n_;
    std::vector<std::pair<std::size_t, Row>> rows_;
};

std::vector<Q> coefficients(const SlackExpr& e, std::size_t n) {
    std::vector<Q> c(n, Q(0));
    for (int s : e.slacks) c[static_cast<std::size_t>(s)] += 1;
    return c;
}

std::vector<Q> difference(const SlackExpr& a, const SlackExpr& b, std::size_t n) {
    auto c = coefficients(a, n);
    for (int s : b.slacks) c[static_cast<std::size_t>(s)] -= 1;
    return c;
}

std::int64_t eval(const SlackExpr& e, const std::vector<std::int64_t>& sol) {
    std::int64_t v = e.constant;
    for (int s : e.slacks) v += sol[static_cast<std::size_t>(s)];
    return v;
}

std::string grade_str(const Q& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

const Node* find_node(const Node& n, const Path& p) {
    const Node* cur = &n;
    for (int i : p) cur = &cur->kids[static_cast<std::size_t>(i)];
    return cur;
}

// Solves the let-pair constraints, then `fixed` equations in order.
std::vector<std::int64_t> solve(const Node& root, const Shifter& sh,
                                const std::vector<std::pair<const FreeOcc*, std::int64_t>>& fixed) {
    std::size_t n = sh.slacks.size();
    Solver solver(n);
    for (std::size_t i = 0; i < sh.constraints.size(); ++i) {
        const auto& [a, b] = sh.constraints[i];
        auto forced = solver.add(difference(a, b, n), Q(b.constant - a.constant));
        if (forced) {
            const Node* site = find_node(root, sh.constraint_sites[i]);
            const Term& t = *site->term;
            throw TypeError(K::GradeMismatch,
                            "components '" + t.x + "' and '" + t.y + "' of a pair pattern are used at unequal grades",
                            site->path, t.pos, "0", grade_str(*forced + Q(a.constant - b.constant)));
        }
    }
    for (const auto& [occ, declared] : fixed) {
        auto forced = solver.add(coefficients(occ->shift, n), Q(declared - occ->shift.constant));
        if (forced) {
            std::string expected = grade_str(*forced + Q(occ->shift.constant));
            throw TypeError(K::GradeMismatch,
                            "grade mismatch for '" + occ->name + "': declared " + std::to_string(declared) +
                                ", derivation requires " + expected,
                            {}, {}, occ->name + ":^" + expected, occ->name + ":^" + std::to_string(declared));
        }
    }
    std::vector<std::int64_t> out;
    for (const Q& q : solver.solution()) {
        if (q.denominator() != 1)
            throw TypeError(K::GradeMismatch, "no integer assignment of let-unit shifts satisfies the grades");
        out.push_back(q.numerator());
    }
    return out;
}

DerivationPtr build(const Node& n, const std::vector<std::int64_t>& sol) {
    auto d = std::make_shared<Derivation>();
    d->term = n.term;
    d->type = n.type;
    std::int64_t base = eval(n.shift, sol);
    for (const auto& o : n.fv) d->context.push_back(ContextEntry{o.name, Grade{eval(o.shift, sol) - base}, o.type});
    d->param = Grade{eval(n.param, sol)};
    for (const auto& k : n.kids) d->premises.push_back(build(k, sol));
    return d;
}

struct Analysis {
    Node root;
    Shifter shifter;
    std::vector<std::string> order;
};

Analysis analyse(const TermPtr& t, const TypeEnv& env, const ChipSpec& chip) {
    Typer typer(env, chip);
    Analysis a{typer.run(t), {}, typer.free_order()};
    set_gate_durations(a.root, chip);
    a.shifter.run(a.root);
    return a;
}

}  // namespace

OffsetReport synthesize(const TermPtr& t, const TypeEnv& env, const ChipSpec& chip) {
    Analysis a = analyse(t, env, chip);
    OffsetReport r;
    r.type = a.root.type;
    r.order = a.order;
    r.slacks = a.shifter.slacks;
    r.constraints = a.shifter.constraints;
    for (const auto& o : a.root.fv) {
        r.offsets[o.name] = o.shift;
        r.types[o.name] = o.type;
        for (int s : o.shift.slacks) r.slacks[static_cast<std::size_t>(s)].vars.push_back(o.name);
    }
    return r;
}

Context infer_context(const OffsetReport& r) {
    std::size_t n = r.slacks.size();
    Solver solver(n);
    for (const auto& [a, b] : r.constraints)
        if (solver.add(difference(a, b, n), Q(b.constant - a.constant)))
            throw TypeError(K::GradeMismatch, "pair components are used at unequal grades");
    std::vector<std::int64_t> sol;
    for (const Q& q : solver.solution()) sol.push_back(q.numerator() / q.denominator());
    Context g;
    for (const auto& v : r.order) g.push_back(ContextEntry{v, Grade{eval(r.offsets.at(v), sol)}, r.types.at(v)});
    return g;
}

CheckResult check(const Judgement& j, const ChipSpec& chip) {
    try {
        return CheckResult{check_or_throw(j, chip), std::nullopt};
    } catch (const TypeError& e) {
        return CheckResult{nullptr, e};
    }
}

DerivationPtr check_or_throw(const Judgement& j, const ChipSpec& chip) {
    TypeEnv env;
    for (const auto& e : j.context) {
        check_type_wellformed(e.type, chip);
        if (!env.emplace(e.name, e.type).second)
            throw TypeError(K::DuplicateUse, "variable '" + e.name + "' declared twice in the context");
    }
    check_type_wellformed(j.type, chip);

    Analysis a = analyse(j.term, env, chip);
    for (const auto& e : j.context)
        if (std::find(a.order.begin(), a.order.end(), e.name) == a.order.end())
            throw TypeError(K::UnusedEntry, "context entry '" + e.name + "' is not used by the term", {}, {}, "1", "0");
    if (!type_equal(a.root.type, j.type))
        throw TypeError(K::TypeMismatch, "term has type " + print(a.root.type) + " but " + print(j.type) + " was declared",
                        {}, j.term->pos, print(j.type), print(a.root.type));

    std::vector<std::pair<const FreeOcc*, std::int64_t>> fixed;
    for (const auto& e : j.context) {
        auto it = std::find_if(a.root.fv.begin(), a.root.fv.end(), [&](const FreeOcc& o) { return o.name == e.name; });
        fixed.emplace_back(&*it, e.grade.ns);
    }
    auto sol = solve(a.root, a.shifter, fixed);
    return build(a.root, sol);
}

}  // namespace pstt
