#include "pstt/equality.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "pstt/surface.hpp"

namespace pstt {

std::optional<LetKind> let_kind(const Term& t) {
    switch (t.kind) {
    case TermKind::LetStar: return LetKind::Star;
    case TermKind::LetPair: return LetKind::Pair;
    case TermKind::LetBox: return LetKind::Box;
    default: return std::nullopt;
    }
}

std::string_view to_string(LetKind k) {
    switch (k) {
    case LetKind::Star: return "star";
    case LetKind::Pair: return "pair";
    case LetKind::Box: return "box";
    }
    return "?";
}

std::string_view to_string(Conversion c) {
    switch (c) {
    case Conversion::ScrutStar: return "scrut-star";
    case Conversion::SwapStar: return "swap-star";
    case Conversion::Gate: return "gate";
    case Conversion::PairLeft: return "pair-left";
    case Conversion::PairRight: return "pair-right";
    case Conversion::ScrutPair: return "scrut-pair";
    case Conversion::SwapPair: return "swap-pair";
    case Conversion::Box: return "box";
    case Conversion::ScrutBox: return "scrut-box";
    case Conversion::SwapBox: return "swap-box";
    }
    return "?";
}

const std::vector<Conversion>& all_conversions() {
    static const std::vector<Conversion> all = {
        Conversion::ScrutStar, Conversion::SwapStar, Conversion::Gate,     Conversion::PairLeft, Conversion::PairRight,
        Conversion::ScrutPair, Conversion::SwapPair, Conversion::Box,      Conversion::ScrutBox, Conversion::SwapBox,
    };
    return all;
}

std::string RuleInstance::name() const {
    switch (kind) {
    case RuleKind::BetaUnit: return "beta-unit";
    case RuleKind::BetaPair: return "beta-pair";
    case RuleKind::BetaBox: return "beta-box";
    case RuleKind::EtaUnit: return "eta-unit";
    case RuleKind::EtaPair: return "eta-pair";
    case RuleKind::EtaBox: return "eta-box";
    case RuleKind::Commute:
        return "cc-" + std::string(to_string(outer)) + "-" + std::string(to_string(conversion));
    }
    return "?";
}

std::string RuleInstance::describe() const {
    std::string s = name() + (direction == Direction::Forward ? " -> " : " <- ") + to_string(path);
    if (kind == RuleKind::Commute && conversion == Conversion::Gate) s += " arg " + std::to_string(index);
    if (kind == RuleKind::EtaBox && direction == Direction::Backward) s += " [" + to_string(grade) + "]";
    return s;
}

namespace {

// Rule application ----------------------------------------------------------

std::optional<LetKind> scrut_kind(Conversion c) {
    switch (c) {
    case Conversion::ScrutStar: return LetKind::Star;
    case Conversion::ScrutPair: return LetKind::Pair;
    case Conversion::ScrutBox: return LetKind::Box;
    default: return std::nullopt;
    }
}

std::optional<LetKind> swap_kind(Conversion c) {
    switch (c) {
    case Conversion::SwapStar: return LetKind::Star;
    case Conversion::SwapPair: return LetKind::Pair;
    case Conversion::SwapBox: return LetKind::Box;
    default: return std::nullopt;
    }
}

bool is_let_of(const TermPtr& t, LetKind k) {
    auto lk = let_kind(*t);
    return lk && *lk == k;
}

bool binds_free_in(const Term& let, const TermPtr& t) {
    for (const auto& b : node_binders(let))
        if (count_free(t, b) > 0) return true;
    return false;
}

using Opt = std::optional<TermPtr>;

Opt commute_forward(const TermPtr& T, const RuleInstance& r) {
    if (!is_let_of(T, r.outer)) return std::nullopt;
    const TermPtr& s = T->scrutinee();
    const TermPtr& X = T->body();
    if (auto m = scrut_kind(r.conversion)) {
        if (!is_let_of(X, *m)) return std::nullopt;
        const TermPtr& t = X->scrutinee();
        const TermPtr& u = X->body();
        if (binds_free_in(*T, u)) return std::nullopt;
        return with_children(*X, {with_children(*T, {s, t}), u});
    }
    if (auto m = swap_kind(r.conversion)) {
        if (!is_let_of(X, *m)) return std::nullopt;
        const TermPtr& t = X->scrutinee();
        const TermPtr& u = X->body();
        if (binds_free_in(*T, t) || binds_free_in(*X, s)) return std::nullopt;
        return with_children(*X, {t, with_children(*T, {s, u})});
    }
    switch (r.conversion) {
    case Conversion::Gate: {
        if (X->kind != TermKind::Gate || r.index < 0 || r.index >= static_cast<int>(X->children.size()))
            return std::nullopt;
        auto kids = X->children;
        for (std::size_t i = 0; i < kids.size(); ++i)
            if (static_cast<int>(i) != r.index && binds_free_in(*T, kids[i])) return std::nullopt;
        auto& ti = kids[static_cast<std::size_t>(r.index)];
        ti = with_children(*T, {s, ti});
        return with_children(*X, std::move(kids));
    }
    case Conversion::PairLeft:
        if (X->kind != TermKind::Pair || binds_free_in(*T, X->children[1])) return std::nullopt;
        return with_children(*X, {with_children(*T, {s, X->children[0]}), X->children[1]});
    case Conversion::PairRight:
        if (X->kind != TermKind::Pair || binds_free_in(*T, X->children[0])) return std::nullopt;
        return with_children(*X, {X->children[0], with_children(*T, {s, X->children[1]})});
    case Conversion::Box:
        if (X->kind != TermKind::Box) return std::nullopt;
        return with_children(*X, {with_children(*T, {s, X->body()})});
    default: return std::nullopt;
    }
}

Opt commute_backward(const TermPtr& T, const RuleInstance& r) {
    if (auto m = scrut_kind(r.conversion)) {
        // let M = (let L = s in t) in u   ->   let L = s in let M = t in u
        if (!is_let_of(T, *m) || !is_let_of(T->scrutinee(), r.outer)) return std::nullopt;
        const TermPtr& S = T->scrutinee();
        const TermPtr& u = T->body();
        if (binds_free_in(*S, u)) return std::nullopt;
        return with_children(*S, {S->scrutinee(), with_children(*T, {S->body(), u})});
    }
    if (auto m = swap_kind(r.conversion)) {
        // let M = t in let L = s in u   ->   let L = s in let M = t in u
        if (!is_let_of(T, *m) || !is_let_of(T->body(), r.outer)) return std::nullopt;
        const TermPtr& t = T->scrutinee();
        const TermPtr& Y = T->body();
        if (binds_free_in(*T, Y->scrutinee()) || binds_free_in(*Y, t)) return std::nullopt;
        return with_children(*Y, {Y->scrutinee(), with_children(*T, {t, Y->body()})});
    }
    auto lifted = [&](const TermPtr& inner, std::vector<TermPtr> kids, std::size_t at) -> Opt {
        for (std::size_t i = 0; i < kids.size(); ++i)
            if (i != at && binds_free_in(*inner, kids[i])) return std::nullopt;
        kids[at] = inner->body();
        return with_children(*inner, {inner->scrutinee(), with_children(*T, std::move(kids))});
    };
    switch (r.conversion) {
    case Conversion::Gate:
        if (T->kind != TermKind::Gate || r.index < 0 || r.index >= static_cast<int>(T->children.size()))
            return std::nullopt;
        if (!is_let_of(T->children[static_cast<std::size_t>(r.index)], r.outer)) return std::nullopt;
        return lifted(T->children[static_cast<std::size_t>(r.index)], T->children, static_cast<std::size_t>(r.index));
    case Conversion::PairLeft:
        if (T->kind != TermKind::Pair || !is_let_of(T->children[0], r.outer)) return std::nullopt;
        return lifted(T->children[0], T->children, 0);
    case Conversion::PairRight:
        if (T->kind != TermKind::Pair || !is_let_of(T->children[1], r.outer)) return std::nullopt;
        return lifted(T->children[1], T->children, 1);
    case Conversion::Box:
        if (T->kind != TermKind::Box || !is_let_of(T->body(), r.outer)) return std::nullopt;
        return lifted(T->body(), T->children, 0);
    default: return std::nullopt;
    }
}

// u[x := a, y := b], simultaneously.
TermPtr substitute2(TermPtr u, std::string x, const TermPtr& a, std::string y, const TermPtr& b) {
    if (count_free(a, y) > 0 || count_free(b, x) > 0) {
        std::vector<std::string> avoid = all_names(u);
        for (const auto& n : all_names(a)) avoid.push_back(n);
        for (const auto& n : all_names(b)) avoid.push_back(n);
        std::string x2 = fresh_name(x, avoid);
        avoid.push_back(x2);
        std::string y2 = fresh_name(y, avoid);
        u = substitute(substitute(u, x, var(x2)), y, var(y2));
        x = x2;
        y = y2;
    }
    return substitute(substitute(u, x, a), y, b);
}

Opt apply_here(const TermPtr& T, const RuleInstance& r, const std::vector<std::string>& avoid) {
    const bool fwd = r.direction == Direction::Forward;
    switch (r.kind) {
    case RuleKind::BetaUnit:
        if (!fwd || T->kind != TermKind::LetStar || T->scrutinee()->kind != TermKind::Star) return std::nullopt;
        return T->body();
    case RuleKind::BetaPair: {
        if (!fwd || T->kind != TermKind::LetPair || T->scrutinee()->kind != TermKind::Pair) return std::nullopt;
        const auto& p = T->scrutinee();
        return substitute2(T->body(), T->x, p->children[0], T->y, p->children[1]);
    }
    case RuleKind::BetaBox: {
        if (!fwd || T->kind != TermKind::LetBox || T->scrutinee()->kind != TermKind::Box ||
            T->scrutinee()->grade != T->grade)
            return std::nullopt;
        return substitute(T->body(), T->x, T->scrutinee()->body());
    }
    case RuleKind::EtaUnit:
        if (fwd) {
            if (T->kind != TermKind::LetStar || T->body()->kind != TermKind::Star) return std::nullopt;
            return T->scrutinee();
        }
        return let_star(T, star());
    case RuleKind::EtaPair:
        if (fwd) {
            if (T->kind != TermKind::LetPair) return std::nullopt;
            const auto& b = T->body();
            if (b->kind != TermKind::Pair || b->children[0]->kind != TermKind::Var ||
                b->children[1]->kind != TermKind::Var || b->children[0]->name != T->x || b->children[1]->name != T->y)
                return std::nullopt;
            return T->scrutinee();
        } else {
            std::string x = fresh_name("a", avoid);
            std::vector<std::string> avoid2 = avoid;
            avoid2.push_back(x);
            std::string y = fresh_name("b", avoid2);
            return let_pair(x, y, T, pair(var(x), var(y)));
        }
    case RuleKind::EtaBox:
        if (fwd) {
            if (T->kind != TermKind::LetBox) return std::nullopt;
            const auto& b = T->body();
            if (b->kind != TermKind::Box || b->grade != T->grade || b->body()->kind != TermKind::Var ||
                b->body()->name != T->x)
                return std::nullopt;
            return T->scrutinee();
        } else {
            std::string x = fresh_name("z", avoid);
            return let_box(r.grade, x, T, box(r.grade, var(x)));
        }
    case RuleKind::Commute: return fwd ? commute_forward(T, r) : commute_backward(T, r);
    }
    return std::nullopt;
}

bool valid_path(const TermPtr& t, const Path& p) {
    const Term* cur = t.get();
    for (int i : p) {
        if (i < 0 || static_cast<std::size_t>(i) >= cur->children.size()) return false;
        cur = cur->children[static_cast<std::size_t>(i)].get();
    }
    return true;
}

}  // namespace

std::optional<TermPtr> apply_rule(const TermPtr& root, const RuleInstance& r, const std::vector<std::string>& avoid) {
    if (!valid_path(root, r.path)) return std::nullopt;
    const TermPtr& here = subterm_at(root, r.path);
    std::vector<std::string> names;
    if (r.direction == Direction::Backward &&
        (r.kind == RuleKind::EtaPair || r.kind == RuleKind::EtaBox)) {
        names = all_names(root);
        names.insert(names.end(), avoid.begin(), avoid.end());
    }
    auto out = apply_here(here, r, names);
    if (!out) return std::nullopt;
    return replace_at(root, r.path, *out);
}

// Normalisation ---------------------------------------------------------------

namespace {

class BudgetExhausted {};

Path body_path(std::size_t depth) { return Path(depth, 1); }

class Normalizer {
public:
    Normalizer(const Judgement& j, const ChipSpec& chip, const NormalizeOptions& opts)
        : j_(j), chip_(chip), opts_(opts) {
        for (const auto& e : j.context) context_names_.push_back(e.name);
    }

    NormalForm run() {
        check_or_throw(j_, chip_);
        cur_ = uniquify_binders(j_.term);
        try {
            local();
            expand();
            sort_prefix();
            contract();
        } catch (const BudgetExhausted&) {
            return NormalForm{cur_, std::move(trace_), true};
        }
        return NormalForm{cur_, std::move(trace_), false};
    }

private:
    void apply(const RuleInstance& r) {
        if (trace_.size() >= opts_.budget) throw BudgetExhausted{};
        auto next = apply_rule(cur_, r, context_names_);
        if (!next) throw std::logic_error("normalize: rule did not apply: " + r.describe() + " on " + print(cur_));
        if (opts_.observer) opts_.observer(r, cur_, *next);
        cur_ = *next;
        trace_.push_back(r);
    }

    static RuleInstance commute(LetKind outer, Conversion c, Direction d, Path p, int index = 0) {
        RuleInstance r;
        r.kind = RuleKind::Commute;
        r.outer = outer;
        r.conversion = c;
        r.direction = d;
        r.path = std::move(p);
        r.index = index;
        return r;
    }

    static Conversion scrut_conv(LetKind k) {
        return k == LetKind::Star ? Conversion::ScrutStar : k == LetKind::Pair ? Conversion::ScrutPair : Conversion::ScrutBox;
    }
    static Conversion swap_conv(LetKind k) {
        return k == LetKind::Star ? Conversion::SwapStar : k == LetKind::Pair ? Conversion::SwapPair : Conversion::SwapBox;
    }

    // Beta redexes first, anywhere; otherwise the first let sitting in a
    // non-body position.
    static std::optional<RuleInstance> find_beta(const TermPtr& t, Path& p) {
        const Term& T = *t;
        auto mk = [&](RuleKind k) {
            RuleInstance r;
            r.kind = k;
            r.path = p;
            return r;
        };
        if (T.kind == TermKind::LetStar && T.scrutinee()->kind == TermKind::Star) return mk(RuleKind::BetaUnit);
        if (T.kind == TermKind::LetPair && T.scrutinee()->kind == TermKind::Pair) return mk(RuleKind::BetaPair);
        if (T.kind == TermKind::LetBox && T.scrutinee()->kind == TermKind::Box) return mk(RuleKind::BetaBox);
        for (std::size_t i = 0; i < T.children.size(); ++i) {
            p.push_back(static_cast<int>(i));
            auto r = find_beta(T.children[i], p);
            p.pop_back();
            if (r) return r;
        }
        return std::nullopt;
    }

    static std::optional<RuleInstance> find_hoist(const TermPtr& t, Path& p) {
        const Term& T = *t;
        switch (T.kind) {
        case TermKind::Gate:
            for (std::size_t i = 0; i < T.children.size(); ++i)
                if (auto k = let_kind(*T.children[i]))
                    return commute(*k, Conversion::Gate, Direction::Backward, p, static_cast<int>(i));
            break;
        case TermKind::Pair:
            if (auto k = let_kind(*T.children[0])) return commute(*k, Conversion::PairLeft, Direction::Backward, p);
            if (auto k = let_kind(*T.children[1])) return commute(*k, Conversion::PairRight, Direction::Backward, p);
            break;
        case TermKind::Box:
            if (auto k = let_kind(*T.body())) return commute(*k, Conversion::Box, Direction::Backward, p);
            break;
        case TermKind::LetStar:
        case TermKind::LetPair:
        case TermKind::LetBox:
            if (auto k = let_kind(*T.scrutinee()))
                return commute(*k, scrut_conv(*let_kind(T)), Direction::Backward, p);
            break;
        default: break;
        }
        for (std::size_t i = 0; i < T.children.size(); ++i) {
            p.push_back(static_cast<int>(i));
            auto r = find_hoist(T.children[i], p);
            p.pop_back();
            if (r) return r;
        }
        return std::nullopt;
    }

    void local() {
        for (;;) {
            Path p;
            auto r = find_beta(cur_, p);
            if (!r) r = find_hoist(cur_, p);
            if (!r) return;
            apply(*r);
        }
    }

    std::size_t prefix_length() const {
        std::size_t n = 0;
        for (const Term* t = cur_.get(); t->is_let(); t = t->body().get()) ++n;
        return n;
    }

    // Leaves of the core reachable through pairs and boxes, in pre-order.
    template <class F>
    static void spine(const TermPtr& t, const DerivationPtr& d, Path& p, F&& visit) {
        if (!visit(t, d, p)) return;
        if (t->kind == TermKind::Pair || t->kind == TermKind::Box) {
            for (std::size_t i = 0; i < t->children.size(); ++i) {
                p.push_back(static_cast<int>(i));
                spine(t->children[i], d ? d->premises[i] : nullptr, p, visit);
                p.pop_back();
            }
        }
    }

    void expand() {
        for (;;) {
            DerivationPtr d = check_or_throw(Judgement{j_.context, cur_, j_.type}, chip_);
            std::size_t n = prefix_length();
            TermPtr core = cur_;
            for (std::size_t i = 0; i < n; ++i) {
                core = core->body();
                d = d->premises[1];
            }
            std::vector<RuleInstance> todo;
            Path p = body_path(n);
            spine(core, d, p, [&](const TermPtr& t, const DerivationPtr& dt, const Path& at) {
                if (t->kind != TermKind::Var && t->kind != TermKind::Gate) return true;
                RuleInstance r;
                r.direction = Direction::Backward;
                r.path = at;
                switch (dt->type->kind) {
                case TypeKind::Unit: r.kind = RuleKind::EtaUnit; break;
                case TypeKind::Tensor: r.kind = RuleKind::EtaPair; break;
                case TypeKind::Box:
                    r.kind = RuleKind::EtaBox;
                    r.grade = dt->type->grade;
                    break;
                case TypeKind::Qubit: return false;
                }
                todo.push_back(r);
                return false;
            });
            if (todo.empty()) return;
            for (const auto& r : todo) apply(r);
            local();
        }
    }

    // Canonical order of the let prefix -------------------------------------

    static std::string key_print(const TermPtr& t, const std::map<std::string, std::string>& refs) {
        switch (t->kind) {
        case TermKind::Var: {
            auto it = refs.find(t->name);
            return it == refs.end() ? t->name : it->second;
        }
        case TermKind::Star: return "*";
        case TermKind::Gate: {
            std::string s = t->name + "(";
            for (std::size_t i = 0; i < t->children.size(); ++i) {
                if (i) s += ", ";
                s += key_print(t->children[i], refs);
            }
            return s + ")";
        }
        case TermKind::Pair:
            return "(" + key_print(t->children[0], refs) + ", " + key_print(t->children[1], refs) + ")";
        case TermKind::Box: return "box[" + to_string(t->grade) + "] " + key_print(t->body(), refs);
        default: return canonical_key(t);
        }
    }

    static std::string let_tag(const Term& t) {
        switch (t.kind) {
        case TermKind::LetStar: return "0*";
        case TermKind::LetPair: return "1()";
        default: return "2box[" + to_string(t.grade) + "]";
        }
    }

    std::vector<TermPtr> prefix() const {
        std::vector<TermPtr> lets;
        for (TermPtr t = cur_; t->is_let(); t = t->body()) lets.push_back(t);
        return lets;
    }

    void sort_prefix() {
        std::vector<TermPtr> lets = prefix();
        const std::size_t n = lets.size();
        if (n < 2) return;

        std::map<std::string, std::size_t> binder_of;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& b : node_binders(*lets[i])) binder_of[b] = i;
        std::vector<std::vector<std::size_t>> deps(n);
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& v : free_vars(lets[j]->scrutinee()))
                if (auto it = binder_of.find(v); it != binder_of.end() && it->second < j) deps[j].push_back(it->second);

        std::vector<std::size_t> rank(n, n);
        std::map<std::string, std::string> refs;
        for (std::size_t placed = 0; placed < n; ++placed) {
            std::size_t best = n;
            std::string best_key;
            for (std::size_t j = 0; j < n; ++j) {
                if (rank[j] != n) continue;
                bool ready = std::all_of(deps[j].begin(), deps[j].end(), [&](std::size_t i) { return rank[i] != n; });
                if (!ready) continue;
                std::string key = let_tag(*lets[j]) + key_print(lets[j]->scrutinee(), refs);
                if (best == n || key < best_key) {
                    best = j;
                    best_key = std::move(key);
                }
            }
            rank[best] = placed;
            auto binders = node_binders(*lets[best]);
            for (std::size_t c = 0; c < binders.size(); ++c)
                refs[binders[c]] = "#" + std::to_string(placed) + "." + std::to_string(c);
        }

        // Bubble into place; every swapped pair is an inversion of a
        // topological order, hence independent.
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                if (rank[order[p]] > rank[order[p + 1]]) {
                    apply(commute(*let_kind(*lets[order[p]]), swap_conv(*let_kind(*lets[order[p + 1]])),
                                  Direction::Forward, body_path(p)));
                    std::swap(order[p], order[p + 1]);
                    changed = true;
                }
            }
        }
    }

    // Eta contraction ----------------------------------------------------------

    static TermPtr rebuild(const std::vector<TermPtr>& lets, std::size_t skip, TermPtr core) {
        for (std::size_t i = lets.size(); i-- > 0;)
            if (i != skip) core = with_children(*lets[i], {lets[i]->scrutinee(), core});
        return core;
    }

    // Slots in the core where let number k could be eta-contracted.
    static std::vector<Path> slots(const TermPtr& core, const Term& let) {
        std::vector<Path> out;
        Path p;
        spine(core, nullptr, p, [&](const TermPtr& t, const DerivationPtr&, const Path& at) {
            switch (let.kind) {
            case TermKind::LetStar:
                if (t->kind == TermKind::Star) out.push_back(at);
                break;
            case TermKind::LetPair:
                if (t->kind == TermKind::Pair && t->children[0]->kind == TermKind::Var &&
                    t->children[1]->kind == TermKind::Var && t->children[0]->name == let.x &&
                    t->children[1]->name == let.y)
                    out.push_back(at);
                break;
            case TermKind::LetBox:
                if (t->kind == TermKind::Box && t->grade == let.grade && t->body()->kind == TermKind::Var &&
                    t->body()->name == let.x)
                    out.push_back(at);
                break;
            default: break;
            }
            return true;
        });
        return out;
    }

    void contract() {
        for (std::size_t k = prefix_length(); k-- > 0;) {
            std::vector<TermPtr> lets = prefix();
            const std::size_t n = lets.size();
            TermPtr core = n ? lets.back()->body() : cur_;
            const Term& let = *lets[k];
            // A let whose binders feed a later scrutinee cannot reach the core.
            bool blocked = false;
            for (std::size_t j = k + 1; j < n && !blocked; ++j) blocked = binds_free_in(let, lets[j]->scrutinee());
            if (blocked) continue;
            for (const Path& slot : slots(core, let)) {
                TermPtr candidate = rebuild(lets, k, replace_at(core, slot, let.scrutinee()));
                if (let.kind == TermKind::LetStar && !accepts(Judgement{j_.context, candidate, j_.type}, chip_))
                    continue;
                perform_contraction(lets, k, slot);
                break;
            }
        }
    }

    void perform_contraction(const std::vector<TermPtr>& lets, std::size_t k, const Path& slot) {
        const std::size_t n = lets.size();
        LetKind kind = *let_kind(*lets[k]);
        for (std::size_t m = k; m + 1 < n; ++m)
            apply(commute(kind, swap_conv(*let_kind(*lets[m + 1])), Direction::Forward, body_path(m)));
        Path at = body_path(n - 1);
        for (int step : slot) {
            const TermPtr& body = subterm_at(cur_, at)->body();
            Conversion c = body->kind == TermKind::Box ? Conversion::Box
                           : step == 0               ? Conversion::PairLeft
                                                     : Conversion::PairRight;
            apply(commute(kind, c, Direction::Forward, at));
            at.push_back(step);
        }
        RuleInstance eta;
        eta.kind = kind == LetKind::Star ? RuleKind::EtaUnit : kind == LetKind::Pair ? RuleKind::EtaPair : RuleKind::EtaBox;
        eta.path = at;
        apply(eta);
    }

    const Judgement& j_;
    const ChipSpec& chip_;
    const NormalizeOptions& opts_;
    std::vector<std::string> context_names_;
    TermPtr cur_;
    std::vector<RuleInstance> trace_;
};

}  // namespace

NormalForm normalize(const Judgement& j, const ChipSpec& chip, const NormalizeOptions& opts) {
    return Normalizer(j, chip, opts).run();
}

std::string_view to_string(EqVerdict::Kind k) {
    switch (k) {
    case EqVerdict::Kind::Equal: return "Equal";
    case EqVerdict::Kind::NotEqualByNormalForm: return "NotEqualByNormalForm";
    case EqVerdict::Kind::NotEqualBySemantics: return "NotEqualBySemantics";
    case EqVerdict::Kind::Unknown: return "Unknown";
    }
    return "?";
}

}  // namespace pstt
