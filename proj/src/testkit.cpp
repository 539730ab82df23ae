#include "pstt/testkit.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "pstt/surface.hpp"
#include "pstt/typecheck.hpp"

namespace pstt::testkit {

// Fixtures -----------------------------------------------------------------------

namespace {

std::vector<Sample> ramp(Sample start, Sample step, std::size_t n) {
    std::vector<Sample> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = start + step * static_cast<Sample>(i);
    return v;
}

Calibration cal(const std::string& gate, std::map<QubitId, std::vector<Sample>> samples) {
    return Calibration{gate, std::move(samples)};
}

}  // namespace

ChipSpec chip0() {
    return ChipSpec({"q1", "q2"},
                    {{"H1", {"q1"}, 20}, {"K1", {"q1"}, 20}, {"H2", {"q2"}, 24}, {"CX", {"q1", "q2"}, 120}},
                    {{"H1", cal("H1", {{"q1", ramp(1000, 7, 20)}})},
                     {"K1", cal("K1", {{"q1", ramp(-2000, 11, 20)}})},
                     {"H2", cal("H2", {{"q2", ramp(3000, -5, 24)}})},
                     {"CX", cal("CX", {{"q1", ramp(400, 3, 120)}, {"q2", ramp(-600, -2, 120)}})}});
}

ChipSpec chip3() {
    ChipSpec base = chip0();
    std::vector<QubitId> qubits = base.qubits();
    qubits.push_back("q3");
    std::vector<GateDecl> gates = base.gates();
    gates.push_back({"H3", {"q3"}, 16});
    auto cals = base.calibrations();
    cals.emplace("H3", cal("H3", {{"q3", ramp(500, 9, 16)}}));
    return ChipSpec(qubits, gates, cals);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finaliser over the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Generation ---------------------------------------------------------------------

namespace {

enum Rule { RVar, RStar, RPair, RGate, RBox, RLetStar, RLetPair, RLetBox };

Context concat(Context a, const Context& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Context without(const Context& g, const std::vector<std::string>& names) {
    Context out;
    for (const auto& e : g)
        if (std::find(names.begin(), names.end(), e.name) == names.end()) out.push_back(e);
    return out;
}

}  // namespace

Generator::Generator(GenConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    if (cfg_.max_depth < 1) throw std::invalid_argument("GenConfig.max_depth must be at least 1");
    if (cfg_.grade_hi < cfg_.grade_lo) throw std::invalid_argument("GenConfig grade range is empty");
}

std::string Generator::fresh() { return cfg_.prefix + std::to_string(counter_++); }

std::int64_t Generator::pick(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
}

std::int64_t Generator::grade() { return pick(cfg_.grade_lo.ns, cfg_.grade_hi.ns); }

TypePtr Generator::type_over(std::vector<QubitId> qs, int depth) {
    // weights: plain form 6, box 1, tensor with a unit side 1
    const bool deeper = depth > 0;
    if (qs.size() >= 2) {
        if (deeper && pick(0, 6) == 0) return box_type(Grade{grade()}, type_over(qs, depth - 1));
        auto k = static_cast<std::size_t>(pick(1, static_cast<std::int64_t>(qs.size()) - 1));
        std::vector<QubitId> l(qs.begin(), qs.begin() + static_cast<std::ptrdiff_t>(k));
        std::vector<QubitId> r(qs.begin() + static_cast<std::ptrdiff_t>(k), qs.end());
        return tensor_type(type_over(l, std::max(depth - 1, 0)), type_over(r, std::max(depth - 1, 0)));
    }
    std::int64_t c = deeper ? pick(0, 7) : 0;
    if (c <= 5) return qs.empty() ? unit_type() : qubit_type(qs[0]);
    if (c == 6) return box_type(Grade{grade()}, type_over(qs, depth - 1));
    if (pick(0, 1) == 0) return tensor_type(type_over(qs, depth - 1), unit_type());
    return tensor_type(unit_type(), type_over(qs, depth - 1));
}

TypePtr Generator::random_type() {
    std::vector<QubitId> qs = cfg_.chip.qubits();
    std::shuffle(qs.begin(), qs.end(), rng_);
    qs.resize(static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(qs.size()))));
    return type_over(qs, cfg_.max_type_depth);
}

// A term of type `a` using `v` exactly once, delta ns earlier than a bare `v`
// would: x :^(-delta) a ⊢ retime(x) : a. Null when a qubit would need a delay
// and the chip has none.
TermPtr Generator::retime(const std::string& v, const TypePtr& a, std::int64_t delta) {
    if (delta == 0) return var(v);
    switch (a->kind) {
        case TypeKind::Unit:
            return let_star(var(v), star());
        case TypeKind::Qubit:
            if (!cfg_.chip.delay_gates_enabled()) return nullptr;
            return gate_app(delay_gate_name(a->qubit, delta), {var(v)});
        case TypeKind::Tensor: {
            std::string l = fresh(), r = fresh();
            TermPtr rl = retime(l, a->left, delta), rr = retime(r, a->right, delta);
            if (!rl || !rr) return nullptr;
            return let_pair(l, r, var(v), pair(rl, rr));
        }
        case TypeKind::Box: {
            std::string z = fresh();
            TermPtr rz = retime(z, a->left, delta);
            if (!rz) return nullptr;
            return let_box(a->grade, z, var(v), box(a->grade, rz));
        }
    }
    return nullptr;
}

std::optional<Generator::Piece> Generator::apply(int rule, const TypePtr& goal, int depth) {
    switch (rule) {
        case RVar: {
            std::string v = fresh();
            return Piece{{{v, Grade{0}, goal}}, var(v)};
        }
        case RStar:
            return Piece{{}, star()};
        case RPair: {
            auto l = gen(goal->left, depth - 1);
            auto r = gen(goal->right, depth - 1);
            if (!l || !r) return std::nullopt;
            return Piece{concat(l->context, r->context), pair(l->term, r->term)};
        }
        case RGate: {
            std::vector<GateDecl> options;
            for (const auto& g : cfg_.chip.gates()) {
                std::vector<TypePtr> qs;
                for (const auto& q : g.qubits) qs.push_back(qubit_type(q));
                if (type_equal(tensor_of(qs), goal)) options.push_back(g);
            }
            if (goal->kind == TypeKind::Qubit && cfg_.chip.delay_gates_enabled()) {
                std::int64_t longest = std::max({std::int64_t{1}, std::abs(cfg_.grade_lo.ns), std::abs(cfg_.grade_hi.ns)});
                options.push_back(cfg_.chip.delay_gate(goal->qubit, pick(1, longest)).gate);
            }
            if (options.empty()) return std::nullopt;
            const GateDecl g = options[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(options.size()) - 1))];
            Context ctx;
            std::vector<TermPtr> args;
            for (const auto& q : g.qubits) {
                auto a = gen(qubit_type(q), depth - 1);
                if (!a) return std::nullopt;
                ctx = concat(ctx, shift_context(Grade{-g.duration_ns}, a->context));
                args.push_back(a->term);
            }
            return Piece{ctx, gate_app(g.name, args)};
        }
        case RBox: {
            auto b = gen(goal->left, depth - 1);
            if (!b) return std::nullopt;
            return Piece{shift_context(goal->grade, b->context), box(goal->grade, b->term)};
        }
        case RLetStar: {
            auto s = gen(unit_type(), depth - 1);
            auto t = gen(goal, depth - 1);
            if (!s || !t) return std::nullopt;
            Grade sigma{grade()};
            return Piece{concat(shift_context(sigma, s->context), t->context), let_star(s->term, t->term)};
        }
        case RLetPair: {
            auto t = gen(goal, depth - 1);
            if (!t || t->context.size() < 2) return std::nullopt;
            const auto n = static_cast<std::int64_t>(t->context.size());
            auto i = static_cast<std::size_t>(pick(0, n - 1));
            auto j = static_cast<std::size_t>(pick(0, n - 2));
            if (j >= i) ++j;
            const ContextEntry ex = t->context[i], ey = t->context[j];
            const Grade e = std::min(ex.grade, ey.grade);
            TermPtr body = t->term;
            for (const auto* en : {&ex, &ey}) {
                if (en->grade == e) continue;
                TermPtr r = retime(en->name, en->type, (en->grade - e).ns);
                if (!r) return std::nullopt;
                body = substitute(body, en->name, r);
            }
            auto s = gen(tensor_type(ex.type, ey.type), depth - 1);
            if (!s) return std::nullopt;
            return Piece{concat(shift_context(e, s->context), without(t->context, {ex.name, ey.name})),
                         let_pair(ex.name, ey.name, s->term, body)};
        }
        case RLetBox: {
            auto t = gen(goal, depth - 1);
            if (!t || t->context.empty()) return std::nullopt;
            const ContextEntry ex =
                t->context[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(t->context.size()) - 1))];
            Grade d{grade()};
            auto s = gen(box_type(d, ex.type), depth - 1);
            if (!s) return std::nullopt;
            return Piece{concat(shift_context(ex.grade - d, s->context), without(t->context, {ex.name})),
                         let_box(d, ex.name, s->term, t->term)};
        }
    }
    return std::nullopt;
}

std::optional<Generator::Piece> Generator::gen(const TypePtr& goal, int depth, Root root) {
    std::vector<int> rules;
    switch (root) {
        case Root::LetStar: rules = {RLetStar}; break;
        case Root::LetPair: rules = {RLetPair}; break;
        case Root::LetBox: rules = {RLetBox}; break;
        case Root::Any:
        case Root::Compound:
            if (depth <= 1 && root == Root::Any) {
                rules = {goal->kind == TypeKind::Unit ? RStar : RVar};
                break;
            }
            rules = {RLetStar, RLetPair, RLetBox, RGate};
            if (goal->kind == TypeKind::Unit && root == Root::Any) rules.insert(rules.end(), {RStar, RVar});
            if (goal->kind == TypeKind::Tensor) rules.push_back(RPair);
            if (goal->kind == TypeKind::Box) rules.push_back(RBox);
            break;
    }
    std::shuffle(rules.begin(), rules.end(), rng_);
    for (int r : rules)
        if (auto p = apply(r, goal, std::max(depth, 2))) return p;
    if (root != Root::Any && root != Root::Compound) return std::nullopt;
    return apply(goal->kind == TypeKind::Unit ? RStar : RVar, goal, depth);
}

Judgement Generator::judgement() { return judgement(cfg_.goal ? *cfg_.goal : random_type()); }

Judgement Generator::judgement(const TypePtr& goal) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        const int depth = static_cast<int>(pick((cfg_.max_depth + 1) / 2, cfg_.max_depth));
        auto p = gen(goal, depth, depth > 1 ? Root::Compound : Root::Any);
        if (!p) continue;
        std::shuffle(p->context.begin(), p->context.end(), rng_);
        Judgement j{p->context, p->term, goal};
        if (accepts(j, cfg_.chip)) {
            ++stats_.produced;
            return j;
        }
        ++stats_.rejected;
    }
    return Judgement{{}, star(), unit_type()};
}

std::optional<Judgement> Generator::rooted(const TypePtr& goal, Root root) {
    for (int attempt = 0; attempt < 20; ++attempt) {
        auto p = gen(goal, std::max(cfg_.max_depth, 2), root);
        if (!p) continue;
        Judgement j{p->context, p->term, goal};
        if (accepts(j, cfg_.chip)) {
            ++stats_.produced;
            return j;
        }
        ++stats_.rejected;
    }
    return std::nullopt;
}

Judgement gen_judgement(const GenConfig& cfg) { return Generator(cfg).judgement(); }

Judgement gen_single_variable(Generator& g) {
    Judgement j = g.judgement();
    const Context& ctx = j.context;
    const std::string z = g.fresh();
    if (ctx.empty()) return Judgement{{{z, Grade{0}, unit_type()}}, let_star(var(z), j.term), j.type};

    // Component i is x_i itself at grade 0 and [g_i] A_i otherwise.
    std::vector<TypePtr> parts;
    for (const auto& e : ctx) parts.push_back(e.grade.ns == 0 ? e.type : box_type(e.grade, e.type));

    // bind(p, i, inner): make x_i available in `inner` given p bound to component i
    auto bind = [&](const std::string& p, std::size_t i, TermPtr inner) {
        const auto& e = ctx[i];
        if (e.grade.ns == 0) return p == e.name ? inner : substitute(inner, e.name, var(p));
        return let_box(e.grade, e.name, var(p), inner);
    };
    // Build from the innermost component outwards.
    TermPtr body = j.term;
    std::string rest = ctx.size() == 1 ? z : g.fresh();
    body = bind(rest, ctx.size() - 1, body);
    for (std::size_t k = ctx.size() - 1; k-- > 0;) {
        std::string scrut = k == 0 ? z : g.fresh();
        std::string p = ctx[k].grade.ns == 0 ? ctx[k].name : g.fresh();
        body = let_pair(p, rest, var(scrut), bind(p, k, body));
        rest = scrut;
    }
    Judgement out{{{z, Grade{0}, tensor_of(parts)}}, body, j.type};
    check_or_throw(out, g.config().chip);
    return out;
}

std::optional<Composable> gen_composable(Generator& body, Generator& arg) {
    for (int attempt = 0; attempt < 10; ++attempt) {
        Judgement t = body.judgement();
        if (t.context.empty()) continue;
        const ContextEntry x =
            t.context[std::uniform_int_distribution<std::size_t>(0, t.context.size() - 1)(body.rng())];
        Judgement s = arg.judgement(x.type);
        Judgement sub{concat(shift_context(x.grade, s.context), without(t.context, {x.name})),
                      substitute(t.term, x.name, s.term), t.type};
        return Composable{s, t, x.name, sub};
    }
    return std::nullopt;
}

// One-step rewriting ---------------------------------------------------------------

namespace {

// The kind of the second let in a scrutinee or swap conversion.
std::optional<LetKind> inner_let(Conversion c) {
    switch (c) {
    case Conversion::ScrutStar:
    case Conversion::SwapStar: return LetKind::Star;
    case Conversion::ScrutPair:
    case Conversion::SwapPair: return LetKind::Pair;
    case Conversion::ScrutBox:
    case Conversion::SwapBox: return LetKind::Box;
    default: return std::nullopt;
    }
}

// Necessary conditions on the node's shape for a commuting conversion to
// match; apply_rule still decides. Saves building most failing candidates.
bool commute_shape(const Term& node, LetKind outer, Conversion c, Direction d) {
    const bool scrut = c == Conversion::ScrutStar || c == Conversion::ScrutPair || c == Conversion::ScrutBox;
    if (d == Direction::Forward) {
        if (let_kind(node) != outer) return false;
        const Term& x = *node.body();
        if (auto m = inner_let(c)) return let_kind(x) == m;
        if (c == Conversion::Gate) return x.kind == TermKind::Gate;
        if (c == Conversion::Box) return x.kind == TermKind::Box;
        return x.kind == TermKind::Pair;
    }
    if (auto m = inner_let(c)) {
        if (let_kind(node) != m) return false;
        return let_kind(scrut ? *node.scrutinee() : *node.body()) == outer;
    }
    switch (c) {
    case Conversion::Gate: return node.kind == TermKind::Gate;
    case Conversion::PairLeft: return node.kind == TermKind::Pair && let_kind(*node.children[0]) == outer;
    case Conversion::PairRight: return node.kind == TermKind::Pair && let_kind(*node.children[1]) == outer;
    case Conversion::Box: return node.kind == TermKind::Box && let_kind(*node.body()) == outer;
    default: return false;
    }
}

void candidates_at(const Term& node, const Type& type, const Path& path, std::vector<RuleInstance>& out) {
    auto add = [&](RuleKind k, Direction d) {
        RuleInstance r;
        r.kind = k;
        r.direction = d;
        r.path = path;
        out.push_back(r);
    };
    if (node.kind == TermKind::LetStar) {
        add(RuleKind::BetaUnit, Direction::Forward);
        add(RuleKind::EtaUnit, Direction::Forward);
    }
    if (node.kind == TermKind::LetPair) {
        add(RuleKind::BetaPair, Direction::Forward);
        add(RuleKind::EtaPair, Direction::Forward);
    }
    if (node.kind == TermKind::LetBox) {
        add(RuleKind::BetaBox, Direction::Forward);
        add(RuleKind::EtaBox, Direction::Forward);
    }
    if (type.kind == TypeKind::Unit) add(RuleKind::EtaUnit, Direction::Backward);
    if (type.kind == TypeKind::Tensor) add(RuleKind::EtaPair, Direction::Backward);
    if (type.kind == TypeKind::Box) {
        add(RuleKind::EtaBox, Direction::Backward);
        out.back().grade = type.grade;
    }
    const bool at_let = node.is_let();
    const bool at_gate = node.kind == TermKind::Gate;
    if (!at_let && !at_gate && node.kind != TermKind::Pair && node.kind != TermKind::Box) return;
    for (LetKind outer : {LetKind::Star, LetKind::Pair, LetKind::Box})
        for (Conversion c : all_conversions())
            for (Direction d : {Direction::Forward, Direction::Backward}) {
                int arity = 1;
                if (c == Conversion::Gate) {
                    const Term* g = nullptr;
                    if (d == Direction::Forward && at_let) g = node.body().get();
                    if (d == Direction::Backward && at_gate) g = &node;
                    if (!g || g->kind != TermKind::Gate) continue;
                    arity = static_cast<int>(g->children.size());
                }
                if (!commute_shape(node, outer, c, d)) continue;
                for (int i = 0; i < arity; ++i) {
                    if (c == Conversion::Gate && d == Direction::Backward &&
                        let_kind(*node.children[static_cast<std::size_t>(i)]) != outer)
                        continue;
                    RuleInstance r;
                    r.kind = RuleKind::Commute;
                    r.outer = outer;
                    r.conversion = c;
                    r.direction = d;
                    r.path = path;
                    r.index = i;
                    out.push_back(r);
                }
            }
}

void collect(const Derivation& d, Path& path, std::vector<RuleInstance>& out) {
    candidates_at(*d.term, *d.type, path, out);
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        path.push_back(static_cast<int>(i));
        collect(*d.premises[i], path, out);
        path.pop_back();
    }
}

}  // namespace

std::vector<Rewrite> one_step_rewrites(const Judgement& j, const ChipSpec& chip) {
    DerivationPtr d = check_or_throw(j, chip);
    std::vector<RuleInstance> rules;
    Path path;
    collect(*d, path, rules);
    std::vector<Rewrite> out;
    std::set<std::string> seen{canonical_key(j.term)};
    for (const auto& r : rules) {
        auto res = apply_rule(j.term, r);
        if (!res) continue;
        std::string key = canonical_key(*res);
        if (seen.count(key)) continue;
        // Beta and the pair and box eta laws keep context and type. Unit eta
        // contraction can drop a let-* shift the scrutinee relied on, and
        // commuting conversions can break a grade side condition.
        const bool kept = r.kind != RuleKind::Commute && r.kind != RuleKind::EtaUnit;
        if (!kept && !accepts(Judgement{j.context, *res, j.type}, chip)) continue;
        seen.insert(std::move(key));
        out.push_back({r, *res});
    }
    return out;
}

// Proof search oracle ----------------------------------------------------------------

RewriteGraph::RewriteGraph(Context g, TypePtr a, const ChipSpec& chip, std::size_t max_size)
    : ctx_(std::move(g)), type_(std::move(a)), chip_(chip), max_size_(max_size) {}

std::string RewriteGraph::add(const TermPtr& t) {
    std::string k = canonical_key(t);
    terms_.emplace(k, t);
    return k;
}

const std::vector<RewriteGraph::Edge>& RewriteGraph::edges(const std::string& key) {
    auto it = edges_.find(key);
    if (it != edges_.end()) return it->second;
    std::vector<Edge> out;
    const TermPtr t = terms_.at(key);
    if (term_size(t) <= max_size_)
        for (auto& rw : one_step_rewrites(Judgement{ctx_, t, type_}, chip_)) out.push_back({add(rw.result), rw.rule});
    return edges_.emplace(key, std::move(out)).first->second;
}

std::map<std::string, int> RewriteGraph::ball(const TermPtr& from, int radius) {
    std::map<std::string, int> dist{{add(from), 0}};
    std::vector<std::string> frontier{dist.begin()->first};
    for (int d = 1; d <= radius && !frontier.empty(); ++d) {
        std::vector<std::string> next;
        for (const auto& k : frontier)
            for (const auto& e : edges(k))
                if (dist.emplace(e.to, d).second) next.push_back(e.to);
        frontier = std::move(next);
    }
    return dist;
}

namespace {

struct Visit {
    int dist = 0;
    std::string parent;  // key; empty at the root
    RuleInstance rule;   // applied to the parent's term
};

class Side {
public:
    Side(RewriteGraph& graph, const TermPtr& root) : graph_(graph) {
        std::string k = graph_.add(root);
        seen_.emplace(k, Visit{0, {}, {}});
        frontier_.push_back(k);
    }

    // Expand one level; returns the new keys.
    std::vector<std::string> step() {
        std::vector<std::string> next;
        for (const auto& k : frontier_) {
            const int d = seen_.at(k).dist;
            for (const auto& e : graph_.edges(k)) {
                if (seen_.count(e.to)) continue;
                seen_.emplace(e.to, Visit{d + 1, k, e.rule});
                next.push_back(e.to);
            }
        }
        frontier_ = next;
        ++depth_;
        return next;
    }

    const std::unordered_map<std::string, Visit>& seen() const { return seen_; }
    bool exhausted() const { return frontier_.empty(); }
    int depth() const { return depth_; }

private:
    RewriteGraph& graph_;
    std::unordered_map<std::string, Visit> seen_;
    std::vector<std::string> frontier_;
    int depth_ = 0;
};

}  // namespace

ProofSearchResult search_equal(const Context& g, const TermPtr& s, const TermPtr& t, const TypePtr& a,
                               const ChipSpec& chip, const SearchOptions& opts) {
    ProofSearchResult res;
    const Judgement js{g, s, a}, jt{g, t, a};
    check_or_throw(js, chip);
    check_or_throw(jt, chip);
    if (alpha_eq(s, t)) {
        res.found = true;
        return res;
    }
    std::size_t cap = opts.max_size ? opts.max_size : std::max(term_size(s), term_size(t)) + 6;
    RewriteGraph graph(g, a, chip, cap);
    Side left(graph, s), right(graph, t);
    const int left_budget = (opts.depth + 1) / 2, right_budget = opts.depth / 2;

    auto build = [&](const std::string& meet) {
        // s ... meet, by walking parents on the left side and reversing
        std::vector<ProofStep> fwd;
        for (std::string k = meet; !left.seen().at(k).parent.empty(); k = left.seen().at(k).parent)
            fwd.push_back({left.seen().at(k).rule, true, graph.term(k)});
        std::reverse(fwd.begin(), fwd.end());
        // meet ... t: each right-side visit was produced from its parent
        for (std::string k = meet; !right.seen().at(k).parent.empty(); k = right.seen().at(k).parent) {
            const Visit& v = right.seen().at(k);
            fwd.push_back({v.rule, false, graph.term(v.parent)});
        }
        res.found = true;
        res.proof = std::move(fwd);
    };

    while (left.depth() < left_budget || right.depth() < right_budget) {
        bool expand_left = left.depth() < left_budget &&
                           (right.depth() >= right_budget || left.depth() <= right.depth());
        Side& side = expand_left ? left : right;
        const Side& other = expand_left ? right : left;
        if (side.exhausted() && other.exhausted()) break;
        for (const auto& k : side.step())
            if (other.seen().count(k)) {
                build(k);
                res.depth_explored = left.depth() + right.depth();
                res.states = left.seen().size() + right.seen().size();
                return res;
            }
    }
    res.depth_explored = left.depth() + right.depth();
    res.states = left.seen().size() + right.seen().size();
    return res;
}

bool replay(const TermPtr& s, const std::vector<ProofStep>& proof) {
    TermPtr cur = s;
    for (const auto& st : proof) {
        auto res = st.forward_from_left ? apply_rule(cur, st.rule) : apply_rule(st.term, st.rule);
        if (!res) return false;
        if (!alpha_eq(*res, st.forward_from_left ? st.term : cur)) return false;
        cur = st.term;
    }
    return true;
}

std::map<std::string, int> rewrite_ball(const Judgement& j, const ChipSpec& chip, int radius, std::size_t max_size) {
    RewriteGraph graph(j.context, j.type, chip, max_size);
    return graph.ball(j.term, radius);
}

// Exhaustive enumeration -------------------------------------------------------------

EnumConfig default_enum_config() {
    EnumConfig c;
    c.var_types = {unit_type(), qubit_type("q1"), qubit_type("q2"), tensor_type(qubit_type("q1"), qubit_type("q2")),
                   box_type(Grade{20}, qubit_type("q1"))};
    return c;
}

namespace {

struct Item {
    Context ctx;
    TermPtr term;
    TypePtr type;
};

TermPtr rename_free(const TermPtr& t, const std::map<std::string, std::string>& m) {
    // through temporaries so that swaps do not interfere
    TermPtr out = t;
    std::size_t i = 0;
    std::vector<std::pair<std::string, std::string>> second;
    for (const auto& [from, to] : m) {
        std::string tmp = "~" + std::to_string(i++);
        out = substitute(out, from, var(tmp));
        second.emplace_back(tmp, to);
    }
    for (const auto& [tmp, to] : second) out = substitute(out, tmp, var(to));
    return out;
}

Context rename_context(const Context& g, const std::map<std::string, std::string>& m) {
    Context out = g;
    for (auto& e : out) e.name = m.at(e.name);
    return out;
}

// Free variables renamed v0, v1, ... by first occurrence; context in that order.
Item canonical(const Item& it) {
    std::map<std::string, std::string> m;
    auto fv = free_vars(it.term);
    for (std::size_t i = 0; i < fv.size(); ++i) m[fv[i]] = "v" + std::to_string(i);
    Item out{{}, rename_free(it.term, m), it.type};
    for (const auto& v : fv) {
        const ContextEntry* e = find_entry(it.ctx, v);
        out.ctx.push_back({m.at(v), e->grade, e->type});
    }
    return out;
}

std::string item_key(const Item& it) {
    return print(it.ctx) + " |- " + canonical_key(it.term) + " : " + print(it.type);
}

// Rename `it` so that its free names are v<offset>, v<offset+1>, ...
Item shifted(const Item& it, std::size_t offset) {
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < it.ctx.size(); ++i) m["v" + std::to_string(i)] = "v" + std::to_string(i + offset);
    return Item{rename_context(it.ctx, m), rename_free(it.term, m), it.type};
}

std::set<QubitId> qubits_of(const Context& g) {
    std::set<QubitId> out;
    for (const auto& e : g)
        for (const auto& q : type_qubits(*e.type)) out.insert(q);
    return out;
}

bool disjoint(const Context& a, const Context& b) {
    auto qa = qubits_of(a), qb = qubits_of(b);
    return std::none_of(qa.begin(), qa.end(), [&](const QubitId& q) { return qb.count(q) > 0; });
}

// A binder name not occurring in either term.
std::string binder_for(const TermPtr& a, const TermPtr& b) {
    auto names = all_names(a);
    auto more = all_names(b);
    names.insert(names.end(), more.begin(), more.end());
    return fresh_name("b", names);
}

class Enumerator {
public:
    Enumerator(const EnumConfig& cfg, const ChipSpec& chip) : cfg_(cfg), chip_(chip) {}

    std::vector<Item> run() {
        by_size_.assign(cfg_.max_size + 1, {});
        if (cfg_.max_size >= 1) {
            add(1, Item{{}, star(), unit_type()});
            for (const auto& a : cfg_.var_types) add(1, Item{{{"v0", Grade{0}, a}}, var("v0"), a});
        }
        for (std::size_t n = 2; n <= cfg_.max_size; ++n) {
            unary(n);
            for (std::size_t i = 1; i + 1 < n; ++i) binary(n, i, n - 1 - i);
        }
        std::vector<Item> all;
        for (auto& v : by_size_) all.insert(all.end(), v.begin(), v.end());
        return all;
    }

private:
    void add(std::size_t n, const Item& raw) {
        Item it = canonical(raw);
        if (!keys_.insert(item_key(it)).second) return;
        by_size_[n].push_back(std::move(it));
    }

    void unary(std::size_t n) {
        for (const Item& c : std::vector<Item>(by_size_[n - 1])) {
            for (auto d : cfg_.box_grades)
                add(n, Item{shift_context(Grade{d}, c.ctx), box(Grade{d}, c.term), box_type(Grade{d}, c.type)});
            if (c.type->kind != TypeKind::Qubit) continue;
            std::vector<GateDecl> gates;
            for (const auto& g : chip_.gates())
                if (g.qubits.size() == 1 && g.qubits[0] == c.type->qubit) gates.push_back(g);
            if (chip_.delay_gates_enabled())
                for (auto d : cfg_.delays) gates.push_back(chip_.delay_gate(c.type->qubit, d).gate);
            for (const auto& g : gates)
                add(n, Item{shift_context(Grade{-g.duration_ns}, c.ctx), gate_app(g.name, {c.term}), c.type});
        }
    }

    void binary(std::size_t n, std::size_t i, std::size_t j) {
        const auto& L = by_size_[i];
        const auto& R = by_size_[j];
        for (const Item& l : L)
            for (const Item& r0 : R) {
                Item r = shifted(r0, l.ctx.size());
                if (!disjoint(l.ctx, r.ctx)) continue;
                Context both = concat(l.ctx, r.ctx);
                add(n, Item{both, pair(l.term, r.term), tensor_type(l.type, r.type)});
                for (const auto& g : chip_.gates()) {
                    if (g.qubits.size() != 2) continue;
                    if (!type_equal(l.type, qubit_type(g.qubits[0])) || !type_equal(r.type, qubit_type(g.qubits[1])))
                        continue;
                    add(n, Item{shift_context(Grade{-g.duration_ns}, both), gate_app(g.name, {l.term, r.term}),
                                tensor_type(l.type, r.type)});
                }
                if (l.type->kind == TypeKind::Unit)
                    for (auto sigma : cfg_.shifts)
                        add(n, Item{concat(shift_context(Grade{sigma}, l.ctx), r.ctx), let_star(l.term, r.term), r.type});
                if (l.type->kind == TypeKind::Tensor) let_pairs(n, l, r);
                if (l.type->kind == TypeKind::Box) let_boxes(n, l, r);
            }
    }

    // `s` is the scrutinee, `t` the body; each is already renamed apart.
    void let_pairs(std::size_t n, const Item& s, const Item& t) {
        for (const auto& ex : t.ctx)
            for (const auto& ey : t.ctx) {
                if (ex.name == ey.name || ex.grade != ey.grade) continue;
                if (!type_equal(ex.type, s.type->left) || !type_equal(ey.type, s.type->right)) continue;
                Context rest = without(t.ctx, {ex.name, ey.name});
                if (!disjoint(s.ctx, rest)) continue;
                std::string bx = binder_for(s.term, t.term);
                TermPtr body = substitute(t.term, ex.name, var(bx));
                std::string by = fresh_name("b", [&] {
                    auto v = all_names(body);
                    auto w = all_names(s.term);
                    v.insert(v.end(), w.begin(), w.end());
                    return v;
                }());
                body = substitute(body, ey.name, var(by));
                add(n, Item{concat(shift_context(ex.grade, s.ctx), rest), let_pair(bx, by, s.term, body), t.type});
            }
    }

    void let_boxes(std::size_t n, const Item& s, const Item& t) {
        const Grade d = s.type->grade;
        for (const auto& ex : t.ctx) {
            if (!type_equal(ex.type, s.type->left)) continue;
            Context rest = without(t.ctx, {ex.name});
            if (!disjoint(s.ctx, rest)) continue;
            std::string bx = binder_for(s.term, t.term);
            add(n, Item{concat(shift_context(ex.grade - d, s.ctx), rest),
                        let_box(d, bx, s.term, substitute(t.term, ex.name, var(bx))), t.type});
        }
    }

    const EnumConfig& cfg_;
    const ChipSpec& chip_;
    std::vector<std::vector<Item>> by_size_;
    std::set<std::string> keys_;
};

std::string sort_key(const ContextEntry& e) { return std::to_string(e.grade.ns) + " " + print(e.type); }

// Context sorted on (grade, type) and names c0, c1, ...; ties keep the order
// of first occurrence.
Judgement by_signature(const Item& it) {
    Context sorted = it.ctx;  // already in first-occurrence order
    std::stable_sort(sorted.begin(), sorted.end(), [](const ContextEntry& a, const ContextEntry& b) {
        if (a.grade != b.grade) return a.grade < b.grade;
        return print(a.type) < print(b.type);
    });
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < sorted.size(); ++i) m[sorted[i].name] = "c" + std::to_string(i);
    return Judgement{rename_context(sorted, m), rename_free(it.term, m), it.type};
}

}  // namespace

std::vector<Judgement> enumerate_judgements(const EnumConfig& cfg, const ChipSpec& chip) {
    Enumerator e(cfg, chip);
    std::vector<Judgement> out;
    for (const Item& it : e.run()) {
        Judgement j = by_signature(it);
        if (auto r = check(j, chip); !r.ok())
            throw std::logic_error("enumerated judgement rejected: " + print(j) + ": " + r.error->message());
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<std::vector<Judgement>> equality_groups(const std::vector<Judgement>& all) {
    std::map<std::string, std::vector<Judgement>> groups;
    std::map<std::string, std::set<std::string>> seen;
    for (const Judgement& j : all) {
        const std::string gk = print(j.context) + " : " + print(j.type);
        // runs of entries sharing grade and type
        std::vector<std::pair<std::size_t, std::size_t>> runs;
        for (std::size_t i = 0; i < j.context.size();) {
            std::size_t k = i + 1;
            while (k < j.context.size() && sort_key(j.context[k]) == sort_key(j.context[i])) ++k;
            if (k - i > 1) runs.emplace_back(i, k);
            i = k;
        }
        std::vector<std::string> names;
        for (const auto& e : j.context) names.push_back(e.name);
        std::vector<std::vector<std::string>> variants{names};
        for (const auto& [a, b] : runs) {
            std::vector<std::vector<std::string>> next;
            for (const auto& v : variants) {
                std::vector<std::string> p = v;
                std::sort(p.begin() + static_cast<std::ptrdiff_t>(a), p.begin() + static_cast<std::ptrdiff_t>(b));
                do next.push_back(p);
                while (std::next_permutation(p.begin() + static_cast<std::ptrdiff_t>(a),
                                             p.begin() + static_cast<std::ptrdiff_t>(b)));
            }
            variants = std::move(next);
        }
        for (const auto& v : variants) {
            std::map<std::string, std::string> m;
            for (std::size_t i = 0; i < names.size(); ++i) m[names[i]] = v[i];
            Judgement vj{j.context, rename_free(j.term, m), j.type};
            if (seen[gk].insert(canonical_key(vj.term)).second) groups[gk].push_back(std::move(vj));
        }
    }
    std::vector<std::vector<Judgement>> out;
    for (auto& [k, g] : groups)
        if (g.size() > 1) out.push_back(std::move(g));
    return out;
}

// Schedule mutations -----------------------------------------------------------------

Mutation delete_sample(const Schedule& s, const QubitId& q, std::size_t index) {
    Mutation m{"delete sample " + std::to_string(index) + " of " + q, s};
    auto& v = m.schedule.channels.at(q).samples;
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(index));
    return m;
}

Mutation duplicate_segment(const Schedule& s, const QubitId& q, std::size_t from, std::size_t length) {
    Mutation m{"duplicate samples [" + std::to_string(from) + ", " + std::to_string(from + length) + ") of " + q, s};
    auto& v = m.schedule.channels.at(q).samples;
    std::vector<Sample> seg(v.begin() + static_cast<std::ptrdiff_t>(from),
                            v.begin() + static_cast<std::ptrdiff_t>(from + length));
    v.insert(v.begin() + static_cast<std::ptrdiff_t>(from + length), seg.begin(), seg.end());
    return m;
}

}  // namespace pstt::testkit
