#include "pstt/semantics.hpp"

#include <set>

#include "pstt/equality.hpp"
#include "pstt/surface.hpp"

namespace pstt {

// Pulse model ------------------------------------------------------------------

std::string to_string(const PulseObject& o) {
    std::string s = "(";
    for (std::size_t i = 0; i < o.entries.size(); ++i) {
        if (i) s += ", ";
        s += "(" + to_string(o.entries[i].grade) + "," + o.entries[i].qubit + ")";
    }
    return s + ")";
}

namespace {

const PulseEntry* entry_for(const PulseObject& o, const QubitId& q) {
    for (const auto& e : o.entries)
        if (e.qubit == q) return &e;
    return nullptr;
}

void require_distinct(const PulseObject& o) {
    std::set<QubitId> seen;
    for (const auto& e : o.entries)
        if (!seen.insert(e.qubit).second)
            throw SemanticsError(SemanticsError::Kind::QubitCollision, "qubit " + e.qubit + " occurs twice in " + to_string(o));
}

}  // namespace

PulseMorphism make_pulse_morphism(PulseObject source, PulseObject target,
                                  std::map<QubitId, std::vector<Sample>> samples) {
    auto bad = [&](const std::string& why) {
        return SemanticsError(SemanticsError::Kind::InvalidMorphism,
                              why + " in " + to_string(source) + " -> " + to_string(target));
    };
    require_distinct(source);
    require_distinct(target);
    if (source.entries.size() != target.entries.size() || samples.size() != source.entries.size())
        throw bad("entry count mismatch");
    for (const auto& e : source.entries) {
        const PulseEntry* t = entry_for(target, e.qubit);
        auto it = samples.find(e.qubit);
        if (!t || it == samples.end()) throw bad("qubit " + e.qubit + " not matched");
        if (t->grade < e.grade) throw bad("channel " + e.qubit + " runs backwards");
        if (static_cast<std::int64_t>(it->second.size()) != (t->grade - e.grade).ns)
            throw bad("channel " + e.qubit + " has " + std::to_string(it->second.size()) + " samples");
    }
    return PulseMorphism{std::move(source), std::move(target), std::move(samples), {}};
}

PulseObject PulseModel::tensor(const Object& a, const Object& b) const {
    Object r = a;
    r.entries.insert(r.entries.end(), b.entries.begin(), b.entries.end());
    require_distinct(r);
    return r;
}

PulseObject PulseModel::act(Grade d, const Object& a) const {
    Object r = a;
    for (auto& e : r.entries) e.grade += d;
    return r;
}

PulseMorphism PulseModel::id(const Object& a) const {
    PulseMorphism f{a, a, {}, {}};
    for (const auto& e : a.entries) f.samples[e.qubit];
    return f;
}

PulseMorphism PulseModel::compose(const Morphism& g, const Morphism& f) const {
    if (!(f.target == g.source))
        throw SemanticsError(SemanticsError::Kind::ObjectMismatch,
                             "cannot compose: " + to_string(f.target) + " vs " + to_string(g.source));
    PulseMorphism r{f.source, g.target, f.samples, f.provenance};
    for (auto& [q, s] : r.samples) {
        const auto& more = g.samples.at(q);
        s.insert(s.end(), more.begin(), more.end());
    }
    r.provenance.insert(r.provenance.end(), g.provenance.begin(), g.provenance.end());
    return r;
}

PulseMorphism PulseModel::tensor(const Morphism& f, const Morphism& g) const {
    PulseMorphism r{tensor(f.source, g.source), tensor(f.target, g.target), f.samples, f.provenance};
    r.samples.insert(g.samples.begin(), g.samples.end());
    r.provenance.insert(r.provenance.end(), g.provenance.begin(), g.provenance.end());
    return r;
}

PulseMorphism PulseModel::act(Grade d, const Morphism& f) const {
    PulseMorphism r{act(d, f.source), act(d, f.target), f.samples, f.provenance};
    for (auto& p : r.provenance) {
        p.start_ns += d.ns;
        p.end_ns += d.ns;
    }
    return r;
}

PulseMorphism PulseModel::symmetry(const Object& a, const Object& b) const {
    PulseMorphism r = id(tensor(a, b));
    r.target = tensor(b, a);
    return r;
}

PulseMorphism PulseModel::gate(const std::string& name) const {
    auto decl = chip_.find_gate(name);
    if (!decl) throw SemanticsError(SemanticsError::Kind::MissingCalibration, "unknown gate " + name);
    auto cal = chip_.find_calibration(name);
    if (!cal) throw SemanticsError(SemanticsError::Kind::MissingCalibration, "gate " + name + " has no calibration");
    PulseObject src, dst;
    const Grade d{decl->duration_ns};
    PulseMorphism f;
    for (const auto& q : decl->qubits) {
        src.entries.push_back({-d, q});
        dst.entries.push_back({Grade{0}, q});
        f.provenance.push_back({name, q, -d.ns, 0});
    }
    f.source = std::move(src);
    f.target = std::move(dst);
    f.samples = cal->samples;
    return f;
}

std::optional<bool> PulseModel::equal(const Morphism& f, const Morphism& g) const {
    return f.source == g.source && f.target == g.target && f.samples == g.samples;
}

// Syntactic model --------------------------------------------------------------

Judgement SyntacticModel::judgement(const Morphism& f) {
    return Judgement{Context{{f.var, Grade{0}, f.source}}, f.term, f.target};
}

SyntacticMorphism SyntacticModel::id(const Object& a) const {
    std::string x = fresh();
    return make(x, a, var(x), a);
}

SyntacticMorphism SyntacticModel::compose(const Morphism& g, const Morphism& f) const {
    if (!type_equal(f.target, g.source))
        throw SemanticsError(SemanticsError::Kind::ObjectMismatch,
                             "cannot compose: " + print(f.target) + " vs " + print(g.source));
    return make(f.var, f.source, substitute(g.term, g.var, f.term), g.target);
}

SyntacticMorphism SyntacticModel::tensor(const Morphism& f, const Morphism& g) const {
    std::string z = fresh(), x = fresh(), y = fresh();
    TermPtr s = substitute(f.term, f.var, var(x));
    TermPtr t = substitute(g.term, g.var, var(y));
    return make(z, tensor_type(f.source, g.source), let_pair(x, y, var(z), pair(s, t)),
                tensor_type(f.target, g.target));
}

SyntacticMorphism SyntacticModel::act(Grade d, const Morphism& f) const {
    std::string y = fresh(), x = fresh();
    TermPtr t = substitute(f.term, f.var, var(x));
    return make(y, box_type(d, f.source), let_box(d, x, var(y), box(d, t)), box_type(d, f.target));
}

SyntacticMorphism SyntacticModel::associator(const Object& a, const Object& b, const Object& c) const {
    std::string x = fresh(), p = fresh(), y = fresh(), q = fresh(), r = fresh();
    return make(x, tensor_type(a, tensor_type(b, c)),
                let_pair(p, y, var(x), let_pair(q, r, var(y), pair(pair(var(p), var(q)), var(r)))),
                tensor_type(tensor_type(a, b), c));
}

SyntacticMorphism SyntacticModel::associator_inv(const Object& a, const Object& b, const Object& c) const {
    std::string x = fresh(), y = fresh(), r = fresh(), p = fresh(), q = fresh();
    return make(x, tensor_type(tensor_type(a, b), c),
                let_pair(y, r, var(x), let_pair(p, q, var(y), pair(var(p), pair(var(q), var(r))))),
                tensor_type(a, tensor_type(b, c)));
}

SyntacticMorphism SyntacticModel::left_unitor(const Object& a) const {
    std::string x = fresh(), u = fresh(), y = fresh();
    return make(x, tensor_type(unit_type(), a), let_pair(u, y, var(x), let_star(var(u), var(y))), a);
}

SyntacticMorphism SyntacticModel::left_unitor_inv(const Object& a) const {
    std::string x = fresh();
    return make(x, a, pair(star(), var(x)), tensor_type(unit_type(), a));
}

SyntacticMorphism SyntacticModel::right_unitor(const Object& a) const {
    std::string x = fresh(), u = fresh(), y = fresh();
    return make(x, tensor_type(a, unit_type()), let_pair(y, u, var(x), let_star(var(u), var(y))), a);
}

SyntacticMorphism SyntacticModel::right_unitor_inv(const Object& a) const {
    std::string x = fresh();
    return make(x, a, pair(var(x), star()), tensor_type(a, unit_type()));
}

SyntacticMorphism SyntacticModel::symmetry(const Object& a, const Object& b) const {
    std::string x = fresh(), p = fresh(), q = fresh();
    return make(x, tensor_type(a, b), let_pair(p, q, var(x), pair(var(q), var(p))), tensor_type(b, a));
}

SyntacticMorphism SyntacticModel::unitor(const Object& a) const {
    std::string x = fresh();
    return make(x, a, box(Grade{0}, var(x)), box_type(Grade{0}, a));
}

SyntacticMorphism SyntacticModel::unitor_inv(const Object& a) const {
    std::string x = fresh(), y = fresh();
    return make(x, box_type(Grade{0}, a), let_box(Grade{0}, y, var(x), var(y)), a);
}

SyntacticMorphism SyntacticModel::multiplicator(Grade c, Grade d, const Object& a) const {
    std::string x = fresh(), y = fresh(), z = fresh();
    return make(x, box_type(c, box_type(d, a)), let_box(c, y, var(x), let_box(d, z, var(y), box(c + d, var(z)))),
                box_type(c + d, a));
}

SyntacticMorphism SyntacticModel::multiplicator_inv(Grade c, Grade d, const Object& a) const {
    std::string x = fresh(), y = fresh();
    return make(x, box_type(c + d, a), let_box(c + d, y, var(x), box(c, box(d, var(y)))), box_type(c, box_type(d, a)));
}

SyntacticMorphism SyntacticModel::act_unit(Grade d) const {
    std::string x = fresh(), y = fresh();
    return make(x, box_type(d, unit_type()), let_box(d, y, var(x), let_star(var(y), star())), unit_type());
}

SyntacticMorphism SyntacticModel::act_unit_inv(Grade d) const {
    // `box d x` would need x at grade d; consuming x first keeps it at grade 0.
    std::string x = fresh();
    return make(x, unit_type(), let_star(var(x), box(d, star())), box_type(d, unit_type()));
}

SyntacticMorphism SyntacticModel::act_tensor(Grade d, const Object& a, const Object& b) const {
    std::string x = fresh(), y = fresh(), z = fresh(), p = fresh(), q = fresh();
    return make(x, tensor_type(box_type(d, a), box_type(d, b)),
                let_pair(y, z, var(x), let_box(d, p, var(y), let_box(d, q, var(z), box(d, pair(var(p), var(q)))))),
                box_type(d, tensor_type(a, b)));
}

SyntacticMorphism SyntacticModel::act_tensor_inv(Grade d, const Object& a, const Object& b) const {
    std::string x = fresh(), y = fresh(), p = fresh(), q = fresh();
    return make(x, box_type(d, tensor_type(a, b)),
                let_box(d, y, var(x), let_pair(p, q, var(y), pair(box(d, var(p)), box(d, var(q))))),
                tensor_type(box_type(d, a), box_type(d, b)));
}

SyntacticMorphism SyntacticModel::gate(const std::string& name) const {
    auto decl = chip_.find_gate(name);
    if (!decl) throw SemanticsError(SemanticsError::Kind::MissingCalibration, "unknown gate " + name);
    const Grade neg{-decl->duration_ns};
    std::vector<TypePtr> qs;
    for (const auto& q : decl->qubits) qs.push_back(qubit_type(q));
    TypePtr out = tensor_of(qs);
    std::string x = fresh(), y = fresh();
    // Split the right-nested tensor into one variable per qubit.
    std::vector<std::string> names;
    for (std::size_t i = 0; i < qs.size(); ++i) names.push_back(fresh());
    std::vector<TermPtr> args;
    for (const auto& n : names) args.push_back(var(n));
    TermPtr body = gate_app(name, args);
    if (names.size() == 1) {
        body = substitute(body, names[0], var(y));
    } else {
        std::string rest = y;
        std::vector<std::pair<std::string, std::string>> splits;
        for (std::size_t i = 0; i + 1 < names.size(); ++i) {
            std::string tail = i + 2 == names.size() ? names[i + 1] : fresh();
            splits.push_back({rest, tail});
            rest = tail;
        }
        for (std::size_t i = splits.size(); i-- > 0;) body = let_pair(names[i], splits[i].second, var(splits[i].first), body);
    }
    return make(x, box_type(neg, out), let_box(neg, y, var(x), body), out);
}

std::optional<bool> SyntacticModel::equal(const Morphism& f, const Morphism& g) const {
    if (!type_equal(f.source, g.source) || !type_equal(f.target, g.target)) return false;
    TermPtr gt = substitute(g.term, g.var, var(f.var));
    auto v = judgementally_equal(Context{{f.var, Grade{0}, f.source}}, f.term, gt, f.target, chip_, budget_);
    switch (v.kind) {
    case EqVerdict::Kind::Equal: return true;
    case EqVerdict::Kind::Unknown: return std::nullopt;
    default: return false;
    }
}

}  // namespace pstt
