#pragma once

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pstt/chip.hpp"
#include "pstt/equality.hpp"
#include "pstt/syntax.hpp"
#include "pstt/typecheck.hpp"

namespace pstt {

class SemanticsError : public std::runtime_error {
public:
    enum class Kind { ObjectMismatch, QubitCollision, MissingCalibration, InvalidMorphism };

    SemanticsError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Model interface -------------------------------------------------------------

/// A symmetric monoidal category with a symmetric monoidal Z-action and an
/// interpretation of the chip's qubits and gates.
///
/// Conventions: associator(a, b, c) : a ⊗ (b ⊗ c) → (a ⊗ b) ⊗ c,
/// left_unitor(a) : I ⊗ a → a, right_unitor(a) : a ⊗ I → a,
/// unitor(a) = λ : a → 0 ⊙ a, multiplicator(c, d, a) = μ : c ⊙ (d ⊙ a) → (c+d) ⊙ a,
/// act_unit(d) : d ⊙ I → I, act_tensor(d, a, b) : (d ⊙ a) ⊗ (d ⊙ b) → d ⊙ (a ⊗ b).
/// Every structural map has an `_inv` partner. `equal` answers nullopt when
/// the model cannot decide.
template <class M>
concept Model = requires(const M& m, const typename M::Object& a, const typename M::Morphism& f, Grade d,
                         const std::string& name) {
    { m.unit() } -> std::convertible_to<typename M::Object>;
    { m.tensor(a, a) } -> std::convertible_to<typename M::Object>;
    { m.act(d, a) } -> std::convertible_to<typename M::Object>;
    { m.qubit(name) } -> std::convertible_to<typename M::Object>;
    { m.same_object(a, a) } -> std::convertible_to<bool>;
    { m.source(f) } -> std::convertible_to<typename M::Object>;
    { m.target(f) } -> std::convertible_to<typename M::Object>;
    { m.id(a) } -> std::convertible_to<typename M::Morphism>;
    { m.compose(f, f) } -> std::convertible_to<typename M::Morphism>;
    { m.tensor(f, f) } -> std::convertible_to<typename M::Morphism>;
    { m.act(d, f) } -> std::convertible_to<typename M::Morphism>;
    { m.associator(a, a, a) } -> std::convertible_to<typename M::Morphism>;
    { m.associator_inv(a, a, a) } -> std::convertible_to<typename M::Morphism>;
    { m.left_unitor(a) } -> std::convertible_to<typename M::Morphism>;
    { m.left_unitor_inv(a) } -> std::convertible_to<typename M::Morphism>;
    { m.right_unitor(a) } -> std::convertible_to<typename M::Morphism>;
    { m.right_unitor_inv(a) } -> std::convertible_to<typename M::Morphism>;
    { m.symmetry(a, a) } -> std::convertible_to<typename M::Morphism>;
    { m.unitor(a) } -> std::convertible_to<typename M::Morphism>;
    { m.unitor_inv(a) } -> std::convertible_to<typename M::Morphism>;
    { m.multiplicator(d, d, a) } -> std::convertible_to<typename M::Morphism>;
    { m.multiplicator_inv(d, d, a) } -> std::convertible_to<typename M::Morphism>;
    { m.act_unit(d) } -> std::convertible_to<typename M::Morphism>;
    { m.act_unit_inv(d) } -> std::convertible_to<typename M::Morphism>;
    { m.act_tensor(d, a, a) } -> std::convertible_to<typename M::Morphism>;
    { m.act_tensor_inv(d, a, a) } -> std::convertible_to<typename M::Morphism>;
    { m.gate(name) } -> std::convertible_to<typename M::Morphism>;
    { m.equal(f, f) } -> std::convertible_to<std::optional<bool>>;
};

template <Model M>
typename M::Object type_object(const M& m, const Type& a) {
    switch (a.kind) {
    case TypeKind::Unit: return m.unit();
    case TypeKind::Qubit: return m.qubit(a.qubit);
    case TypeKind::Tensor: return m.tensor(type_object(m, *a.left), type_object(m, *a.right));
    case TypeKind::Box: return m.act(a.grade, type_object(m, *a.left));
    }
    throw std::logic_error("type_object");
}

/// Composite g ∘ f.
template <Model M>
typename M::Morphism then(const M& m, const typename M::Morphism& f, const typename M::Morphism& g) {
    return m.compose(g, f);
}

// Structural isomorphisms -------------------------------------------------------

/// A bracketing of opaque leaf objects under ⊗, I and d ⊙ -. Two shapes built
/// over the same leaves, where every leaf carries the same total grade, are
/// connected by a unique structural isomorphism.
struct Shape {
    enum class Kind { Unit, Leaf, Tensor, Act };
    Kind kind = Kind::Unit;
    int leaf = -1;
    Grade grade;
    std::vector<Shape> kids;

    static Shape unit() { return {}; }
    static Shape leaf_at(int i) {
        Shape s;
        s.kind = Kind::Leaf;
        s.leaf = i;
        return s;
    }
    static Shape tensor(Shape a, Shape b) {
        Shape s;
        s.kind = Kind::Tensor;
        s.kids = {std::move(a), std::move(b)};
        return s;
    }
    static Shape act(Grade d, Shape a) {
        Shape s;
        s.kind = Kind::Act;
        s.grade = d;
        s.kids = {std::move(a)};
        return s;
    }
};

namespace detail {

template <Model M>
class Structural {
public:
    using Obj = typename M::Object;
    using Mor = typename M::Morphism;

    struct Atom {
        Grade grade;
        int leaf;
    };
    struct Iso {
        Mor to, from;
    };

    Structural(const M& m, const std::vector<Obj>& leaves) : m_(m), leaves_(leaves) {}

    Obj object(const Shape& s) const {
        switch (s.kind) {
        case Shape::Kind::Unit: return m_.unit();
        case Shape::Kind::Leaf: return leaves_.at(static_cast<std::size_t>(s.leaf));
        case Shape::Kind::Tensor: return m_.tensor(object(s.kids[0]), object(s.kids[1]));
        case Shape::Kind::Act: return m_.act(s.grade, object(s.kids[0]));
        }
        throw std::logic_error("shape");
    }

    Mor between(const Shape& src, const Shape& dst) const {
        std::vector<Atom> fs, fd;
        Iso a = flatten(src, fs);
        Iso b = flatten(dst, fd);
        if (fs.size() != fd.size()) throw std::logic_error("structural: leaf sets differ");
        std::map<int, std::size_t> want;
        for (std::size_t i = 0; i < fd.size(); ++i) want[fd[i].leaf] = i;
        std::vector<std::size_t> rank;
        for (const Atom& x : fs) {
            auto it = want.find(x.leaf);
            if (it == want.end() || fd[it->second].grade != x.grade)
                throw std::logic_error("structural: leaf " + std::to_string(x.leaf) + " grade or presence differs");
            rank.push_back(it->second);
        }
        Mor p = permute(fs, rank);
        return then(m_, then(m_, a.to, p), b.from);
    }

private:
    Obj atom_object(const Atom& a) const { return m_.act(a.grade, leaves_.at(static_cast<std::size_t>(a.leaf))); }

    Obj canon(const std::vector<Atom>& f, std::size_t n) const {
        Obj o = m_.unit();
        for (std::size_t i = 0; i < n; ++i) o = m_.tensor(o, atom_object(f[i]));
        return o;
    }
    Obj canon(const std::vector<Atom>& f) const { return canon(f, f.size()); }

    // The shape's object is carried onto ((I ⊗ g1⊙L1) ⊗ g2⊙L2) ⊗ ... ; `out`
    // receives the atoms in left-to-right order.
    Iso flatten(const Shape& s, std::vector<Atom>& out) const {
        switch (s.kind) {
        case Shape::Kind::Unit: {
            Mor i = m_.id(m_.unit());
            return {i, i};
        }
        case Shape::Kind::Leaf: {
            const Obj& l = leaves_.at(static_cast<std::size_t>(s.leaf));
            Obj z = m_.act(Grade{0}, l);
            out.push_back({Grade{0}, s.leaf});
            return {then(m_, m_.unitor(l), m_.left_unitor_inv(z)), then(m_, m_.left_unitor(z), m_.unitor_inv(l))};
        }
        case Shape::Kind::Tensor: {
            std::vector<Atom> fa, fb;
            Iso a = flatten(s.kids[0], fa);
            Iso b = flatten(s.kids[1], fb);
            Iso mg = merge(fa, fb, fb.size());
            out.insert(out.end(), fa.begin(), fa.end());
            out.insert(out.end(), fb.begin(), fb.end());
            return {then(m_, m_.tensor(a.to, b.to), mg.to), then(m_, mg.from, m_.tensor(a.from, b.from))};
        }
        case Shape::Kind::Act: {
            std::vector<Atom> fa;
            Iso a = flatten(s.kids[0], fa);
            Iso ds = distribute(s.grade, fa, fa.size());
            for (const Atom& x : fa) out.push_back({s.grade + x.grade, x.leaf});
            return {then(m_, m_.act(s.grade, a.to), ds.to), then(m_, ds.from, m_.act(s.grade, a.from))};
        }
        }
        throw std::logic_error("shape");
    }

    // canon(fa) ⊗ canon(fb[0..n)) ≅ canon(fa ++ fb[0..n))
    Iso merge(const std::vector<Atom>& fa, const std::vector<Atom>& fb, std::size_t n) const {
        Obj ca = canon(fa);
        if (n == 0) return {m_.right_unitor(ca), m_.right_unitor_inv(ca)};
        Obj rest = canon(fb, n - 1);
        Obj x = atom_object(fb[n - 1]);
        Iso inner = merge(fa, fb, n - 1);
        Mor idx = m_.id(x);
        return {then(m_, m_.associator(ca, rest, x), m_.tensor(inner.to, idx)),
                then(m_, m_.tensor(inner.from, idx), m_.associator_inv(ca, rest, x))};
    }

    // d ⊙ canon(f[0..n)) ≅ canon(d + f[0..n))
    Iso distribute(Grade d, const std::vector<Atom>& f, std::size_t n) const {
        if (n == 0) return {m_.act_unit(d), m_.act_unit_inv(d)};
        Obj rest = canon(f, n - 1);
        const Atom& x = f[n - 1];
        const Obj& l = leaves_.at(static_cast<std::size_t>(x.leaf));
        Obj xo = atom_object(x);
        Iso inner = distribute(d, f, n - 1);
        return {then(m_, m_.act_tensor_inv(d, rest, xo), m_.tensor(inner.to, m_.multiplicator(d, x.grade, l))),
                then(m_, m_.tensor(inner.from, m_.multiplicator_inv(d, x.grade, l)), m_.act_tensor(d, rest, xo))};
    }

    // canon(f) → canon(f reordered so that atom i lands at rank[i]).
    Mor permute(std::vector<Atom> f, std::vector<std::size_t> rank) const {
        Mor acc = m_.id(canon(f));
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t k = 0; k + 1 < f.size(); ++k) {
                if (rank[k] < rank[k + 1]) continue;
                acc = then(m_, acc, swap_adjacent(f, k));
                std::swap(f[k], f[k + 1]);
                std::swap(rank[k], rank[k + 1]);
                changed = true;
            }
        }
        return acc;
    }

    Mor swap_adjacent(const std::vector<Atom>& f, std::size_t k) const {
        Obj c = canon(f, k);
        Obj a = atom_object(f[k]);
        Obj b = atom_object(f[k + 1]);
        Mor s = then(m_, then(m_, m_.associator_inv(c, a, b), m_.tensor(m_.id(c), m_.symmetry(a, b))),
                     m_.associator(c, b, a));
        for (std::size_t i = k + 2; i < f.size(); ++i) s = m_.tensor(s, m_.id(atom_object(f[i])));
        return s;
    }

    const M& m_;
    const std::vector<typename M::Object>& leaves_;
};

}  // namespace detail

/// The structural isomorphism object(src) → object(dst) assembled from
/// associators, unitors, symmetries, λ, μ and the distributors.
template <Model M>
typename M::Morphism structural(const M& m, const Shape& src, const Shape& dst,
                                const std::vector<typename M::Object>& leaves) {
    return detail::Structural<M>(m, leaves).between(src, dst);
}

template <Model M>
typename M::Object shape_object(const M& m, const Shape& s, const std::vector<typename M::Object>& leaves) {
    return detail::Structural<M>(m, leaves).object(s);
}

// Interpretation ---------------------------------------------------------------

namespace detail {

template <Model M>
class Interpreter {
public:
    using Obj = typename M::Object;
    using Mor = typename M::Morphism;

    explicit Interpreter(const M& m) : m_(m) {}

    Mor root(const Context& g, const Derivation& d) {
        Leaves lv(m_);
        for (const auto& e : g) lv.add(e.name, *e.type);
        Mor reorder = structural(m_, context_shape(g, lv), context_shape(d.context, lv), lv.objects);
        return then(m_, reorder, go(d));
    }

private:
    struct Leaves {
        explicit Leaves(const M& m) : m(m) {}
        int add(const std::string& name, const Type& t) {
            index[name] = static_cast<int>(objects.size());
            objects.push_back(type_object(m, t));
            return index[name];
        }
        const M& m;
        std::vector<Obj> objects;
        std::map<std::string, int> index;
    };

    static Shape context_shape(const Context& g, const Leaves& lv, const std::vector<std::string>& skip = {}) {
        Shape s = Shape::unit();
        for (const auto& e : g) {
            if (std::find(skip.begin(), skip.end(), e.name) != skip.end()) continue;
            s = Shape::tensor(std::move(s), Shape::act(e.grade, Shape::leaf_at(lv.index.at(e.name))));
        }
        return s;
    }

    Leaves node_leaves(const Derivation& d) {
        Leaves lv(m_);
        for (const auto& e : d.context) lv.add(e.name, *e.type);
        return lv;
    }

    Mor go(const Derivation& d) {
        const Term& t = *d.term;
        Leaves lv = node_leaves(d);
        const Shape here = context_shape(d.context, lv);
        auto sub = [&](std::size_t i) -> const Derivation& { return *d.premises.at(i); };
        switch (t.kind) {
        case TermKind::Var: return structural(m_, here, Shape::leaf_at(0), lv.objects);
        case TermKind::Star: return m_.id(m_.unit());
        case TermKind::LetStar: {
            const Derivation& s = sub(0);
            const Derivation& b = sub(1);
            Grade sigma = d.param;
            Shape rest = context_shape(b.context, lv);
            Mor m1 = structural(m_, here, Shape::tensor(Shape::act(sigma, context_shape(s.context, lv)), rest),
                                lv.objects);
            Mor m2 = m_.tensor(m_.act(sigma, go(s)), m_.id(shape_object(m_, rest, lv.objects)));
            Mor m3 = structural(m_, Shape::tensor(Shape::act(sigma, Shape::unit()), rest), rest, lv.objects);
            return then(m_, then(m_, then(m_, m1, m2), m3), go(b));
        }
        case TermKind::Gate: {
            Grade neg = -d.param;
            Shape args = Shape::unit();
            Mor parts = m_.id(m_.unit());
            for (std::size_t i = d.premises.size(); i-- > 0;) {
                Shape ci = context_shape(sub(i).context, lv);
                Mor mi = go(sub(i));
                if (i + 1 == d.premises.size()) {
                    args = ci;
                    parts = mi;
                } else {
                    args = Shape::tensor(ci, args);
                    parts = m_.tensor(mi, parts);
                }
            }
            Mor m1 = structural(m_, here, Shape::act(neg, args), lv.objects);
            return then(m_, then(m_, m1, m_.act(neg, parts)), m_.gate(t.name));
        }
        case TermKind::Pair: {
            Mor m1 = structural(
                m_, here, Shape::tensor(context_shape(sub(0).context, lv), context_shape(sub(1).context, lv)),
                lv.objects);
            return then(m_, m1, m_.tensor(go(sub(0)), go(sub(1))));
        }
        case TermKind::LetPair: {
            const Derivation& s = sub(0);
            const Derivation& b = sub(1);
            Grade e = d.param;
            int ix = lv.add(t.x, *s.type->left);
            int iy = lv.add(t.y, *s.type->right);
            Shape rest = context_shape(b.context, lv, {t.x, t.y});
            Mor m1 = structural(m_, here, Shape::tensor(Shape::act(e, context_shape(s.context, lv)), rest),
                                lv.objects);
            Mor m2 = m_.tensor(m_.act(e, go(s)), m_.id(shape_object(m_, rest, lv.objects)));
            Shape split = Shape::tensor(Shape::act(e, Shape::tensor(Shape::leaf_at(ix), Shape::leaf_at(iy))), rest);
            Mor m3 = structural(m_, split, context_shape(b.context, lv), lv.objects);
            return then(m_, then(m_, then(m_, m1, m2), m3), go(b));
        }
        case TermKind::Box: {
            Grade k = t.grade;
            Mor m1 = structural(m_, here, Shape::act(k, context_shape(sub(0).context, lv)), lv.objects);
            return then(m_, m1, m_.act(k, go(sub(0))));
        }
        case TermKind::LetBox: {
            const Derivation& s = sub(0);
            const Derivation& b = sub(1);
            Grade outer = d.param - t.grade;
            int ix = lv.add(t.x, *s.type->left);
            Shape rest = context_shape(b.context, lv, {t.x});
            Mor m1 = structural(m_, here, Shape::tensor(Shape::act(outer, context_shape(s.context, lv)), rest),
                                lv.objects);
            Mor m2 = m_.tensor(m_.act(outer, go(s)), m_.id(shape_object(m_, rest, lv.objects)));
            Shape nested = Shape::tensor(Shape::act(outer, Shape::act(t.grade, Shape::leaf_at(ix))), rest);
            Mor m3 = structural(m_, nested, context_shape(b.context, lv), lv.objects);
            return then(m_, then(m_, then(m_, m1, m2), m3), go(b));
        }
        }
        throw std::logic_error("interpret");
    }

    const M& m_;
};

}  // namespace detail

/// [[Γ]] for the context of a judgement: ((I ⊗ d1 ⊙ [[A1]]) ⊗ ...) ⊗ dn ⊙ [[An]].
template <Model M>
typename M::Object context_object(const M& m, const Context& g) {
    typename M::Object o = m.unit();
    for (const auto& e : g) o = m.tensor(o, m.act(e.grade, type_object(m, *e.type)));
    return o;
}

/// [[Γ ⊢ t : A]] : [[Γ]] → [[A]], by recursion over the derivation.
template <Model M>
typename M::Morphism interpret(const M& m, const Judgement& j, const Derivation& d) {
    return detail::Interpreter<M>(m).root(j.context, d);
}

template <Model M>
typename M::Morphism interpret(const M& m, const Judgement& j, const ChipSpec& chip) {
    return interpret(m, j, *check_or_throw(j, chip));
}

// Pulse model ------------------------------------------------------------------

struct PulseEntry {
    Grade grade;
    QubitId qubit;
    friend bool operator==(const PulseEntry&, const PulseEntry&) = default;
};

/// Sequence of (grade, qubit) pairs with distinct qubits.
struct PulseObject {
    std::vector<PulseEntry> entries;
    friend bool operator==(const PulseObject&, const PulseObject&) = default;
};

struct Provenance {
    std::string gate;
    QubitId qubit;
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;
    friend auto operator<=>(const Provenance&, const Provenance&) = default;
};

/// Signals taking `source` to `target`. Entries are matched by qubit label;
/// the channel of qubit q carries samples on [source grade, target grade).
struct PulseMorphism {
    PulseObject source;
    PulseObject target;
    std::map<QubitId, std::vector<Sample>> samples;
    std::vector<Provenance> provenance;
};

/// Validating constructor; throws SemanticsError(InvalidMorphism).
PulseMorphism make_pulse_morphism(PulseObject source, PulseObject target,
                                  std::map<QubitId, std::vector<Sample>> samples);

std::string to_string(const PulseObject& o);

/// The strict model of chip inputs. Gates are interpreted by their calibrations.
class PulseModel {
public:
    using Object = PulseObject;
    using Morphism = PulseMorphism;

    explicit PulseModel(const ChipSpec& chip) : chip_(chip) {}

    Object unit() const { return {}; }
    Object tensor(const Object& a, const Object& b) const;
    Object act(Grade d, const Object& a) const;
    Object qubit(const std::string& q) const { return {{{Grade{0}, q}}}; }
    bool same_object(const Object& a, const Object& b) const { return a == b; }

    Object source(const Morphism& f) const { return f.source; }
    Object target(const Morphism& f) const { return f.target; }
    Morphism id(const Object& a) const;
    Morphism compose(const Morphism& g, const Morphism& f) const;
    Morphism tensor(const Morphism& f, const Morphism& g) const;
    Morphism act(Grade d, const Morphism& f) const;

    Morphism associator(const Object& a, const Object& b, const Object& c) const { return id(tensor(a, tensor(b, c))); }
    Morphism associator_inv(const Object& a, const Object& b, const Object& c) const { return associator(a, b, c); }
    Morphism left_unitor(const Object& a) const { return id(a); }
    Morphism left_unitor_inv(const Object& a) const { return id(a); }
    Morphism right_unitor(const Object& a) const { return id(a); }
    Morphism right_unitor_inv(const Object& a) const { return id(a); }
    Morphism symmetry(const Object& a, const Object& b) const;
    Morphism unitor(const Object& a) const { return id(a); }
    Morphism unitor_inv(const Object& a) const { return id(a); }
    Morphism multiplicator(Grade c, Grade d, const Object& a) const { return id(act(c, act(d, a))); }
    Morphism multiplicator_inv(Grade c, Grade d, const Object& a) const { return multiplicator(c, d, a); }
    Morphism act_unit(Grade) const { return id(unit()); }
    Morphism act_unit_inv(Grade) const { return id(unit()); }
    Morphism act_tensor(Grade d, const Object& a, const Object& b) const { return id(act(d, tensor(a, b))); }
    Morphism act_tensor_inv(Grade d, const Object& a, const Object& b) const { return act_tensor(d, a, b); }

    Morphism gate(const std::string& name) const;

    /// Structural equality of objects and sample arrays; provenance is ignored.
    std::optional<bool> equal(const Morphism& f, const Morphism& g) const;

    const ChipSpec& chip() const { return chip_; }

private:
    const ChipSpec& chip_;
};

// Syntactic model --------------------------------------------------------------

/// A term `var :^0 source ⊢ term : target`, up to judgemental equality.
struct SyntacticMorphism {
    std::string var;
    TermPtr term;
    TypePtr source;
    TypePtr target;
};

/// Types and single-variable terms. Composition is substitution; equality is
/// decided by the equality engine (nullopt when it answers Unknown).
class SyntacticModel {
public:
    using Object = TypePtr;
    using Morphism = SyntacticMorphism;

    explicit SyntacticModel(const ChipSpec& chip, std::size_t budget = 10000) : chip_(chip), budget_(budget) {}

    Object unit() const { return unit_type(); }
    Object tensor(const Object& a, const Object& b) const { return tensor_type(a, b); }
    Object act(Grade d, const Object& a) const { return box_type(d, a); }
    Object qubit(const std::string& q) const { return qubit_type(q); }
    bool same_object(const Object& a, const Object& b) const { return type_equal(a, b); }

    Object source(const Morphism& f) const { return f.source; }
    Object target(const Morphism& f) const { return f.target; }
    Morphism id(const Object& a) const;
    Morphism compose(const Morphism& g, const Morphism& f) const;
    Morphism tensor(const Morphism& f, const Morphism& g) const;
    Morphism act(Grade d, const Morphism& f) const;

    Morphism associator(const Object& a, const Object& b, const Object& c) const;
    Morphism associator_inv(const Object& a, const Object& b, const Object& c) const;
    Morphism left_unitor(const Object& a) const;
    Morphism left_unitor_inv(const Object& a) const;
    Morphism right_unitor(const Object& a) const;
    Morphism right_unitor_inv(const Object& a) const;
    Morphism symmetry(const Object& a, const Object& b) const;
    Morphism unitor(const Object& a) const;
    Morphism unitor_inv(const Object& a) const;
    Morphism multiplicator(Grade c, Grade d, const Object& a) const;
    Morphism multiplicator_inv(Grade c, Grade d, const Object& a) const;
    Morphism act_unit(Grade d) const;
    Morphism act_unit_inv(Grade d) const;
    Morphism act_tensor(Grade d, const Object& a, const Object& b) const;
    Morphism act_tensor_inv(Grade d, const Object& a, const Object& b) const;

    Morphism gate(const std::string& name) const;

    std::optional<bool> equal(const Morphism& f, const Morphism& g) const;

    /// The judgement `var :^0 source ⊢ term : target`.
    static Judgement judgement(const Morphism& f);

private:
    std::string fresh() const { return "_" + std::to_string(counter_++); }
    Morphism make(std::string v, const Object& a, TermPtr t, const Object& b) const {
        return {std::move(v), std::move(t), a, b};
    }

    const ChipSpec& chip_;
    std::size_t budget_;
    mutable std::size_t counter_ = 0;
};

static_assert(Model<PulseModel>);
static_assert(Model<SyntacticModel>);

// Equality with cached sides ------------------------------------------------------

/// One side of an equality question, normalised and interpreted once so that
/// it can be compared against many others over the same context and type.
struct PreparedSide {
    Judgement judgement;
    NormalForm normal;
    std::optional<PulseMorphism> pulse;
    std::string pulse_error;  // why `pulse` is empty
};

/// Throws TypeError if the judgement is not accepted.
PreparedSide prepare_side(const Judgement& j, const ChipSpec& chip, std::size_t budget = 10000);

/// The verdict judgementally_equal would return for the two sides.
EqVerdict compare_sides(const PreparedSide& l, const PreparedSide& r, std::size_t budget = 10000);

// Model laws ---------------------------------------------------------------------

template <Model M>
struct LawSamples {
    using Obj = typename M::Object;
    using Mor = typename M::Morphism;

    std::vector<Obj> objects;                    // single-object laws
    std::vector<std::pair<Obj, Obj>> pairs;      // tensorable pairs
    std::vector<std::array<Obj, 3>> triples;     // tensorable triples
    std::vector<Grade> grades;                   // action parameters, exhaustively combined
    std::vector<Obj> grade_triple_objects;       // objects for laws over three grades
    /// A few morphisms with the given source (targets arbitrary).
    std::function<std::vector<Mor>(const Obj&)> morphisms_from;
    bool strict = false;                         // also demand λ and μ be identities
};

struct LawReport {
    std::size_t checks = 0;
    std::size_t undecided = 0;
    std::map<std::string, std::size_t> per_law;
    std::vector<std::string> failures;  // first few failures with witnesses

    bool ok() const { return failures.empty(); }
};

namespace detail {

template <Model M>
class LawChecker {
public:
    using Obj = typename M::Object;
    using Mor = typename M::Morphism;

    LawChecker(const M& m, const LawSamples<M>& s, std::function<std::string(const Obj&)> show)
        : m_(m), s_(s), show_(std::move(show)) {}

    LawReport run() {
        for (const Obj& a : s_.objects) single(a);
        for (const auto& [a, b] : s_.pairs) pair(a, b);
        for (const auto& t : s_.triples) triple(t[0], t[1], t[2]);
        for (const Obj& a : s_.grade_triple_objects)
            for (Grade x : s_.grades)
                for (Grade y : s_.grades)
                    for (Grade z : s_.grades) mu_square(x, y, z, a);
        return std::move(r_);
    }

private:
    void expect(const char* law, const Mor& f, const Mor& g, const std::string& witness) {
        ++r_.checks;
        ++r_.per_law[law];
        std::optional<bool> eq;
        try {
            eq = m_.equal(f, g);
        } catch (const std::exception& e) {
            eq = false;
        }
        if (!eq) {
            ++r_.undecided;
            return;
        }
        if (!*eq && r_.failures.size() < 10) r_.failures.push_back(std::string(law) + " at " + witness);
    }

    Mor c(const Mor& f, const Mor& g) const { return then(m_, f, g); }

    void single(const Obj& a) {
        const std::string w = show_(a);
        Mor ia = m_.id(a);
        expect("lambda-inverse", c(m_.unitor(a), m_.unitor_inv(a)), ia, w);
        if (s_.strict) expect("lambda-identity", m_.unitor(a), ia, w);
        for (const Mor& f : s_.morphisms_from(a)) {
            Obj b = m_.target(f);
            expect("left-identity", c(f, m_.id(b)), f, w);
            expect("right-identity", c(ia, f), f, w);
            expect("lambda-natural", c(f, m_.unitor(b)), c(m_.unitor(a), m_.act(Grade{0}, f)), w);
            for (const Mor& g : s_.morphisms_from(b)) {
                for (const Mor& h : s_.morphisms_from(m_.target(g)))
                    expect("associativity", c(c(f, g), h), c(f, c(g, h)), w);
                for (Grade d : s_.grades)
                    expect("action-functor", m_.act(d, c(f, g)), c(m_.act(d, f), m_.act(d, g)), w);
            }
        }
        for (Grade d : s_.grades) {
            const std::string wd = w + " d=" + to_string(d);
            expect("action-identity", m_.act(d, ia), m_.id(m_.act(d, a)), wd);
            expect("mu-zero-left", m_.multiplicator(Grade{0}, d, a), m_.unitor_inv(m_.act(d, a)), wd);
            expect("mu-zero-right", m_.multiplicator(d, Grade{0}, a), m_.act(d, m_.unitor_inv(a)), wd);
            expect("act-unit-inverse", c(m_.act_unit(d), m_.act_unit_inv(d)), m_.id(m_.act(d, m_.unit())), wd);
            for (Grade e : s_.grades) {
                const std::string we = wd + " e=" + to_string(e);
                Mor mu = m_.multiplicator(d, e, a);
                expect("mu-inverse", c(mu, m_.multiplicator_inv(d, e, a)), m_.id(m_.act(d, m_.act(e, a))), we);
                if (s_.strict) expect("mu-identity", mu, m_.id(m_.act(d, m_.act(e, a))), we);
                for (const Mor& f : s_.morphisms_from(a))
                    expect("mu-natural", c(m_.act(d, m_.act(e, f)), m_.multiplicator(d, e, m_.target(f))),
                           c(mu, m_.act(d + e, f)), we);
            }
        }
    }

    void pair(const Obj& a, const Obj& b) {
        const std::string w = show_(a) + " , " + show_(b);
        Obj ab = m_.tensor(a, b);
        expect("tensor-identity", m_.tensor(m_.id(a), m_.id(b)), m_.id(ab), w);
        expect("symmetry-involution", c(m_.symmetry(a, b), m_.symmetry(b, a)), m_.id(ab), w);
        expect("left-unitor-inverse", c(m_.left_unitor_inv(a), m_.left_unitor(a)), m_.id(a), w);
        expect("right-unitor-inverse", c(m_.right_unitor_inv(a), m_.right_unitor(a)), m_.id(a), w);
        auto fs = s_.morphisms_from(a);
        auto gs = s_.morphisms_from(b);
        for (const Mor& f : fs)
            for (const Mor& g : gs) {
                Obj a2 = m_.target(f), b2 = m_.target(g);
                expect("symmetry-natural", c(m_.tensor(f, g), m_.symmetry(a2, b2)), c(m_.symmetry(a, b), m_.tensor(g, f)), w);
                for (const Mor& f2 : s_.morphisms_from(a2))
                    for (const Mor& g2 : s_.morphisms_from(b2))
                        expect("tensor-bifunctor", m_.tensor(c(f, f2), c(g, g2)), c(m_.tensor(f, g), m_.tensor(f2, g2)), w);
                for (Grade d : s_.grades)
                    expect("act-tensor-natural", c(m_.tensor(m_.act(d, f), m_.act(d, g)), m_.act_tensor(d, a2, b2)),
                           c(m_.act_tensor(d, a, b), m_.act(d, m_.tensor(f, g))), w + " d=" + to_string(d));
            }
        expect("triangle", c(m_.associator(a, m_.unit(), b), m_.tensor(m_.right_unitor(a), m_.id(b))),
               m_.tensor(m_.id(a), m_.left_unitor(b)), w);
        for (Grade d : s_.grades) {
            const std::string wd = w + " d=" + to_string(d);
            Obj da = m_.act(d, a), db = m_.act(d, b);
            expect("act-tensor-inverse", c(m_.act_tensor(d, a, b), m_.act_tensor_inv(d, a, b)), m_.id(m_.tensor(da, db)), wd);
            // Unit coherence of the strong monoidal functor d ⊙ -.
            expect("act-left-unit",
                   c(c(m_.tensor(m_.act_unit_inv(d), m_.id(da)), m_.act_tensor(d, m_.unit(), a)), m_.act(d, m_.left_unitor(a))),
                   m_.left_unitor(da), wd);
            expect("act-right-unit",
                   c(c(m_.tensor(m_.id(da), m_.act_unit_inv(d)), m_.act_tensor(d, a, m_.unit())), m_.act(d, m_.right_unitor(a))),
                   m_.right_unitor(da), wd);
            expect("act-symmetry", c(m_.act_tensor(d, a, b), m_.act(d, m_.symmetry(a, b))),
                   c(m_.symmetry(da, db), m_.act_tensor(d, b, a)), wd);
        }
    }

    void triple(const Obj& a, const Obj& b, const Obj& x) {
        const std::string w = show_(a) + " , " + show_(b) + " , " + show_(x);
        Mor al = m_.associator(a, b, x);
        expect("associator-inverse", c(al, m_.associator_inv(a, b, x)), m_.id(m_.tensor(a, m_.tensor(b, x))), w);
        // Hexagon, in the a ⊗ (b ⊗ c) → (a ⊗ b) ⊗ c orientation.
        Mor lhs = c(c(m_.tensor(m_.id(a), m_.symmetry(b, x)), m_.associator(a, x, b)),
                    m_.tensor(m_.symmetry(a, x), m_.id(b)));
        Mor rhs = c(c(m_.associator(a, b, x), m_.symmetry(m_.tensor(a, b), x)), m_.associator(x, a, b));
        expect("hexagon", lhs, rhs, w);
        for (Grade d : s_.grades) {
            Obj da = m_.act(d, a), db = m_.act(d, b), dx = m_.act(d, x);
            Mor l = c(c(m_.tensor(m_.id(da), m_.act_tensor(d, b, x)), m_.act_tensor(d, a, m_.tensor(b, x))),
                      m_.act(d, m_.associator(a, b, x)));
            Mor r = c(c(m_.associator(da, db, dx), m_.tensor(m_.act_tensor(d, a, b), m_.id(dx))),
                      m_.act_tensor(d, m_.tensor(a, b), x));
            expect("act-associativity", l, r, w + " d=" + to_string(d));
        }
        pentagon(a, b, x);
    }

    void pentagon(const Obj& a, const Obj& b, const Obj& x) {
        // The fourth object is the unit so the pentagon stays within the sampled qubits.
        Obj u = m_.unit();
        Mor l = c(m_.associator(a, b, m_.tensor(x, u)), m_.associator(m_.tensor(a, b), x, u));
        Mor r = c(c(m_.tensor(m_.id(a), m_.associator(b, x, u)), m_.associator(a, m_.tensor(b, x), u)),
                  m_.tensor(m_.associator(a, b, x), m_.id(u)));
        expect("pentagon", l, r, show_(a) + " , " + show_(b) + " , " + show_(x));
    }

    void mu_square(Grade x, Grade y, Grade z, const Obj& a) {
        Mor l = c(m_.multiplicator(x, y, m_.act(z, a)), m_.multiplicator(x + y, z, a));
        Mor r = c(m_.act(x, m_.multiplicator(y, z, a)), m_.multiplicator(x, y + z, a));
        expect("mu-square", l, r, show_(a) + " m=" + to_string(x) + " n=" + to_string(y) + " p=" + to_string(z));
    }

    const M& m_;
    const LawSamples<M>& s_;
    std::function<std::string(const Obj&)> show_;
    LawReport r_;
};

}  // namespace detail

/// Check category, monoidal, symmetry and action laws on the sampled data.
template <Model M>
LawReport check_model_laws(const M& m, const LawSamples<M>& samples,
                           std::function<std::string(const typename M::Object&)> show) {
    return detail::LawChecker<M>(m, samples, std::move(show)).run();
}

}  // namespace pstt
