#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pstt/chip.hpp"
#include "pstt/equality.hpp"
#include "pstt/schedule.hpp"
#include "pstt/semantics.hpp"
#include "pstt/syntax.hpp"

namespace pstt::testkit {

// Fixtures -----------------------------------------------------------------------

/// Qubits q1, q2; H1 and K1 on q1 (20 ns), H2 on q2 (24 ns), CX on both
/// (120 ns); linear-ramp calibrations that differ pairwise; delays enabled.
ChipSpec chip0();

/// chip0 plus a third qubit q3 with a 16 ns gate H3.
ChipSpec chip3();

/// Independent stream seed for case `index` of a run seeded with `seed`.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index);

// Generation ---------------------------------------------------------------------

struct GenConfig {
    explicit GenConfig(ChipSpec c) : chip(std::move(c)) {}

    std::uint64_t seed = 0;
    int max_depth = 5;         // rule applications along any branch, at least 1
    Grade grade_lo{-120};      // range for box grades and let-* shifts
    Grade grade_hi{120};
    int max_type_depth = 2;    // of randomly chosen goal types
    std::optional<TypePtr> goal;
    std::string prefix = "x";  // every generated name is prefix + counter
    ChipSpec chip;
};

struct GenStats {
    std::size_t produced = 0;
    std::size_t rejected = 0;  // candidates the type checker refused
};

/// Top-down generator: pick a rule whose conclusion matches the goal type,
/// recurse on its premises and assemble the context from theirs. The depth of
/// each judgement is uniform in [ceil(max_depth / 2), max_depth] and its root
/// is not a leaf unless the depth is 1; variables (and `*`) are the leaves at
/// depth 1, while unit-typed subterms may also stop early at `*` or a
/// variable. Grades are uniform in the configured range and delay durations
/// in [1, max |grade|].
///
/// `let (x, y)` and `let box` bind variables that the generated body already
/// uses; the two components of a pair are brought to a common grade by
/// prefixing the later one with delays, a `let *` shift or the corresponding
/// destructuring, so no candidate is ill-typed by construction.
class Generator {
public:
    explicit Generator(GenConfig cfg);

    /// A random goal type over a random subset of the chip's qubits, each
    /// qubit used at most once.
    TypePtr random_type();

    /// A checked judgement for the configured goal or a random one. After a
    /// bounded number of rejected candidates returns `⊢ * : 1`.
    Judgement judgement();
    Judgement judgement(const TypePtr& goal);

    enum class Root { Any, Compound, LetStar, LetPair, LetBox };
    /// Like judgement(goal) but forcing the rule at the root (Compound: any
    /// rule but a leaf). nullopt when no candidate of that shape was found.
    std::optional<Judgement> rooted(const TypePtr& goal, Root root);

    const GenStats& stats() const { return stats_; }
    std::mt19937_64& rng() { return rng_; }
    const GenConfig& config() const { return cfg_; }
    std::string fresh();

private:
    struct Piece {
        Context context;
        TermPtr term;
    };
    std::optional<Piece> gen(const TypePtr& goal, int depth, Root root = Root::Any);
    std::optional<Piece> apply(int rule, const TypePtr& goal, int depth);
    TermPtr retime(const std::string& v, const TypePtr& a, std::int64_t delta);
    TypePtr type_over(std::vector<QubitId> qs, int depth);
    std::int64_t grade();
    std::int64_t pick(std::int64_t lo, std::int64_t hi);

    GenConfig cfg_;
    std::mt19937_64 rng_;
    std::size_t counter_ = 0;
    GenStats stats_;
};

/// Convenience wrapper: Generator(cfg).judgement().
Judgement gen_judgement(const GenConfig& cfg);

/// A checked judgement `z :^0 A ⊢ t : B`: a generated judgement whose context
/// is packed into one variable by let-pair and let-box destructuring.
Judgement gen_single_variable(Generator& g);

/// Premises and conclusion of one substitution instance.
struct Composable {
    Judgement s;            // Γ ⊢ s : A
    Judgement t;            // x :^d A, Δ ⊢ t : B
    std::string x;
    Judgement substituted;  // d + Γ, Δ ⊢ t[x := s] : B
};

/// nullopt when no body with a free variable was produced in a few attempts.
std::optional<Composable> gen_composable(Generator& body, Generator& arg);

// One-step rewriting ---------------------------------------------------------------

struct Rewrite {
    RuleInstance rule;
    TermPtr result;
};

/// Every single-rule rewrite of the judgement's term, in both directions,
/// whose result is accepted at the same context and type. Beta expansion is
/// not enumerated (it would invent arbitrary redexes). Results are
/// deduplicated up to alpha-equivalence; the order is deterministic.
std::vector<Rewrite> one_step_rewrites(const Judgement& j, const ChipSpec& chip);

// Proof search oracle ----------------------------------------------------------------

/// Consecutive terms of a proof are related by one rule instance applied to
/// the left term (`forward_from_left`) or to the right term.
struct ProofStep {
    RuleInstance rule;
    bool forward_from_left = true;
    TermPtr term;  // the term after this step, read left to right
};

struct ProofSearchResult {
    bool found = false;
    std::vector<ProofStep> proof;  // from s to t
    int depth_explored = 0;        // rewrite steps explored on both sides together
    std::size_t states = 0;
};

struct SearchOptions {
    int depth = 6;
    /// Intermediate terms larger than this are not expanded further; zero
    /// means max(size s, size t) + 6.
    std::size_t max_size = 0;
};

/// Breadth-first search from both ends for a chain of rule instances
/// relating s and t. A chain of length n is found when its meeting point is
/// within ceil(depth/2) steps of s and floor(depth/2) steps of t.
ProofSearchResult search_equal(const Context& g, const TermPtr& s, const TermPtr& t, const TypePtr& a,
                               const ChipSpec& chip, const SearchOptions& opts = {});

/// Check that each step of a proof is the stated rule instance.
bool replay(const TermPtr& s, const std::vector<ProofStep>& proof);

/// Lazily explored graph of one-step rewrites between terms of one context
/// and type, with vertices keyed by canonical_key. Searches over the same
/// context and type can share one graph.
class RewriteGraph {
public:
    RewriteGraph(Context g, TypePtr a, const ChipSpec& chip, std::size_t max_size);

    struct Edge {
        std::string to;
        RuleInstance rule;  // applied to term(from)
    };

    /// Register a term; returns its key. The first term added under a key
    /// stays its representative.
    std::string add(const TermPtr& t);
    const TermPtr& term(const std::string& key) const { return terms_.at(key); }
    /// Rewrites of term(key); none for terms larger than max_size.
    const std::vector<Edge>& edges(const std::string& key);
    /// Distances from `from` up to `radius`, keyed by canonical_key.
    std::map<std::string, int> ball(const TermPtr& from, int radius);

private:
    Context ctx_;
    TypePtr type_;
    const ChipSpec& chip_;
    std::size_t max_size_;
    std::map<std::string, TermPtr> terms_;
    std::map<std::string, std::vector<Edge>> edges_;
};

/// Terms reachable from the judgement's term in at most `radius` steps,
/// keyed by canonical_key, with their distance.
std::map<std::string, int> rewrite_ball(const Judgement& j, const ChipSpec& chip, int radius,
                                        std::size_t max_size);

// Exhaustive enumeration -------------------------------------------------------------

struct EnumConfig {
    std::size_t max_size = 7;
    std::vector<TypePtr> var_types;            // types of free variables
    std::vector<std::int64_t> box_grades{20};  // for box and let box
    std::vector<std::int64_t> shifts{0};       // let-* shifts
    std::vector<std::int64_t> delays{20};      // delay gate durations
};

/// Defaults for chip0: variables of type 1, q1, q2, q1 * q2 and [20] q1.
EnumConfig default_enum_config();

/// Every accepted judgement with term size at most max_size built from the
/// configured parameters, up to alpha-equivalence and renaming of free
/// variables. Free variables are named by sorting the context on (grade, type).
std::vector<Judgement> enumerate_judgements(const EnumConfig& cfg, const ChipSpec& chip);

/// Judgements of `all` grouped by context and type. Where several context
/// entries share a grade and a type, each permutation of their names is a
/// separate member, so pairs that differ only in how they use such entries
/// are compared too.
std::vector<std::vector<Judgement>> equality_groups(const std::vector<Judgement>& all);

// Schedule mutations -----------------------------------------------------------------

struct Mutation {
    std::string description;
    Schedule schedule;
};

/// Remove the sample at `index` of the channel of `q`.
Mutation delete_sample(const Schedule& s, const QubitId& q, std::size_t index);
/// Insert a copy of samples [from, from + length) right after that segment.
Mutation duplicate_segment(const Schedule& s, const QubitId& q, std::size_t from, std::size_t length);

// Suites -----------------------------------------------------------------------------

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::map<std::string, std::size_t> counts;  // suite-specific tallies
    std::vector<std::string> examples;          // first few failures

    bool ok() const { return failures == 0; }
    void fail(std::string what);
};

std::string to_string(const SuiteResult& r);

/// Free variables equal the context, each occurring once.
SuiteResult linearity_suite(const GenConfig& cfg, std::size_t cases);
/// The substitution instance of two generated premises checks; `cases`
/// counts produced pairs, at most 10 * cases draws.
SuiteResult substitution_suite(const GenConfig& cfg, std::size_t cases);
/// Every normalisation step keeps the judgement accepted; also idempotence.
SuiteResult preservation_suite(const GenConfig& cfg, std::size_t cases);
/// Pulse interpretations survive up to `steps` random sound rewrites.
SuiteResult pulse_soundness_suite(const GenConfig& cfg, std::size_t cases, int steps = 5);
/// The syntactic-model interpretation of x:^0 A ⊢ t : B is Equal to t.
SuiteResult self_interpretation_suite(const GenConfig& cfg, std::size_t cases);
/// t[x := s] and t[x := s'] normalise alike when s' is one rewrite of s.
SuiteResult functionality_suite(const GenConfig& cfg, std::size_t cases);
/// The three substitution-into-let equations are verified Equal.
SuiteResult commuting_substitution_suite(const GenConfig& cfg, std::size_t cases);
/// Shifting the grades of a let-* scrutinee keeps the judgement accepted.
SuiteResult slack_shift_suite(const GenConfig& cfg, std::size_t cases);
/// parse(print(t)) is alpha-equal to t and re-prints identically.
SuiteResult roundtrip_suite(const GenConfig& cfg, std::size_t cases);
/// Emitted schedules validate and survive a JSON round trip byte for byte.
SuiteResult schedule_suite(const GenConfig& cfg, std::size_t cases);

/// Pulse-model laws on objects of at most three qubits of `chip` with every
/// grade in [lo, hi] and random sample arrays.
LawReport pulse_law_check(const ChipSpec& chip, std::int64_t lo, std::int64_t hi, std::uint64_t seed);

struct OracleAgreement {
    std::size_t judgements = 0;
    std::size_t pairs = 0;
    std::size_t both_equal = 0;        // engine Equal, oracle proof
    std::size_t both_distinct = 0;     // engine not Equal, no oracle proof
    std::size_t unknown_with_proof = 0;
    std::size_t unknown_without_proof = 0;
    std::size_t equal_without_proof = 0;
    std::size_t refuted_with_proof = 0;  // engine NotEqual* but the oracle has a proof
    std::vector<std::string> examples;

    double discrepancy_rate() const;
};

/// Compare the equality engine with the rewrite oracle on every pair of
/// enumerated judgements sharing a context and type. Groups are spread over
/// `threads` workers (0: one per hardware thread); the result does not
/// depend on the count.
OracleAgreement oracle_agreement(const EnumConfig& cfg, const ChipSpec& chip, int depth = 6, unsigned threads = 0);

}  // namespace pstt::testkit
