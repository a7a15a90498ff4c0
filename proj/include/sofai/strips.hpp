#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sofai {

// ---------------------------------------------------------------------------
// Lifted representation (PDDL subset: :strips :typing, negative preconditions)
// ---------------------------------------------------------------------------

struct TypedName {
    std::string name;
    std::string type; // "object" when untyped
    bool operator==(const TypedName &) const = default;
};

// Atom over variables (schema level) or objects (ground level).
struct Atom {
    std::string pred;
    std::vector<std::string> args;
    bool operator==(const Atom &) const = default;
};

struct Literal {
    Atom atom;
    bool positive = true;
    bool operator==(const Literal &) const = default;
};

struct Predicate {
    std::string name;
    std::vector<TypedName> params;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> parameters;
    std::vector<Literal> preconditions;
    std::vector<Atom> add_effects;
    std::vector<Atom> del_effects;
};

struct Domain {
    std::string name;
    std::vector<TypedName> types; // name -> parent; root "object" is implicit
    std::vector<Predicate> predicates;
    std::vector<ActionSchema> action_schemas;

    const Predicate *find_predicate(const std::string &name) const;
    bool type_exists(const std::string &t) const;
    // true iff t == ancestor or ancestor is reachable via parent links
    bool type_is(const std::string &t, const std::string &ancestor) const;
};

struct Instance {
    std::string name;
    std::vector<TypedName> objects;
    std::vector<Atom> init;     // ground atoms, deduplicated
    std::vector<Literal> goal;  // ground literals, deduplicated, non-empty
};

// "on(a,b)", "handempty" (no parens for 0-ary)
std::string render_atom(const Atom &a);
// negative literals render as "not(on(a,b))"
std::string render_literal(const Literal &l);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class PddlErrc {
    syntax,
    unsupported_requirement,
    undeclared_type,
    undeclared_predicate,
    undeclared_object,
    undeclared_variable,
    arity_mismatch,
    type_mismatch,
    empty_goal,
    duplicate_name,
    conflicting_effect,
};

class PddlError : public std::runtime_error {
  public:
    PddlError(PddlErrc code, int line, int col, const std::string &msg);
    PddlErrc code;
    int line;
    int col;
};

class PreconditionViolation : public std::runtime_error {
  public:
    explicit PreconditionViolation(std::string lit);
    std::string literal; // rendering of the first unsatisfied literal
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

Domain parse_domain(std::string_view text);
Instance parse_instance(std::string_view text, const Domain &dom);

// ---------------------------------------------------------------------------
// Grounded representation
// ---------------------------------------------------------------------------

// Fixed-width bitset over the task's atom universe.
class State {
  public:
    State() = default;
    explicit State(int num_atoms) : n_(num_atoms), w_((num_atoms + 63) / 64, 0) {}

    bool test(int i) const { return (w_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1U; }
    void set(int i) { w_[static_cast<std::size_t>(i) >> 6] |= 1ULL << (i & 63); }
    void reset(int i) { w_[static_cast<std::size_t>(i) >> 6] &= ~(1ULL << (i & 63)); }
    int num_atoms() const { return n_; }
    std::vector<int> true_atoms() const;

    bool operator==(const State &) const = default;
    const std::vector<std::uint64_t> &words() const { return w_; }

  private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct StateHash {
    std::size_t operator()(const State &s) const;
};

struct GoalLiteral {
    int atom = -1;
    bool positive = true;
    bool operator==(const GoalLiteral &) const = default;
};

struct GroundAction {
    std::string schema;
    std::vector<std::string> args;
    std::string step; // "(stack a b)" — the plan-file rendering
    // sorted atom-index vectors
    std::vector<int> pre_pos, pre_neg, add, del;
};

struct GroundedTask {
    std::string domain_name;
    std::string instance_name;
    std::vector<std::string> atom_names; // index -> rendering, lexicographic order
    std::vector<GroundAction> actions;
    State init;
    std::vector<GoalLiteral> goals;

    std::unordered_map<std::string, int> atom_ids;   // rendering -> index
    std::unordered_map<std::string, int> action_ids; // canonical step -> index

    int num_atoms() const { return static_cast<int>(atom_names.size()); }
    // -1 when the step does not name a ground action of this task
    int find_action(const std::string &step) const;
    std::string render_goal_literal(const GoalLiteral &g) const;
};

GroundedTask ground(const Domain &dom, const Instance &inst);

// Transition function; throws PreconditionViolation when a is inapplicable.
State apply(const GroundedTask &task, const State &s, int action);

// nullopt when applicable, else the first unsatisfied precondition literal.
std::optional<std::string> first_unsatisfied(const GroundedTask &task, const State &s, int action);

// Number of goal literals satisfied in s.
int holds(const State &s, const std::vector<GoalLiteral> &goals);

// Deterministic difficulty bucket: 10 * |objects| + |goal literals|.
int compute_difficulty(const Instance &inst);

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

struct Plan {
    std::vector<std::string> steps; // each "(name arg1 arg2)"
    bool empty() const { return steps.empty(); }
    std::size_t size() const { return steps.size(); }
    bool operator==(const Plan &) const = default;
};

// Normalizes "( Stack  a b )" to "(stack a b)"; nullopt on malformed input.
std::optional<std::string> canonical_step(std::string_view text);

// One step per line; blank lines and ';' comment lines ignored.
// Throws std::runtime_error on a malformed step line.
Plan parse_plan_text(std::string_view text);
std::string render_plan(const Plan &plan);

} // namespace sofai
