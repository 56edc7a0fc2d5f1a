#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace bcnobs {

/// Boolean expression tree over named variables.
///
/// Five constructors only: constants, variables, negation, conjunction
/// (multiplication mod 2), disjunction and exclusive or (addition mod 2).
/// Sugar such as XNOR, implication or NAND is rewritten by the parser.
/// Nodes are immutable and shared, so copying an Expr is cheap.
class Expr {
public:
    enum class Kind : std::uint8_t { constant, variable, negation, conjunction, disjunction, exclusive_or };

    Expr();  // constant 0

    static Expr constant(bool value);
    static Expr var(std::string name);
    static Expr negate(Expr operand);
    static Expr conj(Expr lhs, Expr rhs);
    static Expr disj(Expr lhs, Expr rhs);
    static Expr exor(Expr lhs, Expr rhs);

    // Sugar, desugared on construction.
    static Expr xnor(Expr lhs, Expr rhs) { return negate(exor(std::move(lhs), std::move(rhs))); }
    static Expr implies(Expr lhs, Expr rhs) { return disj(negate(std::move(lhs)), std::move(rhs)); }
    static Expr nand(Expr lhs, Expr rhs) { return negate(conj(std::move(lhs), std::move(rhs))); }

    Kind kind() const noexcept;
    bool value() const;                   // constant only
    const std::string& name() const;      // variable only
    const Expr& operand() const;          // negation only
    const Expr& lhs() const;              // binary only
    const Expr& rhs() const;              // binary only

    bool is_binary() const noexcept;

    /// Distinct variable names occurring in the tree, sorted.
    std::set<std::string> variables() const;

    /// Number of nodes in the tree.
    std::size_t size() const;
    std::size_t depth() const;

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

class UnboundVariable : public std::runtime_error {
public:
    explicit UnboundVariable(std::string name)
        : std::runtime_error("unbound variable '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

using Environment = std::map<std::string, bool>;

/// Evaluates over {0,1}. Throws UnboundVariable naming the first missing variable.
bool eval_expr(const Expr& expr, const Environment& env);

/// Variables whose value matters for at least one assignment of the others.
/// Computed by exhaustive evaluation; refuses expressions with more than
/// `kMaxSupportVariables` distinct variables.
inline constexpr std::size_t kMaxSupportVariables = 24;
std::set<std::string> semantic_support(const Expr& expr);

/// Canonical text with operators `!`, `&`, `^`, `|` and minimal parentheses
/// under the grammar's precedence and left associativity.
std::string to_string(const Expr& expr);

/// Flat postfix program over variable slots, used on every hot path.
/// Slot i of the environment word is bit i.
class CompiledExpr {
public:
    enum class Op : std::uint8_t { push0, push1, load, negate, conj, disj, exor };
    struct Instr {
        Op op;
        std::uint8_t slot;
    };

    CompiledExpr() = default;
    CompiledExpr(const Expr& expr, const std::map<std::string, unsigned>& slots);

    bool eval(std::uint64_t env) const noexcept;
    const std::vector<Instr>& program() const noexcept { return program_; }

private:
    std::vector<Instr> program_;
};

}  // namespace bcnobs
