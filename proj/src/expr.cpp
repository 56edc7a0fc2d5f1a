#include "bcnobs/expr.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace bcnobs {

struct Expr::Node {
    Kind kind;
    bool value = false;
    std::string name;
    Expr lhs;
    Expr rhs;
};

Expr::Expr() : node_(nullptr) {}

Expr Expr::constant(bool value) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::constant;
    node->value = value;
    return Expr(std::move(node));
}

Expr Expr::var(std::string name) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::variable;
    node->name = std::move(name);
    return Expr(std::move(node));
}

Expr Expr::negate(Expr operand) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::negation;
    node->lhs = std::move(operand);
    return Expr(std::move(node));
}

namespace {

template <class Node, class Kind>
std::shared_ptr<Node> make_binary(Kind kind, auto lhs, auto rhs) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
}

}  // namespace

Expr Expr::conj(Expr lhs, Expr rhs) { return Expr(make_binary<Node>(Kind::conjunction, std::move(lhs), std::move(rhs))); }
Expr Expr::disj(Expr lhs, Expr rhs) { return Expr(make_binary<Node>(Kind::disjunction, std::move(lhs), std::move(rhs))); }
Expr Expr::exor(Expr lhs, Expr rhs) { return Expr(make_binary<Node>(Kind::exclusive_or, std::move(lhs), std::move(rhs))); }

// A default-constructed Expr has no node and behaves as constant 0.
Expr::Kind Expr::kind() const noexcept { return node_ ? node_->kind : Kind::constant; }

bool Expr::value() const {
    if (kind() != Kind::constant) throw std::logic_error("Expr::value on non-constant");
    return node_ ? node_->value : false;
}

const std::string& Expr::name() const {
    if (kind() != Kind::variable) throw std::logic_error("Expr::name on non-variable");
    return node_->name;
}

const Expr& Expr::operand() const {
    if (kind() != Kind::negation) throw std::logic_error("Expr::operand on non-negation");
    return node_->lhs;
}

const Expr& Expr::lhs() const {
    if (!is_binary()) throw std::logic_error("Expr::lhs on non-binary");
    return node_->lhs;
}

const Expr& Expr::rhs() const {
    if (!is_binary()) throw std::logic_error("Expr::rhs on non-binary");
    return node_->rhs;
}

bool Expr::is_binary() const noexcept {
    const auto k = kind();
    return k == Kind::conjunction || k == Kind::disjunction || k == Kind::exclusive_or;
}

std::set<std::string> Expr::variables() const {
    std::set<std::string> out;
    std::function<void(const Expr&)> walk = [&](const Expr& e) {
        switch (e.kind()) {
        case Kind::constant: break;
        case Kind::variable: out.insert(e.name()); break;
        case Kind::negation: walk(e.operand()); break;
        default:
            walk(e.lhs());
            walk(e.rhs());
        }
    };
    walk(*this);
    return out;
}

std::size_t Expr::size() const {
    switch (kind()) {
    case Kind::constant:
    case Kind::variable: return 1;
    case Kind::negation: return 1 + operand().size();
    default: return 1 + lhs().size() + rhs().size();
    }
}

std::size_t Expr::depth() const {
    switch (kind()) {
    case Kind::constant:
    case Kind::variable: return 1;
    case Kind::negation: return 1 + operand().depth();
    default: return 1 + std::max(lhs().depth(), rhs().depth());
    }
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Expr::Kind::constant: return a.value() == b.value();
    case Expr::Kind::variable: return a.name() == b.name();
    case Expr::Kind::negation: return a.operand() == b.operand();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

bool eval_expr(const Expr& expr, const Environment& env) {
    switch (expr.kind()) {
    case Expr::Kind::constant: return expr.value();
    case Expr::Kind::variable: {
        auto it = env.find(expr.name());
        if (it == env.end()) throw UnboundVariable(expr.name());
        return it->second;
    }
    case Expr::Kind::negation: return !eval_expr(expr.operand(), env);
    case Expr::Kind::conjunction: {
        // Both sides are evaluated so an unbound variable is always reported.
        const bool l = eval_expr(expr.lhs(), env);
        const bool r = eval_expr(expr.rhs(), env);
        return l && r;
    }
    case Expr::Kind::disjunction: {
        const bool l = eval_expr(expr.lhs(), env);
        const bool r = eval_expr(expr.rhs(), env);
        return l || r;
    }
    case Expr::Kind::exclusive_or: return eval_expr(expr.lhs(), env) != eval_expr(expr.rhs(), env);
    }
    return false;
}

std::set<std::string> semantic_support(const Expr& expr) {
    const auto vars_set = expr.variables();
    if (vars_set.size() > kMaxSupportVariables) {
        throw std::invalid_argument("semantic_support: " + std::to_string(vars_set.size()) +
                                    " variables exceed the exhaustive bound of " +
                                    std::to_string(kMaxSupportVariables));
    }
    const std::vector<std::string> vars(vars_set.begin(), vars_set.end());
    std::map<std::string, unsigned> slots;
    for (unsigned i = 0; i < vars.size(); ++i) slots[vars[i]] = i;
    const CompiledExpr compiled(expr, slots);

    const std::uint64_t count = std::uint64_t{1} << vars.size();
    std::set<std::string> support;
    for (unsigned i = 0; i < vars.size(); ++i) {
        const std::uint64_t bit = std::uint64_t{1} << i;
        for (std::uint64_t env = 0; env < count; ++env) {
            if (env & bit) continue;
            if (compiled.eval(env) != compiled.eval(env | bit)) {
                support.insert(vars[i]);
                break;
            }
        }
    }
    return support;
}

namespace {

// Binding strength used by the printer; mirrors the parser.
int precedence(Expr::Kind kind) {
    switch (kind) {
    case Expr::Kind::disjunction: return 1;
    case Expr::Kind::exclusive_or: return 2;
    case Expr::Kind::conjunction: return 3;
    case Expr::Kind::negation: return 4;
    default: return 5;
    }
}

const char* symbol(Expr::Kind kind) {
    switch (kind) {
    case Expr::Kind::conjunction: return " & ";
    case Expr::Kind::disjunction: return " | ";
    case Expr::Kind::exclusive_or: return " ^ ";
    default: return "";
    }
}

void print(const Expr& e, std::string& out) {
    switch (e.kind()) {
    case Expr::Kind::constant: out += e.value() ? '1' : '0'; return;
    case Expr::Kind::variable: out += e.name(); return;
    case Expr::Kind::negation: {
        out += '!';
        const bool paren = precedence(e.operand().kind()) < precedence(Expr::Kind::negation);
        if (paren) out += '(';
        print(e.operand(), out);
        if (paren) out += ')';
        return;
    }
    default: {
        const int p = precedence(e.kind());
        const bool lparen = precedence(e.lhs().kind()) < p;
        const bool rparen = precedence(e.rhs().kind()) <= p;
        if (lparen) out += '(';
        print(e.lhs(), out);
        if (lparen) out += ')';
        out += symbol(e.kind());
        if (rparen) out += '(';
        print(e.rhs(), out);
        if (rparen) out += ')';
    }
    }
}

}  // namespace

std::string to_string(const Expr& expr) {
    std::string out;
    print(expr, out);
    return out;
}

CompiledExpr::CompiledExpr(const Expr& expr, const std::map<std::string, unsigned>& slots) {
    std::function<void(const Expr&)> emit = [&](const Expr& e) {
        switch (e.kind()) {
        case Expr::Kind::constant: program_.push_back({e.value() ? Op::push1 : Op::push0, 0}); break;
        case Expr::Kind::variable: {
            auto it = slots.find(e.name());
            if (it == slots.end()) throw UnboundVariable(e.name());
            if (it->second >= 64) throw std::out_of_range("variable slot beyond 64-bit environment");
            program_.push_back({Op::load, static_cast<std::uint8_t>(it->second)});
            break;
        }
        case Expr::Kind::negation:
            emit(e.operand());
            program_.push_back({Op::negate, 0});
            break;
        case Expr::Kind::conjunction:
            emit(e.lhs());
            emit(e.rhs());
            program_.push_back({Op::conj, 0});
            break;
        case Expr::Kind::disjunction:
            emit(e.lhs());
            emit(e.rhs());
            program_.push_back({Op::disj, 0});
            break;
        case Expr::Kind::exclusive_or:
            emit(e.lhs());
            emit(e.rhs());
            program_.push_back({Op::exor, 0});
            break;
        }
    };
    emit(expr);
}

bool CompiledExpr::eval(std::uint64_t env) const noexcept {
    // Stack of truth values packed into a word while it fits; deep trees
    // fall back to a heap vector.
    std::uint64_t stack = 0;
    unsigned top = 0;
    std::vector<bool> spill;
    auto push = [&](bool v) {
        if (top < 64) {
            stack = (stack & ~(std::uint64_t{1} << top)) | (std::uint64_t{v} << top);
        } else {
            spill.resize(top - 63);
            spill[top - 64] = v;
        }
        ++top;
    };
    auto pop = [&]() -> bool {
        --top;
        if (top < 64) return (stack >> top) & 1u;
        return spill[top - 64];
    };
    for (const auto& ins : program_) {
        switch (ins.op) {
        case Op::push0: push(false); break;
        case Op::push1: push(true); break;
        case Op::load: push((env >> ins.slot) & 1u); break;
        case Op::negate: push(!pop()); break;
        case Op::conj: {
            const bool r = pop();
            const bool l = pop();
            push(l && r);
            break;
        }
        case Op::disj: {
            const bool r = pop();
            const bool l = pop();
            push(l || r);
            break;
        }
        case Op::exor: {
            const bool r = pop();
            const bool l = pop();
            push(l != r);
            break;
        }
        }
    }
    return top ? pop() : false;
}

}  // namespace bcnobs
