#include <doctest.h>

#include "bcnobs/expr.hpp"
#include "bcnobs/parser.hpp"
#include "support/random_bcn.hpp"

using namespace bcnobs;

namespace {

Environment env_of(const std::vector<std::string>& vars, std::uint64_t bits) {
    Environment env;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = (bits >> i) & 1u;
    return env;
}

bool same_function(const Expr& a, const Expr& b, const std::vector<std::string>& vars) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << vars.size()); ++bits)
        if (eval_expr(a, env_of(vars, bits)) != eval_expr(b, env_of(vars, bits))) return false;
    return true;
}

}  // namespace

TEST_CASE("default expression is constant zero") {
    Expr e;
    CHECK(e.kind() == Expr::Kind::constant);
    CHECK_FALSE(e.value());
    CHECK(eval_expr(e, {}) == false);
}

TEST_CASE("core connectives follow arithmetic mod 2") {
    const auto a = Expr::var("a"), b = Expr::var("b");
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            Environment env{{"a", x == 1}, {"b", y == 1}};
            CHECK(eval_expr(Expr::conj(a, b), env) == ((x * y) % 2 == 1));
            CHECK(eval_expr(Expr::exor(a, b), env) == ((x + y) % 2 == 1));
            CHECK(eval_expr(Expr::disj(a, b), env) == (x == 1 || y == 1));
            CHECK(eval_expr(Expr::negate(a), env) == (x == 0));
        }
}

TEST_CASE("sugar is rewritten into the core constructors") {
    const auto a = Expr::var("a"), b = Expr::var("b");
    CHECK(Expr::xnor(a, b) == Expr::negate(Expr::exor(a, b)));
    CHECK(Expr::implies(a, b) == Expr::disj(Expr::negate(a), b));
    CHECK(Expr::nand(a, b) == Expr::negate(Expr::conj(a, b)));
    CHECK(Expr::xnor(a, b).kind() == Expr::Kind::negation);
}

TEST_CASE("accessors reject the wrong kind") {
    const auto a = Expr::var("a");
    CHECK(a.name() == "a");
    CHECK_THROWS(a.value());
    CHECK_THROWS(a.lhs());
    CHECK_THROWS(Expr::constant(true).name());
    CHECK(Expr::conj(a, a).is_binary());
    CHECK_FALSE(Expr::negate(a).is_binary());
}

TEST_CASE("unbound variables are named") {
    try {
        eval_expr(Expr::conj(Expr::var("a"), Expr::var("zz")), {{"a", true}});
        FAIL("expected UnboundVariable");
    } catch (const UnboundVariable& e) {
        CHECK(e.name() == "zz");
    }
}

TEST_CASE("variables, size and depth") {
    const auto e = parse_expr("(a & b) | !c ^ a");
    CHECK(e.variables() == std::set<std::string>{"a", "b", "c"});
    CHECK(Expr::var("a").size() == 1);
    CHECK(Expr::var("a").depth() == 1);
    CHECK(Expr::negate(Expr::var("a")).size() == 2);
    CHECK(Expr::negate(Expr::var("a")).depth() == 2);
}

TEST_CASE("semantic support ignores cancelled variables") {
    CHECK(semantic_support(parse_expr("a ^ a ^ b")) == std::set<std::string>{"b"});
    CHECK(semantic_support(parse_expr("a | !a")).empty());
    CHECK(semantic_support(parse_expr("a & (b | !b)")) == std::set<std::string>{"a"});
}

TEST_CASE("printing uses minimal parentheses") {
    CHECK(to_string(parse_expr("a & b | c")) == "a & b | c");
    CHECK(to_string(parse_expr("a & (b | c)")) == "a & (b | c)");
    CHECK(to_string(parse_expr("a ^ (b ^ c)")) == "a ^ (b ^ c)");
    CHECK(to_string(parse_expr("(a ^ b) ^ c")) == "a ^ b ^ c");
    CHECK(to_string(parse_expr("!(a & b)")) == "!(a & b)");
    CHECK(to_string(parse_expr("1")) == "1");
}

TEST_CASE("property: printed expressions parse back to the same tree") {
    testing::Rng rng(11);
    const std::vector<std::string> vars{"a", "b", "c", "d"};
    for (int i = 0; i < 500; ++i) {
        const auto e = testing::random_expr(rng, vars, 5);
        CAPTURE(to_string(e));
        CHECK(parse_expr(to_string(e)) == e);
    }
}

TEST_CASE("property: compiled programs agree with tree evaluation") {
    testing::Rng rng(12);
    const std::vector<std::string> vars{"a", "b", "c", "d", "e"};
    std::map<std::string, unsigned> slots;
    for (unsigned i = 0; i < vars.size(); ++i) slots[vars[i]] = i;
    for (int i = 0; i < 300; ++i) {
        const auto e = testing::random_expr(rng, vars, 5);
        const CompiledExpr c(e, slots);
        for (std::uint64_t bits = 0; bits < 32; ++bits) REQUIRE(c.eval(bits) == eval_expr(e, env_of(vars, bits)));
    }
}

TEST_CASE("property: semantic support is exactly the variables that matter") {
    testing::Rng rng(13);
    const std::vector<std::string> vars{"a", "b", "c", "d"};
    for (int i = 0; i < 200; ++i) {
        const auto e = testing::random_expr(rng, vars, 4);
        const auto support = semantic_support(e);
        for (std::size_t v = 0; v < vars.size(); ++v) {
            bool matters = false;
            for (std::uint64_t bits = 0; bits < 16; ++bits)
                if (eval_expr(e, env_of(vars, bits)) != eval_expr(e, env_of(vars, bits ^ (1u << v)))) matters = true;
            bool known = e.variables().count(vars[v]) > 0;
            if (!known) CHECK_FALSE(matters);
            else CHECK(support.count(vars[v]) == static_cast<std::size_t>(matters));
        }
    }
}

TEST_CASE("sugar parses into equivalent functions") {
    const std::vector<std::string> vars{"a", "b"};
    CHECK(same_function(parse_expr("a <-> b"), parse_expr("!(a ^ b)"), vars));
    CHECK(same_function(parse_expr("a -> b"), parse_expr("!a | b"), vars));
    CHECK(same_function(parse_expr("a !& b"), parse_expr("!(a & b)"), vars));
}
