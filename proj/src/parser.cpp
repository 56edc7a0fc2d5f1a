#include "bcnobs/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace bcnobs {
namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Line {
    std::size_t number;
    std::string_view text;  // comment stripped
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        out.push_back({number, line});
        ++number;
        pos = end + 1;
    }
    return out;
}

std::size_t skip_space(std::string_view s, std::size_t i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return i;
}

bool blank(std::string_view s) { return skip_space(s, 0) == s.size(); }

struct Name {
    std::string text;
    std::size_t column;
    std::size_t line;
};

// Names separated by whitespace and/or commas.
std::vector<Name> parse_name_list(std::string_view s, std::size_t offset, std::size_t line) {
    std::vector<Name> out;
    std::size_t i = offset;
    while (true) {
        while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
        if (i >= s.size()) break;
        if (!ident_start(s[i])) throw ParseError(std::string("unexpected character '") + s[i] + "'", line, i + 1);
        std::size_t start = i;
        while (i < s.size() && ident_char(s[i])) ++i;
        out.push_back({std::string(s.substr(start, i - start)), start + 1, line});
    }
    return out;
}

class ExprParser {
public:
    ExprParser(std::string_view text, std::size_t line, std::size_t base_column)
        : s_(text), line_(line), base_(base_column) {}

    struct Var {
        std::string name;
        std::size_t column;
    };

    Expr parse() {
        Expr e = equivalence();
        skip();
        if (i_ < s_.size()) fail(std::string("unexpected '") + s_[i_] + "'");
        return e;
    }

    const std::vector<Var>& variables() const { return vars_; }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, base_ + i_); }

    void skip() { i_ = skip_space(s_, i_); }

    bool accept(std::string_view tok) {
        skip();
        if (s_.substr(i_, tok.size()) == tok) {
            i_ += tok.size();
            return true;
        }
        return false;
    }

    Expr equivalence() {
        Expr lhs = implication();
        while (accept("<->")) lhs = Expr::xnor(lhs, implication());
        return lhs;
    }

    Expr implication() {
        Expr lhs = disjunction();
        if (accept("->")) return Expr::implies(lhs, implication());
        return lhs;
    }

    Expr disjunction() {
        Expr lhs = exclusive();
        while (accept("|")) lhs = Expr::disj(lhs, exclusive());
        return lhs;
    }

    Expr exclusive() {
        Expr lhs = conjunction();
        while (accept("^")) lhs = Expr::exor(lhs, conjunction());
        return lhs;
    }

    Expr conjunction() {
        Expr lhs = unary();
        while (true) {
            if (accept("!&"))
                lhs = Expr::nand(lhs, unary());
            else if (accept("&"))
                lhs = Expr::conj(lhs, unary());
            else
                return lhs;
        }
    }

    Expr unary() {
        skip();
        if (i_ >= s_.size()) fail("expected an expression");
        const char c = s_[i_];
        if (c == '!') {
            ++i_;
            return Expr::negate(unary());
        }
        if (c == '(') {
            ++i_;
            Expr e = equivalence();
            if (!accept(")")) fail("expected ')'");
            return e;
        }
        if (c == '0' || c == '1') {
            ++i_;
            if (i_ < s_.size() && ident_char(s_[i_])) fail("malformed literal");
            return Expr::constant(c == '1');
        }
        if (ident_start(c)) {
            const std::size_t start = i_;
            while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
            std::string name(s_.substr(start, i_ - start));
            vars_.push_back({name, base_ + start});
            return Expr::var(std::move(name));
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view s_;
    std::size_t line_, base_;
    std::size_t i_ = 0;
    std::vector<Var> vars_;
};

struct Definition {
    std::size_t line;
    std::size_t column;
    Expr expr;
    std::vector<ExprParser::Var> vars;
};

}  // namespace

Expr parse_expr(std::string_view text) {
    ExprParser p(text, 1, 1);
    return p.parse();
}

Bcn parse_bcn(std::string_view text, ParseOptions options) {
    const auto lines = split_lines(text);

    std::map<std::string, std::pair<std::vector<Name>, std::size_t>> headers;  // keyword -> (names, line)
    std::map<std::string, Definition> updates, outputs;

    std::string open_header;  // header that an indented line may continue
    for (const auto& [number, s] : lines) {
        if (blank(s)) continue;
        std::size_t i = skip_space(s, 0);
        if (!open_header.empty() && i > 0 && s.find_first_of("=:'") == std::string_view::npos) {
            auto more = parse_name_list(s, i, number);
            auto& names = headers[open_header].first;
            names.insert(names.end(), more.begin(), more.end());
            continue;
        }
        open_header.clear();
        if (!ident_start(s[i])) throw ParseError(std::string("unexpected '") + s[i] + "'", number, i + 1);
        const std::size_t name_start = i;
        while (i < s.size() && ident_char(s[i])) ++i;
        const std::string name(s.substr(name_start, i - name_start));
        std::size_t j = skip_space(s, i);

        if (j < s.size() && s[j] == ':') {
            static const std::set<std::string> keywords{"inputs", "states", "outputs", "observe"};
            if (!keywords.count(name)) throw ParseError("unknown section '" + name + "'", number, name_start + 1);
            if (headers.count(name)) throw ParseError("section '" + name + "' given twice", number, name_start + 1);
            headers[name] = {parse_name_list(s, j + 1, number), number};
            open_header = name;
            continue;
        }

        bool primed = false;
        if (j < s.size() && s[j] == '\'') {
            primed = true;
            j = skip_space(s, j + 1);
        }
        if (j >= s.size() || s[j] != '=') throw ParseError("expected '=' after '" + name + "'", number, j + 1);
        ExprParser p(s.substr(j + 1), number, j + 2);
        Expr e = p.parse();
        auto& table = primed ? updates : outputs;
        if (table.count(name))
            throw ParseError("duplicate definition of '" + name + "'", number, name_start + 1);
        table[name] = Definition{number, name_start + 1, std::move(e), p.variables()};
    }

    auto section = [&](const std::string& key) -> const std::vector<Name>& {
        static const std::vector<Name> none;
        auto it = headers.find(key);
        return it == headers.end() ? none : it->second.first;
    };
    auto section_line = [&](const std::string& key) -> std::size_t {
        auto it = headers.find(key);
        return it == headers.end() ? 1 : it->second.second;
    };
    const std::size_t last_line = lines.empty() ? 1 : lines.back().number;

    if (!headers.count("states")) throw ParseError("missing 'states:' section", last_line, 1);
    if (section("states").empty()) throw ParseError("empty 'states:' section", section_line("states"), 1);
    const bool has_observe = !section("observe").empty();
    if (section("outputs").empty() && !options.allow_no_outputs && !has_observe) {
        if (!headers.count("outputs")) throw ParseError("missing 'outputs:' section", last_line, 1);
        throw ParseError("empty 'outputs:' section", section_line("outputs"), 1);
    }

    std::map<std::string, NodeClass> declared;
    auto declare = [&](const std::string& key, NodeClass cls) {
        std::vector<std::string> names;
        for (const auto& n : section(key)) {
            if (!declared.emplace(n.text, cls).second)
                throw ParseError("node '" + n.text + "' declared twice", n.line, n.column);
            names.push_back(n.text);
        }
        return names;
    };
    auto inputs = declare("inputs", NodeClass::input);
    auto states = declare("states", NodeClass::state);
    auto output_names = declare("outputs", NodeClass::output);

    auto check_vars = [&](const Definition& d, bool allow_inputs) {
        for (const auto& v : d.vars) {
            auto it = declared.find(v.name);
            if (it == declared.end()) throw ParseError("undeclared variable '" + v.name + "'", d.line, v.column);
            if (it->second == NodeClass::output)
                throw ParseError("output node '" + v.name + "' cannot appear in an expression", d.line, v.column);
            if (it->second == NodeClass::input && !allow_inputs)
                throw ParseError("output expressions may read state nodes only, not '" + v.name + "'", d.line,
                                 v.column);
        }
    };

    std::vector<Expr> update_exprs, output_exprs;
    for (const auto& s : states) {
        auto it = updates.find(s);
        if (it == updates.end()) throw ParseError("missing update for state '" + s + "'", section_line("states"), 1);
        check_vars(it->second, true);
        update_exprs.push_back(it->second.expr);
    }
    for (const auto& [name, d] : updates)
        if (!declared.count(name) || declared[name] != NodeClass::state)
            throw ParseError("'" + name + "' is not a declared state node", d.line, d.column);
    for (const auto& y : output_names) {
        auto it = outputs.find(y);
        if (it == outputs.end())
            throw ParseError("missing definition for output '" + y + "'", section_line("outputs"), 1);
        check_vars(it->second, false);
        output_exprs.push_back(it->second.expr);
    }
    for (const auto& [name, d] : outputs)
        if (!declared.count(name) || declared[name] != NodeClass::output)
            throw ParseError("'" + name + "' is not a declared output node", d.line, d.column);

    std::vector<std::string> observe;
    for (const auto& n : section("observe")) {
        auto it = declared.find(n.text);
        if (it == declared.end() || it->second != NodeClass::state)
            throw ParseError("cannot observe '" + n.text + "': not a state node", n.line, n.column);
        observe.push_back(n.text);
    }

    try {
        Bcn::Options bcn_options;
        bcn_options.allow_no_outputs = options.allow_no_outputs || has_observe;
        Bcn bcn(std::move(states), std::move(inputs), std::move(output_names), std::move(update_exprs),
                std::move(output_exprs), bcn_options);
        if (observe.empty()) return bcn;
        return bcn.with_observations(observe);
    } catch (const ModelError& e) {
        throw ParseError(e.what(), section_line("states"), 1);
    }
}

Aggregation parse_aggregation(std::string_view text, const Bcn& bcn) {
    std::vector<Block> blocks;
    std::map<std::string, std::size_t> seen_block;
    std::map<std::string, std::string> owner;
    std::size_t last_line = 1;

    for (const auto& [number, s] : split_lines(text)) {
        last_line = number;
        if (blank(s)) continue;
        std::size_t i = skip_space(s, 0);
        if (s.substr(i, 5) != "block" || (i + 5 < s.size() && ident_char(s[i + 5])))
            throw ParseError("expected 'block NAME: nodes'", number, i + 1);
        i = skip_space(s, i + 5);
        if (i >= s.size() || !ident_start(s[i])) throw ParseError("expected a block name", number, i + 1);
        const std::size_t start = i;
        while (i < s.size() && ident_char(s[i])) ++i;
        std::string name(s.substr(start, i - start));
        i = skip_space(s, i);
        if (i >= s.size() || s[i] != ':') throw ParseError("expected ':' after block name", number, i + 1);
        if (!seen_block.emplace(name, number).second)
            throw ParseError("block '" + name + "' defined twice", number, start + 1);

        Block block{name, {}};
        for (const auto& n : parse_name_list(s, i + 1, number)) {
            if (!bcn.classify(n.text)) throw ParseError("unknown node '" + n.text + "'", number, n.column);
            auto [it, fresh] = owner.emplace(n.text, name);
            if (!fresh)
                throw ParseError("node '" + n.text + "' is in blocks '" + it->second + "' and '" + name + "'",
                                 number, n.column);
            block.nodes.push_back(n.text);
        }
        if (block.nodes.empty()) throw ParseError("block '" + name + "' is empty", number, start + 1);
        blocks.push_back(std::move(block));
    }

    try {
        return Aggregation(bcn, std::move(blocks));
    } catch (const AggregationError& e) {
        throw ParseError(e.what(), last_line, 1);
    }
}

std::string serialize_bcn(const Bcn& bcn) {
    const std::size_t generated = bcn.observed_states().size();
    const std::size_t explicit_outputs = bcn.num_outputs() - generated;

    auto join = [](auto first, auto last) {
        std::string out;
        for (auto it = first; it != last; ++it) {
            if (!out.empty()) out += ' ';
            out += *it;
        }
        return out;
    };

    std::string out;
    out += "inputs: " + join(bcn.inputs().begin(), bcn.inputs().end()) + "\n";
    out += "states: " + join(bcn.states().begin(), bcn.states().end()) + "\n";
    if (explicit_outputs > 0)
        out += "outputs: " + join(bcn.outputs().begin(), bcn.outputs().begin() + explicit_outputs) + "\n";
    if (generated > 0)
        out += "observe: " + join(bcn.observed_states().begin(), bcn.observed_states().end()) + "\n";
    out += "\n";
    for (std::size_t i = 0; i < bcn.num_states(); ++i)
        out += bcn.states()[i] + "' = " + to_string(bcn.updates()[i]) + "\n";
    for (std::size_t k = 0; k < explicit_outputs; ++k)
        out += bcn.outputs()[k] + " = " + to_string(bcn.output_exprs()[k]) + "\n";
    return out;
}

std::string serialize_aggregation(const Aggregation& agg) {
    std::string out;
    for (const auto& b : agg.blocks()) {
        out += "block " + b.name + ":";
        for (const auto& n : b.nodes) {
            out += ' ';
            out += n;
        }
        out += '\n';
    }
    return out;
}

}  // namespace bcnobs
