#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bcnobs/aggregation.hpp"
#include "bcnobs/bcn.hpp"
#include "bcnobs/expr.hpp"

namespace bcnobs {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          message_(message), line_(line), column_(column) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string message_;
    std::size_t line_, column_;
};

struct ParseOptions {
    /// Accept a model without outputs (observations are added later).
    bool allow_no_outputs = false;
};

/// Parses a single expression (used by tests and tooling).
Expr parse_expr(std::string_view text);

/// .bcn format; see docs/grammar.ebnf.
Bcn parse_bcn(std::string_view text, ParseOptions options = {});

/// .agg format: one `block NAME: node node ...` line per block.
Aggregation parse_aggregation(std::string_view text, const Bcn& bcn);

std::string serialize_bcn(const Bcn& bcn);
std::string serialize_aggregation(const Aggregation& agg);

}  // namespace bcnobs
