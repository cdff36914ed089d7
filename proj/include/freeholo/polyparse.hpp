#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "freeholo/domain.hpp"
#include "freeholo/errors.hpp"
#include "freeholo/freepoly.hpp"

namespace freeholo {

/// Syntax error with a 1-based line/column and 0-based byte offset.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset, std::size_t line, std::size_t column);
    const std::string& message() const noexcept { return message_; }
    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string message_;
    std::size_t offset_;
    std::size_t line_;
    std::size_t column_;
};

struct ParseOptions {
    /// Upper bound on the number of terms of any intermediate polynomial.
    std::size_t term_budget = 1'000'000;
    /// Upper bound on word length, which also caps exponents.
    std::size_t max_degree = 4096;
};

/// Parses the expression grammar
///
///     expr   := term (('+' | '-') term)*
///     term   := ['+' | '-'] factor ('*'? factor)*
///     factor := primary ('^' natural)*
///     primary:= number ['i'] | 'i' | 'x' natural | '(' expr ')'
///
/// Juxtaposition is the non-commutative product; variables are x1..xd.
FreePoly parse_poly(std::string_view text, int d, const ParseOptions& opts = {});

/// Largest variable index mentioned in text (0 if none); does not validate the rest.
int scan_max_variable(std::string_view text);

/// Canonical form: graded-lex terms, "0" for the zero polynomial. Coefficients
/// are printed in shortest round-trip form, so parse_poly(print_poly(p)) == p.
std::string print_poly(const FreePoly& p);

/// {"I":..,"J":..,"entries":[[string,...],...]} with an optional "d".
/// Without "d", the largest variable index found in the entries is used.
PolyMatrix parse_delta(const nlohmann::json& j);

}  // namespace freeholo
