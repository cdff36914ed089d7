#include "freeholo/polyparse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <system_error>

namespace freeholo {

ParseError::ParseError(const std::string& message, std::size_t offset, std::size_t line, std::size_t column)
    : Error(message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      message_(message),
      offset_(offset),
      line_(line),
      column_(column) {}

namespace {

constexpr int kMaxNesting = 256;

class Parser {
public:
    Parser(std::string_view text, int d, const ParseOptions& opts) : text_(text), d_(d), opts_(opts) {}

    FreePoly run() {
        skip_space();
        if (at_end()) fail("empty expression");
        FreePoly p = expr(0);
        skip_space();
        if (!at_end()) {
            if (peek() == ')') fail("unbalanced ')'");
            fail(std::string("unexpected character '") + printable(peek()) + "'");
        }
        for (const auto& [w, c] : p.terms()) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) fail_at(0, "coefficient overflow");
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }

    [[noreturn]] void fail_at(std::size_t offset, const std::string& msg) const {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(msg, offset, line, column);
    }

    static std::string printable(char c) {
        const auto u = static_cast<unsigned char>(c);
        if (u >= 0x20 && u < 0x7f) return std::string(1, c);
        static const char* hex = "0123456789abcdef";
        return std::string("\\x") + hex[u >> 4] + hex[u & 0xf];
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    void skip_space() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) ++pos_;
    }

    bool starts_factor() const {
        const char c = peek();
        return is_digit(c) || c == '.' || c == 'i' || c == 'x' || c == '(';
    }

    FreePoly expr(int depth) {
        FreePoly acc = term(depth);
        for (;;) {
            skip_space();
            const char c = peek();
            if (c != '+' && c != '-') return acc;
            const std::size_t op = pos_++;
            FreePoly rhs = term(depth);
            check_sum(acc, rhs, op);
            if (c == '+') {
                acc += rhs;
            } else {
                acc -= rhs;
            }
        }
    }

    FreePoly term(int depth) {
        skip_space();
        bool negate = false;
        if (peek() == '+' || peek() == '-') {
            negate = peek() == '-';
            ++pos_;
            skip_space();
        }
        if (!starts_factor()) {
            if (at_end()) fail("expected a factor, found end of input");
            fail(std::string("expected a factor, found '") + printable(peek()) + "'");
        }
        FreePoly acc = factor(depth);
        for (;;) {
            skip_space();
            const std::size_t op = pos_;
            if (peek() == '*') {
                ++pos_;
                skip_space();
                if (!starts_factor()) fail("expected a factor after '*'");
            } else if (!starts_factor()) {
                break;
            }
            FreePoly rhs = factor(depth);
            acc = checked_product(acc, rhs, op);
        }
        if (negate) acc *= Complex(-1.0);
        return acc;
    }

    FreePoly factor(int depth) {
        FreePoly base = primary(depth);
        for (;;) {
            skip_space();
            if (peek() != '^') return base;
            const std::size_t op = pos_++;
            skip_space();
            if (!is_digit(peek())) fail("expected a natural exponent after '^'");
            const std::size_t start = pos_;
            while (is_digit(peek())) ++pos_;
            std::size_t e = 0;
            const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, e);
            (void)ptr;
            if (ec != std::errc() || e > opts_.max_degree) fail_at(start, "exponent too large");
            FreePoly result = FreePoly::constant(1.0, d_);
            for (std::size_t k = 0; k < e; ++k) result = checked_product(result, base, op);
            base = std::move(result);
        }
    }

    FreePoly primary(int depth) {
        skip_space();
        const char c = peek();
        if (c == '(') {
            if (depth >= kMaxNesting) fail("nesting too deep");
            const std::size_t open = pos_++;
            FreePoly inner = expr(depth + 1);
            skip_space();
            if (peek() != ')') fail_at(open, "unbalanced '('");
            ++pos_;
            return inner;
        }
        if (c == 'x') {
            const std::size_t start = pos_++;
            if (!is_digit(peek())) fail("expected a variable index after 'x'");
            const std::size_t digits = pos_;
            while (is_digit(peek())) ++pos_;
            int index = 0;
            const auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, index);
            (void)ptr;
            if (ec != std::errc() || index < 1 || index > d_) {
                fail_at(start, "unknown variable '" + std::string(text_.substr(start, pos_ - start)) +
                                   "' (variables are x1..x" + std::to_string(d_) + ")");
            }
            return FreePoly::variable(index, d_);
        }
        if (c == 'i') {
            ++pos_;
            return FreePoly::constant(Complex(0.0, 1.0), d_);
        }
        if (is_digit(c) || c == '.') return number();
        fail("expected a factor");
    }

    FreePoly number() {
        const std::size_t start = pos_;
        while (is_digit(peek())) ++pos_;
        if (peek() == '.') {
            ++pos_;
            while (is_digit(peek())) ++pos_;
        }
        if (pos_ - start == 1 && text_[start] == '.') fail_at(start, "malformed number literal");
        if (peek() == 'e' || peek() == 'E') {
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (!is_digit(peek())) fail_at(start, "malformed exponent in number literal");
            while (is_digit(peek())) ++pos_;
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec == std::errc::result_out_of_range) {
            // Underflow rounds to zero; overflow is an error.
            bool tiny = false;
            for (std::size_t i = start; i < pos_; ++i) {
                if (text_[i] == 'e' || text_[i] == 'E') tiny = text_[i + 1] == '-';
            }
            if (!tiny) fail_at(start, "number literal out of range");
            value = 0.0;
        } else if (ec != std::errc() || ptr != text_.data() + pos_) {
            fail_at(start, "malformed number literal");
        }
        if (peek() == '.' || is_digit(peek())) fail_at(pos_, "malformed number literal");
        if (peek() == 'i') {
            ++pos_;
            return FreePoly::constant(Complex(0.0, value), d_);
        }
        return FreePoly::constant(Complex(value, 0.0), d_);
    }

    FreePoly checked_product(const FreePoly& p, const FreePoly& q, std::size_t op) {
        if (p.term_count() * q.term_count() > opts_.term_budget) fail_at(op, "expression exceeds term budget");
        if (p.degree() + q.degree() > static_cast<int>(opts_.max_degree)) fail_at(op, "degree limit exceeded");
        return p * q;
    }

    void check_sum(const FreePoly& p, const FreePoly& q, std::size_t op) {
        if (p.term_count() + q.term_count() > opts_.term_budget) fail_at(op, "expression exceeds term budget");
    }

    std::string_view text_;
    int d_;
    ParseOptions opts_;
    std::size_t pos_ = 0;
};

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string word_text(const Word& w) {
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k > 0) out += '*';
        out += 'x';
        out += std::to_string(w[k]);
    }
    return out;
}

}  // namespace

FreePoly parse_poly(std::string_view text, int d, const ParseOptions& opts) {
    if (d < 1) throw DimensionError("parse_poly: d must be at least 1");
    return Parser(text, d, opts).run();
}

int scan_max_variable(std::string_view text) {
    int best = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != 'x') continue;
        std::size_t j = i + 1;
        int v = 0;
        while (j < text.size() && text[j] >= '0' && text[j] <= '9' && v < 1'000'000) {
            v = v * 10 + (text[j] - '0');
            ++j;
        }
        best = std::max(best, v);
    }
    return best;
}

std::string print_poly(const FreePoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : p.terms()) {
        const bool real_only = c.imag() == 0.0;
        const bool imag_only = !real_only && c.real() == 0.0;
        bool negative = false;
        std::string coeff;
        if (real_only) {
            negative = std::signbit(c.real());
            coeff = format_double(std::abs(c.real()));
            if (coeff == "1" && !w.empty()) coeff.clear();
        } else if (imag_only) {
            negative = std::signbit(c.imag());
            coeff = format_double(std::abs(c.imag())) + "i";
        } else {
            coeff = "(" + format_double(c.real()) + (std::signbit(c.imag()) ? "-" : "+") +
                    format_double(std::abs(c.imag())) + "i)";
        }
        if (first) {
            if (negative) out += '-';
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        out += coeff;
        if (!w.empty()) {
            if (!coeff.empty()) out += '*';
            out += word_text(w);
        }
    }
    return out;
}

PolyMatrix parse_delta(const nlohmann::json& j) {
    if (!j.is_object()) throw FixtureError("delta: expected a JSON object");
    for (const char* key : {"I", "J", "entries"}) {
        if (!j.contains(key)) throw FixtureError(std::string("delta: missing key '") + key + "'");
    }
    if (!j["I"].is_number_unsigned() || !j["J"].is_number_unsigned()) {
        throw FixtureError("delta: I and J must be positive integers");
    }
    const auto rows = j["I"].get<std::size_t>();
    const auto cols = j["J"].get<std::size_t>();
    const auto& grid = j["entries"];
    if (rows == 0 || cols == 0) throw FixtureError("delta: I and J must be positive integers");
    if (!grid.is_array() || grid.size() != rows) throw FixtureError("delta: entries must have I rows");

    int d = 0;
    if (j.contains("d")) {
        if (!j["d"].is_number_unsigned() || j["d"].get<int>() < 1) throw FixtureError("delta: d must be >= 1");
        d = j["d"].get<int>();
    } else {
        for (const auto& row : grid) {
            if (!row.is_array()) continue;
            for (const auto& e : row) {
                if (e.is_string()) d = std::max(d, scan_max_variable(e.get<std::string>()));
            }
        }
        d = std::max(d, 1);
    }

    std::vector<FreePoly> entries;
    entries.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& row = grid[i];
        if (!row.is_array() || row.size() != cols) {
            throw FixtureError("delta: row " + std::to_string(i) + " must have J entries");
        }
        for (std::size_t k = 0; k < cols; ++k) {
            if (!row[k].is_string()) throw FixtureError("delta: entries must be strings");
            try {
                entries.push_back(parse_poly(row[k].get<std::string>(), d));
            } catch (const ParseError& e) {
                throw ParseError("entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + "): " +
                                     e.message(),
                                 e.offset(), e.line(), e.column());
            }
        }
    }
    return PolyMatrix(rows, cols, d, std::move(entries));
}

}  // namespace freeholo
