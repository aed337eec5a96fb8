#include "qmt/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <stdexcept>

namespace qmt {

namespace {

using Fn = std::function<double(double)>;

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            throw std::invalid_argument("objective: expected '" + std::string(1, c) +
                                        "' at position " + std::to_string(pos));
        }
    }

    bool accept_word(const char* word) {
        skip_ws();
        std::size_t k = 0;
        while (word[k] != '\0' && pos + k < text.size() && text[pos + k] == word[k]) ++k;
        if (word[k] != '\0') return false;
        // must not run into an identifier tail
        if (pos + k < text.size() &&
            std::isalnum(static_cast<unsigned char>(text[pos + k]))) {
            return false;
        }
        pos += k;
        return true;
    }

    Fn parse_expr() {
        Fn lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                Fn rhs = parse_term();
                lhs = [lhs, rhs](double x) { return lhs(x) + rhs(x); };
            } else if (accept('-')) {
                Fn rhs = parse_term();
                lhs = [lhs, rhs](double x) { return lhs(x) - rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    Fn parse_term() {
        Fn lhs = parse_factor();
        while (accept('*')) {
            Fn rhs = parse_factor();
            lhs = [lhs, rhs](double x) { return lhs(x) * rhs(x); };
        }
        return lhs;
    }

    Fn parse_factor() {
        skip_ws();
        if (accept('-')) {
            Fn inner = parse_factor();
            return [inner](double x) { return -inner(x); };
        }
        if (accept('(')) {
            Fn inner = parse_expr();
            expect(')');
            return inner;
        }
        if (accept_word("abs")) {
            expect('(');
            Fn inner = parse_expr();
            expect(')');
            return [inner](double x) { return std::fabs(inner(x)); };
        }
        if (accept_word("min")) {
            expect('(');
            Fn a = parse_expr();
            expect(',');
            Fn b = parse_expr();
            expect(')');
            return [a, b](double x) { return std::min(a(x), b(x)); };
        }
        if (accept_word("max")) {
            expect('(');
            Fn a = parse_expr();
            expect(',');
            Fn b = parse_expr();
            expect(')');
            return [a, b](double x) { return std::max(a(x), b(x)); };
        }
        if (accept_word("x")) {
            return [](double x) { return x; };
        }
        skip_ws();
        if (pos < text.size() &&
            (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
            char* end = nullptr;
            const double v = std::strtod(text.c_str() + pos, &end);
            pos = static_cast<std::size_t>(end - text.c_str());
            return [v](double) { return v; };
        }
        throw std::invalid_argument("objective: unexpected input at position " +
                                    std::to_string(pos));
    }
};

}  // namespace

std::function<double(double)> compile_objective(const std::string& text) {
    Parser parser(text);
    Fn fn = parser.parse_expr();
    parser.skip_ws();
    if (parser.pos != text.size()) {
        throw std::invalid_argument("objective: trailing input at position " +
                                    std::to_string(parser.pos));
    }
    return fn;
}

}  // namespace qmt
