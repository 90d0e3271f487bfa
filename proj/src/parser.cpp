#include "klm/parser.hpp"

#include <cctype>

namespace klm {

ParseError::ParseError(std::string msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      detail_(std::move(msg)),
      line_(line),
      column_(column) {}

namespace {

std::string summarize(const std::vector<ParseError>& errs) {
    std::string s;
    for (const auto& e : errs) {
        if (!s.empty()) s += '\n';
        s += e.what();
    }
    return s;
}

}  // namespace

KbError::KbError(std::vector<ParseError> errors) : std::runtime_error(summarize(errors)), errors_(std::move(errors)) {}

namespace {

enum class Tok { Ident, LParen, RParen, Not, And, Or, Imp, Cond, Box, L, End };

struct Token {
    Tok kind;
    std::string text;
    int column;  // 1-based
};

class Parser {
public:
    Parser(std::string_view src, int line) : src_(src), line_(line) { advance(); }

    Formula parse_all() {
        Formula f = parse_cond();
        if (cur_.kind == Tok::Cond) fail("conditional inside conditional", cur_.column);
        if (cur_.kind != Tok::End) fail("unexpected '" + cur_.text + "'", cur_.column);
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg, int column) { throw ParseError(msg, line_, column); }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        int col = static_cast<int>(pos_) + 1;
        if (pos_ >= src_.size()) {
            cur_ = {Tok::End, "end of input", col};
            return;
        }
        auto rest = src_.substr(pos_);
        auto take = [&](Tok k, std::size_t n) {
            cur_ = {k, std::string(rest.substr(0, n)), col};
            pos_ += n;
        };
        unsigned char c = static_cast<unsigned char>(rest[0]);
        if (std::isalpha(c) || c == '_') {
            std::size_t n = 1;
            while (n < rest.size() && (std::isalnum(static_cast<unsigned char>(rest[n])) || rest[n] == '_' || rest[n] == '\''))
                ++n;
            take(Tok::Ident, n);
        } else if (rest.starts_with("|~")) {
            take(Tok::Cond, 2);
        } else if (rest.starts_with("->")) {
            take(Tok::Imp, 2);
        } else if (rest.starts_with("[]~")) {
            take(Tok::Box, 3);
        } else if (rest.starts_with("[L]")) {
            take(Tok::L, 3);
        } else if (c == '|') {
            take(Tok::Or, 1);
        } else if (c == '&') {
            take(Tok::And, 1);
        } else if (c == '~') {
            take(Tok::Not, 1);
        } else if (c == '(') {
            take(Tok::LParen, 1);
        } else if (c == ')') {
            take(Tok::RParen, 1);
        } else {
            fail(std::string("unexpected character '") + rest[0] + "'", col);
        }
    }

    Formula parse_cond() {
        int lcol = cur_.column;
        Formula l = parse_imp();
        if (cur_.kind != Tok::Cond) return l;
        int opcol = cur_.column;
        advance();
        int rcol = cur_.column;
        Formula r = parse_imp();
        if (l.has_cond()) fail("conditional inside conditional", lcol);
        if (r.has_cond()) fail("conditional inside conditional", rcol);
        if (l.has_modal() || r.has_modal()) fail("modal operator inside conditional", opcol);
        return Formula::cond(l, r);
    }

    Formula parse_imp() {
        Formula l = parse_or();
        if (cur_.kind != Tok::Imp) return l;
        advance();
        return Formula::implies(l, parse_imp());
    }

    Formula parse_or() {
        Formula l = parse_and();
        while (cur_.kind == Tok::Or) {
            advance();
            l = Formula::disj(l, parse_and());
        }
        return l;
    }

    Formula parse_and() {
        Formula l = parse_unary();
        while (cur_.kind == Tok::And) {
            advance();
            l = Formula::conj(l, parse_unary());
        }
        return l;
    }

    Formula parse_unary() {
        switch (cur_.kind) {
        case Tok::Not:
            advance();
            return Formula::neg(parse_unary());
        case Tok::Box: {
            int col = cur_.column;
            advance();
            Formula body = parse_unary();
            if (body.has_cond()) fail("conditional inside modal operator", col);
            return Formula::box_neg(body);
        }
        case Tok::L: {
            int col = cur_.column;
            advance();
            Formula body = parse_unary();
            if (!body.is_propositional()) fail("non-propositional operand of [L]", col);
            return Formula::lmod(body);
        }
        case Tok::Ident: {
            Formula a = Formula::atom(cur_.text);
            advance();
            return a;
        }
        case Tok::LParen: {
            int col = cur_.column;
            advance();
            Formula f = parse_cond();
            if (cur_.kind == Tok::Cond) fail("conditional inside conditional", cur_.column);
            if (cur_.kind != Tok::RParen) fail("unclosed '(' opened at column " + std::to_string(col), cur_.column);
            advance();
            return f;
        }
        case Tok::End:
            fail("unexpected end of input", cur_.column);
        default:
            fail("unexpected '" + cur_.text + "'", cur_.column);
        }
    }

    std::string_view src_;
    int line_;
    std::size_t pos_ = 0;
    Token cur_{};
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text, 1).parse_all(); }

KnowledgeBase parse_kb(std::string_view text) {
    KnowledgeBase kb;
    std::vector<ParseError> errors;
    int lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (!blank) {
            try {
                Formula f = Parser(line, lineno).parse_all();
                if (f.has_modal()) throw ParseError("modal operator not allowed in a knowledge base", lineno, 1);
                kb.assertions.push_back(f);
                kb.lines.push_back(lineno);
            } catch (const ParseError& e) {
                errors.push_back(e);
            }
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    if (!errors.empty()) throw KbError(std::move(errors));
    return kb;
}

}  // namespace klm
