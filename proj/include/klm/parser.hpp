#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "klm/formula.hpp"

namespace klm {

// Concrete syntax:
//   F ::= F |~ F | F -> F | F '|' F | F & F | ~F | []~F | [L]F | ident | (F)
// with precedence ~ > & > | > -> > |~ ; & and | associate left, -> right,
// |~ does not associate. []~ and [L] are calculus-internal and only accepted
// so that printed nodes read back.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& detail() const { return detail_; }

private:
    std::string detail_;
    int line_;
    int column_;
};

Formula parse_formula(std::string_view text);

struct KnowledgeBase {
    std::vector<Formula> assertions;
    std::vector<int> lines;  // 1-based source line of each assertion
};

class KbError : public std::runtime_error {
public:
    explicit KbError(std::vector<ParseError> errors);
    const std::vector<ParseError>& errors() const { return errors_; }

private:
    std::vector<ParseError> errors_;
};

// One assertion per line; '#' starts a comment. Every malformed line is
// reported, not just the first.
KnowledgeBase parse_kb(std::string_view text);

}  // namespace klm
