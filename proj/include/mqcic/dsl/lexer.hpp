#pragma once

#include <string>
#include <vector>

#include "mqcic/dsl/errors.hpp"

namespace mqcic::dsl {

enum class TokenKind {
    Identifier,  // fact id
    Number,      // decimal with optional glued unit: 20%  3.5mg
    String,      // double-quoted UTF-8
    True,
    False,
    And,
    Or,
    Not,
    Lt, Le, Gt, Ge, Eq, Ne,
    LParen,
    RParen,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;   // identifier name or string contents
    double number = 0;  // Number
    std::string unit;   // Number
    std::size_t pos = 0;
};

/// Tokenize one rule. Keywords AND/OR/NOT/TRUE/FALSE are case-insensitive;
/// identifiers are [A-Za-z_][A-Za-z0-9_]*; a unit suffix is glued directly
/// to its number (letters and '%').
std::vector<Token> lex(const std::string& source);

}  // namespace mqcic::dsl
