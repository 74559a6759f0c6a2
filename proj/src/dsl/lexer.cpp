#include "mqcic/dsl/lexer.hpp"

#include <cctype>

namespace mqcic::dsl {

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool unit_char(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '%';
}

std::string ascii_upper(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.pos = i;
        if (c == '(') {
            t.kind = TokenKind::LParen;
            ++i;
        } else if (c == ')') {
            t.kind = TokenKind::RParen;
            ++i;
        } else if (c == '<') {
            if (i + 1 < n && src[i + 1] == '=') { t.kind = TokenKind::Le; i += 2; }
            else { t.kind = TokenKind::Lt; ++i; }
        } else if (c == '>') {
            if (i + 1 < n && src[i + 1] == '=') { t.kind = TokenKind::Ge; i += 2; }
            else { t.kind = TokenKind::Gt; ++i; }
        } else if (c == '=') {
            if (i + 1 < n && src[i + 1] == '=') { t.kind = TokenKind::Eq; i += 2; }
            else throw LexError(i, "lone '=' (use '==')");
        } else if (c == '!') {
            if (i + 1 < n && src[i + 1] == '=') { t.kind = TokenKind::Ne; i += 2; }
            else throw LexError(i, "lone '!' (use '!=')");
        } else if (c == '"') {
            ++i;
            std::string s;
            bool closed = false;
            while (i < n) {
                if (src[i] == '\\' && i + 1 < n) {
                    const char e = src[i + 1];
                    if (e == '"' || e == '\\') { s.push_back(e); i += 2; continue; }
                    throw LexError(i, "unsupported escape in string");
                }
                if (src[i] == '"') { closed = true; ++i; break; }
                s.push_back(src[i]);
                ++i;
            }
            if (!closed) throw LexError(t.pos, "unterminated string");
            t.kind = TokenKind::String;
            t.text = s;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < n && src[j] == '.') {
                ++j;
                if (j >= n || !std::isdigit(static_cast<unsigned char>(src[j])))
                    throw LexError(j, "digit after decimal point");
                while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            t.kind = TokenKind::Number;
            t.number = std::stod(src.substr(i, j - i));
            std::size_t u = j;
            while (u < n && unit_char(src[u])) ++u;
            t.unit = src.substr(j, u - j);
            i = u;
        } else if (ident_start(c)) {
            std::size_t j = i;
            while (j < n && ident_char(src[j])) ++j;
            const std::string word = src.substr(i, j - i);
            const std::string up = ascii_upper(word);
            if (up == "AND") t.kind = TokenKind::And;
            else if (up == "OR") t.kind = TokenKind::Or;
            else if (up == "NOT") t.kind = TokenKind::Not;
            else if (up == "TRUE") t.kind = TokenKind::True;
            else if (up == "FALSE") t.kind = TokenKind::False;
            else { t.kind = TokenKind::Identifier; t.text = word; }
            i = j;
        } else {
            throw LexError(i, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = TokenKind::End;
    end.pos = n;
    out.push_back(end);
    return out;
}

}  // namespace mqcic::dsl
