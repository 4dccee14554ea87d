#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bonedx {

struct SourceSpan {
    std::size_t start = 0, end = 0; // byte offsets, start <= end <= source length
};

struct ParseError {
    std::string file;
    int line = 1;   // 1-based
    int column = 1; // 1-based, in code points
    std::string expected;
    std::string found;

    std::string describe() const {
        std::string where = (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) + ":" +
                            std::to_string(column);
        return where + ": error: expected " + expected + ", found " + found;
    }

    friend bool operator==(const ParseError&, const ParseError&) = default;
};

// Result of a parse: either a value or at least one error.
template <typename T>
struct Parsed {
    std::optional<T> value;
    std::vector<ParseError> errors;

    bool ok() const { return value.has_value() && errors.empty(); }
    explicit operator bool() const { return ok(); }
    const T& operator*() const { return *value; }
    const T* operator->() const { return &*value; }
};

enum class TokenKind {
    Ident, Variable, String, Integer,
    LParen, RParen, Comma, Caret, Colon, Arrow, Equals, GreaterEq, LessEq, Greater, Less,
    End, Error,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text; // identifier/variable name, decoded string, integer digits, or offending lexeme
    SourceSpan span;
    int line = 1, column = 1;
};

inline std::string describeToken(const Token& t) {
    switch (t.kind) {
        case TokenKind::End: return "end of input";
        case TokenKind::String: return "\"" + t.text + "\"";
        case TokenKind::Variable: return "'?" + t.text + "'";
        default: return "'" + t.text + "'";
    }
}

// Tokenizer shared by the ontology and rule languages. `#` starts a line
// comment. Malformed input becomes an Error token and lexing continues.
class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> tokenize() {
        std::vector<Token> out;
        for (;;) {
            Token t = next();
            out.push_back(t);
            if (t.kind == TokenKind::End) break;
        }
        return out;
    }

private:
    static bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

    void advance() {
        if (pos_ >= src_.size()) return;
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++col_;
        }
    }

    void skipTrivia() {
        for (;;) {
            char c = peek();
            if (c == '#') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (c != '\0' && std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    Token make(TokenKind k, std::size_t start, int line, int col, std::string text) const {
        Token t;
        t.kind = k;
        t.text = std::move(text);
        t.span = {start, pos_};
        t.line = line;
        t.column = col;
        return t;
    }

    Token next() {
        skipTrivia();
        const std::size_t start = pos_;
        const int line = line_, col = col_;
        if (pos_ >= src_.size()) return make(TokenKind::End, start, line, col, "");
        char c = peek();

        if (identStart(c)) {
            while (identChar(peek())) advance();
            return make(TokenKind::Ident, start, line, col, std::string(src_.substr(start, pos_ - start)));
        }
        if (c == '?') {
            advance();
            if (!identStart(peek())) return make(TokenKind::Error, start, line, col, "?");
            const std::size_t nameStart = pos_;
            while (identChar(peek())) advance();
            return make(TokenKind::Variable, start, line, col, std::string(src_.substr(nameStart, pos_ - nameStart)));
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
            return make(TokenKind::Integer, start, line, col, std::string(src_.substr(start, pos_ - start)));
        }
        if (c == '"') {
            advance();
            std::string value;
            for (;;) {
                char d = peek();
                if (pos_ >= src_.size() || d == '\n')
                    return make(TokenKind::Error, start, line, col, std::string(src_.substr(start, pos_ - start)));
                advance();
                if (d == '"') break;
                if (d == '\\') {
                    char e = peek();
                    advance();
                    switch (e) {
                        case 'n': value += '\n'; break;
                        case 't': value += '\t'; break;
                        default: value += e; break;
                    }
                    continue;
                }
                value += d;
            }
            return make(TokenKind::String, start, line, col, std::move(value));
        }

        auto single = [&](TokenKind k) {
            advance();
            return make(k, start, line, col, std::string(1, c));
        };
        auto twoChar = [&](TokenKind k) {
            advance();
            advance();
            return make(k, start, line, col, std::string(src_.substr(start, 2)));
        };
        switch (c) {
            case '(': return single(TokenKind::LParen);
            case ')': return single(TokenKind::RParen);
            case ',': return single(TokenKind::Comma);
            case '^': return single(TokenKind::Caret);
            case ':': return single(TokenKind::Colon);
            case '=': return single(TokenKind::Equals);
            case '-':
                if (peek(1) == '>') return twoChar(TokenKind::Arrow);
                break;
            case '>':
                if (peek(1) == '=') return twoChar(TokenKind::GreaterEq);
                return single(TokenKind::Greater);
            case '<':
                if (peek(1) == '=') return twoChar(TokenKind::LessEq);
                return single(TokenKind::Less);
            default: break;
        }
        // One code point of garbage.
        advance();
        while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) advance();
        return make(TokenKind::Error, start, line, col, std::string(src_.substr(start, pos_ - start)));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

} // namespace bonedx
