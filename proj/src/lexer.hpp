#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "tycus/rdf.hpp"

namespace tycus::detail {

struct Token {
    enum Kind { Word, Number, String, BlankNode, Punct, End } kind = End;
    std::string text;  // for String: the unquoted lexical form
    int line = 0;
    int col = 0;
};

// Tokenizer shared by the .pcq, .shc and .lam parsers. `∧` is normalized to `^`.
class Lexer {
public:
    explicit Lexer(const std::string& text) {
        std::size_t i = 0;
        int line = 1, col = 1;
        auto advance = [&](std::size_t n) {
            for (std::size_t k = 0; k < n; ++k) {
                if (text[i + k] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
            i += n;
        };
        while (i < text.size()) {
            char c = text[i];
            if (c == '#') {
                while (i < text.size() && text[i] != '\n') advance(1);
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
                continue;
            }
            Token tok;
            tok.line = line;
            tok.col = col;
            if (c == '"') {
                std::size_t j = i + 1;
                while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
                if (j >= text.size() || text[j] != '"')
                    throw ParseError("unterminated string literal", line);
                tok.kind = Token::String;
                tok.text = text.substr(i + 1, j - i - 1);
                advance(j - i + 1);
            } else if (text.compare(i, 2, "_:") == 0) {
                std::size_t j = i + 2;
                while (j < text.size() && is_word_char(text[j])) ++j;
                if (j == i + 2) throw ParseError("empty blank node id", line);
                tok.kind = Token::BlankNode;
                tok.text = text.substr(i + 2, j - i - 2);
                advance(j - i);
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                if (j + 1 < text.size() && text[j] == '.' &&
                    std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                    ++j;
                    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                }
                tok.kind = Token::Number;
                tok.text = text.substr(i, j - i);
                advance(j - i);
            } else if (is_word_start(c)) {
                std::size_t j = i;
                while (j < text.size() && is_word_char(text[j])) ++j;
                tok.kind = Token::Word;
                tok.text = text.substr(i, j - i);
                advance(j - i);
            } else if (text.compare(i, 3, "\xE2\x88\xA7") == 0) {  // ∧
                tok.kind = Token::Punct;
                tok.text = "^";
                advance(3);
            } else {
                tok.kind = Token::Punct;
                static const char* two[] = {"<-", "->", ">=", "<="};
                bool matched = false;
                for (const char* p : two) {
                    if (text.compare(i, 2, p) == 0) {
                        tok.text = p;
                        advance(2);
                        matched = true;
                        break;
                    }
                }
                if (!matched) {
                    tok.text = std::string(1, c);
                    advance(1);
                }
            }
            tokens_.push_back(std::move(tok));
        }
        Token end;
        end.kind = Token::End;
        end.line = line;
        end.col = col;
        tokens_.push_back(end);
    }

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t idx = pos_ + ahead;
        return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
    }

    Token next() {
        const Token& t = peek();
        if (t.kind != Token::End) ++pos_;
        return t;
    }

    bool at_end() const { return peek().kind == Token::End; }

    bool accept_punct(const std::string& p) {
        if (peek().kind == Token::Punct && peek().text == p) {
            next();
            return true;
        }
        return false;
    }

    bool accept_word(const std::string& w) {
        if (peek().kind == Token::Word && peek().text == w) {
            next();
            return true;
        }
        return false;
    }

    void expect_punct(const std::string& p) {
        if (!accept_punct(p))
            throw ParseError("expected '" + p + "', got '" + describe(peek()) + "'", peek().line);
    }

    std::string expect_word() {
        if (peek().kind != Token::Word)
            throw ParseError("expected identifier, got '" + describe(peek()) + "'", peek().line);
        return next().text;
    }

    static std::string describe(const Token& t) {
        return t.kind == Token::End ? "<end of input>" : t.text;
    }

    static bool is_word_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '?';
    }
    static bool is_word_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '?';
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace tycus::detail
