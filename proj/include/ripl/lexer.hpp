#ifndef RIPL_LEXER_HPP
#define RIPL_LEXER_HPP

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "ripl/diag.hpp"

namespace ripl {

enum class Tok {
    Ident, Int,
    KwIn, KwOut, KwLet, KwImage, KwIf, KwThen, KwElse, KwAppend,
    Colon, Semi, Comma, LParen, RParen, LBracket, RBracket,
    Lt, Le, Gt, Ge, EqEq, Ne, Assign,
    Plus, Minus, Star, Slash, Percent,
    AndAnd, OrOr, Bang, Backslash, Arrow,
    End, Error
};

struct Token {
    Tok kind;
    std::string text;
    long long int_value = 0;
    SourcePos pos;
};

inline const char* token_name(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::KwIn: return "'in'";
    case Tok::KwOut: return "'out'";
    case Tok::KwLet: return "'let'";
    case Tok::KwImage: return "'image'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwAppend: return "'append'";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::EqEq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Assign: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::Backslash: return "'\\'";
    case Tok::Arrow: return "'->'";
    case Tok::End: return "end of input";
    case Tok::Error: return "invalid token";
    }
    return "?";
}

// Lex the whole source up front; the parser works on the token vector.
// A malformed character becomes a Tok::Error token so the parser can
// report it with a position and keep going.
inline std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    size_t i = 0;
    int line = 1, col = 1;

    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (i < src.size() && src[i] == '\n') { ++line; col = 1; }
            else ++col;
            ++i;
        }
    };
    auto push = [&](Tok k, std::string text, SourcePos p, long long v = 0) {
        out.push_back(Token{k, std::move(text), v, p});
    };

    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(1); continue; }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        SourcePos p{line, col};
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            std::string text(src.substr(i, j - i));
            long long v = 0;
            try {
                v = std::stoll(text);
            } catch (...) {
                push(Tok::Error, text, p);
                advance(j - i);
                continue;
            }
            push(Tok::Int, text, p, v);
            advance(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string text(src.substr(i, j - i));
            Tok k = Tok::Ident;
            if (text == "in") k = Tok::KwIn;
            else if (text == "out") k = Tok::KwOut;
            else if (text == "let") k = Tok::KwLet;
            else if (text == "image") k = Tok::KwImage;
            else if (text == "if") k = Tok::KwIf;
            else if (text == "then") k = Tok::KwThen;
            else if (text == "else") k = Tok::KwElse;
            else if (text == "append") k = Tok::KwAppend;
            push(k, std::move(text), p);
            advance(j - i);
            continue;
        }
        auto two = [&](char a, char b) {
            return c == a && i + 1 < src.size() && src[i + 1] == b;
        };
        if (two('-', '>')) { push(Tok::Arrow, "->", p); advance(2); continue; }
        if (two('<', '=')) { push(Tok::Le, "<=", p); advance(2); continue; }
        if (two('>', '=')) { push(Tok::Ge, ">=", p); advance(2); continue; }
        if (two('=', '=')) { push(Tok::EqEq, "==", p); advance(2); continue; }
        if (two('!', '=')) { push(Tok::Ne, "!=", p); advance(2); continue; }
        if (two('&', '&')) { push(Tok::AndAnd, "&&", p); advance(2); continue; }
        if (two('|', '|')) { push(Tok::OrOr, "||", p); advance(2); continue; }
        Tok k = Tok::Error;
        switch (c) {
        case ':': k = Tok::Colon; break;
        case ';': k = Tok::Semi; break;
        case ',': k = Tok::Comma; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '[': k = Tok::LBracket; break;
        case ']': k = Tok::RBracket; break;
        case '<': k = Tok::Lt; break;
        case '>': k = Tok::Gt; break;
        case '=': k = Tok::Assign; break;
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '/': k = Tok::Slash; break;
        case '%': k = Tok::Percent; break;
        case '!': k = Tok::Bang; break;
        case '\\': k = Tok::Backslash; break;
        default: break;
        }
        push(k, std::string(1, c), p);
        advance(1);
    }
    out.push_back(Token{Tok::End, "", 0, SourcePos{line, col}});
    return out;
}

} // namespace ripl

#endif
