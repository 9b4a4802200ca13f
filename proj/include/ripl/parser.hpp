#ifndef RIPL_PARSER_HPP
#define RIPL_PARSER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "ripl/ast.hpp"
#include "ripl/lexer.hpp"

namespace ripl {

namespace detail {

struct ParseBail {}; // unwinds to the nearest statement for recovery

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    Result<Program> run() {
        Program prog;
        if (!at(Tok::KwIn)) {
            error("expected 'in' (a program starts with at least one input)");
            skip_statement();
        }
        while (at(Tok::KwIn)) {
            try { prog.inputs.push_back(parse_input()); }
            catch (ParseBail&) { skip_statement(); }
        }
        while (at(Tok::KwLet)) {
            try { prog.bindings.push_back(parse_binding()); }
            catch (ParseBail&) { skip_statement(); }
        }
        if (!at(Tok::KwOut)) {
            error("expected 'out' (a program ends with at least one output)");
            skip_statement();
        }
        while (at(Tok::KwOut)) {
            try { prog.outputs.push_back(parse_output()); }
            catch (ParseBail&) { skip_statement(); }
        }
        if (!at(Tok::End)) {
            error("unexpected input after outputs");
        }
        if (!diags_.empty()) return Result<Program>::failure(std::move(diags_));
        return Result<Program>::success(std::move(prog));
    }

    Result<Kernel> run_kernel() {
        try {
            Kernel k = parse_kernel();
            if (!at(Tok::End)) error("unexpected input after kernel");
            if (!diags_.empty()) return Result<Kernel>::failure(std::move(diags_));
            return Result<Kernel>::success(std::move(k));
        } catch (ParseBail&) {
            return Result<Kernel>::failure(std::move(diags_));
        }
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::vector<Diag> diags_;

    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok k) const { return cur().kind == k; }
    Token take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
    bool accept(Tok k) {
        if (!at(k)) return false;
        take();
        return true;
    }

    [[noreturn]] void fail(const std::string& msg) {
        error(msg);
        throw ParseBail{};
    }
    void error(const std::string& msg) {
        diags_.push_back(Diag{"E_SYNTAX", cur().pos, msg});
    }
    Token expect(Tok k, const char* where) {
        if (!at(k)) {
            fail(std::string("expected ") + token_name(k) + " " + where + ", found " +
                 token_name(cur().kind));
        }
        return take();
    }

    void skip_statement() {
        while (!at(Tok::End)) {
            if (accept(Tok::Semi)) return;
            if (at(Tok::KwIn) || at(Tok::KwLet) || at(Tok::KwOut)) return;
            take();
        }
    }

    InputDecl parse_input() {
        InputDecl d;
        d.pos = cur().pos;
        expect(Tok::KwIn, "at input declaration");
        d.name = expect(Tok::Ident, "after 'in'").text;
        expect(Tok::Colon, "after input name");
        expect(Tok::KwImage, "in input type");
        expect(Tok::Lt, "after 'image'");
        d.width = expect(Tok::Int, "as image width").int_value;
        expect(Tok::Comma, "between image dimensions");
        d.height = expect(Tok::Int, "as image height").int_value;
        expect(Tok::Gt, "after image dimensions");
        expect(Tok::Semi, "after input declaration");
        return d;
    }

    Binding parse_binding() {
        Binding b;
        b.pos = cur().pos;
        expect(Tok::KwLet, "at binding");
        b.name = expect(Tok::Ident, "after 'let'").text;
        expect(Tok::Assign, "after binding name");
        b.app = parse_skeleton_app();
        expect(Tok::Semi, "after binding");
        return b;
    }

    OutputDecl parse_output() {
        OutputDecl d;
        d.pos = cur().pos;
        expect(Tok::KwOut, "at output declaration");
        d.name = expect(Tok::Ident, "after 'out'").text;
        expect(Tok::Semi, "after output declaration");
        return d;
    }

    SkeletonApp parse_skeleton_app() {
        SkeletonApp app;
        app.pos = cur().pos;
        app.callee = expect(Tok::Ident, "as skeleton name").text;
        expect(Tok::LParen, "after skeleton name");
        app.actuals.push_back(parse_actual());
        while (accept(Tok::Comma)) app.actuals.push_back(parse_actual());
        expect(Tok::RParen, "after skeleton arguments");
        return app;
    }

    Actual parse_actual() {
        Actual a;
        a.pos = cur().pos;
        if (at(Tok::Ident)) {
            a.kind = Actual::Kind::Name;
            a.name = take().text;
            return a;
        }
        if (at(Tok::Int) || at(Tok::Minus)) {
            bool neg = accept(Tok::Minus);
            a.kind = Actual::Kind::Int;
            a.value = expect(Tok::Int, "as integer argument").int_value;
            if (neg) a.value = -a.value;
            return a;
        }
        if (at(Tok::LParen)) {
            take();
            a.kind = Actual::Kind::Pair;
            a.value = expect(Tok::Int, "as window width").int_value;
            expect(Tok::Comma, "inside window pair");
            a.second = expect(Tok::Int, "as window height").int_value;
            expect(Tok::RParen, "after window pair");
            return a;
        }
        if (at(Tok::KwAppend)) {
            take();
            a.kind = Actual::Kind::Append;
            return a;
        }
        if (at(Tok::Backslash)) {
            a.kind = Actual::Kind::Lambda;
            a.kernel = parse_kernel();
            return a;
        }
        fail("expected skeleton argument (name, integer, pair, kernel, or 'append')");
    }

    Kernel parse_kernel() {
        Kernel k;
        k.pos = cur().pos;
        expect(Tok::Backslash, "at kernel");
        k.params.push_back(expect(Tok::Ident, "as kernel parameter").text);
        while (at(Tok::Ident)) k.params.push_back(take().text);
        expect(Tok::Arrow, "after kernel parameters");
        k.body = parse_expr();
        return k;
    }

    ExprPtr parse_expr() {
        if (at(Tok::KwIf)) {
            SourcePos p = take().pos;
            ExprPtr c = parse_expr();
            expect(Tok::KwThen, "in conditional");
            ExprPtr t = parse_expr();
            expect(Tok::KwElse, "in conditional");
            ExprPtr f = parse_expr();
            return Expr::make_if(std::move(c), std::move(t), std::move(f), p);
        }
        if (at(Tok::KwLet)) {
            SourcePos p = take().pos;
            std::string n = expect(Tok::Ident, "after 'let'").text;
            expect(Tok::Assign, "in let expression");
            ExprPtr v = parse_expr();
            expect(Tok::KwIn, "in let expression");
            ExprPtr body = parse_expr();
            return Expr::make_let(std::move(n), std::move(v), std::move(body), p);
        }
        return parse_or();
    }

    ExprPtr parse_or() {
        ExprPtr l = parse_and();
        while (at(Tok::OrOr)) {
            SourcePos p = take().pos;
            l = Expr::make_binary(BinOp::Or, std::move(l), parse_and(), p);
        }
        return l;
    }

    ExprPtr parse_and() {
        ExprPtr l = parse_cmp();
        while (at(Tok::AndAnd)) {
            SourcePos p = take().pos;
            l = Expr::make_binary(BinOp::And, std::move(l), parse_cmp(), p);
        }
        return l;
    }

    ExprPtr parse_cmp() {
        ExprPtr l = parse_add();
        for (;;) {
            BinOp op;
            if (at(Tok::Lt)) op = BinOp::Lt;
            else if (at(Tok::Le)) op = BinOp::Le;
            else if (at(Tok::Gt)) op = BinOp::Gt;
            else if (at(Tok::Ge)) op = BinOp::Ge;
            else if (at(Tok::EqEq)) op = BinOp::Eq;
            else if (at(Tok::Ne)) op = BinOp::Ne;
            else break;
            SourcePos p = take().pos;
            l = Expr::make_binary(op, std::move(l), parse_add(), p);
        }
        return l;
    }

    ExprPtr parse_add() {
        ExprPtr l = parse_mul();
        for (;;) {
            BinOp op;
            if (at(Tok::Plus)) op = BinOp::Add;
            else if (at(Tok::Minus)) op = BinOp::Sub;
            else break;
            SourcePos p = take().pos;
            l = Expr::make_binary(op, std::move(l), parse_mul(), p);
        }
        return l;
    }

    ExprPtr parse_mul() {
        ExprPtr l = parse_unary();
        for (;;) {
            BinOp op;
            if (at(Tok::Star)) op = BinOp::Mul;
            else if (at(Tok::Slash)) op = BinOp::Div;
            else if (at(Tok::Percent)) op = BinOp::Mod;
            else break;
            SourcePos p = take().pos;
            l = Expr::make_binary(op, std::move(l), parse_unary(), p);
        }
        return l;
    }

    ExprPtr parse_unary() {
        if (at(Tok::Minus)) {
            SourcePos p = take().pos;
            return Expr::make_unary(UnOp::Neg, parse_unary(), p);
        }
        if (at(Tok::Bang)) {
            SourcePos p = take().pos;
            return Expr::make_unary(UnOp::Not, parse_unary(), p);
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (at(Tok::LBracket)) {
            SourcePos p = take().pos;
            ExprPtr idx = parse_expr();
            expect(Tok::RBracket, "after index");
            e = Expr::make_index(std::move(e), std::move(idx), p);
        }
        return e;
    }

    ExprPtr parse_primary() {
        SourcePos p = cur().pos;
        if (at(Tok::Int)) {
            return Expr::make_int(take().int_value, p);
        }
        if (at(Tok::Ident)) {
            std::string name = take().text;
            if (at(Tok::LParen)) {
                Builtin b;
                size_t arity;
                if (name == "min") { b = Builtin::Min; arity = 2; }
                else if (name == "max") { b = Builtin::Max; arity = 2; }
                else if (name == "abs") { b = Builtin::Abs; arity = 1; }
                else if (name == "clamp") { b = Builtin::Clamp; arity = 3; }
                else if (name == "upd") { b = Builtin::Upd; arity = 3; }
                else fail("unknown function '" + name + "'");
                take(); // (
                std::vector<ExprPtr> args;
                if (!at(Tok::RParen)) {
                    args.push_back(parse_expr());
                    while (accept(Tok::Comma)) args.push_back(parse_expr());
                }
                expect(Tok::RParen, "after call arguments");
                if (args.size() != arity) {
                    fail("'" + name + "' expects " + std::to_string(arity) + " argument" +
                         (arity == 1 ? "" : "s") + ", got " + std::to_string(args.size()));
                }
                return Expr::make_call(b, std::move(args), p);
            }
            return Expr::make_var(std::move(name), p);
        }
        if (accept(Tok::LParen)) {
            ExprPtr e = parse_expr();
            expect(Tok::RParen, "after parenthesized expression");
            return e;
        }
        if (accept(Tok::LBracket)) {
            std::vector<ExprPtr> elems;
            elems.push_back(parse_expr());
            while (accept(Tok::Comma)) elems.push_back(parse_expr());
            expect(Tok::RBracket, "after vector literal");
            return Expr::make_vec(std::move(elems), p);
        }
        fail(std::string("expected expression, found ") + token_name(cur().kind));
    }
};

} // namespace detail

inline Result<Program> parse(std::string_view source) {
    detail::Parser p(source);
    return p.run();
}

// Parses a bare kernel lambda; the actor-IR reader uses this.
inline Result<Kernel> parse_kernel_text(std::string_view source) {
    detail::Parser p(source);
    return p.run_kernel();
}

} // namespace ripl

#endif
