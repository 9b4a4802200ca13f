#ifndef RIPL_PRETTY_HPP
#define RIPL_PRETTY_HPP

#include <sstream>
#include <string>

#include "ripl/ast.hpp"

namespace ripl {

// Canonical form: compound subexpressions are fully parenthesized, so
// parse(pretty(ast)) reproduces the tree exactly.

inline void print_expr(std::ostream& os, const ExprPtr& e) {
    switch (e->kind) {
    case Expr::Kind::IntLit:
        os << e->int_value;
        break;
    case Expr::Kind::Var:
        os << e->name;
        break;
    case Expr::Kind::VecLit:
        os << "[";
        for (size_t i = 0; i < e->kids.size(); ++i) {
            if (i) os << ", ";
            print_expr(os, e->kids[i]);
        }
        os << "]";
        break;
    case Expr::Kind::Index:
        print_expr(os, e->kids[0]);
        os << "[";
        print_expr(os, e->kids[1]);
        os << "]";
        break;
    case Expr::Kind::Unary:
        os << "(" << (e->un_op == UnOp::Neg ? "-" : "!");
        print_expr(os, e->kids[0]);
        os << ")";
        break;
    case Expr::Kind::Binary:
        os << "(";
        print_expr(os, e->kids[0]);
        os << " " << binop_text(e->bin_op) << " ";
        print_expr(os, e->kids[1]);
        os << ")";
        break;
    case Expr::Kind::If:
        os << "(if ";
        print_expr(os, e->kids[0]);
        os << " then ";
        print_expr(os, e->kids[1]);
        os << " else ";
        print_expr(os, e->kids[2]);
        os << ")";
        break;
    case Expr::Kind::Call:
        os << builtin_text(e->builtin) << "(";
        for (size_t i = 0; i < e->kids.size(); ++i) {
            if (i) os << ", ";
            print_expr(os, e->kids[i]);
        }
        os << ")";
        break;
    case Expr::Kind::Let:
        os << "(let " << e->name << " = ";
        print_expr(os, e->kids[0]);
        os << " in ";
        print_expr(os, e->kids[1]);
        os << ")";
        break;
    }
}

inline std::string pretty_expr(const ExprPtr& e) {
    std::ostringstream os;
    print_expr(os, e);
    return os.str();
}

inline std::string pretty_kernel(const Kernel& k) {
    std::ostringstream os;
    os << "\\";
    for (const auto& p : k.params) os << p << " ";
    os << "-> ";
    print_expr(os, k.body);
    return os.str();
}

inline void print_actual(std::ostream& os, const Actual& a) {
    switch (a.kind) {
    case Actual::Kind::Name: os << a.name; break;
    case Actual::Kind::Int: os << a.value; break;
    case Actual::Kind::Pair: os << "(" << a.value << ", " << a.second << ")"; break;
    case Actual::Kind::Lambda: os << pretty_kernel(*a.kernel); break;
    case Actual::Kind::Append: os << "append"; break;
    }
}

inline std::string pretty_program(const Program& p) {
    std::ostringstream os;
    for (const auto& in : p.inputs)
        os << "in " << in.name << " : image<" << in.width << "," << in.height << ">;\n";
    for (const auto& b : p.bindings) {
        os << "let " << b.name << " = " << b.app.callee << "(";
        for (size_t i = 0; i < b.app.actuals.size(); ++i) {
            if (i) os << ", ";
            print_actual(os, b.app.actuals[i]);
        }
        os << ");\n";
    }
    for (const auto& o : p.outputs) os << "out " << o.name << ";\n";
    return os.str();
}

} // namespace ripl

#endif
