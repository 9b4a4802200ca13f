#ifndef RIPL_AST_HPP
#define RIPL_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ripl/diag.hpp"

namespace ripl {

enum class BinOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp { Neg, Not };
enum class Builtin { Min, Max, Abs, Clamp, Upd };

inline const char* binop_text(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    }
    return "?";
}

inline const char* builtin_text(Builtin b) {
    switch (b) {
    case Builtin::Min: return "min";
    case Builtin::Max: return "max";
    case Builtin::Abs: return "abs";
    case Builtin::Clamp: return "clamp";
    case Builtin::Upd: return "upd";
    }
    return "?";
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Kernel-body expression. Nodes are immutable after parsing and shared
// freely between program copies.
struct Expr {
    enum class Kind { IntLit, Var, VecLit, Index, Unary, Binary, If, Call, Let };

    Kind kind;
    SourcePos pos;
    long long int_value = 0;     // IntLit
    std::string name;            // Var, Let binder
    UnOp un_op = UnOp::Neg;      // Unary
    BinOp bin_op = BinOp::Add;   // Binary
    Builtin builtin = Builtin::Min; // Call
    // Children, by kind:
    //   VecLit: elements; Index: base, index; Unary: operand;
    //   Binary: lhs, rhs; If: cond, then, else; Call: arguments;
    //   Let: bound value, body.
    std::vector<ExprPtr> kids;

    static ExprPtr make_int(long long v, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::IntLit; e->int_value = v; e->pos = p;
        return e;
    }
    static ExprPtr make_var(std::string n, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Var; e->name = std::move(n); e->pos = p;
        return e;
    }
    static ExprPtr make_vec(std::vector<ExprPtr> elems, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::VecLit; e->kids = std::move(elems); e->pos = p;
        return e;
    }
    static ExprPtr make_index(ExprPtr base, ExprPtr idx, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Index; e->kids = {std::move(base), std::move(idx)}; e->pos = p;
        return e;
    }
    static ExprPtr make_unary(UnOp op, ExprPtr sub, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Unary; e->un_op = op; e->kids = {std::move(sub)}; e->pos = p;
        return e;
    }
    static ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Binary; e->bin_op = op; e->kids = {std::move(l), std::move(r)}; e->pos = p;
        return e;
    }
    static ExprPtr make_if(ExprPtr c, ExprPtr t, ExprPtr f, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::If; e->kids = {std::move(c), std::move(t), std::move(f)}; e->pos = p;
        return e;
    }
    static ExprPtr make_call(Builtin b, std::vector<ExprPtr> args, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Call; e->builtin = b; e->kids = std::move(args); e->pos = p;
        return e;
    }
    static ExprPtr make_let(std::string n, ExprPtr v, ExprPtr body, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Let; e->name = std::move(n);
        e->kids = {std::move(v), std::move(body)}; e->pos = p;
        return e;
    }
};

// Structural equality, ignoring source positions.
inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    if (a->int_value != b->int_value) return false;
    if (a->name != b->name) return false;
    if (a->kind == Expr::Kind::Unary && a->un_op != b->un_op) return false;
    if (a->kind == Expr::Kind::Binary && a->bin_op != b->bin_op) return false;
    if (a->kind == Expr::Kind::Call && a->builtin != b->builtin) return false;
    if (a->kids.size() != b->kids.size()) return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!expr_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

struct Kernel {
    std::vector<std::string> params;
    ExprPtr body;
    SourcePos pos;
};

inline bool kernel_equal(const Kernel& a, const Kernel& b) {
    return a.params == b.params && expr_equal(a.body, b.body);
}

// One argument at a skeleton call site, as written.
struct Actual {
    enum class Kind { Name, Int, Pair, Lambda, Append };
    Kind kind;
    SourcePos pos;
    std::string name;              // Name
    long long value = 0;           // Int, Pair first
    long long second = 0;          // Pair second
    std::optional<Kernel> kernel;  // Lambda
};

inline bool actual_equal(const Actual& a, const Actual& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Actual::Kind::Name: return a.name == b.name;
    case Actual::Kind::Int: return a.value == b.value;
    case Actual::Kind::Pair: return a.value == b.value && a.second == b.second;
    case Actual::Kind::Lambda: return kernel_equal(*a.kernel, *b.kernel);
    case Actual::Kind::Append: return true;
    }
    return false;
}

struct SkeletonApp {
    std::string callee;
    std::vector<Actual> actuals;
    SourcePos pos;
};

struct InputDecl {
    std::string name;
    long long width = 0;
    long long height = 0;
    SourcePos pos;
};

struct Binding {
    std::string name;
    SkeletonApp app;
    SourcePos pos;
};

struct OutputDecl {
    std::string name;
    SourcePos pos;
};

struct Program {
    std::vector<InputDecl> inputs;
    std::vector<Binding> bindings;
    std::vector<OutputDecl> outputs;
};

inline bool program_equal(const Program& a, const Program& b) {
    if (a.inputs.size() != b.inputs.size() || a.bindings.size() != b.bindings.size() ||
        a.outputs.size() != b.outputs.size())
        return false;
    for (size_t i = 0; i < a.inputs.size(); ++i) {
        const auto& x = a.inputs[i];
        const auto& y = b.inputs[i];
        if (x.name != y.name || x.width != y.width || x.height != y.height) return false;
    }
    for (size_t i = 0; i < a.bindings.size(); ++i) {
        const auto& x = a.bindings[i];
        const auto& y = b.bindings[i];
        if (x.name != y.name || x.app.callee != y.app.callee) return false;
        if (x.app.actuals.size() != y.app.actuals.size()) return false;
        for (size_t j = 0; j < x.app.actuals.size(); ++j)
            if (!actual_equal(x.app.actuals[j], y.app.actuals[j])) return false;
    }
    for (size_t i = 0; i < a.outputs.size(); ++i)
        if (a.outputs[i].name != b.outputs[i].name) return false;
    return true;
}

} // namespace ripl

#endif
