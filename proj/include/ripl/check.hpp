#ifndef RIPL_CHECK_HPP
#define RIPL_CHECK_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ripl/ast.hpp"

namespace ripl {

enum class SkeletonKind {
    MapRow, MapCol, ConcatMapRow, ConcatMapCol,
    ZipWithRow, ZipWithCol, CombineRow, CombineCol,
    Convolve, FoldVector, FoldScalar
};

inline const char* skeleton_name(SkeletonKind k) {
    switch (k) {
    case SkeletonKind::MapRow: return "mapRow";
    case SkeletonKind::MapCol: return "mapCol";
    case SkeletonKind::ConcatMapRow: return "concatMapRow";
    case SkeletonKind::ConcatMapCol: return "concatMapCol";
    case SkeletonKind::ZipWithRow: return "zipWithRow";
    case SkeletonKind::ZipWithCol: return "zipWithCol";
    case SkeletonKind::CombineRow: return "combineRow";
    case SkeletonKind::CombineCol: return "combineCol";
    case SkeletonKind::Convolve: return "convolve";
    case SkeletonKind::FoldVector: return "foldVector";
    case SkeletonKind::FoldScalar: return "foldScalar";
    }
    return "?";
}

inline bool is_row_wise(SkeletonKind k) {
    switch (k) {
    case SkeletonKind::MapCol:
    case SkeletonKind::ConcatMapCol:
    case SkeletonKind::ZipWithCol:
    case SkeletonKind::CombineCol:
        return false;
    default:
        return true;
    }
}

// A skeleton call with its arguments sorted into their roles.
struct ResolvedCall {
    SkeletonKind kind;
    std::vector<std::string> images; // 1 or 2 argument names
    long long chunk_in = 0;          // A
    long long chunk_out = 0;         // B
    long long win_w = 0, win_h = 0;  // convolve (a, b)
    long long vec_len = 0;           // foldVector s
    long long init = 0;              // fold initial value
    std::optional<Kernel> kernel;    // absent when the kernel is `append`
    bool is_append = false;
    bool explicit_b = false;         // combine: B was written at the call site
};

namespace detail {

inline bool lookup_skeleton(const std::string& name, SkeletonKind& out) {
    static const std::map<std::string, SkeletonKind> table = {
        {"mapRow", SkeletonKind::MapRow},
        {"mapCol", SkeletonKind::MapCol},
        {"concatMapRow", SkeletonKind::ConcatMapRow},
        {"concatMapCol", SkeletonKind::ConcatMapCol},
        {"zipWithRow", SkeletonKind::ZipWithRow},
        {"zipWithCol", SkeletonKind::ZipWithCol},
        {"combineRow", SkeletonKind::CombineRow},
        {"combineCol", SkeletonKind::CombineCol},
        {"convolve", SkeletonKind::Convolve},
        {"foldVector", SkeletonKind::FoldVector},
        {"foldScalar", SkeletonKind::FoldScalar},
    };
    auto it = table.find(name);
    if (it == table.end()) return false;
    out = it->second;
    return true;
}

inline const char* signature_help(SkeletonKind k) {
    switch (k) {
    case SkeletonKind::MapRow: return "mapRow(im, A, kernel)";
    case SkeletonKind::MapCol: return "mapCol(im, A, kernel)";
    case SkeletonKind::ConcatMapRow: return "concatMapRow(im, A, B, kernel)";
    case SkeletonKind::ConcatMapCol: return "concatMapCol(im, A, B, kernel)";
    case SkeletonKind::ZipWithRow: return "zipWithRow(im1, im2, kernel)";
    case SkeletonKind::ZipWithCol: return "zipWithCol(im1, im2, kernel)";
    case SkeletonKind::CombineRow: return "combineRow(im1, im2, A, [B,] kernel|append)";
    case SkeletonKind::CombineCol: return "combineCol(im1, im2, A, [B,] kernel|append)";
    case SkeletonKind::Convolve: return "convolve(im, (a,b), kernel)";
    case SkeletonKind::FoldVector: return "foldVector(im, init, s, kernel)";
    case SkeletonKind::FoldScalar: return "foldScalar(im, init, kernel)";
    }
    return "?";
}

} // namespace detail

// Sorts a raw call's actuals into a ResolvedCall, checking only argument
// count and shape (Fig-style arity). Size arithmetic belongs to infer_sizes.
inline Result<ResolvedCall> resolve_call(const SkeletonApp& app) {
    ResolvedCall rc;
    std::vector<Diag> diags;
    auto arity_error = [&](const std::string& msg) {
        diags.push_back(Diag{"E_ARITY", app.pos, msg});
        return Result<ResolvedCall>::failure(std::move(diags));
    };

    if (!detail::lookup_skeleton(app.callee, rc.kind))
        return arity_error("unknown skeleton '" + app.callee + "'");

    const auto& as = app.actuals;
    auto want = [&](size_t i, Actual::Kind k) {
        return i < as.size() && as[i].kind == k;
    };
    auto shape_error = [&]() {
        return arity_error(std::string("call does not match ") +
                           detail::signature_help(rc.kind));
    };
    using AK = Actual::Kind;

    // append is only legal as the kernel of combineRow/combineCol
    bool is_combine =
        rc.kind == SkeletonKind::CombineRow || rc.kind == SkeletonKind::CombineCol;
    for (size_t i = 0; i < as.size(); ++i) {
        bool kernel_slot = is_combine && (i == 3 || i == 4);
        if (as[i].kind == AK::Append && !kernel_slot) {
            diags.push_back(Diag{"E_APPEND", as[i].pos,
                                 "'append' is only valid as the kernel of combineRow/combineCol"});
            return Result<ResolvedCall>::failure(std::move(diags));
        }
    }

    switch (rc.kind) {
    case SkeletonKind::MapRow:
    case SkeletonKind::MapCol:
        if (as.size() != 3 || !want(0, AK::Name) || !want(1, AK::Int) || !want(2, AK::Lambda))
            return shape_error();
        rc.images = {as[0].name};
        rc.chunk_in = rc.chunk_out = as[1].value;
        rc.kernel = *as[2].kernel;
        break;
    case SkeletonKind::ConcatMapRow:
    case SkeletonKind::ConcatMapCol:
        if (as.size() != 4 || !want(0, AK::Name) || !want(1, AK::Int) || !want(2, AK::Int) ||
            !want(3, AK::Lambda))
            return shape_error();
        rc.images = {as[0].name};
        rc.chunk_in = as[1].value;
        rc.chunk_out = as[2].value;
        rc.kernel = *as[3].kernel;
        break;
    case SkeletonKind::ZipWithRow:
    case SkeletonKind::ZipWithCol:
        if (as.size() != 3 || !want(0, AK::Name) || !want(1, AK::Name) || !want(2, AK::Lambda))
            return shape_error();
        rc.images = {as[0].name, as[1].name};
        rc.kernel = *as[2].kernel;
        break;
    case SkeletonKind::CombineRow:
    case SkeletonKind::CombineCol: {
        if (as.size() < 4 || as.size() > 5 || !want(0, AK::Name) || !want(1, AK::Name) ||
            !want(2, AK::Int))
            return shape_error();
        rc.images = {as[0].name, as[1].name};
        rc.chunk_in = as[2].value;
        const Actual* last = &as.back();
        if (as.size() == 5) {
            if (!want(3, AK::Int)) return shape_error();
            rc.chunk_out = as[3].value;
            rc.explicit_b = true;
        }
        if (last->kind == AK::Append) {
            rc.is_append = true;
            if (!rc.explicit_b) rc.chunk_out = 2 * rc.chunk_in;
        } else if (last->kind == AK::Lambda) {
            if (!rc.explicit_b) return shape_error(); // kernels need B written out
            rc.kernel = *last->kernel;
        } else {
            return shape_error();
        }
        break;
    }
    case SkeletonKind::Convolve:
        if (as.size() != 3 || !want(0, AK::Name) || !want(1, AK::Pair) || !want(2, AK::Lambda))
            return shape_error();
        rc.images = {as[0].name};
        rc.win_w = as[1].value;
        rc.win_h = as[1].second;
        rc.kernel = *as[2].kernel;
        break;
    case SkeletonKind::FoldVector:
        if (as.size() != 4 || !want(0, AK::Name) || !want(1, AK::Int) || !want(2, AK::Int) ||
            !want(3, AK::Lambda))
            return shape_error();
        rc.images = {as[0].name};
        rc.init = as[1].value;
        rc.vec_len = as[2].value;
        rc.kernel = *as[3].kernel;
        break;
    case SkeletonKind::FoldScalar:
        if (as.size() != 3 || !want(0, AK::Name) || !want(1, AK::Int) || !want(2, AK::Lambda))
            return shape_error();
        rc.images = {as[0].name};
        rc.init = as[1].value;
        rc.kernel = *as[2].kernel;
        break;
    }
    return Result<ResolvedCall>::success(std::move(rc));
}

namespace detail {

// Kernel bodies may reference only params, let-bound locals, and literals.
inline void check_kernel_scope(const ExprPtr& e, std::vector<std::string>& scope,
                               std::vector<Diag>& diags) {
    switch (e->kind) {
    case Expr::Kind::Var: {
        for (const auto& n : scope)
            if (n == e->name) return;
        diags.push_back(Diag{"E_UNBOUND", e->pos,
                             "'" + e->name + "' is not a kernel parameter or local"});
        break;
    }
    case Expr::Kind::Let:
        check_kernel_scope(e->kids[0], scope, diags);
        scope.push_back(e->name);
        check_kernel_scope(e->kids[1], scope, diags);
        scope.pop_back();
        break;
    default:
        for (const auto& k : e->kids) check_kernel_scope(k, scope, diags);
        break;
    }
}

} // namespace detail

// Enforces single assignment, definition-before-use, call shapes, and
// append placement. Returns the program unchanged when everything holds.
inline Result<Program> check_program(const Program& p) {
    std::vector<Diag> diags;
    std::set<std::string> bound;

    auto bind = [&](const std::string& name, SourcePos pos) {
        if (!bound.insert(name).second)
            diags.push_back(Diag{"E_REBIND", pos, "'" + name + "' is bound more than once"});
    };

    for (const auto& in : p.inputs) bind(in.name, in.pos);

    for (const auto& b : p.bindings) {
        auto rc = resolve_call(b.app);
        if (!rc.ok()) {
            diags.insert(diags.end(), rc.diags.begin(), rc.diags.end());
        } else {
            for (const auto& img : rc->images) {
                if (!bound.count(img))
                    diags.push_back(Diag{"E_UNBOUND", b.app.pos,
                                         "'" + img + "' is not defined at this point"});
            }
            if (rc->kernel) {
                std::vector<std::string> scope = rc->kernel->params;
                detail::check_kernel_scope(rc->kernel->body, scope, diags);
            }
        }
        bind(b.name, b.pos);
    }

    for (const auto& o : p.outputs) {
        if (!bound.count(o.name))
            diags.push_back(Diag{"E_UNBOUND", o.pos, "'" + o.name + "' is not defined"});
    }

    if (!diags.empty()) return Result<Program>::failure(std::move(diags));
    return Result<Program>::success(p);
}

} // namespace ripl

#endif
