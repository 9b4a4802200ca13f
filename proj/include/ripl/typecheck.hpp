#ifndef RIPL_TYPECHECK_HPP
#define RIPL_TYPECHECK_HPP

#include <optional>
#include <string>
#include <vector>

#include "ripl/types.hpp"

namespace ripl {

namespace detail {

// Constant folding over closed kernel subexpressions, used to check
// constant indices at compile time. Returns nothing for anything that
// depends on a runtime value.
inline std::optional<long long> const_eval(const ExprPtr& e,
                                           std::vector<std::pair<std::string, std::optional<long long>>>& env) {
    using K = Expr::Kind;
    switch (e->kind) {
    case K::IntLit:
        return e->int_value;
    case K::Var:
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->first == e->name) return it->second;
        return std::nullopt;
    case K::Unary: {
        auto v = const_eval(e->kids[0], env);
        if (!v) return std::nullopt;
        return e->un_op == UnOp::Neg ? -*v : (*v == 0 ? 1 : 0);
    }
    case K::Binary: {
        auto l = const_eval(e->kids[0], env);
        auto r = const_eval(e->kids[1], env);
        if (!l || !r) return std::nullopt;
        switch (e->bin_op) {
        case BinOp::Add: return *l + *r;
        case BinOp::Sub: return *l - *r;
        case BinOp::Mul: return *l * *r;
        case BinOp::Div: return *r == 0 ? std::nullopt : std::optional<long long>(*l / *r);
        case BinOp::Mod: return *r == 0 ? std::nullopt : std::optional<long long>(*l % *r);
        case BinOp::Lt: return *l < *r ? 1 : 0;
        case BinOp::Le: return *l <= *r ? 1 : 0;
        case BinOp::Gt: return *l > *r ? 1 : 0;
        case BinOp::Ge: return *l >= *r ? 1 : 0;
        case BinOp::Eq: return *l == *r ? 1 : 0;
        case BinOp::Ne: return *l != *r ? 1 : 0;
        case BinOp::And: return (*l != 0 && *r != 0) ? 1 : 0;
        case BinOp::Or: return (*l != 0 || *r != 0) ? 1 : 0;
        }
        return std::nullopt;
    }
    case K::If: {
        auto c = const_eval(e->kids[0], env);
        if (!c) return std::nullopt;
        return const_eval(e->kids[*c != 0 ? 1 : 2], env);
    }
    case K::Call: {
        if (e->builtin == Builtin::Upd) return std::nullopt;
        std::vector<long long> args;
        for (const auto& k : e->kids) {
            auto v = const_eval(k, env);
            if (!v) return std::nullopt;
            args.push_back(*v);
        }
        switch (e->builtin) {
        case Builtin::Min: return std::min(args[0], args[1]);
        case Builtin::Max: return std::max(args[0], args[1]);
        case Builtin::Abs: return args[0] < 0 ? -args[0] : args[0];
        case Builtin::Clamp: return std::min(std::max(args[0], args[1]), args[2]);
        default: return std::nullopt;
        }
    }
    case K::Let: {
        auto v = const_eval(e->kids[0], env);
        env.emplace_back(e->name, v);
        auto r = const_eval(e->kids[1], env);
        env.pop_back();
        return r;
    }
    default:
        return std::nullopt;
    }
}

class KernelChecker {
public:
    KernelChecker(const Kernel& k, std::vector<Diag>& diags) : kernel_(k), diags_(diags) {}

    std::optional<KType> check_body(const std::vector<KType>& param_types) {
        for (size_t i = 0; i < param_types.size(); ++i)
            scope_.emplace_back(kernel_.params[i], param_types[i]);
        return type_of(kernel_.body);
    }

private:
    const Kernel& kernel_;
    std::vector<Diag>& diags_;
    std::vector<std::pair<std::string, KType>> scope_;
    std::vector<std::pair<std::string, std::optional<long long>>> const_env_;

    std::optional<KType> fail(const char* code, SourcePos pos, const std::string& msg) {
        diags_.push_back(Diag{code, pos, msg});
        return std::nullopt;
    }

    std::optional<KType> type_of(const ExprPtr& e) {
        using K = Expr::Kind;
        switch (e->kind) {
        case K::IntLit:
            return KType::scalar();
        case K::Var:
            for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
                if (it->first == e->name) return it->second;
            // unreachable after check_program, but be safe
            return fail("E_UNBOUND", e->pos, "'" + e->name + "' is not in scope");
        case K::VecLit: {
            for (const auto& el : e->kids) {
                auto t = type_of(el);
                if (!t) return std::nullopt;
                if (t->is_vector)
                    return fail("E_KTYPE", el->pos, "vector literals hold scalars only");
            }
            return KType::vector(static_cast<long long>(e->kids.size()));
        }
        case K::Index: {
            auto base = type_of(e->kids[0]);
            if (!base) return std::nullopt;
            if (!base->is_vector)
                return fail("E_KTYPE", e->pos, "indexing a scalar value");
            auto idx = type_of(e->kids[1]);
            if (!idx) return std::nullopt;
            if (idx->is_vector)
                return fail("E_KTYPE", e->kids[1]->pos, "index must be a scalar");
            if (auto c = const_eval(e->kids[1], const_env_)) {
                if (*c < 0 || *c >= base->length)
                    return fail("E_INDEX", e->pos,
                                "index " + std::to_string(*c) + " out of bounds (valid 0.." +
                                    std::to_string(base->length - 1) + ")");
            }
            return KType::scalar();
        }
        case K::Unary: {
            auto t = type_of(e->kids[0]);
            if (!t) return std::nullopt;
            if (t->is_vector)
                return fail("E_KTYPE", e->pos, "unary operator needs a scalar");
            return KType::scalar();
        }
        case K::Binary: {
            auto l = type_of(e->kids[0]);
            auto r = type_of(e->kids[1]);
            if (!l || !r) return std::nullopt;
            if (l->is_vector || r->is_vector)
                return fail("E_KTYPE", e->pos, "binary operator needs scalar operands");
            return KType::scalar();
        }
        case K::If: {
            auto c = type_of(e->kids[0]);
            if (!c) return std::nullopt;
            if (c->is_vector)
                return fail("E_KTYPE", e->kids[0]->pos, "condition must be a scalar");
            auto t = type_of(e->kids[1]);
            auto f = type_of(e->kids[2]);
            if (!t || !f) return std::nullopt;
            if (!(*t == *f))
                return fail("E_KTYPE", e->pos,
                            "branches disagree: " + ktype_text(*t) + " vs " + ktype_text(*f));
            return t;
        }
        case K::Call: {
            if (e->builtin == Builtin::Upd) {
                auto vec = type_of(e->kids[0]);
                if (!vec) return std::nullopt;
                if (!vec->is_vector)
                    return fail("E_KTYPE", e->kids[0]->pos, "upd needs a vector");
                auto idx = type_of(e->kids[1]);
                if (!idx) return std::nullopt;
                if (idx->is_vector)
                    return fail("E_KTYPE", e->kids[1]->pos, "upd index must be a scalar");
                if (auto c = const_eval(e->kids[1], const_env_)) {
                    if (*c < 0 || *c >= vec->length)
                        return fail("E_INDEX", e->kids[1]->pos,
                                    "upd index " + std::to_string(*c) + " out of bounds (valid 0.." +
                                        std::to_string(vec->length - 1) + ")");
                }
                auto val = type_of(e->kids[2]);
                if (!val) return std::nullopt;
                if (val->is_vector)
                    return fail("E_KTYPE", e->kids[2]->pos, "upd value must be a scalar");
                return vec;
            }
            for (const auto& a : e->kids) {
                auto t = type_of(a);
                if (!t) return std::nullopt;
                if (t->is_vector)
                    return fail("E_KTYPE", a->pos,
                                std::string(builtin_text(e->builtin)) + " needs scalar arguments");
            }
            return KType::scalar();
        }
        case K::Let: {
            auto v = type_of(e->kids[0]);
            if (!v) return std::nullopt;
            scope_.emplace_back(e->name, *v);
            const_env_.emplace_back(e->name, const_eval(e->kids[0], const_env_));
            auto r = type_of(e->kids[1]);
            scope_.pop_back();
            const_env_.pop_back();
            return r;
        }
        }
        return std::nullopt;
    }
};

} // namespace detail

// Checks a kernel against the parameter and result types its enclosing
// skeleton dictates (with concrete sizes substituted). On success returns
// the result type.
inline Result<KType> kernel_type_check(const Kernel& k, const std::vector<KType>& params,
                                       const KType& expected_result) {
    std::vector<Diag> diags;
    if (k.params.size() != params.size()) {
        diags.push_back(Diag{"E_KARITY", k.pos,
                             "kernel takes " + std::to_string(k.params.size()) +
                                 " parameter(s), skeleton supplies " +
                                 std::to_string(params.size())});
        return Result<KType>::failure(std::move(diags));
    }
    detail::KernelChecker checker(k, diags);
    auto result = checker.check_body(params);
    if (!result) return Result<KType>::failure(std::move(diags));
    if (result->is_vector != expected_result.is_vector) {
        diags.push_back(Diag{"E_KTYPE", k.pos,
                             "kernel returns " + ktype_text(*result) + ", expected " +
                                 ktype_text(expected_result)});
        return Result<KType>::failure(std::move(diags));
    }
    if (expected_result.is_vector && result->length != expected_result.length) {
        diags.push_back(Diag{"E_VLEN", k.pos,
                             "kernel returns a vector of " + std::to_string(result->length) +
                                 ", expected " + std::to_string(expected_result.length)});
        return Result<KType>::failure(std::move(diags));
    }
    if (!diags.empty()) return Result<KType>::failure(std::move(diags));
    return Result<KType>::success(*result);
}

struct InferOptions {
    // When the caller will write every output as an image (the CLI's run
    // with PGM sinks), non-image outputs become E_SINK_TYPE.
    bool require_image_outputs = false;
};

// Annotates every binding with its concrete size per the skeleton
// signatures, checking divisibility, window bounds, and kernel types.
inline Result<TypedProgram> infer_sizes(const Program& p, InferOptions opts = {}) {
    std::vector<Diag> diags;
    TypedProgram tp;
    tp.program = p;

    for (const auto& in : p.inputs) {
        if (in.width < 1 || in.height < 1)
            diags.push_back(Diag{"E_DIM", in.pos, "image dimensions must be >= 1"});
        tp.type_of[in.name] = ImageType{in.width, in.height};
    }

    for (const auto& b : p.bindings) {
        auto rcr = resolve_call(b.app);
        if (!rcr.ok()) continue; // check_program already reported these
        ResolvedCall rc = std::move(*rcr);

        // Resolve argument images; skip the binding quietly if an input
        // failed earlier (its error is already on the list).
        std::vector<ImageType> args;
        bool poisoned = false;
        for (const auto& img : rc.images) {
            auto it = tp.type_of.find(img);
            if (it == tp.type_of.end()) { poisoned = true; break; }
            if (auto* im = std::get_if<ImageType>(&it->second)) {
                args.push_back(*im);
            } else {
                diags.push_back(Diag{"E_DIM", b.app.pos,
                                     "'" + img + "' is not an image (skeletons consume images)"});
                poisoned = true;
                break;
            }
        }
        if (poisoned) continue;

        TypedBinding tb;
        tb.name = b.name;
        tb.pos = b.pos;
        const long long M = args[0].width;
        const long long N = args[0].height;
        const long long A = rc.chunk_in;
        const long long B = rc.chunk_out;
        bool bad = false;

        auto need_divides = [&](long long chunk, long long dim, const char* axis) {
            if (chunk < 1 || dim % chunk != 0) {
                diags.push_back(Diag{"E_DIV", b.app.pos,
                                     "chunk size " + std::to_string(chunk) + " does not divide " +
                                         axis + " " + std::to_string(dim)});
                bad = true;
            }
        };
        auto need_same_dims = [&]() {
            if (!(args[0] == args[1])) {
                diags.push_back(Diag{"E_DIM", b.app.pos,
                                     "operand sizes differ: " + type_text(args[0]) + " vs " +
                                         type_text(args[1])});
                bad = true;
            }
        };
        auto need_chunk_out = [&]() {
            if (B < 1) {
                diags.push_back(Diag{"E_VLEN", b.app.pos, "output chunk size must be >= 1"});
                bad = true;
            }
        };

        std::vector<KType> kparams;
        KType kresult = KType::scalar();

        switch (rc.kind) {
        case SkeletonKind::MapRow:
            need_divides(A, M, "width");
            tb.result = ImageType{M, N};
            kparams = {KType::vector(A)};
            kresult = KType::vector(A);
            break;
        case SkeletonKind::MapCol:
            need_divides(A, N, "height");
            tb.result = ImageType{M, N};
            kparams = {KType::vector(A)};
            kresult = KType::vector(A);
            break;
        case SkeletonKind::ConcatMapRow:
            need_divides(A, M, "width");
            need_chunk_out();
            if (!bad) tb.result = ImageType{(B * M) / A, N};
            kparams = {KType::vector(A)};
            kresult = KType::vector(B);
            break;
        case SkeletonKind::ConcatMapCol:
            need_divides(A, N, "height");
            need_chunk_out();
            if (!bad) tb.result = ImageType{M, (B * N) / A};
            kparams = {KType::vector(A)};
            kresult = KType::vector(B);
            break;
        case SkeletonKind::ZipWithRow:
        case SkeletonKind::ZipWithCol:
            need_same_dims();
            tb.result = ImageType{M, N};
            kparams = {KType::scalar(), KType::scalar()};
            kresult = KType::scalar();
            break;
        case SkeletonKind::CombineRow:
        case SkeletonKind::CombineCol: {
            need_same_dims();
            bool row = rc.kind == SkeletonKind::CombineRow;
            need_divides(A, row ? M : N, row ? "width" : "height");
            need_chunk_out();
            if (rc.is_append && rc.explicit_b && B != 2 * A) {
                diags.push_back(Diag{"E_VLEN", b.app.pos,
                                     "append concatenates two chunks of " + std::to_string(A) +
                                         "; B must be " + std::to_string(2 * A)});
                bad = true;
            }
            if (!bad)
                tb.result = row ? ImageType{(B * M) / A, N} : ImageType{M, (B * N) / A};
            kparams = {KType::vector(A), KType::vector(A)};
            kresult = KType::vector(B);
            break;
        }
        case SkeletonKind::Convolve: {
            auto check_axis = [&](long long w, long long dim, const char* what) {
                if (w < 1 || w > dim || w % 2 == 0) {
                    diags.push_back(Diag{"E_WINDOW", b.app.pos,
                                         std::string("window ") + what + " " + std::to_string(w) +
                                             " must be odd and within 1.." + std::to_string(dim)});
                    bad = true;
                }
            };
            check_axis(rc.win_w, M, "width");
            check_axis(rc.win_h, N, "height");
            tb.result = ImageType{M, N};
            kparams = {KType::vector(rc.win_w * rc.win_h)};
            kresult = KType::scalar();
            break;
        }
        case SkeletonKind::FoldVector:
            if (rc.vec_len < 1) {
                diags.push_back(Diag{"E_VLEN", b.app.pos,
                                     "fold vector length must be >= 1"});
                bad = true;
            }
            tb.result = VectorType{rc.vec_len};
            kparams = {KType::scalar(), KType::vector(rc.vec_len)};
            kresult = KType::vector(rc.vec_len);
            break;
        case SkeletonKind::FoldScalar:
            tb.result = ScalarType{};
            kparams = {KType::scalar(), KType::scalar()};
            kresult = KType::scalar();
            break;
        }

        if (bad) continue;

        if (rc.kernel) {
            auto kr = kernel_type_check(*rc.kernel, kparams, kresult);
            if (!kr.ok()) {
                diags.insert(diags.end(), kr.diags.begin(), kr.diags.end());
                continue;
            }
        }

        tb.call = std::move(rc);
        tb.kernel_params = std::move(kparams);
        tb.kernel_result = kresult;
        tp.type_of[b.name] = tb.result;
        tp.bindings.push_back(std::move(tb));
    }

    if (opts.require_image_outputs) {
        for (const auto& o : p.outputs) {
            auto it = tp.type_of.find(o.name);
            if (it != tp.type_of.end() && !std::holds_alternative<ImageType>(it->second))
                diags.push_back(Diag{"E_SINK_TYPE", o.pos,
                                     "output '" + o.name + "' is " + type_text(it->second) +
                                         ", not an image"});
        }
    }

    if (!diags.empty()) return Result<TypedProgram>::failure(std::move(diags));
    return Result<TypedProgram>::success(std::move(tp));
}

} // namespace ripl

#endif
