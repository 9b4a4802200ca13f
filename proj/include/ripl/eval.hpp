#ifndef RIPL_EVAL_HPP
#define RIPL_EVAL_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ripl/image.hpp"
#include "ripl/types.hpp"

namespace ripl {

// Result of a binding: an image stream value, a fold vector, or a scalar.
using Value = std::variant<Image, std::vector<long long>, long long>;

// Scalar-or-vector value inside a kernel. All arithmetic is signed 64-bit;
// clamping to the pixel range happens only where a value is written to an
// image stream.
using KValue = std::variant<long long, std::vector<long long>>;

namespace detail {

class KernelEval {
public:
    explicit KernelEval(const Kernel& k) : kernel_(k) {}

    KValue run(std::vector<KValue> args) {
        env_.clear();
        for (size_t i = 0; i < args.size(); ++i)
            env_.emplace_back(kernel_.params[i], std::move(args[i]));
        return eval(kernel_.body);
    }

private:
    const Kernel& kernel_;
    std::vector<std::pair<std::string, KValue>> env_;

    long long scalar(const ExprPtr& e) {
        KValue v = eval(e);
        // the type checker rules out vectors here
        return std::get<long long>(v);
    }

    KValue eval(const ExprPtr& e) {
        using K = Expr::Kind;
        switch (e->kind) {
        case K::IntLit:
            return e->int_value;
        case K::Var:
            for (auto it = env_.rbegin(); it != env_.rend(); ++it)
                if (it->first == e->name) return it->second;
            throw RuntimeError("E_UNBOUND", e->pos, "'" + e->name + "' is not in scope");
        case K::VecLit: {
            std::vector<long long> out;
            out.reserve(e->kids.size());
            for (const auto& el : e->kids) out.push_back(scalar(el));
            return out;
        }
        case K::Index: {
            KValue base = eval(e->kids[0]);
            auto& vec = std::get<std::vector<long long>>(base);
            long long i = scalar(e->kids[1]);
            if (i < 0 || i >= static_cast<long long>(vec.size()))
                throw RuntimeError("E_INDEX", e->pos,
                                   "index " + std::to_string(i) + " out of bounds (length " +
                                       std::to_string(vec.size()) + ")");
            return vec[static_cast<size_t>(i)];
        }
        case K::Unary: {
            long long v = scalar(e->kids[0]);
            return e->un_op == UnOp::Neg ? -v : static_cast<long long>(v == 0);
        }
        case K::Binary: {
            if (e->bin_op == BinOp::And) {
                return static_cast<long long>(scalar(e->kids[0]) != 0 &&
                                              scalar(e->kids[1]) != 0);
            }
            if (e->bin_op == BinOp::Or) {
                return static_cast<long long>(scalar(e->kids[0]) != 0 ||
                                              scalar(e->kids[1]) != 0);
            }
            long long l = scalar(e->kids[0]);
            long long r = scalar(e->kids[1]);
            switch (e->bin_op) {
            case BinOp::Add: return l + r;
            case BinOp::Sub: return l - r;
            case BinOp::Mul: return l * r;
            case BinOp::Div:
                if (r == 0) throw RuntimeError("E_DIVZERO", e->pos, "division by zero");
                return l / r;
            case BinOp::Mod:
                if (r == 0) throw RuntimeError("E_DIVZERO", e->pos, "modulo by zero");
                return l % r;
            case BinOp::Lt: return l < r;
            case BinOp::Le: return l <= r;
            case BinOp::Gt: return l > r;
            case BinOp::Ge: return l >= r;
            case BinOp::Eq: return l == r;
            case BinOp::Ne: return l != r;
            default: return 0; // And/Or handled above
            }
        }
        case K::If:
            return eval(e->kids[scalar(e->kids[0]) != 0 ? 1 : 2]);
        case K::Call: {
            switch (e->builtin) {
            case Builtin::Min: return std::min(scalar(e->kids[0]), scalar(e->kids[1]));
            case Builtin::Max: return std::max(scalar(e->kids[0]), scalar(e->kids[1]));
            case Builtin::Abs: {
                long long v = scalar(e->kids[0]);
                return v < 0 ? -v : v;
            }
            case Builtin::Clamp: {
                long long x = scalar(e->kids[0]);
                long long lo = scalar(e->kids[1]);
                long long hi = scalar(e->kids[2]);
                return std::min(std::max(x, lo), hi);
            }
            case Builtin::Upd: {
                KValue base = eval(e->kids[0]);
                auto vec = std::get<std::vector<long long>>(std::move(base));
                long long i = scalar(e->kids[1]);
                if (i < 0 || i >= static_cast<long long>(vec.size()))
                    throw RuntimeError("E_INDEX", e->pos,
                                       "upd index " + std::to_string(i) +
                                           " out of bounds (length " +
                                           std::to_string(vec.size()) + ")");
                vec[static_cast<size_t>(i)] = scalar(e->kids[2]);
                return vec;
            }
            }
            return 0ll;
        }
        case K::Let: {
            KValue v = eval(e->kids[0]);
            env_.emplace_back(e->name, std::move(v));
            KValue r = eval(e->kids[1]);
            env_.pop_back();
            return r;
        }
        }
        return 0ll;
    }
};

} // namespace detail

// Big-step evaluation of a kernel on concrete arguments.
inline KValue eval_kernel(const Kernel& k, std::vector<KValue> args) {
    detail::KernelEval ev(k);
    return ev.run(std::move(args));
}

namespace detail {

template <typename Get>
inline std::vector<long long> gather(long long count, Get get) {
    std::vector<long long> out;
    out.reserve(static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i) out.push_back(get(i));
    return out;
}

} // namespace detail

// Reference semantics for one skeleton application on whole images.
inline Value apply_skeleton(const TypedBinding& tb, const std::vector<const Image*>& inputs) {
    const ResolvedCall& rc = tb.call;
    const Image& im = *inputs[0];
    const long long M = im.width;
    const long long N = im.height;

    auto run_kernel = [&](std::vector<KValue> args) {
        return eval_kernel(*rc.kernel, std::move(args));
    };

    switch (rc.kind) {
    case SkeletonKind::MapRow:
    case SkeletonKind::ConcatMapRow: {
        const long long A = rc.chunk_in;
        const long long B = rc.chunk_out;
        Image out((B * M) / A, N);
        for (long long y = 0; y < N; ++y) {
            long long ox = 0;
            for (long long cx = 0; cx < M; cx += A) {
                auto chunk = detail::gather(A, [&](long long i) {
                    return static_cast<long long>(im.at(cx + i, y));
                });
                auto r = std::get<std::vector<long long>>(run_kernel({std::move(chunk)}));
                for (long long v : r) out.set(ox++, y, clamp_pixel(v));
            }
        }
        return out;
    }
    case SkeletonKind::MapCol:
    case SkeletonKind::ConcatMapCol: {
        const long long A = rc.chunk_in;
        const long long B = rc.chunk_out;
        Image out(M, (B * N) / A);
        for (long long x = 0; x < M; ++x) {
            long long oy = 0;
            for (long long cy = 0; cy < N; cy += A) {
                auto chunk = detail::gather(A, [&](long long i) {
                    return static_cast<long long>(im.at(x, cy + i));
                });
                auto r = std::get<std::vector<long long>>(run_kernel({std::move(chunk)}));
                for (long long v : r) out.set(x, oy++, clamp_pixel(v));
            }
        }
        return out;
    }
    case SkeletonKind::ZipWithRow:
    case SkeletonKind::ZipWithCol: {
        const Image& im2 = *inputs[1];
        Image out(M, N);
        for (long long y = 0; y < N; ++y)
            for (long long x = 0; x < M; ++x) {
                auto r = std::get<long long>(run_kernel(
                    {static_cast<long long>(im.at(x, y)),
                     static_cast<long long>(im2.at(x, y))}));
                out.set(x, y, clamp_pixel(r));
            }
        return out;
    }
    case SkeletonKind::CombineRow: {
        const Image& im2 = *inputs[1];
        const long long A = rc.chunk_in;
        const long long B = rc.chunk_out;
        Image out((B * M) / A, N);
        for (long long y = 0; y < N; ++y) {
            long long ox = 0;
            for (long long cx = 0; cx < M; cx += A) {
                auto c1 = detail::gather(A, [&](long long i) {
                    return static_cast<long long>(im.at(cx + i, y));
                });
                auto c2 = detail::gather(A, [&](long long i) {
                    return static_cast<long long>(im2.at(cx + i, y));
                });
                std::vector<long long> r;
                if (rc.is_append) {
                    r = std::move(c1);
                    r.insert(r.end(), c2.begin(), c2.end());
                } else {
                    r = std::get<std::vector<long long>>(
                        run_kernel({std::move(c1), std::move(c2)}));
                }
                for (long long v : r) out.set(ox++, y, clamp_pixel(v));
            }
        }
        return out;
    }
    case SkeletonKind::CombineCol: {
        const Image& im2 = *inputs[1];
        const long long A = rc.chunk_in;
        const long long B = rc.chunk_out;
        Image out(M, (B * N) / A);
        for (long long x = 0; x < M; ++x) {
            long long oy = 0;
            for (long long cy = 0; cy < N; cy += A) {
                auto c1 = detail::gather(A, [&](long long i) {
                    return static_cast<long long>(im.at(x, cy + i));
                });
                auto c2 = detail::gather(A, [&](long long i) {
                    return static_cast<long long>(im2.at(x, cy + i));
                });
                std::vector<long long> r;
                if (rc.is_append) {
                    r = std::move(c1);
                    r.insert(r.end(), c2.begin(), c2.end());
                } else {
                    r = std::get<std::vector<long long>>(
                        run_kernel({std::move(c1), std::move(c2)}));
                }
                for (long long v : r) out.set(x, oy++, clamp_pixel(v));
            }
        }
        return out;
    }
    case SkeletonKind::Convolve: {
        const long long a = rc.win_w;
        const long long b = rc.win_h;
        const long long hw = (a - 1) / 2;
        const long long hh = (b - 1) / 2;
        Image out(M, N);
        std::vector<long long> window(static_cast<size_t>(a * b));
        auto clampc = [](long long v, long long hi) {
            return v < 0 ? 0 : (v > hi ? hi : v);
        };
        for (long long y = 0; y < N; ++y)
            for (long long x = 0; x < M; ++x) {
                size_t k = 0;
                for (long long wy = y - hh; wy <= y + hh; ++wy)
                    for (long long wx = x - hw; wx <= x + hw; ++wx)
                        window[k++] = im.at(clampc(wx, M - 1), clampc(wy, N - 1));
                auto r = std::get<long long>(run_kernel({window}));
                out.set(x, y, clamp_pixel(r));
            }
        return out;
    }
    case SkeletonKind::FoldVector: {
        std::vector<long long> acc(static_cast<size_t>(rc.vec_len), rc.init);
        for (long long y = 0; y < N; ++y)
            for (long long x = 0; x < M; ++x)
                acc = std::get<std::vector<long long>>(run_kernel(
                    {static_cast<long long>(im.at(x, y)), std::move(acc)}));
        return acc;
    }
    case SkeletonKind::FoldScalar: {
        long long acc = rc.init;
        for (long long y = 0; y < N; ++y)
            for (long long x = 0; x < M; ++x)
                acc = std::get<long long>(
                    run_kernel({static_cast<long long>(im.at(x, y)), acc}));
        return acc;
    }
    }
    return 0ll;
}

// Evaluates the whole program sequentially on fully materialized values.
// The simulator is tested against this.
inline std::map<std::string, Value> run_reference(const TypedProgram& tp,
                                                  const std::map<std::string, Image>& inputs) {
    std::map<std::string, Value> env;
    for (const auto& in : tp.program.inputs) {
        auto it = inputs.find(in.name);
        if (it == inputs.end())
            throw RuntimeError("E_INPUT_DIM", in.pos,
                               "no image supplied for input '" + in.name + "'");
        if (it->second.width != in.width || it->second.height != in.height)
            throw RuntimeError("E_INPUT_DIM", in.pos,
                               "input '" + in.name + "' declared " +
                                   std::to_string(in.width) + "x" + std::to_string(in.height) +
                                   " but image is " + std::to_string(it->second.width) + "x" +
                                   std::to_string(it->second.height));
        env[in.name] = it->second;
    }
    for (const auto& tb : tp.bindings) {
        std::vector<const Image*> args;
        for (const auto& img : tb.call.images)
            args.push_back(&std::get<Image>(env.at(img)));
        env[tb.name] = apply_skeleton(tb, args);
    }
    std::map<std::string, Value> out;
    for (const auto& o : tp.program.outputs) out[o.name] = env.at(o.name);
    return out;
}

} // namespace ripl

#endif
