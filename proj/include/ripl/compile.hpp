#ifndef RIPL_COMPILE_HPP
#define RIPL_COMPILE_HPP

#include <string_view>

#include "ripl/check.hpp"
#include "ripl/lower.hpp"
#include "ripl/parser.hpp"
#include "ripl/typecheck.hpp"

namespace ripl {

struct CompileOptions {
    long long fifo_depth = kDefaultFifoDepth;
    bool require_image_outputs = false;
};

struct Compiled {
    TypedProgram typed;
    DpnGraph graph;
};

// parse -> check -> infer sizes -> lower -> validate.
inline Result<Compiled> compile_source(std::string_view source, CompileOptions opts = {}) {
    auto parsed = parse(source);
    if (!parsed.ok()) return Result<Compiled>::failure(std::move(parsed.diags));

    auto checked = check_program(*parsed);
    if (!checked.ok()) return Result<Compiled>::failure(std::move(checked.diags));

    auto typed = infer_sizes(*checked, InferOptions{opts.require_image_outputs});
    if (!typed.ok()) return Result<Compiled>::failure(std::move(typed.diags));

    Compiled c;
    c.typed = std::move(*typed);
    c.graph = lower(c.typed, opts.fifo_depth);

    auto violations = validate_graph(c.graph);
    if (!violations.empty()) {
        std::vector<Diag> diags;
        for (const auto& v : violations)
            diags.push_back(Diag{"E_GRAPH", SourcePos{0, 0}, v});
        return Result<Compiled>::failure(std::move(diags));
    }
    return Result<Compiled>::success(std::move(c));
}

} // namespace ripl

#endif
