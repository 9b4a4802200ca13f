#ifndef RIPL_EMIT_HPP
#define RIPL_EMIT_HPP

#include <sstream>
#include <string>
#include <vector>

#include "ripl/graph.hpp"
#include "ripl/parser.hpp"
#include "ripl/pretty.hpp"

namespace ripl {

constexpr const char* kToolVersion = "0.1.0";

namespace detail {

// Edges in deterministic order: by producer's topological position,
// then by output port.
inline std::vector<int> ordered_wires(const DpnGraph& g, const std::vector<int>& order) {
    std::vector<int> pos(g.actors.size());
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
    std::vector<int> wires(g.wires.size());
    for (size_t i = 0; i < wires.size(); ++i) wires[i] = static_cast<int>(i);
    std::sort(wires.begin(), wires.end(), [&](int a, int b) {
        const Wire& wa = g.wires[a];
        const Wire& wb = g.wires[b];
        if (pos[wa.src.actor] != pos[wb.src.actor]) return pos[wa.src.actor] < pos[wb.src.actor];
        return wa.src.port < wb.src.port;
    });
    return wires;
}

} // namespace detail

// GraphViz DOT rendering: one box per actor, one edge per wire.
inline std::string emit_dot(const DpnGraph& g) {
    std::ostringstream os;
    os << "digraph ripl {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=box];\n";
    auto order = topo_order(g);
    for (int ai : order) {
        const Actor& a = g.actors[ai];
        os << "  \"" << a.id << "\" [label=\"" << actor_kind_name(a.kind) << "\\n" << a.id
           << "\\nstate=" << state_elements(a) << "\"];\n";
    }
    for (int wi : detail::ordered_wires(g, order)) {
        const Wire& w = g.wires[wi];
        os << "  \"" << g.actors[w.src.actor].id << "\" -> \"" << g.actors[w.dst.actor].id
           << "\" [label=\"depth=" << w.capacity << " " << orientation_name(w.orient)
           << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

// CAL-inspired textual actor IR. Captures everything needed to rebuild
// the graph, and read_actor_ir of the emitted text reproduces it exactly.
inline std::string emit_actor_ir(const DpnGraph& g) {
    std::ostringstream os;
    os << "ripl-ir " << kToolVersion << "\n";
    auto order = topo_order(g);
    for (int ai : order) {
        const Actor& a = g.actors[ai];
        os << "actor " << a.id << " : " << actor_kind_name(a.kind) << "\n";
        if (!a.io_name.empty()) os << "  io " << a.io_name << "\n";
        os << "  frame " << a.in_frame.width << "x" << a.in_frame.height << " -> "
           << a.out_frame.width << "x" << a.out_frame.height << "\n";
        os << "  orient " << orientation_name(a.in_orient) << " -> "
           << orientation_name(a.out_orient) << "\n";
        for (size_t pi = 0; pi < a.in_ports.size(); ++pi)
            os << "  in p" << pi << " rate " << a.in_ports[pi].rate << "\n";
        for (size_t pi = 0; pi < a.out_ports.size(); ++pi) {
            os << "  out p" << pi << " rate " << a.out_ports[pi].rate;
            if (a.kind == ActorKind::Fold) os << " per-frame";
            os << "\n";
        }
        switch (a.kind) {
        case ActorKind::Map:
            os << "  param A=" << a.chunk_in << "\n";
            break;
        case ActorKind::ConcatMap:
            os << "  param A=" << a.chunk_in << " B=" << a.chunk_out << "\n";
            break;
        case ActorKind::Combine:
            os << "  param A=" << a.chunk_in << " B=" << a.chunk_out
               << " append=" << (a.is_append ? 1 : 0) << "\n";
            break;
        case ActorKind::Convolve:
            os << "  param a=" << a.win_w << " b=" << a.win_h << "\n";
            break;
        case ActorKind::Fold:
            if (a.fold_vector)
                os << "  param s=" << a.vec_len << " init=" << a.init << " mode=vector\n";
            else
                os << "  param init=" << a.init << " mode=scalar\n";
            break;
        default:
            break;
        }
        os << "  state " << state_elements(a) << "\n";
        if (a.kernel) os << "  fire { " << pretty_kernel(*a.kernel) << " }\n";
        else if (a.is_append) os << "  fire { append }\n";
    }
    for (int wi : detail::ordered_wires(g, order)) {
        const Wire& w = g.wires[wi];
        os << "wire " << g.actors[w.src.actor].id << ".p" << w.src.port << " -> "
           << g.actors[w.dst.actor].id << ".p" << w.dst.port << " depth " << w.capacity << " "
           << orientation_name(w.orient) << " "
           << (w.token == TokenKind::Pixel ? "pixel" : "int") << " " << w.frame.width << "x"
           << w.frame.height << "\n";
    }
    return os.str();
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline bool parse_frame_pair(const std::string& s, FrameShape& f) {
    auto x = s.find('x');
    if (x == std::string::npos) return false;
    try {
        f.width = std::stoll(s.substr(0, x));
        f.height = std::stoll(s.substr(x + 1));
    } catch (...) {
        return false;
    }
    return true;
}

inline bool parse_port_ref(const std::string& s, const DpnGraph& g, PortRef& r) {
    auto dot = s.rfind(".p");
    if (dot == std::string::npos) return false;
    r.actor = g.find_actor(s.substr(0, dot));
    if (r.actor < 0) return false;
    try {
        r.port = std::stoi(s.substr(dot + 2));
    } catch (...) {
        return false;
    }
    return true;
}

} // namespace detail

// Reads the actor-IR format back into a graph. Exists so tests can prove
// the IR loses nothing; diagnostics carry the 1-based line number.
inline Result<DpnGraph> read_actor_ir(const std::string& text) {
    DpnGraph g;
    std::vector<Diag> diags;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    Actor* cur = nullptr;
    bool saw_header = false;

    auto err = [&](const std::string& msg) {
        diags.push_back(Diag{"E_IR", SourcePos{lineno, 1}, msg});
    };

    while (std::getline(is, line)) {
        ++lineno;
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        if (!saw_header) {
            if (toks.size() != 2 || toks[0] != "ripl-ir") {
                err("expected 'ripl-ir <version>' header");
                return Result<DpnGraph>::failure(std::move(diags));
            }
            saw_header = true;
            continue;
        }
        const std::string& key = toks[0];
        if (key == "actor") {
            if (toks.size() != 4 || toks[2] != ":") { err("malformed actor line"); continue; }
            Actor a;
            a.id = toks[1];
            auto k = actor_kind_from(toks[3]);
            if (!k) { err("unknown actor kind '" + toks[3] + "'"); continue; }
            a.kind = *k;
            g.actors.push_back(std::move(a));
            cur = &g.actors.back();
        } else if (key == "io") {
            if (!cur || toks.size() != 2) { err("malformed io line"); continue; }
            cur->io_name = toks[1];
        } else if (key == "frame") {
            if (!cur || toks.size() != 4 || toks[2] != "->" ||
                !detail::parse_frame_pair(toks[1], cur->in_frame) ||
                !detail::parse_frame_pair(toks[3], cur->out_frame))
                err("malformed frame line");
        } else if (key == "orient") {
            if (!cur || toks.size() != 4 || toks[2] != "->") { err("malformed orient line"); continue; }
            cur->in_orient = toks[1] == "col" ? Orientation::ColMajor : Orientation::RowMajor;
            cur->out_orient = toks[3] == "col" ? Orientation::ColMajor : Orientation::RowMajor;
        } else if (key == "in" || key == "out") {
            if (!cur || toks.size() < 4 || toks[2] != "rate") { err("malformed port line"); continue; }
            Port p;
            try { p.rate = std::stoll(toks[3]); } catch (...) { err("bad rate"); continue; }
            if (key == "in") cur->in_ports.push_back(p);
            else cur->out_ports.push_back(p);
        } else if (key == "param") {
            if (!cur) { err("param outside actor"); continue; }
            for (size_t i = 1; i < toks.size(); ++i) {
                auto eq = toks[i].find('=');
                if (eq == std::string::npos) { err("malformed param"); continue; }
                std::string name = toks[i].substr(0, eq);
                std::string val = toks[i].substr(eq + 1);
                if (name == "mode") {
                    cur->fold_vector = val == "vector";
                    continue;
                }
                long long v = 0;
                try { v = std::stoll(val); } catch (...) { err("bad param value"); continue; }
                if (name == "A") cur->chunk_in = v;
                else if (name == "B") cur->chunk_out = v;
                else if (name == "a") cur->win_w = v;
                else if (name == "b") cur->win_h = v;
                else if (name == "s") { cur->vec_len = v; }
                else if (name == "init") cur->init = v;
                else if (name == "append") cur->is_append = v != 0;
                else err("unknown param '" + name + "'");
            }
            if (cur->kind == ActorKind::Map) cur->chunk_out = cur->chunk_in;
        } else if (key == "state") {
            // derived; nothing to restore
        } else if (key == "fire") {
            if (!cur) { err("fire outside actor"); continue; }
            auto open = line.find('{');
            auto close = line.rfind('}');
            if (open == std::string::npos || close == std::string::npos || close <= open) {
                err("malformed fire line");
                continue;
            }
            std::string body = line.substr(open + 1, close - open - 1);
            // trim
            while (!body.empty() && body.front() == ' ') body.erase(body.begin());
            while (!body.empty() && body.back() == ' ') body.pop_back();
            if (body == "append") {
                cur->is_append = true;
            } else {
                auto k = parse_kernel_text(body);
                if (!k.ok()) {
                    err("unparsable kernel in fire rule");
                    continue;
                }
                cur->kernel = std::move(*k);
            }
        } else if (key == "wire") {
            // wire SRC.pN -> DST.pM depth D orient token WxH
            if (toks.size() != 9 || toks[2] != "->" || toks[4] != "depth") {
                err("malformed wire line");
                continue;
            }
            Wire w;
            if (!detail::parse_port_ref(toks[1], g, w.src)) { err("unknown wire source"); continue; }
            if (!detail::parse_port_ref(toks[3], g, w.dst)) { err("unknown wire destination"); continue; }
            try { w.capacity = std::stoll(toks[5]); } catch (...) { err("bad depth"); continue; }
            w.orient = toks[6] == "col" ? Orientation::ColMajor : Orientation::RowMajor;
            w.token = toks[7] == "int" ? TokenKind::Int : TokenKind::Pixel;
            if (!detail::parse_frame_pair(toks[8], w.frame)) { err("bad wire frame"); continue; }
            g.wires.push_back(w);
        } else {
            err("unknown line '" + key + "'");
        }
    }
    if (!saw_header) err("empty IR document");
    if (!diags.empty()) return Result<DpnGraph>::failure(std::move(diags));
    return Result<DpnGraph>::success(std::move(g));
}

} // namespace ripl

#endif
