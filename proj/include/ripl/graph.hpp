#ifndef RIPL_GRAPH_HPP
#define RIPL_GRAPH_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ripl/pretty.hpp"
#include "ripl/types.hpp"

namespace ripl {

enum class ActorKind { Source, Sink, Map, ConcatMap, ZipWith, Combine, Convolve, Fold, Transpose };

inline const char* actor_kind_name(ActorKind k) {
    switch (k) {
    case ActorKind::Source: return "Source";
    case ActorKind::Sink: return "Sink";
    case ActorKind::Map: return "Map";
    case ActorKind::ConcatMap: return "ConcatMap";
    case ActorKind::ZipWith: return "ZipWith";
    case ActorKind::Combine: return "Combine";
    case ActorKind::Convolve: return "Convolve";
    case ActorKind::Fold: return "Fold";
    case ActorKind::Transpose: return "Transpose";
    }
    return "?";
}

inline std::optional<ActorKind> actor_kind_from(const std::string& s) {
    static const std::map<std::string, ActorKind> table = {
        {"Source", ActorKind::Source},   {"Sink", ActorKind::Sink},
        {"Map", ActorKind::Map},         {"ConcatMap", ActorKind::ConcatMap},
        {"ZipWith", ActorKind::ZipWith}, {"Combine", ActorKind::Combine},
        {"Convolve", ActorKind::Convolve}, {"Fold", ActorKind::Fold},
        {"Transpose", ActorKind::Transpose},
    };
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

enum class Orientation { RowMajor, ColMajor };

inline const char* orientation_name(Orientation o) {
    return o == Orientation::RowMajor ? "row" : "col";
}

enum class TokenKind { Pixel, Int };

struct FrameShape {
    long long width = 1;
    long long height = 1;
    long long tokens() const { return width * height; }
    bool operator==(const FrameShape&) const = default;
};

struct Port {
    long long rate = 1; // tokens per firing
    bool operator==(const Port&) const = default;
};

struct Actor {
    std::string id;
    ActorKind kind = ActorKind::Map;
    std::vector<Port> in_ports;
    std::vector<Port> out_ports;

    // static parameters, as applicable to the kind
    long long chunk_in = 0;   // A
    long long chunk_out = 0;  // B
    long long win_w = 0;      // convolve a
    long long win_h = 0;      // convolve b
    long long vec_len = 0;    // foldVector s
    long long init = 0;       // fold initial value
    bool is_append = false;
    bool fold_vector = false;
    std::optional<Kernel> kernel; // fire rule; absent for Source/Sink/Transpose/append

    FrameShape in_frame;  // frame carried by the input stream
    FrameShape out_frame; // frame produced per input frame
    Orientation in_orient = Orientation::RowMajor;
    Orientation out_orient = Orientation::RowMajor;

    std::string io_name; // program-level name for Source/Sink
};

struct PortRef {
    int actor = -1;
    int port = -1;
    bool operator==(const PortRef&) const = default;
};

struct Wire {
    PortRef src;
    PortRef dst;
    long long capacity = 1;
    Orientation orient = Orientation::RowMajor;
    TokenKind token = TokenKind::Pixel;
    FrameShape frame; // image the stream carries; tokens per frame = frame.tokens()
};

struct DpnGraph {
    std::vector<Actor> actors;
    std::vector<Wire> wires;

    int find_actor(const std::string& id) const {
        for (size_t i = 0; i < actors.size(); ++i)
            if (actors[i].id == id) return static_cast<int>(i);
        return -1;
    }
};

// Internal buffer footprint in elements (line buffers, frame buffer,
// accumulator, chunk registers). Wire FIFOs are charged separately.
inline long long state_elements(const Actor& a) {
    switch (a.kind) {
    case ActorKind::Source:
    case ActorKind::Sink:
        return 1;
    case ActorKind::Map:
    case ActorKind::ConcatMap:
        return a.chunk_in;
    case ActorKind::ZipWith:
        return 2;
    case ActorKind::Combine:
        return 2 * a.chunk_in;
    case ActorKind::Convolve:
        return (a.win_h - 1) * a.in_frame.width + a.win_w;
    case ActorKind::Transpose:
        return a.in_frame.tokens();
    case ActorKind::Fold:
        return a.fold_vector ? a.vec_len : 1;
    }
    return 0;
}

// Tokens an actor must absorb before its first output; used to balance
// FIFO depths across reconvergent paths.
inline long long warmup_latency(const Actor& a) {
    switch (a.kind) {
    case ActorKind::Source:
    case ActorKind::Sink:
        return 0;
    case ActorKind::Map:
    case ActorKind::ConcatMap:
    case ActorKind::Combine:
        return a.chunk_in;
    case ActorKind::ZipWith:
        return 1;
    case ActorKind::Convolve:
        return (a.win_h - 1) * a.in_frame.width + a.win_w;
    case ActorKind::Transpose:
    case ActorKind::Fold:
        return a.in_frame.tokens();
    }
    return 0;
}

namespace detail {

inline bool kernels_equal(const std::optional<Kernel>& a, const std::optional<Kernel>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return kernel_equal(*a, *b);
}

inline bool actor_equal(const Actor& a, const Actor& b) {
    return a.id == b.id && a.kind == b.kind && a.in_ports == b.in_ports &&
           a.out_ports == b.out_ports && a.chunk_in == b.chunk_in &&
           a.chunk_out == b.chunk_out && a.win_w == b.win_w && a.win_h == b.win_h &&
           a.vec_len == b.vec_len && a.init == b.init && a.is_append == b.is_append &&
           a.fold_vector == b.fold_vector && kernels_equal(a.kernel, b.kernel) &&
           a.in_frame == b.in_frame && a.out_frame == b.out_frame &&
           a.in_orient == b.in_orient && a.out_orient == b.out_orient &&
           a.io_name == b.io_name;
}

} // namespace detail

// Equality up to actor/wire ordering (ids are unique, so they key a
// canonical form).
inline bool graph_equal(const DpnGraph& a, const DpnGraph& b) {
    if (a.actors.size() != b.actors.size() || a.wires.size() != b.wires.size()) return false;

    std::map<std::string, const Actor*> actors_b;
    for (const auto& act : b.actors) actors_b[act.id] = &act;
    for (const auto& act : a.actors) {
        auto it = actors_b.find(act.id);
        if (it == actors_b.end() || !detail::actor_equal(act, *it->second)) return false;
    }

    auto wire_key = [](const DpnGraph& g, const Wire& w) {
        std::ostringstream os;
        os << g.actors[w.src.actor].id << "." << w.src.port << ">"
           << g.actors[w.dst.actor].id << "." << w.dst.port << "|" << w.capacity << "|"
           << orientation_name(w.orient) << "|" << (w.token == TokenKind::Pixel ? "p" : "i")
           << "|" << w.frame.width << "x" << w.frame.height;
        return os.str();
    };
    std::multiset<std::string> wa, wb;
    for (const auto& w : a.wires) wa.insert(wire_key(a, w));
    for (const auto& w : b.wires) wb.insert(wire_key(b, w));
    return wa == wb;
}

// Well-formedness report: empty list means the graph is valid.
inline std::vector<std::string> validate_graph(const DpnGraph& g) {
    std::vector<std::string> bad;
    const size_t n = g.actors.size();

    std::set<std::string> ids;
    for (const auto& a : g.actors)
        if (!ids.insert(a.id).second) bad.push_back("duplicate actor id '" + a.id + "'");

    for (const auto& a : g.actors) {
        size_t want_in = 0;
        switch (a.kind) {
        case ActorKind::Source: want_in = 0; break;
        case ActorKind::ZipWith:
        case ActorKind::Combine: want_in = 2; break;
        default: want_in = 1; break;
        }
        if (a.in_ports.size() != want_in)
            bad.push_back("actor '" + a.id + "' (" + actor_kind_name(a.kind) + ") has " +
                          std::to_string(a.in_ports.size()) + " input ports, expected " +
                          std::to_string(want_in));
        if (a.kind == ActorKind::Sink) {
            if (!a.out_ports.empty())
                bad.push_back("sink '" + a.id + "' has output ports");
        } else if (a.out_ports.empty()) {
            bad.push_back("actor '" + a.id + "' has no output port");
        }
        for (const auto& p : a.in_ports)
            if (p.rate < 1) bad.push_back("actor '" + a.id + "' has non-positive input rate");
        for (const auto& p : a.out_ports)
            if (p.rate < 1) bad.push_back("actor '" + a.id + "' has non-positive output rate");
    }

    // port/wire bijection
    std::map<std::pair<int, int>, int> in_seen, out_seen;
    for (size_t wi = 0; wi < g.wires.size(); ++wi) {
        const Wire& w = g.wires[wi];
        auto port_ok = [&](const PortRef& r, bool is_src) {
            if (r.actor < 0 || r.actor >= static_cast<int>(n)) return false;
            const auto& ports = is_src ? g.actors[r.actor].out_ports : g.actors[r.actor].in_ports;
            return r.port >= 0 && r.port < static_cast<int>(ports.size());
        };
        if (!port_ok(w.src, true)) { bad.push_back("wire " + std::to_string(wi) + " has invalid source"); continue; }
        if (!port_ok(w.dst, false)) { bad.push_back("wire " + std::to_string(wi) + " has invalid destination"); continue; }
        if (++out_seen[{w.src.actor, w.src.port}] > 1)
            bad.push_back("output port " + g.actors[w.src.actor].id + ".p" +
                          std::to_string(w.src.port) + " feeds more than one wire");
        if (++in_seen[{w.dst.actor, w.dst.port}] > 1)
            bad.push_back("input port " + g.actors[w.dst.actor].id + ".p" +
                          std::to_string(w.dst.port) + " has more than one incoming wire");
        if (w.capacity < 1)
            bad.push_back("wire " + std::to_string(wi) + " has capacity < 1");
        if (w.orient != g.actors[w.src.actor].out_orient)
            bad.push_back("wire from '" + g.actors[w.src.actor].id +
                          "' disagrees with producer orientation");
        if (w.orient != g.actors[w.dst.actor].in_orient)
            bad.push_back("wire into '" + g.actors[w.dst.actor].id +
                          "' disagrees with consumer orientation");
    }
    for (size_t ai = 0; ai < n; ++ai) {
        for (size_t pi = 0; pi < g.actors[ai].in_ports.size(); ++pi)
            if (!in_seen.count({static_cast<int>(ai), static_cast<int>(pi)}))
                bad.push_back("unconnected port: " + g.actors[ai].id + " input p" +
                              std::to_string(pi));
        for (size_t pi = 0; pi < g.actors[ai].out_ports.size(); ++pi)
            if (!out_seen.count({static_cast<int>(ai), static_cast<int>(pi)}))
                bad.push_back("unconnected port: " + g.actors[ai].id + " output p" +
                              std::to_string(pi));
    }

    // acyclicity (Kahn)
    {
        std::vector<int> indeg(n, 0);
        for (const auto& w : g.wires)
            if (w.dst.actor >= 0 && w.dst.actor < static_cast<int>(n)) ++indeg[w.dst.actor];
        std::vector<int> ready;
        for (size_t i = 0; i < n; ++i)
            if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
        size_t removed = 0;
        while (!ready.empty()) {
            int v = ready.back();
            ready.pop_back();
            ++removed;
            for (const auto& w : g.wires)
                if (w.src.actor == v && --indeg[w.dst.actor] == 0) ready.push_back(w.dst.actor);
        }
        if (removed != n) bad.push_back("cycle: the graph is not acyclic");
    }

    // connectivity (undirected reach from actor 0)
    if (n > 0) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& w : g.wires) {
                int o = -1;
                if (w.src.actor == v) o = w.dst.actor;
                else if (w.dst.actor == v) o = w.src.actor;
                if (o >= 0 && o < static_cast<int>(n) && !seen[o]) {
                    seen[o] = 1;
                    stack.push_back(o);
                }
            }
        }
        for (size_t i = 0; i < n; ++i)
            if (!seen[i]) {
                bad.push_back("graph is not connected");
                break;
            }
    }

    return bad;
}

// Deterministic topological order; ties broken by actor id. Used by the
// emitters so output is reproducible.
inline std::vector<int> topo_order(const DpnGraph& g) {
    const size_t n = g.actors.size();
    std::vector<int> indeg(n, 0);
    for (const auto& w : g.wires) ++indeg[w.dst.actor];
    auto cmp = [&](int x, int y) { return g.actors[x].id < g.actors[y].id; };
    std::vector<int> ready;
    for (size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
    std::sort(ready.begin(), ready.end(), cmp);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int v = ready.front();
        ready.erase(ready.begin());
        order.push_back(v);
        std::vector<int> next;
        for (const auto& w : g.wires)
            if (w.src.actor == v && --indeg[w.dst.actor] == 0) next.push_back(w.dst.actor);
        std::sort(next.begin(), next.end(), cmp);
        // merge, keeping the ready list sorted
        for (int x : next) {
            auto it = std::lower_bound(ready.begin(), ready.end(), x, cmp);
            ready.insert(it, x);
        }
    }
    return order;
}

} // namespace ripl

#endif
