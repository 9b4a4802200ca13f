#ifndef RIPL_LOWER_HPP
#define RIPL_LOWER_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ripl/graph.hpp"

namespace ripl {

constexpr long long kDefaultFifoDepth = 8;

namespace detail {

inline FrameShape frame_of(const ValueType& t) {
    if (auto* im = std::get_if<ImageType>(&t)) return FrameShape{im->width, im->height};
    if (auto* v = std::get_if<VectorType>(&t)) return FrameShape{v->length, 1};
    return FrameShape{1, 1};
}

inline TokenKind token_of(const ValueType& t) {
    return std::holds_alternative<ImageType>(t) ? TokenKind::Pixel : TokenKind::Int;
}

inline ActorKind actor_kind_of(SkeletonKind k) {
    switch (k) {
    case SkeletonKind::MapRow:
    case SkeletonKind::MapCol: return ActorKind::Map;
    case SkeletonKind::ConcatMapRow:
    case SkeletonKind::ConcatMapCol: return ActorKind::ConcatMap;
    case SkeletonKind::ZipWithRow:
    case SkeletonKind::ZipWithCol: return ActorKind::ZipWith;
    case SkeletonKind::CombineRow:
    case SkeletonKind::CombineCol: return ActorKind::Combine;
    case SkeletonKind::Convolve: return ActorKind::Convolve;
    case SkeletonKind::FoldVector:
    case SkeletonKind::FoldScalar: return ActorKind::Fold;
    }
    return ActorKind::Map;
}

} // namespace detail

// One Source per input, one actor per binding, one Sink per output.
// Fan-out becomes extra output ports on the producer; wires are
// point-to-point. Orientation requirements are annotated but adapters
// are not inserted yet.
inline DpnGraph build_graph(const TypedProgram& tp) {
    DpnGraph g;
    std::map<std::string, int> producer; // name -> actor index

    for (const auto& in : tp.program.inputs) {
        Actor a;
        a.id = "src_" + in.name;
        a.kind = ActorKind::Source;
        a.io_name = in.name;
        a.out_frame = FrameShape{in.width, in.height};
        a.in_frame = a.out_frame;
        a.in_orient = a.out_orient = Orientation::RowMajor;
        producer[in.name] = static_cast<int>(g.actors.size());
        g.actors.push_back(std::move(a));
    }

    std::map<std::string, const TypedBinding*> binding_of;
    for (const auto& tb : tp.bindings) binding_of[tb.name] = &tb;

    for (const auto& tb : tp.bindings) {
        Actor a;
        a.id = tb.name;
        a.kind = detail::actor_kind_of(tb.call.kind);
        a.chunk_in = tb.call.chunk_in;
        a.chunk_out = tb.call.chunk_out;
        a.win_w = tb.call.win_w;
        a.win_h = tb.call.win_h;
        a.vec_len = tb.call.vec_len;
        a.init = tb.call.init;
        a.is_append = tb.call.is_append;
        a.fold_vector = tb.call.kind == SkeletonKind::FoldVector;
        a.kernel = tb.call.kernel;
        a.in_frame = detail::frame_of(tp.type_of.at(tb.call.images[0]));
        a.out_frame = detail::frame_of(tb.result);
        Orientation o = is_row_wise(tb.call.kind) ? Orientation::RowMajor : Orientation::ColMajor;
        a.in_orient = a.out_orient = o;
        a.in_ports.resize(tb.call.images.size());
        producer[tb.name] = static_cast<int>(g.actors.size());
        g.actors.push_back(std::move(a));
    }

    // wire every reference, adding one output port per consumer
    auto connect = [&](const std::string& name, int dst_actor, int dst_port) {
        int src = producer.at(name);
        Actor& pa = g.actors[src];
        int src_port = static_cast<int>(pa.out_ports.size());
        pa.out_ports.push_back(Port{});
        Wire w;
        w.src = PortRef{src, src_port};
        w.dst = PortRef{dst_actor, dst_port};
        w.orient = pa.out_orient;
        w.frame = pa.out_frame;
        w.token = pa.kind == ActorKind::Fold ? TokenKind::Int : TokenKind::Pixel;
        g.wires.push_back(w);
    };

    for (const auto& tb : tp.bindings) {
        int self = producer.at(tb.name);
        for (size_t i = 0; i < tb.call.images.size(); ++i)
            connect(tb.call.images[i], self, static_cast<int>(i));
    }

    std::map<std::string, int> sink_count;
    for (const auto& o : tp.program.outputs) {
        Actor a;
        int n = sink_count[o.name]++;
        a.id = n == 0 ? "sink_" + o.name : "sink_" + o.name + "_" + std::to_string(n + 1);
        a.kind = ActorKind::Sink;
        a.io_name = o.name;
        int src = producer.at(o.name);
        a.in_frame = g.actors[src].out_frame;
        a.out_frame = a.in_frame;
        // sinks take the stream in whatever orientation it arrives
        a.in_orient = a.out_orient = g.actors[src].out_orient;
        a.in_ports.resize(1);
        int self = static_cast<int>(g.actors.size());
        g.actors.push_back(std::move(a));
        connect(o.name, self, 0);
    }

    return g;
}

// Splices a Transpose actor into every wire whose producer orientation
// differs from the consumer requirement. Running it twice changes nothing.
inline DpnGraph insert_orientation_adapters(DpnGraph g) {
    int next_id = 0;
    for (const auto& a : g.actors)
        if (a.kind == ActorKind::Transpose) ++next_id;

    const size_t original = g.wires.size();
    for (size_t wi = 0; wi < original; ++wi) {
        Orientation need = g.actors[g.wires[wi].dst.actor].in_orient;
        if (g.wires[wi].orient == need) continue;

        Actor t;
        t.id = "tr" + std::to_string(next_id++);
        t.kind = ActorKind::Transpose;
        t.in_frame = t.out_frame = g.wires[wi].frame;
        t.in_orient = g.wires[wi].orient;
        t.out_orient = need;
        t.in_ports.resize(1);
        t.out_ports.resize(1);
        int ti = static_cast<int>(g.actors.size());

        Wire tail;
        tail.src = PortRef{ti, 0};
        tail.dst = g.wires[wi].dst;
        tail.orient = need;
        tail.token = g.wires[wi].token;
        tail.frame = g.wires[wi].frame;
        tail.capacity = g.wires[wi].capacity;

        g.wires[wi].dst = PortRef{ti, 0};
        g.actors.push_back(std::move(t));
        g.wires.push_back(tail);
    }
    return g;
}

// Static token rates per firing, straight from the chunk sizes.
inline DpnGraph assign_rates(DpnGraph g) {
    for (auto& a : g.actors) {
        long long in_rate = 1, out_rate = 1;
        switch (a.kind) {
        case ActorKind::Map: in_rate = out_rate = a.chunk_in; break;
        case ActorKind::ConcatMap: in_rate = a.chunk_in; out_rate = a.chunk_out; break;
        case ActorKind::Combine: in_rate = a.chunk_in; out_rate = a.chunk_out; break;
        case ActorKind::Fold: in_rate = 1; out_rate = a.fold_vector ? a.vec_len : 1; break;
        default: break; // Source, Sink, ZipWith, Convolve, Transpose all 1
        }
        for (auto& p : a.in_ports) p.rate = in_rate;
        for (auto& p : a.out_ports) p.rate = out_rate;
    }
    return g;
}

namespace detail {

// All simple paths (as wire-index sequences) from any root to `actor`,
// walking incoming wires. Capped so pathological graphs stay cheap.
inline void paths_into(const DpnGraph& g, int actor,
                       const std::vector<std::vector<int>>& incoming,
                       std::vector<int>& cur, std::vector<std::vector<int>>& out,
                       size_t cap) {
    if (out.size() >= cap) return;
    if (incoming[actor].empty()) {
        std::vector<int> path(cur.rbegin(), cur.rend());
        out.push_back(std::move(path));
        return;
    }
    for (int wi : incoming[actor]) {
        cur.push_back(wi);
        paths_into(g, g.wires[wi].src.actor, incoming, cur, out, cap);
        cur.pop_back();
    }
}

inline std::vector<int> path_actors(const DpnGraph& g, const std::vector<int>& wires) {
    std::vector<int> actors;
    if (wires.empty()) return actors;
    actors.push_back(g.wires[wires.front()].src.actor);
    for (int wi : wires) actors.push_back(g.wires[wi].dst.actor);
    return actors;
}

} // namespace detail

// Every wire starts at the default depth (floored by its endpoint rates,
// so a firing can always fit). Then reconvergent fan-out/join path pairs
// are balanced: the shallower branch gains enough total slack to cover
// the warm-up latency difference, which is what keeps joins fed behind a
// slow branch such as a convolution warming up its line buffers.
inline DpnGraph assign_fifo_depths(DpnGraph g, long long default_depth = kDefaultFifoDepth) {
    for (auto& w : g.wires) {
        long long src_rate = g.actors[w.src.actor].out_ports[w.src.port].rate;
        long long dst_rate = g.actors[w.dst.actor].in_ports[w.dst.port].rate;
        w.capacity = std::max({default_depth, src_rate, dst_rate});
    }

    std::vector<std::vector<int>> incoming(g.actors.size());
    for (size_t wi = 0; wi < g.wires.size(); ++wi)
        incoming[g.wires[wi].dst.actor].push_back(static_cast<int>(wi));

    constexpr size_t kPathCap = 20000;

    for (size_t ji = 0; ji < g.actors.size(); ++ji) {
        const Actor& join = g.actors[ji];
        if (join.kind != ActorKind::ZipWith && join.kind != ActorKind::Combine) continue;
        if (incoming[ji].size() != 2) continue;

        auto collect = [&](int first_wire) {
            std::vector<std::vector<int>> paths;
            std::vector<int> cur{first_wire};
            detail::paths_into(g, g.wires[first_wire].src.actor, incoming, cur, paths, kPathCap);
            return paths;
        };
        auto paths0 = collect(incoming[ji][0]);
        auto paths1 = collect(incoming[ji][1]);

        for (const auto& pa : paths0) {
            auto actors_a = detail::path_actors(g, pa);
            for (const auto& pb : paths1) {
                auto actors_b = detail::path_actors(g, pb);
                // deepest actor the two paths share (they end at the join,
                // which is not part of either actor list's tail... the join
                // is the last element of both; skip it)
                int fork = -1;
                size_t fork_pos_a = 0;
                for (size_t i = actors_a.size() - 1; i-- > 0;) {
                    int cand = actors_a[i];
                    bool in_b = false;
                    for (size_t jb = 0; jb + 1 < actors_b.size(); ++jb)
                        if (actors_b[jb] == cand) { in_b = true; break; }
                    if (in_b) { fork = cand; fork_pos_a = i; break; }
                }
                if (fork < 0) continue;

                size_t fork_pos_b = 0;
                for (size_t jb = 0; jb + 1 < actors_b.size(); ++jb)
                    if (actors_b[jb] == fork) fork_pos_b = jb;

                auto segment_latency = [&](const std::vector<int>& actors, size_t from) {
                    long long lat = 0;
                    for (size_t i = from + 1; i + 1 < actors.size(); ++i)
                        lat += warmup_latency(g.actors[actors[i]]);
                    return lat;
                };
                auto segment_wires = [&](const std::vector<int>& wires, size_t from) {
                    // wires[i] connects actors[i] -> actors[i+1]
                    return std::vector<int>(wires.begin() + from, wires.end());
                };

                long long la = segment_latency(actors_a, fork_pos_a);
                long long lb = segment_latency(actors_b, fork_pos_b);
                if (la == lb) continue;
                long long delta = la < lb ? lb - la : la - lb;
                auto seg = la < lb ? segment_wires(pa, fork_pos_a) : segment_wires(pb, fork_pos_b);

                long long have = 0;
                for (int wi : seg) have += g.wires[wi].capacity;
                long long need = delta + 1;
                if (have >= need) continue;
                long long per = (need + static_cast<long long>(seg.size()) - 1) /
                                static_cast<long long>(seg.size());
                for (int wi : seg)
                    g.wires[wi].capacity = std::max(g.wires[wi].capacity, per);
            }
        }
    }
    return g;
}

// The whole lowering pipeline.
inline DpnGraph lower(const TypedProgram& tp, long long default_depth = kDefaultFifoDepth) {
    return assign_fifo_depths(assign_rates(insert_orientation_adapters(build_graph(tp))),
                              default_depth);
}

} // namespace ripl

#endif
