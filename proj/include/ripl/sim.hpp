#ifndef RIPL_SIM_HPP
#define RIPL_SIM_HPP

#include <deque>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ripl/eval.hpp"
#include "ripl/lower.hpp"

namespace ripl {

struct SimConfig {
    long long frames = 1;
    long long max_ticks = 0; // 0 = derive from frame size and warm-up latency
    bool trace = false;
    std::ostream* trace_out = nullptr;
};

struct WireStats {
    long long max_occupancy = 0;
    long long total_pushed = 0;
    long long total_popped = 0;
};

struct SimStats {
    long long ticks = 0;
    std::vector<long long> firings;    // per actor
    std::vector<long long> peak_state; // per actor, elements
    std::vector<WireStats> wires;
    // per sink id: completion tick of each frame
    std::map<std::string, std::vector<long long>> sink_frame_ticks;
    std::map<std::string, long long> sink_first_token_tick;
    // per sink id: (tick at 25% of expected tokens, tick at 75%)
    std::map<std::string, std::pair<long long, long long>> sink_quartile_ticks;
};

struct SimResult {
    std::map<std::string, std::vector<Value>> outputs; // out name -> per-frame value
    SimStats stats;
};

namespace detail {

struct ActorRt {
    // Source
    long long src_emitted = 0;
    // Sink
    std::vector<long long> sink_tokens;
    // Convolve: ring holds stream pixels [base, consumed) of the current frame
    std::deque<long long> ring;
    long long base = 0, consumed = 0, produced = 0;
    // Transpose
    std::vector<long long> tbuf;
    long long filled = 0, drained = 0;
    // Fold
    std::vector<long long> acc_vec;
    long long acc = 0;
    long long fold_count = 0;
};

struct FirePlan {
    bool fire = false;
    bool consume = false; // Convolve only: this firing pulls one pixel
    bool produce = false; // Convolve only: this firing emits one pixel
};

class Simulator {
public:
    Simulator(const DpnGraph& g, const std::map<std::string, std::vector<Image>>& inputs,
              const SimConfig& cfg)
        : g_(g), cfg_(cfg) {
        fifo_.resize(g.wires.size());
        out_wires_.resize(g.actors.size());
        in_wires_.resize(g.actors.size());
        for (size_t wi = 0; wi < g.wires.size(); ++wi) {
            const Wire& w = g.wires[wi];
            auto& ow = out_wires_[w.src.actor];
            if (ow.size() <= static_cast<size_t>(w.src.port)) ow.resize(w.src.port + 1, -1);
            ow[w.src.port] = static_cast<int>(wi);
            auto& iw = in_wires_[w.dst.actor];
            if (iw.size() <= static_cast<size_t>(w.dst.port)) iw.resize(w.dst.port + 1, -1);
            iw[w.dst.port] = static_cast<int>(wi);
        }

        rt_.resize(g.actors.size());
        stats_.firings.assign(g.actors.size(), 0);
        stats_.peak_state.assign(g.actors.size(), 0);
        stats_.wires.assign(g.wires.size(), WireStats{});

        for (size_t ai = 0; ai < g.actors.size(); ++ai) {
            const Actor& a = g.actors[ai];
            if (a.kind == ActorKind::Source) {
                auto it = inputs.find(a.io_name);
                if (it == inputs.end())
                    throw RuntimeError("E_INPUT_DIM", {}, "no image supplied for input '" +
                                                              a.io_name + "'");
                if (static_cast<long long>(it->second.size()) < cfg.frames)
                    throw RuntimeError("E_INPUT_DIM", {}, "input '" + a.io_name + "' has " +
                                                              std::to_string(it->second.size()) +
                                                              " frame(s), need " +
                                                              std::to_string(cfg.frames));
                for (const Image& im : it->second) {
                    if (im.width != a.out_frame.width || im.height != a.out_frame.height)
                        throw RuntimeError("E_INPUT_DIM", {}, "input '" + a.io_name + "' declared " +
                                                                  frame_text(a.out_frame) +
                                                                  " but image is " +
                                                                  std::to_string(im.width) + "x" +
                                                                  std::to_string(im.height));
                }
                frames_[a.io_name] = &it->second;
            } else if (a.kind == ActorKind::Transpose) {
                rt_[ai].tbuf.assign(static_cast<size_t>(a.in_frame.tokens()), 0);
            } else if (a.kind == ActorKind::Fold) {
                if (a.fold_vector)
                    rt_[ai].acc_vec.assign(static_cast<size_t>(a.vec_len), a.init);
                else
                    rt_[ai].acc = a.init;
            }
        }
    }

    SimResult run() {
        const long long max_ticks = cfg_.max_ticks > 0 ? cfg_.max_ticks : default_max_ticks();
        std::vector<FirePlan> plans(g_.actors.size());
        std::vector<long long> avail(g_.wires.size());
        std::vector<std::vector<long long>> staged(g_.wires.size());

        while (!all_sinks_done()) {
            if (stats_.ticks >= max_ticks)
                throw RuntimeError("E_TICK_LIMIT", {},
                                   "no completion after " + std::to_string(max_ticks) + " ticks",
                                   diagnose());
            ++stats_.ticks;

            for (size_t wi = 0; wi < g_.wires.size(); ++wi)
                avail[wi] = static_cast<long long>(fifo_[wi].size());

            bool any = false;
            for (size_t ai = 0; ai < g_.actors.size(); ++ai) {
                plans[ai] = plan(static_cast<int>(ai), avail);
                any = any || plans[ai].fire;
            }
            if (!any) {
                --stats_.ticks;
                throw RuntimeError("E_DEADLOCK", {},
                                   "deadlock at tick " + std::to_string(stats_.ticks), diagnose());
            }

            for (size_t ai = 0; ai < g_.actors.size(); ++ai) {
                if (!plans[ai].fire) continue;
                execute(static_cast<int>(ai), plans[ai], staged);
                ++stats_.firings[ai];
            }

            for (size_t wi = 0; wi < g_.wires.size(); ++wi) {
                if (!staged[wi].empty()) {
                    for (long long v : staged[wi]) fifo_[wi].push_back(v);
                    stats_.wires[wi].total_pushed += static_cast<long long>(staged[wi].size());
                    staged[wi].clear();
                }
                long long occ = static_cast<long long>(fifo_[wi].size());
                if (occ > g_.wires[wi].capacity)
                    throw std::logic_error("fifo over capacity on wire " + wire_name(wi));
                if (stats_.wires[wi].total_pushed - stats_.wires[wi].total_popped != occ)
                    throw std::logic_error("token conservation broken on wire " + wire_name(wi));
                if (occ > stats_.wires[wi].max_occupancy) stats_.wires[wi].max_occupancy = occ;
            }

            note_state_peaks();

            if (cfg_.trace && cfg_.trace_out) trace_line(plans);
        }

        SimResult res;
        res.stats = std::move(stats_);
        for (size_t ai = 0; ai < g_.actors.size(); ++ai) {
            const Actor& a = g_.actors[ai];
            if (a.kind != ActorKind::Sink) continue;
            res.outputs[a.io_name] = assemble_sink(static_cast<int>(ai));
        }
        return res;
    }

    // Blocking explanation for every actor plus wire occupancies.
    std::string diagnose() const {
        std::ostringstream os;
        std::vector<long long> avail(g_.wires.size());
        for (size_t wi = 0; wi < g_.wires.size(); ++wi)
            avail[wi] = static_cast<long long>(fifo_[wi].size());
        for (size_t ai = 0; ai < g_.actors.size(); ++ai)
            os << "actor " << g_.actors[ai].id << ": " << explain(static_cast<int>(ai), avail)
               << "\n";
        for (size_t wi = 0; wi < g_.wires.size(); ++wi)
            os << "wire " << wire_name(wi) << ": " << fifo_[wi].size() << "/"
               << g_.wires[wi].capacity << "\n";
        return os.str();
    }

private:
    const DpnGraph& g_;
    SimConfig cfg_;
    std::map<std::string, const std::vector<Image>*> frames_;
    std::vector<std::deque<long long>> fifo_;
    std::vector<std::vector<int>> out_wires_, in_wires_;
    std::vector<ActorRt> rt_;
    SimStats stats_;

    static std::string frame_text(const FrameShape& f) {
        return std::to_string(f.width) + "x" + std::to_string(f.height);
    }

    std::string wire_name(size_t wi) const {
        const Wire& w = g_.wires[wi];
        return g_.actors[w.src.actor].id + ".p" + std::to_string(w.src.port) + "->" +
               g_.actors[w.dst.actor].id + ".p" + std::to_string(w.dst.port);
    }

    long long default_max_ticks() const {
        long long max_frame = 1, warmup = 0;
        for (const auto& w : g_.wires) max_frame = std::max(max_frame, w.frame.tokens());
        for (const auto& a : g_.actors) warmup += warmup_latency(a);
        return 10 * cfg_.frames * (max_frame + warmup);
    }

    long long sink_expected(int ai) const {
        return cfg_.frames * g_.actors[ai].in_frame.tokens();
    }

    bool all_sinks_done() const {
        for (size_t ai = 0; ai < g_.actors.size(); ++ai)
            if (g_.actors[ai].kind == ActorKind::Sink &&
                static_cast<long long>(rt_[ai].sink_tokens.size()) <
                    sink_expected(static_cast<int>(ai)))
                return false;
        return true;
    }

    long long free_slots(int wi, const std::vector<long long>& avail) const {
        return g_.wires[wi].capacity - avail[wi];
    }

    bool outputs_free(int ai, long long need, const std::vector<long long>& avail) const {
        for (int wi : out_wires_[ai])
            if (free_slots(wi, avail) < need) return false;
        return true;
    }

    // ---- convolve geometry ----
    static long long conv_need(const Actor& a, long long q) {
        const long long M = a.in_frame.width, N = a.in_frame.height;
        const long long hw = (a.win_w - 1) / 2, hh = (a.win_h - 1) / 2;
        const long long ox = q % M, oy = q / M;
        return std::min(oy + hh, N - 1) * M + std::min(ox + hw, M - 1);
    }
    static long long conv_live_floor(const Actor& a, long long q) {
        const long long M = a.in_frame.width, N = a.in_frame.height;
        const long long hw = (a.win_w - 1) / 2, hh = (a.win_h - 1) / 2;
        if (q >= M * N) return M * N;
        const long long ox = q % M, oy = q / M;
        long long f1 = std::max(oy - hh, 0ll) * M + std::max(ox - hw, 0ll);
        long long f2 = oy + 1 <= N - 1 ? std::max(oy + 1 - hh, 0ll) * M
                                       : std::numeric_limits<long long>::max();
        return std::min(f1, f2);
    }
    long long conv_ring_cap(const Actor& a) const {
        return (a.win_h - 1) * a.in_frame.width + a.win_w;
    }

    FirePlan plan(int ai, const std::vector<long long>& avail) const {
        const Actor& a = g_.actors[ai];
        const ActorRt& rt = rt_[ai];
        FirePlan p;
        switch (a.kind) {
        case ActorKind::Source: {
            long long total = cfg_.frames * a.out_frame.tokens();
            p.fire = rt.src_emitted < total && outputs_free(ai, 1, avail);
            break;
        }
        case ActorKind::Sink:
            p.fire = avail[in_wires_[ai][0]] >= 1;
            break;
        case ActorKind::Map:
        case ActorKind::ConcatMap:
            p.fire = avail[in_wires_[ai][0]] >= a.in_ports[0].rate &&
                     outputs_free(ai, a.out_ports.empty() ? 0 : a.out_ports[0].rate, avail);
            break;
        case ActorKind::ZipWith:
        case ActorKind::Combine: {
            long long need = a.in_ports[0].rate;
            p.fire = avail[in_wires_[ai][0]] >= need && avail[in_wires_[ai][1]] >= need &&
                     outputs_free(ai, a.out_ports.empty() ? 0 : a.out_ports[0].rate, avail);
            break;
        }
        case ActorKind::Convolve: {
            const long long MN = a.in_frame.tokens();
            p.consume = rt.consumed < MN && avail[in_wires_[ai][0]] >= 1 &&
                        static_cast<long long>(rt.ring.size()) < conv_ring_cap(a);
            p.produce = rt.produced < MN && rt.consumed > conv_need(a, rt.produced) &&
                        outputs_free(ai, 1, avail);
            p.fire = p.consume || p.produce;
            break;
        }
        case ActorKind::Transpose: {
            const long long MN = a.in_frame.tokens();
            if (rt.filled < MN)
                p.fire = avail[in_wires_[ai][0]] >= 1;
            else
                p.fire = rt.drained < MN && outputs_free(ai, 1, avail);
            break;
        }
        case ActorKind::Fold: {
            const long long MN = a.in_frame.tokens();
            bool last = rt.fold_count == MN - 1;
            long long out_rate = a.out_ports.empty() ? 0 : a.out_ports[0].rate;
            p.fire = avail[in_wires_[ai][0]] >= 1 &&
                     (!last || outputs_free(ai, out_rate, avail));
            break;
        }
        }
        return p;
    }

    std::string explain(int ai, const std::vector<long long>& avail) const {
        const Actor& a = g_.actors[ai];
        const ActorRt& rt = rt_[ai];
        auto starved = [&](int port, long long need) {
            return "input p" + std::to_string(port) + " starved (needs " + std::to_string(need) +
                   ", has " + std::to_string(avail[in_wires_[ai][port]]) + ")";
        };
        auto blocked_out = [&](long long need) -> std::string {
            for (size_t pi = 0; pi < out_wires_[ai].size(); ++pi) {
                int wi = out_wires_[ai][pi];
                if (free_slots(wi, avail) < need)
                    return "output p" + std::to_string(pi) + " full (needs " +
                           std::to_string(need) + " free, has " +
                           std::to_string(free_slots(wi, avail)) + ")";
            }
            return "";
        };
        switch (a.kind) {
        case ActorKind::Source: {
            long long total = cfg_.frames * a.out_frame.tokens();
            if (rt.src_emitted >= total) return "idle (all frames emitted)";
            std::string b = blocked_out(1);
            return b.empty() ? "fireable" : b;
        }
        case ActorKind::Sink:
            if (static_cast<long long>(rt.sink_tokens.size()) >= sink_expected(ai))
                return "idle (all frames received)";
            return avail[in_wires_[ai][0]] >= 1 ? "fireable" : starved(0, 1);
        case ActorKind::Map:
        case ActorKind::ConcatMap: {
            if (avail[in_wires_[ai][0]] < a.in_ports[0].rate) return starved(0, a.in_ports[0].rate);
            std::string b = blocked_out(a.out_ports[0].rate);
            return b.empty() ? "fireable" : b;
        }
        case ActorKind::ZipWith:
        case ActorKind::Combine: {
            long long need = a.in_ports[0].rate;
            if (avail[in_wires_[ai][0]] < need) return starved(0, need);
            if (avail[in_wires_[ai][1]] < need) return starved(1, need);
            std::string b = blocked_out(a.out_ports[0].rate);
            return b.empty() ? "fireable" : b;
        }
        case ActorKind::Convolve: {
            const long long MN = a.in_frame.tokens();
            if (rt.consumed >= MN && rt.produced >= MN) return "idle (frame boundary)";
            std::string why;
            if (rt.consumed < MN) {
                if (avail[in_wires_[ai][0]] < 1) why = starved(0, 1);
                else if (static_cast<long long>(rt.ring.size()) >= conv_ring_cap(a))
                    why = "line buffers full";
            }
            if (rt.produced < MN) {
                if (rt.consumed <= conv_need(a, rt.produced)) {
                    if (!why.empty()) why += "; ";
                    why += "window not satisfiable yet";
                } else {
                    std::string b = blocked_out(1);
                    if (!b.empty()) {
                        if (!why.empty()) why += "; ";
                        why += b;
                    }
                }
            }
            return why.empty() ? "fireable" : why;
        }
        case ActorKind::Transpose: {
            const long long MN = a.in_frame.tokens();
            if (rt.filled < MN)
                return avail[in_wires_[ai][0]] >= 1 ? "fireable" : starved(0, 1);
            std::string b = blocked_out(1);
            return b.empty() ? "fireable" : b;
        }
        case ActorKind::Fold: {
            const long long MN = a.in_frame.tokens();
            if (avail[in_wires_[ai][0]] < 1) return starved(0, 1);
            if (rt.fold_count == MN - 1) {
                std::string b = blocked_out(a.out_ports[0].rate);
                if (!b.empty()) return b;
            }
            return "fireable";
        }
        }
        return "?";
    }

    long long pop(int wi) {
        long long v = fifo_[wi].front();
        fifo_[wi].pop_front();
        ++stats_.wires[wi].total_popped;
        return v;
    }

    void push_all(int ai, long long v, std::vector<std::vector<long long>>& staged) {
        for (int wi : out_wires_[ai]) staged[wi].push_back(v);
    }

    void execute(int ai, const FirePlan& p, std::vector<std::vector<long long>>& staged) {
        Actor const& a = g_.actors[ai];
        ActorRt& rt = rt_[ai];
        switch (a.kind) {
        case ActorKind::Source: {
            const long long MN = a.out_frame.tokens();
            const Image& im = (*frames_.at(a.io_name))[static_cast<size_t>(rt.src_emitted / MN)];
            long long v = im.pixels[static_cast<size_t>(rt.src_emitted % MN)];
            push_all(ai, v, staged);
            ++rt.src_emitted;
            break;
        }
        case ActorKind::Sink: {
            long long v = pop(in_wires_[ai][0]);
            rt.sink_tokens.push_back(v);
            note_sink_progress(ai);
            break;
        }
        case ActorKind::Map:
        case ActorKind::ConcatMap: {
            std::vector<long long> chunk;
            chunk.reserve(static_cast<size_t>(a.chunk_in));
            for (long long i = 0; i < a.chunk_in; ++i) chunk.push_back(pop(in_wires_[ai][0]));
            auto r = std::get<std::vector<long long>>(eval_kernel(*a.kernel, {std::move(chunk)}));
            for (long long v : r)
                push_all(ai, clamp_pixel(v), staged);
            break;
        }
        case ActorKind::ZipWith: {
            long long x = pop(in_wires_[ai][0]);
            long long y = pop(in_wires_[ai][1]);
            long long r = std::get<long long>(eval_kernel(*a.kernel, {x, y}));
            push_all(ai, clamp_pixel(r), staged);
            break;
        }
        case ActorKind::Combine: {
            std::vector<long long> c1, c2;
            for (long long i = 0; i < a.chunk_in; ++i) c1.push_back(pop(in_wires_[ai][0]));
            for (long long i = 0; i < a.chunk_in; ++i) c2.push_back(pop(in_wires_[ai][1]));
            std::vector<long long> r;
            if (a.is_append) {
                r = std::move(c1);
                r.insert(r.end(), c2.begin(), c2.end());
            } else {
                r = std::get<std::vector<long long>>(
                    eval_kernel(*a.kernel, {std::move(c1), std::move(c2)}));
            }
            for (long long v : r)
                push_all(ai, clamp_pixel(v), staged);
            break;
        }
        case ActorKind::Convolve:
            exec_convolve(ai, p, staged);
            break;
        case ActorKind::Transpose: {
            const long long M = a.in_frame.width, N = a.in_frame.height;
            const long long MN = M * N;
            if (rt.filled < MN) {
                rt.tbuf[static_cast<size_t>(rt.filled++)] = pop(in_wires_[ai][0]);
            } else {
                long long idx;
                if (a.in_orient == Orientation::RowMajor) {
                    long long x = rt.drained / N, y = rt.drained % N;
                    idx = y * M + x;
                } else {
                    long long x = rt.drained % M, y = rt.drained / M;
                    idx = x * N + y;
                }
                push_all(ai, rt.tbuf[static_cast<size_t>(idx)], staged);
                if (++rt.drained == MN) {
                    rt.filled = 0;
                    rt.drained = 0;
                }
            }
            break;
        }
        case ActorKind::Fold: {
            const long long MN = a.in_frame.tokens();
            long long px = pop(in_wires_[ai][0]);
            if (a.fold_vector) {
                rt.acc_vec = std::get<std::vector<long long>>(
                    eval_kernel(*a.kernel, {px, std::move(rt.acc_vec)}));
            } else {
                rt.acc = std::get<long long>(eval_kernel(*a.kernel, {px, rt.acc}));
            }
            if (++rt.fold_count == MN) {
                if (a.fold_vector) {
                    for (long long v : rt.acc_vec) push_all(ai, v, staged);
                    rt.acc_vec.assign(static_cast<size_t>(a.vec_len), a.init);
                } else {
                    push_all(ai, rt.acc, staged);
                    rt.acc = a.init;
                }
                rt.fold_count = 0;
            }
            break;
        }
        }
    }

    void exec_convolve(int ai, const FirePlan& p, std::vector<std::vector<long long>>& staged) {
        const Actor& a = g_.actors[ai];
        ActorRt& rt = rt_[ai];
        const long long M = a.in_frame.width, N = a.in_frame.height;
        const long long MN = M * N;
        const long long hw = (a.win_w - 1) / 2, hh = (a.win_h - 1) / 2;

        if (p.produce) {
            // window indices clamp into the frame, which realizes the
            // replicate padding at every border
            const long long ox = rt.produced % M, oy = rt.produced / M;
            std::vector<long long> window;
            window.reserve(static_cast<size_t>(a.win_w * a.win_h));
            for (long long wy = oy - hh; wy <= oy + hh; ++wy) {
                long long ry = wy < 0 ? 0 : (wy > N - 1 ? N - 1 : wy);
                for (long long wx = ox - hw; wx <= ox + hw; ++wx) {
                    long long rx = wx < 0 ? 0 : (wx > M - 1 ? M - 1 : wx);
                    long long idx = ry * M + rx - rt.base;
                    window.push_back(rt.ring[static_cast<size_t>(idx)]);
                }
            }
            long long r = std::get<long long>(eval_kernel(*a.kernel, {std::move(window)}));
            push_all(ai, clamp_pixel(r), staged);
            ++rt.produced;
            long long floor = conv_live_floor(a, rt.produced);
            while (rt.base < floor && !rt.ring.empty()) {
                rt.ring.pop_front();
                ++rt.base;
            }
        }
        if (p.consume) {
            rt.ring.push_back(pop(in_wires_[ai][0]));
            ++rt.consumed;
        }
        if (rt.consumed == MN && rt.produced == MN) {
            rt.ring.clear();
            rt.base = 0;
            rt.consumed = 0;
            rt.produced = 0;
        }
    }

    void note_sink_progress(int ai) {
        const Actor& a = g_.actors[ai];
        ActorRt& rt = rt_[ai];
        long long count = static_cast<long long>(rt.sink_tokens.size());
        long long per_frame = a.in_frame.tokens();
        long long expected = sink_expected(ai);
        if (count == 1) stats_.sink_first_token_tick[a.id] = stats_.ticks;
        if (count % per_frame == 0)
            stats_.sink_frame_ticks[a.id].push_back(stats_.ticks);
        long long q25 = expected / 4, q75 = (3 * expected) / 4;
        if (count == q25) stats_.sink_quartile_ticks[a.id].first = stats_.ticks;
        if (count == q75) stats_.sink_quartile_ticks[a.id].second = stats_.ticks;
    }

    void note_state_peaks() {
        for (size_t ai = 0; ai < g_.actors.size(); ++ai) {
            const Actor& a = g_.actors[ai];
            const ActorRt& rt = rt_[ai];
            long long cur = 0;
            switch (a.kind) {
            case ActorKind::Source:
            case ActorKind::Sink:
                cur = stats_.firings[ai] > 0 ? 1 : 0;
                break;
            case ActorKind::Map:
            case ActorKind::ConcatMap:
                cur = stats_.firings[ai] > 0 ? a.chunk_in : 0;
                break;
            case ActorKind::ZipWith:
                cur = stats_.firings[ai] > 0 ? 2 : 0;
                break;
            case ActorKind::Combine:
                cur = stats_.firings[ai] > 0 ? 2 * a.chunk_in : 0;
                break;
            case ActorKind::Convolve:
                cur = static_cast<long long>(rt.ring.size());
                if (cur > state_elements(a))
                    throw std::logic_error("convolve state exceeds its line-buffer bound");
                break;
            case ActorKind::Transpose:
                cur = rt.filled < a.in_frame.tokens() ? rt.filled
                                                      : a.in_frame.tokens() - rt.drained;
                break;
            case ActorKind::Fold:
                cur = a.fold_vector ? a.vec_len : 1;
                break;
            }
            if (cur > stats_.peak_state[ai]) stats_.peak_state[ai] = cur;
        }
    }

    std::vector<Value> assemble_sink(int ai) const {
        const Actor& a = g_.actors[ai];
        const Wire& w = g_.wires[in_wires_[ai][0]];
        const auto& toks = rt_[ai].sink_tokens;
        const long long per_frame = a.in_frame.tokens();
        std::vector<Value> frames;
        for (long long f = 0; f < cfg_.frames; ++f) {
            const long long off = f * per_frame;
            if (w.token == TokenKind::Pixel) {
                Image im(a.in_frame.width, a.in_frame.height);
                const long long N = im.height;
                for (long long i = 0; i < per_frame; ++i) {
                    long long v = toks[static_cast<size_t>(off + i)];
                    if (w.orient == Orientation::RowMajor)
                        im.pixels[static_cast<size_t>(i)] = static_cast<uint8_t>(v);
                    else
                        im.set(i / N, i % N, static_cast<uint8_t>(v));
                }
                frames.emplace_back(std::move(im));
            } else if (!g_.actors[w.src.actor].fold_vector) {
                frames.emplace_back(toks[static_cast<size_t>(off)]);
            } else {
                std::vector<long long> vec(toks.begin() + off, toks.begin() + off + per_frame);
                frames.emplace_back(std::move(vec));
            }
        }
        return frames;
    }

    void trace_line(const std::vector<FirePlan>& plans) {
        std::ostream& os = *cfg_.trace_out;
        os << "tick " << stats_.ticks << ": fired=[";
        bool first = true;
        for (size_t ai = 0; ai < plans.size(); ++ai) {
            if (!plans[ai].fire) continue;
            if (!first) os << ", ";
            os << g_.actors[ai].id;
            first = false;
        }
        os << "] occ={";
        for (size_t wi = 0; wi < g_.wires.size(); ++wi) {
            if (wi) os << ", ";
            os << wire_name(wi) << ":" << fifo_[wi].size();
        }
        os << "}\n";
    }
};

} // namespace detail

// Executes the network tick by tick: every actor whose firing condition
// holds against the tick-start FIFO snapshot fires exactly once, sources
// stream frames back to back, and the run ends when every sink holds all
// its frames. Throws E_DEADLOCK (with a full blocking diagnosis) or
// E_TICK_LIMIT on failure.
inline SimResult simulate(const DpnGraph& g,
                          const std::map<std::string, std::vector<Image>>& inputs,
                          const SimConfig& cfg = {}) {
    detail::Simulator sim(g, inputs, cfg);
    return sim.run();
}

struct PipelineReport {
    long long fill_latency = 0;   // tick of the first sink token
    long long makespan = 0;       // tick of the last
    double throughput = 0.0;      // sink tokens/tick over the middle half
    long long pipeline_depth = 0; // processing actors on the longest path
    long long baseline = 0;       // depth * frames * frame tokens
    double speedup = 0.0;
};

inline PipelineReport analyze_pipeline(const DpnGraph& g, const SimResult& r,
                                       long long frames) {
    PipelineReport rep;
    rep.makespan = r.stats.ticks;
    rep.fill_latency = rep.makespan;
    for (const auto& [id, tick] : r.stats.sink_first_token_tick)
        rep.fill_latency = std::min(rep.fill_latency, tick);

    double tput = std::numeric_limits<double>::infinity();
    for (const auto& [id, qt] : r.stats.sink_quartile_ticks) {
        if (qt.second <= qt.first) continue;
        int ai = g.find_actor(id);
        long long expected = frames * g.actors[ai].in_frame.tokens();
        double window_tokens = (3.0 * expected) / 4.0 - expected / 4;
        tput = std::min(tput, window_tokens / static_cast<double>(qt.second - qt.first));
    }
    if (tput != std::numeric_limits<double>::infinity()) rep.throughput = tput;

    // longest chain of processing actors (sources/sinks excluded)
    auto order = topo_order(g);
    std::vector<long long> depth(g.actors.size(), 0);
    long long max_frame = 1;
    for (const auto& w : g.wires) max_frame = std::max(max_frame, w.frame.tokens());
    for (int ai : order) {
        long long best = 0;
        for (const auto& w : g.wires)
            if (w.dst.actor == ai) best = std::max(best, depth[w.src.actor]);
        const ActorKind k = g.actors[ai].kind;
        bool processing = k != ActorKind::Source && k != ActorKind::Sink;
        depth[ai] = best + (processing ? 1 : 0);
        rep.pipeline_depth = std::max(rep.pipeline_depth, depth[ai]);
    }
    rep.baseline = rep.pipeline_depth * frames * max_frame;
    if (rep.makespan > 0)
        rep.speedup = static_cast<double>(rep.baseline) / static_cast<double>(rep.makespan);
    return rep;
}

// Convenience wrapper: simulate, then summarize fill latency, makespan,
// steady-state throughput, and the sequential baseline.
inline PipelineReport measure_pipeline(const DpnGraph& g,
                                       const std::map<std::string, std::vector<Image>>& inputs,
                                       const SimConfig& cfg = {}) {
    SimResult r = simulate(g, inputs, cfg);
    return analyze_pipeline(g, r, cfg.frames);
}

inline std::string render_stats(const DpnGraph& g, const SimStats& s) {
    std::ostringstream os;
    os << "ticks=" << s.ticks << "\n";
    for (size_t ai = 0; ai < g.actors.size(); ++ai)
        os << "actor." << g.actors[ai].id << ".firings=" << s.firings[ai] << "\n";
    for (size_t ai = 0; ai < g.actors.size(); ++ai)
        os << "actor." << g.actors[ai].id << ".peak_state=" << s.peak_state[ai] << "\n";
    for (size_t wi = 0; wi < g.wires.size(); ++wi) {
        const Wire& w = g.wires[wi];
        std::string name = g.actors[w.src.actor].id + ".p" + std::to_string(w.src.port) + "->" +
                           g.actors[w.dst.actor].id + ".p" + std::to_string(w.dst.port);
        os << "wire." << name << ".max_occupancy=" << s.wires[wi].max_occupancy << "\n";
        os << "wire." << name << ".total_tokens=" << s.wires[wi].total_pushed << "\n";
    }
    for (const auto& [id, ticks] : s.sink_frame_ticks) {
        os << "sink." << id << ".frame_ticks=";
        for (size_t i = 0; i < ticks.size(); ++i) os << (i ? "," : "") << ticks[i];
        os << "\n";
    }
    return os.str();
}

} // namespace ripl

#endif
