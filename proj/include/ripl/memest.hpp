#ifndef RIPL_MEMEST_HPP
#define RIPL_MEMEST_HPP

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "ripl/graph.hpp"

namespace ripl {

// Virtex-7 class device: 8.5 MB of on-chip block RAM.
constexpr long long kDefaultBramBudget = 8912896;
// Arrays at or below this many elements are assumed to land in LUTs.
constexpr long long kDefaultLutThreshold = 512;

constexpr long long kPixelBytes = 1;
constexpr long long kIntBytes = 8;

struct ActorMem {
    std::string id;
    ActorKind kind = ActorKind::Map;
    long long elements = 0; // internal state
    long long bytes = 0;
    bool bram = false;
    long long wire_bytes = 0; // outgoing FIFOs, charged to the producer
    long long wire_bram_bytes = 0;
};

struct MemReport {
    std::vector<ActorMem> actors;
    long long lut_threshold = kDefaultLutThreshold;
    long long budget = kDefaultBramBudget;
    long long lut_bytes = 0;
    long long bram_bytes = 0;
    bool fits = true;
    long long overage = 0;
};

struct ActorEstimate {
    long long elements = 0;
    long long bytes = 0;
    bool bram = false;
};

inline long long element_bytes(const Actor& a) {
    return a.kind == ActorKind::Fold ? kIntBytes : kPixelBytes;
}

// State size follows the actor kind: chunk registers for maps, line
// buffers plus a window for convolve, a full frame for transpose, the
// accumulator for folds.
inline ActorEstimate estimate_actor_memory(const Actor& a,
                                           long long lut_threshold = kDefaultLutThreshold) {
    ActorEstimate e;
    e.elements = state_elements(a);
    e.bytes = e.elements * element_bytes(a);
    e.bram = e.elements > lut_threshold;
    return e;
}

inline MemReport estimate_design(const DpnGraph& g, long long budget = kDefaultBramBudget,
                                 long long lut_threshold = kDefaultLutThreshold) {
    MemReport rep;
    rep.budget = budget;
    rep.lut_threshold = lut_threshold;

    for (size_t ai = 0; ai < g.actors.size(); ++ai) {
        const Actor& a = g.actors[ai];
        ActorEstimate e = estimate_actor_memory(a, lut_threshold);
        ActorMem m;
        m.id = a.id;
        m.kind = a.kind;
        m.elements = e.elements;
        m.bytes = e.bytes;
        m.bram = e.bram;
        if (e.bram) rep.bram_bytes += e.bytes;
        else rep.lut_bytes += e.bytes;

        for (const auto& w : g.wires) {
            if (w.src.actor != static_cast<int>(ai)) continue;
            long long wbytes = w.capacity * (w.token == TokenKind::Pixel ? kPixelBytes : kIntBytes);
            m.wire_bytes += wbytes;
            if (w.capacity > lut_threshold) {
                m.wire_bram_bytes += wbytes;
                rep.bram_bytes += wbytes;
            } else {
                rep.lut_bytes += wbytes;
            }
        }
        rep.actors.push_back(std::move(m));
    }

    rep.fits = rep.bram_bytes <= budget;
    rep.overage = rep.fits ? 0 : rep.bram_bytes - budget;
    return rep;
}

inline std::string render_mem_table(const MemReport& rep) {
    std::ostringstream os;
    os << "memory estimate (lut threshold " << rep.lut_threshold
       << " elements; classification is a convention, not a synthesis result)\n";
    os << std::left << std::setw(16) << "actor" << std::setw(11) << "kind" << std::right
       << std::setw(10) << "elements" << std::setw(10) << "bytes" << std::setw(7) << "class"
       << std::setw(12) << "fifo bytes" << "\n";
    for (const auto& m : rep.actors) {
        os << std::left << std::setw(16) << m.id << std::setw(11) << actor_kind_name(m.kind)
           << std::right << std::setw(10) << m.elements << std::setw(10) << m.bytes
           << std::setw(7) << (m.bram ? "BRAM" : "LUT") << std::setw(12) << m.wire_bytes << "\n";
    }
    os << "total LUT bytes:  " << rep.lut_bytes << "\n";
    os << "total BRAM bytes: " << rep.bram_bytes << "\n";
    os << "BRAM budget:      " << rep.budget << "\n";
    if (rep.fits)
        os << "verdict: fits\n";
    else
        os << "verdict: exceeds budget by " << rep.overage << " bytes\n";
    return os.str();
}

// Stable key-value rendering for golden tests and tooling.
inline std::string render_mem_kv(const MemReport& rep) {
    std::ostringstream os;
    os << "lut_threshold=" << rep.lut_threshold << "\n";
    os << "budget=" << rep.budget << "\n";
    for (const auto& m : rep.actors) {
        os << "actor." << m.id << ".kind=" << actor_kind_name(m.kind) << "\n";
        os << "actor." << m.id << ".elements=" << m.elements << "\n";
        os << "actor." << m.id << ".bytes=" << m.bytes << "\n";
        os << "actor." << m.id << ".class=" << (m.bram ? "BRAM" : "LUT") << "\n";
        os << "actor." << m.id << ".wire_bytes=" << m.wire_bytes << "\n";
    }
    os << "total.lut_bytes=" << rep.lut_bytes << "\n";
    os << "total.bram_bytes=" << rep.bram_bytes << "\n";
    os << "verdict=" << (rep.fits ? "fits" : "exceeds") << "\n";
    os << "overage=" << rep.overage << "\n";
    return os.str();
}

} // namespace ripl

#endif
