#include "fdmac/medium.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdmac {

const char* to_string(RxOutcome o) {
    switch (o) {
        case RxOutcome::Decoded: return "decoded";
        case RxOutcome::Collided: return "collided";
        case RxOutcome::NotInRange: return "not_in_range";
        case RxOutcome::LostBer: return "lost_ber";
    }
    return "?";
}

bool Topology::has_node(NodeId n) const {
    return std::find(nodes.begin(), nodes.end(), n) != nodes.end();
}

std::string Topology::invariant_violation() const {
    if (nodes.empty()) return "no nodes";
    if (!has_node(ap)) return "AP is not a node";
    for (const auto& [a, b] : edges)
        if (!has_node(a) || !has_node(b) || a == b) return "edge references a bad node";
    for (NodeId n : nodes)
        if (n != ap && !in_range(n, ap)) return "mobile node out of AP range";
    return {};
}

const Transmission& Medium::begin_tx(NodeId src, NodeId dst, const Frame& frame,
                                     MicroSec start_us, MicroSec header_done_us,
                                     phy::Estimation mode) {
    Transmission t;
    t.id = next_id_++;
    t.src = src;
    t.dst = dst;
    t.frame = frame;
    t.start_us = start_us;
    t.end_us = start_us + frame.airtime_us;
    t.header_done_us = header_done_us;
    t.mode = mode;
    for (Transmission& other : active_) {
        other.overlap_srcs.push_back(src);
        t.overlap_srcs.push_back(other.src);
    }
    active_.push_back(std::move(t));
    return active_.back();
}

Transmission Medium::end_tx(uint64_t id) {
    auto it = std::find_if(active_.begin(), active_.end(),
                           [&](const Transmission& t) { return t.id == id; });
    if (it == active_.end()) throw std::logic_error("end_tx: unknown transmission");
    Transmission t = std::move(*it);
    active_.erase(it);
    return t;
}

double Medium::effective_sinr_at(NodeId rx, const Transmission& t) const {
    bool self_tx = std::find(t.overlap_srcs.begin(), t.overlap_srcs.end(), rx) !=
                   t.overlap_srcs.end();
    phy::LinkBudget budget = links_.budget;
    return phy::effective_sinr_db(links_.snr_db(t.src, rx), self_tx, t.mode, budget);
}

RxOutcome Medium::resolve_reception(NodeId rx, const Transmission& t, Rng& rng) const {
    if (!topology_.in_range(rx, t.src)) return RxOutcome::NotInRange;
    for (NodeId s : t.overlap_srcs)
        if (s != rx && topology_.in_range(rx, s)) return RxOutcome::Collided;

    double sinr = effective_sinr_at(rx, t);
    double ber = phy::sinr_to_ber(links_.tables, sinr, t.mode);
    double p = phy::frame_success_prob(ber, t.frame.payload_bytes);
    return rng.bernoulli(p) ? RxOutcome::Decoded : RxOutcome::LostBer;
}

bool Medium::carrier_busy(NodeId node, MicroSec at_us) const {
    for (const Transmission& t : active_) {
        if (t.src == node) continue;
        if (t.start_us <= at_us && at_us < t.end_us && topology_.in_range(node, t.src))
            return true;
    }
    return false;
}

}  // namespace fdmac
