#ifndef FDMAC_MEDIUM_HPP_
#define FDMAC_MEDIUM_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fdmac/frame.hpp"
#include "fdmac/phy.hpp"
#include "fdmac/rng.hpp"
#include "fdmac/types.hpp"

namespace fdmac {

// Reciprocal radio-range graph with one designated access point. Every
// mobile must have an edge to the AP; mobiles may or may not hear each
// other (clique vs. hidden-node).
struct Topology {
    std::vector<NodeId> nodes;
    NodeId ap = 0;
    std::set<std::pair<NodeId, NodeId>> edges;  // stored with first < second

    void add_edge(NodeId a, NodeId b) {
        edges.insert({std::min(a, b), std::max(a, b)});
    }
    bool in_range(NodeId a, NodeId b) const {
        return a != b && edges.count({std::min(a, b), std::max(a, b)}) > 0;
    }
    bool has_node(NodeId n) const;
    std::string invariant_violation() const;
};

struct Transmission {
    uint64_t id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    Frame frame;
    MicroSec start_us = 0;
    MicroSec end_us = 0;         // start + frame airtime
    MicroSec header_done_us = 0; // headers decodable from here on
    phy::Estimation mode = phy::Estimation::Clean;
    // Sources whose transmissions overlapped this one in time, in start
    // order. The receiver's own entry never collides (cancelled by phy).
    std::vector<NodeId> overlap_srcs;
};

enum class RxOutcome : uint8_t { Decoded, Collided, NotInRange, LostBer };
const char* to_string(RxOutcome o);

// The shared channel: active-transmission bookkeeping, carrier sense, and
// end-of-frame reception resolution. Owned by one engine event loop.
class Medium {
public:
    Medium(Topology topology, phy::LinkModel links)
        : topology_(std::move(topology)), links_(std::move(links)) {}

    const Topology& topology() const { return topology_; }
    const phy::LinkModel& links() const { return links_; }

    // Registers the frame on the air and records mutual overlaps with
    // everything currently active. The caller enforces the phy
    // constraint (no StartTx while receiving) before getting here.
    const Transmission& begin_tx(NodeId src, NodeId dst, const Frame& frame,
                                 MicroSec start_us, MicroSec header_done_us,
                                 phy::Estimation mode);

    // Removes the transmission from the air and hands it back for
    // resolution; call exactly once at end_us.
    Transmission end_tx(uint64_t id);

    // Reception fate at rx for a completed transmission. A data payload
    // survives only if no other in-range transmission overlapped it; the
    // BER draw then decides, using rx's effective SINR.
    RxOutcome resolve_reception(NodeId rx, const Transmission& t, Rng& rng) const;

    // Effective SINR for t as seen at rx (self-interference included when
    // rx transmitted during the frame).
    double effective_sinr_at(NodeId rx, const Transmission& t) const;

    bool carrier_busy(NodeId node, MicroSec at_us) const;

    const std::vector<Transmission>& active() const { return active_; }

private:
    Topology topology_;
    phy::LinkModel links_;
    std::vector<Transmission> active_;
    uint64_t next_id_ = 1;
};

}  // namespace fdmac

#endif  // FDMAC_MEDIUM_HPP_
