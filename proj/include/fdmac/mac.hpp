#ifndef FDMAC_MAC_HPP_
#define FDMAC_MAC_HPP_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>

#include "fdmac/frame.hpp"
#include "fdmac/phy.hpp"
#include "fdmac/rng.hpp"
#include "fdmac/types.hpp"

namespace fdmac {

struct DcfParams {
    MicroSec slot_us = 9;
    MicroSec sifs_us = 16;
    MicroSec difs_us = 34;  // must equal sifs + 2*slot
    uint32_t cw_min = 15;
    uint32_t cw_max_limit = 1023;  // both 2^k - 1
    uint32_t retry_limit = 7;
    PhyTiming timing;

    MicroSec ack_timeout_us() const {
        return sifs_us + ack_airtime_us(timing) + slot_us;
    }
    std::string invariant_violation() const;
};

// Uniform draw from [0, min(cw_max, 1023)]; the SRB field is 10 bits, so
// shared draws never exceed 1023 regardless of the contention window.
uint32_t draw_backoff(uint32_t cw_max, Rng& rng);

// Two FD peers wait for the larger of their advertised draws.
inline uint16_t srb_resolve(uint16_t srb_data, uint16_t srb_ack) {
    return std::max(srb_data, srb_ack);
}

// Snooper transmit probability p_i = beta / cw_width, clamped to 1.
// cw_width is the window size (cw + 1), e.g. 16 fresh, 1024 saturated.
double snoop_tx_probability(uint32_t cw_width, double beta);

struct BufferedPacket {
    uint64_t pkt_id = 0;
    NodeId dest = 0;
    uint32_t payload_bytes = 0;
    MicroSec enqueue_us = 0;
    uint32_t bypass_rounds = 0;  // times another packet was served past it
    bool is_fragment_tail = false;
};

// Transmit queue with virtual-contention lookahead. Only the first
// bufdepth positions are visible to reordering; promotion moves one
// packet to the head and leaves every other relative order intact.
struct MacBuffer {
    std::deque<BufferedPacket> q;
    uint32_t bufdepth = 1;
    double p_pick = 0.5;
};

struct ReorderOutcome {
    bool candidate_found = false;
    bool promoted = false;
};

// End-of-exchange virtual contention: with probability p_pick, the first
// packet in positions 2..bufdepth destined for fd_peer becomes the new
// head. The Bernoulli draw happens only when such a candidate exists.
ReorderOutcome reorder_buffer(MacBuffer& buf, NodeId fd_peer, Rng& rng);

// Queue-state knowledge about the current FD peer, built up from the FD
// headers of the handshake. A purge clears it atomically.
struct PeerKnowledge {
    bool valid = false;
    NodeId peer = 0;
    bool peer_has_hol = false;
    MicroSec peer_durnxt_us = 0;
    uint16_t my_pending_srb = 0;
    uint16_t peer_srb = 0;
};

enum class PurgeCause : uint8_t { DataFail, MyAckFail, PeerAckFail, LostMedium };
const char* to_string(PurgeCause c);

enum class TopologyBelief : uint8_t { Unknown, Clique, Hidden };
const char* to_string(TopologyBelief b);

// Header fields every in-range node learns once a frame's header portion
// has been on the air (headers ride the base rate and never fail).
struct SnoopedHeader {
    NodeId src = 0;
    NodeId dst = 0;
    FrameKind kind = FrameKind::Data;
    DupMode dupmode = DupMode::HD;
    bool hol = false;
    bool frag = false;
    bool cts = false;
    uint16_t srb = 0;
    MicroSec durnxt_us = 0;
    MicroSec durfd_us = 0;
    uint16_t dur_us = 0;
    MicroSec start_us = 0;
    MicroSec end_us = 0;
};

// What a node believes about its neighbourhood, learned purely by
// overhearing: per-peer clique/hidden verdicts plus the transmission it
// is currently watching for an ACK.
struct SnoopState {
    std::map<NodeId, TopologyBelief> belief;
    double beta = 16.0;
    std::optional<SnoopedHeader> observed;  // DATA currently under watch
    MicroSec watch_deadline_us = 0;

    TopologyBelief belief_of(NodeId n) const {
        auto it = belief.find(n);
        return it == belief.end() ? TopologyBelief::Unknown : it->second;
    }
};

enum class MacState : uint8_t {
    Idle,
    Contend,
    TxData,        // HD DATA out, awaiting the receiver's ACK
    AwaitTrainAck, // sent ACK with CTS=1, awaiting the training ACK
    SrbWait,       // shared countdown toward the next FD round
    FdRound,       // FD DATA on air / waiting for DURFD to elapse
    FdAckPhase,    // between DURFD end and the end of both ACKs
    Inject,        // fragment injected toward the AP, awaiting its ACK
};
const char* to_string(MacState s);

}  // namespace fdmac

#endif  // FDMAC_MAC_HPP_
