#include "fdmac/mac.hpp"

#include <algorithm>
#include <sstream>

namespace fdmac {

namespace {

bool is_pow2_minus1(uint32_t v) { return (v & (v + 1)) == 0; }

}  // namespace

std::string DcfParams::invariant_violation() const {
    if (difs_us != sifs_us + 2 * slot_us) return "difs must equal sifs + 2*slot";
    if (cw_min > cw_max_limit) return "cw_min above cw_max_limit";
    if (!is_pow2_minus1(cw_min) || !is_pow2_minus1(cw_max_limit))
        return "contention windows must be of the form 2^k - 1";
    if (slot_us == 0 || sifs_us == 0) return "zero slot or sifs";
    if (timing.base_rate_bps % 1'000'000 || timing.data_rate_bps % 1'000'000)
        return "rates must be whole Mb/s";
    return {};
}

uint32_t draw_backoff(uint32_t cw_max, Rng& rng) {
    return rng.uniform_int(std::min<uint32_t>(cw_max, 1023));
}

double snoop_tx_probability(uint32_t cw_width, double beta) {
    return std::min(1.0, beta / static_cast<double>(cw_width));
}

ReorderOutcome reorder_buffer(MacBuffer& buf, NodeId fd_peer, Rng& rng) {
    ReorderOutcome out;
    if (buf.bufdepth <= 1 || buf.q.size() < 2) return out;
    std::size_t limit = std::min<std::size_t>(buf.bufdepth, buf.q.size());
    for (std::size_t i = 1; i < limit; ++i) {
        if (buf.q[i].dest != fd_peer) continue;
        out.candidate_found = true;
        if (rng.bernoulli(buf.p_pick)) {
            out.promoted = true;
            BufferedPacket picked = buf.q[i];
            buf.q.erase(buf.q.begin() + static_cast<std::ptrdiff_t>(i));
            buf.q.front().bypass_rounds += 1;
            buf.q.push_front(picked);
        }
        break;
    }
    return out;
}

const char* to_string(PurgeCause c) {
    switch (c) {
        case PurgeCause::DataFail: return "data_fail";
        case PurgeCause::MyAckFail: return "my_ack_fail";
        case PurgeCause::PeerAckFail: return "peer_ack_fail";
        case PurgeCause::LostMedium: return "lost_medium";
    }
    return "?";
}

const char* to_string(TopologyBelief b) {
    switch (b) {
        case TopologyBelief::Unknown: return "unknown";
        case TopologyBelief::Clique: return "clique";
        case TopologyBelief::Hidden: return "hidden";
    }
    return "?";
}

const char* to_string(MacState s) {
    switch (s) {
        case MacState::Idle: return "idle";
        case MacState::Contend: return "contend";
        case MacState::TxData: return "tx_data";
        case MacState::AwaitTrainAck: return "await_train_ack";
        case MacState::SrbWait: return "srb_wait";
        case MacState::FdRound: return "fd_round";
        case MacState::FdAckPhase: return "fd_ack_phase";
        case MacState::Inject: return "inject";
    }
    return "?";
}

}  // namespace fdmac
