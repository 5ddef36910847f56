#ifndef FDMAC_NODE_MAC_HPP_
#define FDMAC_NODE_MAC_HPP_

#include <cstdint>
#include <optional>

#include "fdmac/mac.hpp"
#include "fdmac/medium.hpp"

namespace fdmac {

enum class TimerPurpose : uint8_t {
    DifsDone = 0,
    BackoffDone,
    NavEnd,
    AckTimeout,        // ACK for my HD DATA
    TrainAckTimeout,   // training ACK after my CTS=1 ACK
    SrbResume,
    FdFirstAckSlot,    // DURFD elapsed; first-ACK duties
    FdFirstAckTimeout, // AP waiting for the mobile's ACK
    FdSecondAckTimeout,// mobile waiting for the AP's ACK
    InjectAckTimeout,
    SnoopWatch,
    kCount,
};
const char* to_string(TimerPurpose p);

enum class TxPurpose : uint8_t {
    HdData = 0,
    PlainAck,
    Ack1,        // receiver ACK offering full-duplex (CTS = 1)
    Ack2,        // initiator training ACK
    FdData,
    FdAckFirst,  // mobile's end-of-round ACK
    FdAckSecond, // AP's end-of-round ACK
    InjectData,
    InjectAck,
};
const char* to_string(TxPurpose p);

enum class StreamPurpose : uint8_t {
    Backoff = 0,
    Srb,
    Traffic,
    Reorder,
    Inject,
    MediumBer,
};

struct MacConfig {
    DcfParams dcf;
    bool is_ap = false;
    NodeId ap_id = 0;
    bool fd_enabled = true;
    bool passive = false;  // never contends for the medium on its own
    double beta = 16.0;
    double injection_probability = -1.0;  // < 0: beta / cw-width rule
    uint32_t bufdepth = 1;
    double p_pick = 0.5;
};

// Engine services a node state machine relies on. One engine drives all
// nodes of a run; nodes never talk to each other directly.
class MacHost {
public:
    virtual ~MacHost() = default;
    virtual MicroSec now() const = 0;
    virtual bool carrier_busy(NodeId self) const = 0;
    // Busy by anything other than `peer` transmissions starting exactly
    // at `at` (the synchronized resume tick of a full-duplex pair).
    virtual bool blocked_for_fd_resume(NodeId self, NodeId peer, MicroSec at) const = 0;
    virtual void schedule_timer(NodeId node, TimerPurpose purpose, MicroSec at,
                                uint64_t gen) = 0;
    virtual void schedule_tx(NodeId src, NodeId dst, const Frame& frame,
                             phy::Estimation mode, MicroSec at, TxPurpose purpose) = 0;
    virtual Rng& rng(NodeId node, StreamPurpose purpose) = 0;
    virtual void fsm_trace(NodeId node, MacState from, MacState to,
                           const char* cause) = 0;
    virtual void count_delivery(NodeId src, NodeId dst, uint32_t bytes,
                                bool whole_packet) = 0;
    virtual void count_drop(NodeId src, NodeId dst) = 0;
    virtual void count_head_delay(uint32_t bypass_rounds) = 0;
    virtual void count_reorder(bool candidate, bool promoted) = 0;
    virtual void count_injection_opportunity(bool fired) = 0;
    virtual void count_exchange(bool fd) = 0;
    virtual void count_purge(NodeId node, PurgeCause cause) = 0;
    virtual void refill_traffic(NodeId node) = 0;
};

// Per-node FD-MAC state machine. Driven purely by engine events; all
// randomness comes from the host's named streams.
class NodeMac {
public:
    NodeMac(NodeId id, MacConfig cfg, MacHost* host);

    NodeId id() const { return id_; }
    MacState state() const { return state_; }
    MacBuffer& buffer() { return buf_; }
    const MacBuffer& buffer() const { return buf_; }
    uint32_t cw() const { return cw_; }
    const SnoopState& snoop() const { return snoop_; }
    const PeerKnowledge& peer_knowledge() const { return pk_; }
    bool tx_active() const { return tx_active_; }
    int rx_locked() const { return rx_locked_; }

    // Appends a packet; kicks off contention when idle. The engine uses
    // enqueue_quiet during saturated refills to avoid re-entry.
    void enqueue(BufferedPacket pkt);
    void enqueue_quiet(BufferedPacket pkt) { buf_.q.push_back(pkt); }

    void start();  // called once at t = 0

    // --- engine notifications ---
    void on_busy_start(NodeId src, MicroSec tx_start_us);
    void on_busy_end();
    void on_header(const SnoopedHeader& h);
    void on_rx_start(NodeId src);
    void on_rx_result(NodeId src, const Frame& frame, RxOutcome outcome,
                      phy::Estimation mode, MicroSec end_us);
    void on_tx_begin(TxPurpose purpose);
    void on_tx_done(TxPurpose purpose, const Frame& frame);
    void on_timer(TimerPurpose purpose, uint64_t gen);

    // Engine consults this before letting a scheduled frame on the air.
    bool phy_can_start_tx() const { return rx_locked_ == 0; }

private:
    struct FdContext {
        bool active = false;
        NodeId peer = 0;
        MicroSec durfd_us = 0;
        MicroSec round_start_us = 0;
        MicroSec durfd_end_us = 0;
        MicroSec my_durnxt_us = 0;    // airtime I advertised for my next packet
        bool my_hol = false;          // what I advertised in my last ACK
        bool peer_hol = false;
        MicroSec peer_durnxt_us = 0;
        uint16_t my_srb = 0;
        uint16_t peer_srb = 0;
        bool peer_data_ok = false;    // decoded the peer's FD DATA this round
        bool got_first_ack = false;
        bool sent_first_ack = false;
        MicroSec resume_at_us = 0;    // scheduled synchronized TX instant
    };

    struct InjectContext {
        bool active = false;
        uint32_t sent_bytes = 0;
        bool tail_remains = false;
        MicroSec ap_data_end_us = 0;
    };

    // --- contention machinery ---
    void start_contention(const char* cause);
    void resume_contention_clock();
    void pause_backoff_counting();
    void transmit_head();
    void tx_failure(const char* what);

    // --- exchange steps ---
    void handle_data_rx(NodeId src, const Frame& frame, MicroSec end_us);
    void handle_ack_rx(NodeId src, const Frame& frame, MicroSec end_us);
    void enter_srb_wait(uint16_t srb_slots, MicroSec from_us, const char* cause);
    void begin_fd_round();
    void fd_round_failed_locally(PurgeCause cause);
    void send_fd_first_ack();
    void send_fd_second_ack(MicroSec mobile_ack_end_us);
    void evaluate_fd_continue(MicroSec last_ack_end_us);
    void natural_giveup(const char* cause);
    void purge_peer_knowledge(PurgeCause cause);
    void pop_head_served();

    // --- snooping ---
    void snoop_observe_header(const SnoopedHeader& h);
    void maybe_inject(const SnoopedHeader& h);

    void set_state(MacState next, const char* cause);
    uint64_t arm_timer(TimerPurpose purpose, MicroSec at);
    bool timer_current(TimerPurpose purpose, uint64_t gen) const;
    void cancel_timer(TimerPurpose purpose);

    MicroSec ack_air() const { return ack_airtime_us(cfg_.dcf.timing); }
    MicroSec ack_air_hol() const;
    MicroSec fd_data_airtime(uint32_t payload_bytes) const;
    bool head_is_for(NodeId peer) const {
        return !buf_.q.empty() && buf_.q.front().dest == peer;
    }
    bool next_is_for(NodeId peer) const {
        return buf_.q.size() >= 2 && buf_.q[1].dest == peer;
    }

    NodeId id_;
    MacConfig cfg_;
    MacHost* host_;

    MacState state_ = MacState::Idle;
    MacBuffer buf_;
    uint32_t cw_;
    uint32_t retries_ = 0;

    // contention
    uint32_t bo_remaining_ = 0;
    bool bo_counting_ = false;
    bool bo_drawn_ = false;
    MicroSec bo_anchor_us_ = 0;
    MicroSec nav_until_us_ = 0;
    MicroSec hold_until_us_ = 0;  // own scheduled TX blocks contention

    uint64_t timer_gen_[static_cast<int>(TimerPurpose::kCount)] = {};

    FdContext fd_;
    InjectContext inject_;
    PeerKnowledge pk_;
    SnoopState snoop_;

    bool tx_active_ = false;
    int rx_locked_ = 0;
    MicroSec last_data_end_us_ = 0;  // end of my latest HD DATA (ACK timing)
};

}  // namespace fdmac

#endif  // FDMAC_NODE_MAC_HPP_
