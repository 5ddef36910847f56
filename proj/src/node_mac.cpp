#include "fdmac/node_mac.hpp"

#include <algorithm>
#include <cassert>

namespace fdmac {

namespace {

// The AP of the scenario is node 0 by engine convention; NodeMac only
// needs "the AP" for injection targeting, so it is part of MacConfig via
// is_ap on each node and ap_id below.
constexpr NodeId kApId = 0;

}  // namespace

const char* to_string(TimerPurpose p) {
    switch (p) {
        case TimerPurpose::DifsDone: return "difs_done";
        case TimerPurpose::BackoffDone: return "backoff_done";
        case TimerPurpose::NavEnd: return "nav_end";
        case TimerPurpose::AckTimeout: return "ack_timeout";
        case TimerPurpose::TrainAckTimeout: return "train_ack_timeout";
        case TimerPurpose::SrbResume: return "srb_resume";
        case TimerPurpose::FdFirstAckSlot: return "fd_first_ack_slot";
        case TimerPurpose::FdFirstAckTimeout: return "fd_first_ack_timeout";
        case TimerPurpose::FdSecondAckTimeout: return "fd_second_ack_timeout";
        case TimerPurpose::InjectAckTimeout: return "inject_ack_timeout";
        case TimerPurpose::SnoopWatch: return "snoop_watch";
        default: return "?";
    }
}

const char* to_string(TxPurpose p) {
    switch (p) {
        case TxPurpose::HdData: return "hd_data";
        case TxPurpose::PlainAck: return "plain_ack";
        case TxPurpose::Ack1: return "ack1";
        case TxPurpose::Ack2: return "ack2";
        case TxPurpose::FdData: return "fd_data";
        case TxPurpose::FdAckFirst: return "fd_ack_first";
        case TxPurpose::FdAckSecond: return "fd_ack_second";
        case TxPurpose::InjectData: return "inject_data";
        case TxPurpose::InjectAck: return "inject_ack";
    }
    return "?";
}

NodeMac::NodeMac(NodeId id, MacConfig cfg, MacHost* host)
    : id_(id), cfg_(cfg), host_(host), cw_(cfg.dcf.cw_min) {
    buf_.bufdepth = cfg.bufdepth;
    buf_.p_pick = cfg.p_pick;
    snoop_.beta = cfg.beta;
}

MicroSec NodeMac::ack_air_hol() const {
    FdHeader fd;
    fd.hol = true;
    fd.durnxt_present = true;
    return airtime_us(FrameKind::Ack, MacHeader::kWireBits + fd.wire_bits(), 0,
                      cfg_.dcf.timing);
}

MicroSec NodeMac::fd_data_airtime(uint32_t payload_bytes) const {
    FdHeader fd;
    fd.dupmode = DupMode::FD;
    fd.durnxt_present = true;
    fd.durfd_present = true;
    return airtime_us(FrameKind::Data, MacHeader::kWireBits + fd.wire_bits(),
                      payload_bytes, cfg_.dcf.timing);
}

void NodeMac::set_state(MacState next, const char* cause) {
    if (next == state_) return;
    host_->fsm_trace(id_, state_, next, cause);
    state_ = next;
}

uint64_t NodeMac::arm_timer(TimerPurpose purpose, MicroSec at) {
    uint64_t gen = ++timer_gen_[static_cast<int>(purpose)];
    host_->schedule_timer(id_, purpose, at, gen);
    return gen;
}

bool NodeMac::timer_current(TimerPurpose purpose, uint64_t gen) const {
    return timer_gen_[static_cast<int>(purpose)] == gen;
}

void NodeMac::cancel_timer(TimerPurpose purpose) {
    ++timer_gen_[static_cast<int>(purpose)];
}

void NodeMac::enqueue(BufferedPacket pkt) {
    buf_.q.push_back(pkt);
    if (state_ == MacState::Idle && !tx_active_) start_contention("arrival");
}

void NodeMac::start() {
    if (!buf_.q.empty()) start_contention("start");
}

// ---------------------------------------------------------------------------
// Contention (standard DCF; SRB waits live elsewhere and never pause)
// ---------------------------------------------------------------------------

void NodeMac::start_contention(const char* cause) {
    if (cfg_.passive || buf_.q.empty()) {
        set_state(MacState::Idle, cause);
        return;
    }
    set_state(MacState::Contend, cause);
    bo_remaining_ = draw_backoff(cw_, host_->rng(id_, StreamPurpose::Backoff));
    bo_drawn_ = true;
    bo_counting_ = false;
    resume_contention_clock();
}

void NodeMac::resume_contention_clock() {
    if (state_ != MacState::Contend || tx_active_) return;
    if (host_->carrier_busy(id_)) return;  // busy_end re-arms
    MicroSec now = host_->now();
    MicroSec block = std::max(nav_until_us_, hold_until_us_);
    if (now < block) {
        arm_timer(TimerPurpose::NavEnd, block);
        return;
    }
    arm_timer(TimerPurpose::DifsDone, now + cfg_.dcf.difs_us);
}

void NodeMac::pause_backoff_counting() {
    if (!bo_counting_) {
        cancel_timer(TimerPurpose::DifsDone);
        return;
    }
    MicroSec elapsed = host_->now() - bo_anchor_us_;
    uint32_t consumed = static_cast<uint32_t>(elapsed / cfg_.dcf.slot_us);
    bo_remaining_ -= std::min(bo_remaining_, consumed);
    bo_counting_ = false;
    cancel_timer(TimerPurpose::BackoffDone);
    cancel_timer(TimerPurpose::DifsDone);
}

void NodeMac::transmit_head() {
    if (buf_.q.empty()) {
        set_state(MacState::Idle, "buffer_empty");
        return;
    }
    const BufferedPacket& pkt = buf_.q.front();
    bool hol = cfg_.fd_enabled && next_is_for(pkt.dest);
    FdHeader fd;
    fd.dupmode = DupMode::HD;
    fd.hol = hol;
    fd.durnxt_us = hol ? static_cast<uint16_t>(fd_data_airtime(buf_.q[1].payload_bytes)) : 0;
    uint16_t dur = static_cast<uint16_t>(cfg_.dcf.sifs_us + ack_air_hol());
    Frame frame = Frame::data(id_, pkt.dest, pkt.payload_bytes, fd, cfg_.dcf.timing,
                              /*frag=*/false, dur);
    MicroSec now = host_->now();
    last_data_end_us_ = now + frame.airtime_us;
    sent_hol_ = hol;
    data_dst_ = pkt.dest;
    host_->schedule_tx(id_, pkt.dest, frame, phy::Estimation::Clean, now,
                       TxPurpose::HdData);
    set_state(MacState::TxData, "tx_data");
    arm_timer(TimerPurpose::AckTimeout,
              last_data_end_us_ + cfg_.dcf.sifs_us + ack_air_hol() + cfg_.dcf.slot_us);
}

void NodeMac::tx_failure(const char* what) {
    ++retries_;
    if (retries_ > cfg_.dcf.retry_limit) {
        const BufferedPacket& pkt = buf_.q.front();
        host_->count_drop(id_, pkt.dest);
        buf_.q.pop_front();
        retries_ = 0;
        cw_ = cfg_.dcf.cw_min;
        host_->refill_traffic(id_);
    } else {
        cw_ = std::min(2 * (cw_ + 1) - 1, cfg_.dcf.cw_max_limit);
    }
    start_contention(what);
}

void NodeMac::pop_head_served() {
    BufferedPacket pkt = buf_.q.front();
    buf_.q.pop_front();
    host_->count_delivery(id_, pkt.dest, pkt.payload_bytes, true);
    if (cfg_.is_ap) host_->count_head_delay(pkt.bypass_rounds);
    cw_ = cfg_.dcf.cw_min;
    retries_ = 0;
    host_->refill_traffic(id_);
}

// ---------------------------------------------------------------------------
// Receive paths
// ---------------------------------------------------------------------------

void NodeMac::on_rx_start(NodeId) { ++rx_locked_; }

void NodeMac::on_rx_result(NodeId src, const Frame& frame, RxOutcome outcome,
                           MicroSec end_us) {
    --rx_locked_;
    if (state_ == MacState::FdRound && fd_.active && src == fd_.peer &&
        frame.mac.kind == FrameKind::Data) {
        fd_.peer_data_ok = outcome == RxOutcome::Decoded;
        return;
    }
    if (outcome != RxOutcome::Decoded) return;  // no ACK for a broken frame
    if (frame.mac.kind == FrameKind::Data) {
        handle_data_rx(src, frame, end_us);
    } else {
        handle_ack_rx(src, frame, end_us);
    }
}

void NodeMac::handle_data_rx(NodeId src, const Frame& frame, MicroSec end_us) {
    const MicroSec sifs = cfg_.dcf.sifs_us;

    // A frame that rode in over our own transmission is an injected
    // uplink fragment: its ACK waits until one ACK period after our own
    // DATA finishes, behind the addressed receiver's ACK.
    bool injected = end_us <= last_data_end_us_ && (tx_active_ || end_us == host_->now());
    if (injected && state_ == MacState::TxData) {
        FdHeader fd;
        Frame ack = Frame::ack(id_, src, fd, cfg_.dcf.timing, 0);
        MicroSec at = last_data_end_us_ + sifs + ack_air_hol() + sifs;
        host_->schedule_tx(id_, src, ack, phy::Estimation::Clean, at,
                           TxPurpose::InjectAck);
        hold_until_us_ = std::max(hold_until_us_, at + ack.airtime_us);
        host_->count_delivery(src, id_, frame.payload_bytes, !frame.mac.frag);
        return;
    }

    bool have_reverse = cfg_.fd_enabled && head_is_for(src);
    bool offer = have_reverse && frame.fd.hol;
    FdHeader fd;
    fd.hol = have_reverse;
    fd.durnxt_us = have_reverse
                       ? static_cast<uint16_t>(fd_data_airtime(buf_.q.front().payload_bytes))
                       : 0;
    fd.cts = offer;
    uint16_t dur = offer ? static_cast<uint16_t>(sifs + ack_air_hol()) : 0;
    Frame ack = Frame::ack(id_, src, fd, cfg_.dcf.timing, dur);
    host_->schedule_tx(id_, src, ack, phy::Estimation::Clean, end_us + sifs,
                       offer ? TxPurpose::Ack1 : TxPurpose::PlainAck);
    MicroSec ack_end = end_us + sifs + ack.airtime_us;
    hold_until_us_ = std::max(hold_until_us_, ack_end);

    if (offer) {
        pause_backoff_counting();
        fd_ = FdContext{};
        fd_.peer = src;
        fd_.my_hol = true;
        fd_.my_durnxt_us = fd.durnxt_us;
        fd_.peer_hol = true;
        fd_.peer_durnxt_us = frame.fd.durnxt_us;
        set_state(MacState::AwaitTrainAck, "fd_offer");
        arm_timer(TimerPurpose::TrainAckTimeout,
                  ack_end + sifs + ack_air_hol() + cfg_.dcf.slot_us);
    }
}

void NodeMac::handle_ack_rx(NodeId src, const Frame& frame, MicroSec end_us) {
    switch (state_) {
        case MacState::TxData: {
            if (src != data_dst_) return;
            cancel_timer(TimerPurpose::AckTimeout);
            pop_head_served();
            host_->count_exchange(false);
            if (frame.fd.cts && sent_hol_ && cfg_.fd_enabled) {
                // Training ACK: confirms the canceler is trained on both
                // ends and advertises our round-one packet.
                fd_ = FdContext{};
                fd_.peer = src;
                fd_.peer_hol = true;
                fd_.peer_durnxt_us = frame.fd.durnxt_us;
                fd_.my_hol = true;
                fd_.my_durnxt_us = fd_data_airtime(buf_.q.front().payload_bytes);
                FdHeader fd;
                fd.hol = true;
                fd.durnxt_us = static_cast<uint16_t>(fd_.my_durnxt_us);
                fd.cts = true;
                Frame ack2 = Frame::ack(id_, src, fd, cfg_.dcf.timing,
                                        static_cast<uint16_t>(cfg_.dcf.difs_us));
                host_->schedule_tx(id_, src, ack2, phy::Estimation::Clean,
                                   end_us + cfg_.dcf.sifs_us, TxPurpose::Ack2);
                fd_.durfd_us = std::max(fd_.my_durnxt_us, fd_.peer_durnxt_us);
                fd_.my_srb = 0;
                fd_.peer_srb = 0;
                hold_until_us_ =
                    std::max(hold_until_us_, end_us + cfg_.dcf.sifs_us + ack2.airtime_us);
                // srb wait entered when the training ACK finishes
            } else {
                start_contention("hd_done");
            }
            return;
        }
        case MacState::AwaitTrainAck: {
            if (src != fd_.peer) return;
            cancel_timer(TimerPurpose::TrainAckTimeout);
            fd_.peer_durnxt_us = frame.fd.durnxt_us;
            fd_.durfd_us = std::max(fd_.my_durnxt_us, fd_.peer_durnxt_us);
            fd_.my_srb = 0;
            fd_.peer_srb = 0;
            enter_srb_wait(0, end_us, "train_ack");
            return;
        }
        case MacState::FdAckPhase: {
            if (src != fd_.peer) return;
            if (cfg_.is_ap && !fd_.got_first_ack) {
                fd_.got_first_ack = true;
                cancel_timer(TimerPurpose::FdFirstAckTimeout);
                pop_head_served();
                host_->count_exchange(true);
                ReorderOutcome ro =
                    reorder_buffer(buf_, fd_.peer, host_->rng(id_, StreamPurpose::Reorder));
                host_->count_reorder(ro.candidate_found, ro.promoted);
                fd_.peer_hol = frame.fd.hol;
                fd_.peer_durnxt_us = frame.fd.durnxt_us;
                fd_.peer_srb = frame.fd.srb;
                if (fd_.peer_data_ok) {
                    send_fd_second_ack(end_us);
                } else {
                    purge_peer_knowledge(PurgeCause::DataFail);
                }
            } else if (!cfg_.is_ap && fd_.sent_first_ack) {
                cancel_timer(TimerPurpose::FdSecondAckTimeout);
                pop_head_served();
                fd_.peer_hol = frame.fd.hol;
                fd_.peer_durnxt_us = frame.fd.durnxt_us;
                fd_.peer_srb = frame.fd.srb;
                evaluate_fd_continue(end_us);
            }
            return;
        }
        case MacState::Inject: {
            if (!inject_.active) return;
            cancel_timer(TimerPurpose::InjectAckTimeout);
            cw_ = cfg_.dcf.cw_min;
            if (inject_.tail_remains) {
                buf_.q.front().payload_bytes -= inject_.sent_bytes;
                buf_.q.front().is_fragment_tail = true;
                host_->count_delivery(id_, src, inject_.sent_bytes, false);
            } else {
                host_->count_delivery(id_, src, buf_.q.front().payload_bytes, true);
                buf_.q.pop_front();
                host_->refill_traffic(id_);
            }
            inject_.active = false;
            set_state(buf_.q.empty() ? MacState::Idle : MacState::Contend, "inject_done");
            resume_contention_clock();
            return;
        }
        default:
            return;
    }
}

// ---------------------------------------------------------------------------
// Full-duplex round choreography
// ---------------------------------------------------------------------------

void NodeMac::enter_srb_wait(uint16_t srb_slots, MicroSec from_us, const char* cause) {
    pk_.valid = true;
    pk_.peer = fd_.peer;
    pk_.peer_has_hol = fd_.peer_hol;
    pk_.peer_durnxt_us = fd_.peer_durnxt_us;
    pk_.my_pending_srb = fd_.my_srb;
    pk_.peer_srb = fd_.peer_srb;
    fd_.active = true;
    fd_.resume_at_us = from_us + MicroSec{srb_slots} * cfg_.dcf.slot_us + cfg_.dcf.difs_us;
    set_state(MacState::SrbWait, cause);
    arm_timer(TimerPurpose::SrbResume, fd_.resume_at_us);
}

void NodeMac::begin_fd_round() {
    assert(head_is_for(fd_.peer));
    const BufferedPacket& pkt = buf_.q.front();
    bool hol = cfg_.fd_enabled && next_is_for(fd_.peer);
    FdHeader fd;
    fd.dupmode = DupMode::FD;
    fd.hol = hol;
    fd.durnxt_us = hol ? static_cast<uint16_t>(fd_data_airtime(buf_.q[1].payload_bytes)) : 0;
    fd.durfd_us = static_cast<uint16_t>(fd_.durfd_us);
    MicroSec air = fd_data_airtime(pkt.payload_bytes);
    MicroSec now = host_->now();
    uint16_t dur = static_cast<uint16_t>((fd_.durfd_us - air) +
                                         2 * (cfg_.dcf.sifs_us + ack_air_hol()));
    Frame frame = Frame::data(id_, fd_.peer, pkt.payload_bytes, fd, cfg_.dcf.timing,
                              /*frag=*/false, dur);
    last_data_end_us_ = now + frame.airtime_us;
    host_->schedule_tx(id_, fd_.peer, frame, phy::Estimation::Clean, now,
                       TxPurpose::FdData);
    fd_.round_start_us = now;
    fd_.durfd_end_us = now + fd_.durfd_us;
    fd_.peer_data_ok = false;
    fd_.got_first_ack = false;
    fd_.sent_first_ack = false;
    set_state(MacState::FdRound, "fd_round");
    arm_timer(TimerPurpose::FdFirstAckSlot, fd_.durfd_end_us);
    MicroSec ack_period = cfg_.dcf.sifs_us + ack_air_hol();
    if (cfg_.is_ap) {
        arm_timer(TimerPurpose::FdFirstAckTimeout,
                  fd_.durfd_end_us + ack_period + cfg_.dcf.slot_us);
    } else {
        arm_timer(TimerPurpose::FdSecondAckTimeout,
                  fd_.durfd_end_us + 2 * ack_period + cfg_.dcf.slot_us);
    }
}

void NodeMac::send_fd_first_ack() {
    bool hol = cfg_.fd_enabled && next_is_for(fd_.peer);
    FdHeader fd;
    fd.hol = hol;
    fd.durnxt_us = hol ? static_cast<uint16_t>(fd_data_airtime(buf_.q[1].payload_bytes)) : 0;
    fd.cts = hol;
    fd.srb = static_cast<uint16_t>(
        draw_backoff(cw_, host_->rng(id_, StreamPurpose::Srb)));
    fd_.my_hol = hol;
    fd_.my_durnxt_us = fd.durnxt_us;
    fd_.my_srb = fd.srb;
    fd_.sent_first_ack = true;
    uint16_t dur = static_cast<uint16_t>(cfg_.dcf.sifs_us + ack_air_hol());
    Frame ack = Frame::ack(id_, fd_.peer, fd, cfg_.dcf.timing, dur);
    host_->schedule_tx(id_, fd_.peer, ack, phy::Estimation::Clean,
                       fd_.durfd_end_us + cfg_.dcf.sifs_us, TxPurpose::FdAckFirst);
}

void NodeMac::send_fd_second_ack(MicroSec mobile_ack_end_us) {
    bool hol = cfg_.fd_enabled && head_is_for(fd_.peer);
    FdHeader fd;
    fd.hol = hol;
    fd.durnxt_us =
        hol ? static_cast<uint16_t>(fd_data_airtime(buf_.q.front().payload_bytes)) : 0;
    fd.cts = hol;
    fd.srb = static_cast<uint16_t>(
        draw_backoff(cw_, host_->rng(id_, StreamPurpose::Srb)));
    fd_.my_hol = hol;
    fd_.my_durnxt_us = fd.durnxt_us;
    fd_.my_srb = fd.srb;
    Frame ack = Frame::ack(id_, fd_.peer, fd, cfg_.dcf.timing, 0);
    host_->schedule_tx(id_, fd_.peer, ack, phy::Estimation::Clean,
                       mobile_ack_end_us + cfg_.dcf.sifs_us, TxPurpose::FdAckSecond);
}

void NodeMac::evaluate_fd_continue(MicroSec last_ack_end_us) {
    if (fd_.my_hol && fd_.peer_hol) {
        fd_.durfd_us = std::max(fd_.my_durnxt_us, fd_.peer_durnxt_us);
        uint16_t srb = srb_resolve(fd_.my_srb, fd_.peer_srb);
        enter_srb_wait(srb, last_ack_end_us, "fd_continue");
    } else {
        natural_giveup("hol_zero");
    }
}

void NodeMac::natural_giveup(const char* cause) {
    fd_ = FdContext{};
    pk_ = PeerKnowledge{};
    start_contention(cause);
}

void NodeMac::purge_peer_knowledge(PurgeCause cause) {
    host_->count_purge(id_, cause);
    fd_ = FdContext{};
    pk_ = PeerKnowledge{};
    cancel_timer(TimerPurpose::SrbResume);
    cancel_timer(TimerPurpose::FdFirstAckSlot);
    cancel_timer(TimerPurpose::FdFirstAckTimeout);
    cancel_timer(TimerPurpose::FdSecondAckTimeout);
    cancel_timer(TimerPurpose::TrainAckTimeout);
    start_contention(to_string(cause));
}

// ---------------------------------------------------------------------------
// Carrier events and timers
// ---------------------------------------------------------------------------

void NodeMac::on_busy_start(NodeId src, MicroSec tx_start_us) {
    if (state_ == MacState::Contend) pause_backoff_counting();
    if (state_ == MacState::SrbWait) {
        bool own_resume = fd_.active && src == fd_.peer && tx_start_us == fd_.resume_at_us;
        if (!own_resume) purge_peer_knowledge(PurgeCause::LostMedium);
    }
}

void NodeMac::on_busy_end() {
    if (state_ == MacState::Contend) resume_contention_clock();
}

void NodeMac::on_tx_begin(TxPurpose) { tx_active_ = true; }

void NodeMac::on_tx_done(TxPurpose purpose, const Frame&) {
    tx_active_ = false;
    switch (purpose) {
        case TxPurpose::Ack2:
            enter_srb_wait(0, host_->now(), "ack2_done");
            break;
        case TxPurpose::FdAckSecond:
            evaluate_fd_continue(host_->now());
            break;
        default:
            break;
    }
    resume_contention_clock();
}

void NodeMac::on_timer(TimerPurpose purpose, uint64_t gen) {
    if (!timer_current(purpose, gen)) return;
    MicroSec now = host_->now();
    switch (purpose) {
        case TimerPurpose::DifsDone: {
            if (state_ != MacState::Contend || tx_active_) return;
            if (host_->carrier_busy(id_)) return;
            if (now < std::max(nav_until_us_, hold_until_us_)) {
                resume_contention_clock();
                return;
            }
            if (bo_remaining_ == 0) {
                transmit_head();
            } else {
                bo_anchor_us_ = now;
                bo_counting_ = true;
                arm_timer(TimerPurpose::BackoffDone,
                          now + MicroSec{bo_remaining_} * cfg_.dcf.slot_us);
            }
            return;
        }
        case TimerPurpose::BackoffDone: {
            if (state_ != MacState::Contend || tx_active_) return;
            if (host_->carrier_busy(id_)) {
                pause_backoff_counting();
                return;
            }
            bo_remaining_ = 0;
            bo_counting_ = false;
            transmit_head();
            return;
        }
        case TimerPurpose::NavEnd:
            resume_contention_clock();
            return;
        case TimerPurpose::AckTimeout:
            if (state_ != MacState::TxData) return;
            tx_failure("ack_timeout");
            return;
        case TimerPurpose::TrainAckTimeout:
            if (state_ != MacState::AwaitTrainAck) return;
            fd_ = FdContext{};
            start_contention("train_ack_timeout");
            return;
        case TimerPurpose::SrbResume: {
            if (state_ != MacState::SrbWait) return;
            if (host_->blocked_for_fd_resume(id_, fd_.peer, now)) {
                purge_peer_knowledge(PurgeCause::LostMedium);
                return;
            }
            begin_fd_round();
            return;
        }
        case TimerPurpose::FdFirstAckSlot: {
            if (state_ != MacState::FdRound) return;
            set_state(MacState::FdAckPhase, "durfd_end");
            if (!cfg_.is_ap) {
                if (fd_.peer_data_ok) {
                    send_fd_first_ack();
                } else {
                    purge_peer_knowledge(PurgeCause::DataFail);
                }
            }
            return;
        }
        case TimerPurpose::FdFirstAckTimeout:
            if (state_ != MacState::FdAckPhase || fd_.got_first_ack) return;
            purge_peer_knowledge(PurgeCause::PeerAckFail);
            return;
        case TimerPurpose::FdSecondAckTimeout:
            if (state_ != MacState::FdAckPhase) return;
            purge_peer_knowledge(PurgeCause::MyAckFail);
            return;
        case TimerPurpose::InjectAckTimeout:
            if (state_ != MacState::Inject || !inject_.active) return;
            inject_.active = false;
            cw_ = std::min(2 * (cw_ + 1) - 1, cfg_.dcf.cw_max_limit);
            set_state(buf_.q.empty() ? MacState::Idle : MacState::Contend,
                      "inject_timeout");
            resume_contention_clock();
            return;
        case TimerPurpose::SnoopWatch: {
            if (!snoop_.observed) return;
            snoop_.belief[snoop_.observed->dst] = TopologyBelief::Hidden;
            snoop_.observed.reset();
            return;
        }
        default:
            return;
    }
}

// ---------------------------------------------------------------------------
// Snooping: beliefs, NAV, hidden-node injection
// ---------------------------------------------------------------------------

void NodeMac::on_header(const SnoopedHeader& h) {
    if (h.dst == id_) return;  // we are the receiver, not a snooper
    nav_until_us_ = std::max(nav_until_us_, h.end_us + h.dur_us);
    snoop_observe_header(h);
    maybe_inject(h);
}

void NodeMac::snoop_observe_header(const SnoopedHeader& h) {
    snoop_.belief[h.src] = TopologyBelief::Clique;  // heard it directly
    if (h.kind == FrameKind::Data && h.src == kApId) {
        snoop_.observed = h;
        MicroSec data_end = h.dupmode == DupMode::FD ? h.start_us + h.durfd_us : h.end_us;
        snoop_.watch_deadline_us =
            data_end + cfg_.dcf.sifs_us + ack_air_hol() + cfg_.dcf.slot_us;
        arm_timer(TimerPurpose::SnoopWatch, snoop_.watch_deadline_us);
    } else if (h.kind == FrameKind::Ack && snoop_.observed &&
               h.src == snoop_.observed->dst) {
        snoop_.belief[h.src] = TopologyBelief::Clique;
        snoop_.observed.reset();
        cancel_timer(TimerPurpose::SnoopWatch);
    }
}

void NodeMac::maybe_inject(const SnoopedHeader& h) {
    if (cfg_.is_ap || !cfg_.fd_enabled || cfg_.beta <= 0) return;
    if (h.kind != FrameKind::Data || h.dupmode != DupMode::HD || !h.hol) return;
    if (h.src != kApId || h.dst == id_) return;
    if (state_ != MacState::Idle && state_ != MacState::Contend) return;
    if (tx_active_ || rx_locked_ > 0) return;
    if (snoop_.belief_of(h.dst) != TopologyBelief::Hidden) return;
    if (!head_is_for(kApId)) return;

    MicroSec now = host_->now();
    if (h.end_us <= now + cfg_.dcf.timing.preamble_us) return;
    MicroSec budget_us = h.end_us - now - cfg_.dcf.timing.preamble_us;
    uint64_t rate = cfg_.dcf.timing.data_rate_bps / 1'000'000;
    FdHeader proto;
    proto.durnxt_present = true;
    uint64_t hdr_bits = MacHeader::kWireBits + proto.wire_bits();
    uint64_t budget_bits = budget_us * rate;
    if (budget_bits < hdr_bits + 32 + 8) return;  // cannot fit one payload byte
    uint32_t max_payload = static_cast<uint32_t>((budget_bits - hdr_bits - 32) / 8);

    host_->count_injection_opportunity(false);  // counted; "fired" updated below
    double p = cfg_.injection_probability >= 0
                   ? cfg_.injection_probability
                   : snoop_tx_probability(cw_ + 1, cfg_.beta);
    if (!host_->rng(id_, StreamPurpose::Inject).bernoulli(p)) return;
    host_->count_injection_opportunity(true);

    uint32_t head_bytes = buf_.q.front().payload_bytes;
    uint32_t bytes = std::min(head_bytes, max_payload);
    bool frag = bytes < head_bytes;
    FdHeader fd;
    fd.hol = false;
    Frame frame = Frame::data(id_, kApId, bytes, fd, cfg_.dcf.timing, frag, 0);
    MicroSec my_end = now + frame.airtime_us;
    // ends no later than the AP's transmission, by construction
    assert(my_end <= h.end_us);
    uint16_t dur = static_cast<uint16_t>((h.end_us - my_end) +
                                         2 * (cfg_.dcf.sifs_us + ack_air_hol()));
    frame.mac.dur_us = dur;
    pause_backoff_counting();
    host_->schedule_tx(id_, kApId, frame, phy::Estimation::Dirty, now,
                       TxPurpose::InjectData);
    inject_.active = true;
    inject_.sent_bytes = bytes;
    inject_.tail_remains = frag;
    inject_.ap_data_end_us = h.end_us;
    set_state(MacState::Inject, "inject");
    arm_timer(TimerPurpose::InjectAckTimeout,
              h.end_us + 2 * (cfg_.dcf.sifs_us + ack_air_hol()) + cfg_.dcf.slot_us);
}

}  // namespace fdmac
