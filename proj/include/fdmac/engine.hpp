#ifndef FDMAC_ENGINE_HPP_
#define FDMAC_ENGINE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <queue>
#include <vector>

#include "fdmac/medium.hpp"
#include "fdmac/metrics.hpp"
#include "fdmac/node_mac.hpp"
#include "fdmac/scenario.hpp"
#include "fdmac/trace.hpp"

namespace fdmac {

enum class EventKind : uint8_t {
    TxStart,
    TxEnd,
    HeaderDone,
    BackoffExpiry,  // generic MAC timer (DIFS, backoff, SRB, NAV, ...)
    AckTimeout,
    SnoopTimer,
    PacketArrival,
};
const char* to_string(EventKind k);

// Totally ordered by (time_us, seq); seq is the insertion counter, so
// same-instant events replay in the order they were scheduled.
struct Event {
    MicroSec time_us = 0;
    uint64_t seq = 0;
    EventKind kind = EventKind::TxStart;
    NodeId node = 0;
    uint64_t a = 0;  // pending-tx id, medium tx id, or timer generation
    uint8_t b = 0;   // timer/tx purpose
};

struct RunResult {
    MetricsReport metrics;
    TraceRecorder trace;
};

// Deterministic discrete-event core: one seeded run over one scenario.
class SimEngine : public MacHost {
public:
    explicit SimEngine(Scenario scenario, bool enable_trace = false);

    RunResult run();

    // --- MacHost ---
    MicroSec now() const override { return now_us_; }
    bool carrier_busy(NodeId self) const override;
    bool blocked_for_fd_resume(NodeId self, NodeId peer, MicroSec at) const override;
    void schedule_timer(NodeId node, TimerPurpose purpose, MicroSec at,
                        uint64_t gen) override;
    void schedule_tx(NodeId src, NodeId dst, const Frame& frame, phy::Estimation mode,
                     MicroSec at, TxPurpose purpose) override;
    Rng& rng(NodeId node, StreamPurpose purpose) override;
    void fsm_trace(NodeId node, MacState from, MacState to, const char* cause) override;
    void count_delivery(NodeId src, NodeId dst, uint32_t bytes,
                        bool whole_packet) override;
    void count_drop(NodeId src, NodeId dst) override;
    void count_head_delay(uint32_t bypass_rounds) override;
    void count_reorder(bool candidate, bool promoted) override;
    void count_injection_opportunity(bool fired) override;
    void count_exchange(bool fd) override;
    void count_purge(NodeId node, PurgeCause cause) override;
    void refill_traffic(NodeId node) override;

private:
    struct PendingTx {
        NodeId src, dst;
        Frame frame;
        phy::Estimation mode;
        TxPurpose purpose;
    };

    void push(MicroSec at, EventKind kind, NodeId node, uint64_t a, uint8_t b = 0);
    void handle_tx_start(const Event& ev);
    void handle_tx_end(const Event& ev);
    void handle_header_done(const Event& ev);
    void handle_packet_arrival(const Event& ev);
    void seed_traffic();
    void enqueue_generated(NodeId node, NodeId dest, uint32_t bytes, bool quiet);
    NodeId pick_uniform_dest(NodeId src);
    void schedule_poisson_next(NodeId node);
    void occupancy_change(int delta);
    void finalize_metrics();

    Scenario scn_;
    Medium medium_;
    TraceRecorder trace_;
    MetricsReport metrics_;

    std::vector<std::unique_ptr<NodeMac>> nodes_;
    std::priority_queue<Event, std::vector<Event>, bool (*)(const Event&, const Event&)> queue_;
    uint64_t next_seq_ = 0;
    MicroSec now_us_ = 0;

    std::map<std::pair<NodeId, uint8_t>, Rng> streams_;
    std::map<uint64_t, PendingTx> pending_tx_;
    uint64_t next_pending_id_ = 1;
    std::map<uint64_t, TxPurpose> tx_purpose_;  // by medium transmission id

    std::vector<int> busy_count_;       // in-range active transmissions per node
    std::vector<uint64_t> tx_of_node_;  // active medium tx id per node (0 = none)

    int air_count_ = 0;  // global active transmissions
    MicroSec air_since_us_ = 0;
    MicroSec busy1_accum_us_ = 0;  // time with >= 1 active
    MicroSec busy2_accum_us_ = 0;  // time with >= 2 active

    uint64_t next_pkt_id_ = 1;
    double head_delay_sum_ = 0;
};

// Aggregate goodput over the saturated half-duplex single-link baseline
// computed in closed form from the scenario parameters (see README).
double hd_baseline_goodput_bps(const Scenario& scn);
double normalized_throughput(const MetricsReport& report, const Scenario& scn);

// One run end to end. Repeats are handled by callers (seed + index).
RunResult run_scenario(const Scenario& scn, bool enable_trace = false);

}  // namespace fdmac

#endif  // FDMAC_ENGINE_HPP_
