#ifndef FDMAC_METRICS_HPP_
#define FDMAC_METRICS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "fdmac/types.hpp"

namespace fdmac {

struct FlowStats {
    uint64_t generated = 0;
    uint64_t delivered_pkts = 0;   // confirmed by ACK at the sender
    uint64_t delivered_bytes = 0;
    uint64_t dropped = 0;          // retry limit exhausted
    uint64_t in_flight_at_end = 0; // still buffered or on the air
};

struct MetricsReport {
    uint64_t seed = 0;
    MicroSec duration_us = 0;
    std::map<std::pair<NodeId, NodeId>, FlowStats> flows;

    uint64_t generated = 0;
    uint64_t delivered_pkts = 0;
    uint64_t delivered_bytes = 0;
    uint64_t dropped = 0;
    uint64_t in_flight_at_end = 0;

    uint64_t collision_count = 0;  // payload overlaps at an intended receiver
    uint64_t ber_loss_count = 0;
    double goodput_bps = 0;
    double normalized_throughput = 0;  // vs. saturated half-duplex single link
    double mean_head_delay_rounds = 0; // AP buffer, bypasses before service
    double fd_airtime_fraction = 0;    // busy time with >= 2 frames in the air

    uint64_t hd_exchanges = 0;
    uint64_t fd_rounds = 0;
    uint64_t head_delay_samples = 0;
    uint64_t reorder_opportunities = 0;
    uint64_t reorder_promotions = 0;
    uint64_t injection_opportunities = 0;
    uint64_t injections_fired = 0;
    uint64_t dirty_rx_count = 0;    // receptions begun while transmitting
    uint64_t purge_count = 0;

    std::string invariant_violation() const;
};

}  // namespace fdmac

#endif  // FDMAC_METRICS_HPP_
