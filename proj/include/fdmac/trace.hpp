#ifndef FDMAC_TRACE_HPP_
#define FDMAC_TRACE_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdmac/types.hpp"

namespace fdmac {

// One row of the machine-readable run trace. `event` is one of:
// tx_start, tx_end, rx_start, rx_end, fsm, enqueue, deliver, drop, purge.
// `detail` is a space-separated key=value list.
struct TraceRow {
    MicroSec time_us = 0;
    NodeId node = 0;
    std::string event;
    std::string detail;
};

class TraceRecorder {
public:
    void enable() { enabled_ = true; }
    bool enabled() const { return enabled_; }

    void add(MicroSec t, NodeId node, std::string event, std::string detail) {
        if (enabled_) rows_.push_back({t, node, std::move(event), std::move(detail)});
    }

    const std::vector<TraceRow>& rows() const { return rows_; }

    // Header line then one `time_us,node,event,detail` row per record.
    void write_csv(std::ostream& out) const;

private:
    bool enabled_ = false;
    std::vector<TraceRow> rows_;
};

}  // namespace fdmac

#endif  // FDMAC_TRACE_HPP_
