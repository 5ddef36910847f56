#ifndef FDMAC_SCENARIO_HPP_
#define FDMAC_SCENARIO_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdmac/mac.hpp"
#include "fdmac/medium.hpp"
#include "fdmac/phy.hpp"
#include "fdmac/types.hpp"

namespace fdmac {

enum class TrafficKind : uint8_t { None, Saturated, Poisson, List };

struct TrafficItem {
    MicroSec at_us = 0;
    NodeId dest = 0;
    uint32_t bytes = 0;
};

struct TrafficSpec {
    TrafficKind kind = TrafficKind::None;
    bool uniform_dest = false;  // spread over all other nodes (AP downlink)
    NodeId dest = 0;
    double rate_pps = 0;        // Poisson arrival rate
    std::vector<TrafficItem> list;
};

// A complete run configuration: topology, traffic, MAC/PHY knobs, seed.
// No wall-clock entropy anywhere; identical scenarios give identical runs.
struct Scenario {
    Topology topology;
    std::vector<std::string> node_names;  // index = NodeId
    std::map<NodeId, TrafficSpec> traffic;
    uint32_t payload_bytes = 324;

    DcfParams dcf;
    uint32_t bufdepth = 1;
    double p_pick = 0.5;
    double beta = 16.0;
    bool fd_enabled = true;
    bool virtual_contention_only = false;  // mobiles never contend physically
    double injection_probability = -1.0;   // < 0: use beta / cw width

    phy::LinkModel links;

    uint64_t seed = 1;
    MicroSec duration_us = 1'000'000;
    uint32_t repeats = 1;

    NodeId node_id(const std::string& name) const;
    const std::string& node_name(NodeId id) const { return node_names.at(id); }
    std::string invariant_violation() const;
};

// Scenario-file problem, with the 1-based line it was found on (0 when the
// problem is not tied to a specific line).
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Sectioned key=value format; see README for the full grammar. Unknown
// sections or keys are errors, not warnings.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario_file(const std::string& path);

}  // namespace fdmac

#endif  // FDMAC_SCENARIO_HPP_
