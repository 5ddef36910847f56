#ifndef FDMAC_PHY_HPP_
#define FDMAC_PHY_HPP_

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fdmac/types.hpp"

namespace fdmac::phy {

using Cplx = std::complex<double>;

// Per-subcarrier gains of the self-interference path (h), the wired
// cancellation path (h_c), and the transceiver's estimates of both.
struct SubcarrierChannels {
    std::vector<Cplx> h;
    std::vector<Cplx> h_c;
    std::vector<Cplx> h_hat;
    std::vector<Cplx> h_hat_c;

    std::size_t subcarriers() const { return h.size(); }
    // Empty string when consistent (equal lengths, no zero h_hat_c).
    std::string invariant_violation() const;
};

// x_c[k] = -(h_hat[k] / h_hat_c[k]) * x[k]. Throws std::invalid_argument
// on inconsistent channels (a zero h_hat_c entry makes the ratio undefined).
std::vector<Cplx> canceling_signal(const SubcarrierChannels& ch,
                                   const std::vector<Cplx>& x);

// Residual after active analog cancellation:
// z[k] = h[k]*x[k] + h_c[k]*x_c[k]. Perfect estimates null it out.
std::vector<Cplx> residual_self_interference(const SubcarrierChannels& ch,
                                             const std::vector<Cplx>& x);

enum class PresetName : uint8_t { A = 0, B = 1, C = 2 };
PresetName preset_name_from(const std::string& s);
const char* to_string(PresetName p);

// One measured antenna-configuration row: self-interference power before
// and after analog cancellation at 6 dBm transmit power.
struct SuppressionPreset {
    PresetName name = PresetName::A;
    bool device_present = false;
    double interference_dbm = 0;
    double after_analog_dbm = 0;
    double total_suppression_db = 0;
};

struct BerRow {
    double sinr_db = 0;
    double ber_dirty = 0;
    double ber_clean = 0;
};

// The measured suppression presets and the SINR -> BER anchor rows,
// shipped as data/phy_tables.json and overridable per scenario.
struct PhyTables {
    int version = 1;
    double tx_power_dbm = 6.0;
    std::array<SuppressionPreset, 6> presets{};
    std::vector<BerRow> ber;  // sorted by sinr_db descending

    static const PhyTables& builtin();
    static PhyTables load_json(const std::string& path);
    std::string invariant_violation() const;
};

const SuppressionPreset& preset_lookup(const PhyTables& tables, PresetName name,
                                       bool device_present);

enum class Estimation : uint8_t { Clean = 0, Dirty = 1 };
const char* to_string(Estimation e);

// Exact at anchors, log10-linear between them, clamped to the edge rows
// outside their span. The clean column is 0 at and above the top anchor;
// just below it the clean curve interpolates toward the top dirty value,
// the finest BER the measurement could resolve.
double sinr_to_ber(const PhyTables& tables, double sinr_db, Estimation est);

// (1 - ber)^(8*payload_bytes); headers ride the base rate and never fail.
double frame_success_prob(double ber, uint32_t payload_bytes);

enum class NodePhyState : uint8_t { Idle, Transmitting, Receiving };
enum class PhyAction : uint8_t { StartTx, StartRx };

struct AsyncVerdict {
    bool allowed = false;
    Estimation estimation = Estimation::Clean;  // meaningful when allowed
};

// The asynchronous-mode rule: a busy transmitter may start receiving
// (dirty estimation), a receiving node may never start transmitting.
AsyncVerdict allowed_async(NodePhyState state, PhyAction action);

// Link-level noise composition for a receiver.
struct LinkBudget {
    double noise_floor_dbm = -95.0;
    double tx_power_dbm = 6.0;
    double total_suppression_db = 81.0;  // preset B with device
    double dirty_penalty_db = 3.0;
};

// SINR seen by the decoder. When the receiver's own transmitter is active,
// the residual self-interference (tx power minus total suppression) adds
// to the noise floor; dirty estimation costs a further fixed penalty.
double effective_sinr_db(double link_snr_db, bool self_tx_active, Estimation est,
                         const LinkBudget& budget);

// Per-directed-link SNR plus the shared tables and budget; decides frame
// decode success for the medium.
struct LinkModel {
    double default_snr_db = 45.0;
    std::map<std::pair<NodeId, NodeId>, double> snr_overrides;  // (src, dst)
    PhyTables tables = PhyTables::builtin();
    LinkBudget budget;

    double snr_db(NodeId src, NodeId dst) const {
        auto it = snr_overrides.find({src, dst});
        return it == snr_overrides.end() ? default_snr_db : it->second;
    }
};

}  // namespace fdmac::phy

#endif  // FDMAC_PHY_HPP_
