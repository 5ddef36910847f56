#include "fdmac/phy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace fdmac::phy {

namespace {

double db_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_db(double mw) { return 10.0 * std::log10(mw); }

}  // namespace

std::string SubcarrierChannels::invariant_violation() const {
    std::size_t k = h.size();
    if (h_c.size() != k || h_hat.size() != k || h_hat_c.size() != k)
        return "channel arrays differ in length";
    for (const Cplx& v : h_hat_c)
        if (v == Cplx{0.0, 0.0}) return "zero cancellation-path estimate";
    return {};
}

std::vector<Cplx> canceling_signal(const SubcarrierChannels& ch,
                                   const std::vector<Cplx>& x) {
    std::string bad = ch.invariant_violation();
    if (!bad.empty()) throw std::invalid_argument("canceling_signal: " + bad);
    if (x.size() != ch.subcarriers())
        throw std::invalid_argument("canceling_signal: input length mismatch");
    std::vector<Cplx> xc(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        xc[k] = -(ch.h_hat[k] / ch.h_hat_c[k]) * x[k];
    return xc;
}

std::vector<Cplx> residual_self_interference(const SubcarrierChannels& ch,
                                             const std::vector<Cplx>& x) {
    std::vector<Cplx> xc = canceling_signal(ch, x);
    std::vector<Cplx> z(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        z[k] = ch.h[k] * x[k] + ch.h_c[k] * xc[k];
    return z;
}

PresetName preset_name_from(const std::string& s) {
    if (s == "A" || s == "a") return PresetName::A;
    if (s == "B" || s == "b") return PresetName::B;
    if (s == "C" || s == "c") return PresetName::C;
    throw std::invalid_argument("unknown suppression preset '" + s + "'");
}

const char* to_string(PresetName p) {
    switch (p) {
        case PresetName::A: return "A";
        case PresetName::B: return "B";
        case PresetName::C: return "C";
    }
    return "?";
}

const char* to_string(Estimation e) { return e == Estimation::Clean ? "clean" : "dirty"; }

const PhyTables& PhyTables::builtin() {
    static const PhyTables tables = [] {
        PhyTables t;
        t.version = 1;
        t.tx_power_dbm = 6.0;
        t.presets = {{
            {PresetName::A, false, -28, -52, 58},
            {PresetName::A, true, -28, -52, 58},
            {PresetName::B, false, -46, -71, 77},
            {PresetName::B, true, -51, -75, 81},
            {PresetName::C, false, -40, -63, 69},
            {PresetName::C, true, -49, -73, 79},
        }};
        t.ber = {
            {18, 2e-6, 0.0},
            {14, 4e-4, 1.4e-4},
            {11, 9e-3, 1.8e-3},
            {8, 2.4e-2, 5e-3},
            {7, 2.5e-2, 9e-3},
        };
        return t;
    }();
    return tables;
}

PhyTables PhyTables::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open phy tables file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);

    PhyTables t;
    t.version = j.at("version").get<int>();
    t.tx_power_dbm = j.at("tx_power_dbm").get<double>();
    const auto& presets = j.at("suppression_presets");
    if (presets.size() != t.presets.size())
        throw std::runtime_error("phy tables: expected 6 suppression presets");
    for (std::size_t i = 0; i < t.presets.size(); ++i) {
        const auto& row = presets[i];
        SuppressionPreset p;
        p.name = preset_name_from(row.at("config").get<std::string>());
        p.device_present = row.at("device_present").get<bool>();
        p.interference_dbm = row.at("interference_dbm").get<double>();
        p.after_analog_dbm = row.at("after_analog_dbm").get<double>();
        p.total_suppression_db = row.at("total_suppression_db").get<double>();
        t.presets[i] = p;
    }
    for (const auto& row : j.at("ber_table")) {
        BerRow r;
        r.sinr_db = row.at("sinr_db").get<double>();
        r.ber_dirty = row.at("ber_dirty").get<double>();
        r.ber_clean = row.at("ber_clean").get<double>();
        t.ber.push_back(r);
    }
    std::string bad = t.invariant_violation();
    if (!bad.empty()) throw std::runtime_error("phy tables: " + bad);
    return t;
}

std::string PhyTables::invariant_violation() const {
    for (const auto& p : presets) {
        if (std::abs(p.total_suppression_db - (tx_power_dbm - p.after_analog_dbm)) > 1e-9)
            return "total suppression inconsistent with tx power for preset " +
                   std::string(to_string(p.name));
    }
    if (ber.empty()) return "empty BER table";
    for (std::size_t i = 0; i < ber.size(); ++i) {
        const auto& r = ber[i];
        if (r.ber_dirty < 0 || r.ber_dirty > 1 || r.ber_clean < 0 || r.ber_clean > 1)
            return "BER outside [0,1]";
        if (r.ber_clean > r.ber_dirty) return "clean BER above dirty BER";
        if (i > 0 && ber[i - 1].sinr_db <= r.sinr_db)
            return "BER rows not sorted by SINR descending";
    }
    return {};
}

const SuppressionPreset& preset_lookup(const PhyTables& tables, PresetName name,
                                       bool device_present) {
    for (const auto& p : tables.presets)
        if (p.name == name && p.device_present == device_present) return p;
    throw std::invalid_argument("preset not found");  // unreachable for valid tables
}

double sinr_to_ber(const PhyTables& tables, double sinr_db, Estimation est) {
    const auto& rows = tables.ber;
    auto pick = [&](const BerRow& r) {
        return est == Estimation::Dirty ? r.ber_dirty : r.ber_clean;
    };

    if (sinr_db >= rows.front().sinr_db) return pick(rows.front());
    if (sinr_db <= rows.back().sinr_db) return pick(rows.back());

    for (std::size_t i = 1; i < rows.size(); ++i) {
        const BerRow& hi = rows[i - 1];
        const BerRow& lo = rows[i];
        if (sinr_db > lo.sinr_db) {
            if (sinr_db == hi.sinr_db) return pick(hi);
            double b_hi = pick(hi);
            double b_lo = pick(lo);
            // A zero upper anchor (clean at the top row) has no logarithm;
            // the dirty value at the same SINR bounds it from above.
            if (b_hi == 0.0) b_hi = hi.ber_dirty;
            double f = (sinr_db - lo.sinr_db) / (hi.sinr_db - lo.sinr_db);
            return std::pow(10.0, f * std::log10(b_hi) + (1 - f) * std::log10(b_lo));
        }
    }
    return pick(rows.back());
}

double frame_success_prob(double ber, uint32_t payload_bytes) {
    if (ber <= 0.0) return 1.0;
    if (ber >= 1.0) return payload_bytes == 0 ? 1.0 : 0.0;
    return std::pow(1.0 - ber, 8.0 * payload_bytes);
}

AsyncVerdict allowed_async(NodePhyState state, PhyAction action) {
    switch (action) {
        case PhyAction::StartTx:
            if (state == NodePhyState::Idle) return {true, Estimation::Clean};
            return {false, Estimation::Clean};
        case PhyAction::StartRx:
            if (state == NodePhyState::Idle) return {true, Estimation::Clean};
            if (state == NodePhyState::Transmitting) return {true, Estimation::Dirty};
            return {false, Estimation::Clean};
    }
    return {false, Estimation::Clean};
}

double effective_sinr_db(double link_snr_db, bool self_tx_active, Estimation est,
                         const LinkBudget& budget) {
    double signal_dbm = budget.noise_floor_dbm + link_snr_db;
    double noise_mw = db_to_mw(budget.noise_floor_dbm);
    if (self_tx_active)
        noise_mw += db_to_mw(budget.tx_power_dbm - budget.total_suppression_db);
    double sinr = signal_dbm - mw_to_db(noise_mw);
    if (est == Estimation::Dirty) sinr -= budget.dirty_penalty_db;
    return sinr;
}

}  // namespace fdmac::phy
