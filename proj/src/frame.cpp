#include "fdmac/frame.hpp"

#include <sstream>
#include <stdexcept>

namespace fdmac {

namespace {

constexpr uint8_t kSync = 0xA5;
constexpr unsigned kSyncBits = 8;
constexpr unsigned kLenBits = 16;
constexpr unsigned kCrcBits = 32;
constexpr uint16_t kSrbMax = 1023;

// DURNXT presence is implied, not signalled; see FdHeader in frame.hpp.
bool durnxt_required(FrameKind kind, bool hol) {
    return kind == FrameKind::Data || hol;
}

}  // namespace

const char* to_string(FrameKind k) { return k == FrameKind::Data ? "DATA" : "ACK"; }
const char* to_string(DupMode m) { return m == DupMode::HD ? "HD" : "FD"; }

const char* to_string(DecodeError e) {
    switch (e) {
        case DecodeError::None: return "None";
        case DecodeError::TruncatedFrame: return "TruncatedFrame";
        case DecodeError::BadSync: return "BadSync";
        case DecodeError::BadCrc: return "BadCrc";
        case DecodeError::BadHeader: return "BadHeader";
        case DecodeError::SrbOutOfRange: return "SrbOutOfRange";
        case DecodeError::TrailingBits: return "TrailingBits";
    }
    return "?";
}

std::string BitString::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 2);
    for (uint8_t b : bytes_) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

BitString BitString::from_hex(const std::string& hex, std::size_t nbits) {
    auto val = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
        throw std::invalid_argument("not a hex digit");
    };
    BitString bs;
    for (std::size_t i = 0; i < nbits; ++i) {
        unsigned nib = val(hex.at(i / 4));
        bs.push_bit((nib >> (3 - i % 4)) & 1u);
    }
    return bs;
}

uint32_t crc32_bits(const BitString& bits, std::size_t first, std::size_t count) {
    uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < count; ++i) {
        uint32_t bit = bits.get(first + i) ? 1u : 0u;
        crc = (crc >> 1) ^ (((crc ^ bit) & 1u) ? 0xEDB88320u : 0u);
    }
    return ~crc;
}

MicroSec airtime_us(FrameKind kind, unsigned header_bits, uint32_t payload_bytes,
                    const PhyTiming& timing) {
    uint64_t bits = header_bits + 8ull * payload_bytes + kCrcBits;
    uint64_t rate = kind == FrameKind::Ack ? timing.base_rate_bps : timing.data_rate_bps;
    uint64_t bits_per_us = rate / 1'000'000;  // rates are whole Mb/s
    return timing.preamble_us + (bits + bits_per_us - 1) / bits_per_us;
}

MicroSec ack_airtime_us(const PhyTiming& timing) {
    FdHeader fd;  // HD, HOL = 0: the minimal 13-bit header
    return airtime_us(FrameKind::Ack, MacHeader::kWireBits + fd.wire_bits(), 0, timing);
}

Frame Frame::data(NodeId sa, NodeId da, uint32_t payload_bytes, FdHeader fd,
                  const PhyTiming& timing, bool frag, uint16_t dur_us) {
    fd.durnxt_present = true;
    fd.durfd_present = fd.dupmode == DupMode::FD;
    Frame f;
    f.mac = MacHeader{FrameKind::Data, dur_us, sa, da, frag};
    f.fd = fd;
    f.payload_bytes = payload_bytes;
    f.airtime_us = airtime_us(FrameKind::Data, f.header_bits(), payload_bytes, timing);
    return f;
}

Frame Frame::ack(NodeId sa, NodeId da, FdHeader fd, const PhyTiming& timing,
                 uint16_t dur_us) {
    fd.durnxt_present = fd.hol;
    fd.durfd_present = fd.dupmode == DupMode::FD;
    if (!fd.durnxt_present) fd.durnxt_us = 0;
    Frame f;
    f.mac = MacHeader{FrameKind::Ack, dur_us, sa, da, false};
    f.fd = fd;
    f.payload_bytes = 0;
    f.airtime_us = airtime_us(FrameKind::Ack, f.header_bits(), 0, timing);
    return f;
}

std::string Frame::invariant_violation() const {
    if (mac.sa == mac.da) return "sa equals da";
    if (mac.kind == FrameKind::Ack && payload_bytes != 0) return "ACK with payload";
    if (fd.srb > kSrbMax) return "srb exceeds 10 bits";
    if (fd.dupmode == DupMode::FD && !fd.durfd_present) return "FD frame without DURFD";
    if (fd.dupmode == DupMode::HD && fd.durfd_present) return "HD frame with DURFD";
    if (fd.durnxt_present != durnxt_required(mac.kind, fd.hol))
        return "DURNXT presence contradicts kind/HOL rule";
    if (!fd.durnxt_present && fd.durnxt_us != 0) return "absent DURNXT carries a value";
    if (!fd.durfd_present && fd.durfd_us != 0) return "absent DURFD carries a value";
    if (payload_bytes > 0xFFFF) return "payload exceeds 16-bit length field";
    return {};
}

bool Frame::operator==(const Frame& o) const {
    return mac.kind == o.mac.kind && mac.dur_us == o.mac.dur_us && mac.sa == o.mac.sa &&
           mac.da == o.mac.da && mac.frag == o.mac.frag && fd.dupmode == o.fd.dupmode &&
           fd.hol == o.fd.hol && fd.durnxt_present == o.fd.durnxt_present &&
           fd.durnxt_us == o.fd.durnxt_us && fd.durfd_present == o.fd.durfd_present &&
           fd.durfd_us == o.fd.durfd_us && fd.cts == o.fd.cts && fd.srb == o.fd.srb &&
           payload_bytes == o.payload_bytes && airtime_us == o.airtime_us;
}

BitString encode(const Frame& frame, const PhyTiming& timing) {
    std::string bad = frame.invariant_violation();
    if (!bad.empty()) throw std::invalid_argument("encode: " + bad);

    BitString bits;
    bits.push_bits(kSync, kSyncBits);
    bits.push_bits(frame.payload_bytes, kLenBits);

    std::size_t crc_from = bits.size();
    bits.push_bits(static_cast<uint64_t>(frame.mac.kind), 1);
    bits.push_bits(frame.mac.dur_us, 16);
    bits.push_bits(frame.mac.sa, 8);
    bits.push_bits(frame.mac.da, 8);
    bits.push_bit(frame.mac.frag);

    bits.push_bits(static_cast<uint64_t>(frame.fd.dupmode), 1);
    bits.push_bit(frame.fd.hol);
    if (frame.fd.durnxt_present) bits.push_bits(frame.fd.durnxt_us, 16);
    if (frame.fd.durfd_present) bits.push_bits(frame.fd.durfd_us, 16);
    bits.push_bit(frame.fd.cts);
    bits.push_bits(frame.fd.srb, 10);

    for (uint32_t i = 0; i < frame.payload_bytes; ++i) bits.push_bits(0, 8);

    bits.push_bits(crc32_bits(bits, crc_from, bits.size() - crc_from), kCrcBits);
    return bits;
}

DecodeResult decode(const BitString& bits, const PhyTiming& timing) {
    BitReader rd(bits);
    auto fail = [](DecodeError e) { return DecodeResult{std::nullopt, e}; };

    uint64_t sync, len;
    if (!rd.read_bits(kSyncBits, sync)) return fail(DecodeError::TruncatedFrame);
    if (sync != kSync) return fail(DecodeError::BadSync);
    if (!rd.read_bits(kLenBits, len)) return fail(DecodeError::TruncatedFrame);

    std::size_t crc_from = rd.pos();
    Frame f;
    uint64_t v;
    bool b;
    if (!rd.read_bits(1, v)) return fail(DecodeError::TruncatedFrame);
    f.mac.kind = static_cast<FrameKind>(v);
    if (!rd.read_bits(16, v)) return fail(DecodeError::TruncatedFrame);
    f.mac.dur_us = static_cast<uint16_t>(v);
    if (!rd.read_bits(8, v)) return fail(DecodeError::TruncatedFrame);
    f.mac.sa = static_cast<NodeId>(v);
    if (!rd.read_bits(8, v)) return fail(DecodeError::TruncatedFrame);
    f.mac.da = static_cast<NodeId>(v);
    if (!rd.read_bit(b)) return fail(DecodeError::TruncatedFrame);
    f.mac.frag = b;

    if (!rd.read_bits(1, v)) return fail(DecodeError::TruncatedFrame);
    f.fd.dupmode = static_cast<DupMode>(v);
    if (!rd.read_bit(b)) return fail(DecodeError::TruncatedFrame);
    f.fd.hol = b;
    f.fd.durnxt_present = durnxt_required(f.mac.kind, f.fd.hol);
    if (f.fd.durnxt_present) {
        if (!rd.read_bits(16, v)) return fail(DecodeError::TruncatedFrame);
        f.fd.durnxt_us = static_cast<uint16_t>(v);
    }
    f.fd.durfd_present = f.fd.dupmode == DupMode::FD;
    if (f.fd.durfd_present) {
        if (!rd.read_bits(16, v)) return fail(DecodeError::TruncatedFrame);
        f.fd.durfd_us = static_cast<uint16_t>(v);
    }
    if (!rd.read_bit(b)) return fail(DecodeError::TruncatedFrame);
    f.fd.cts = b;
    if (!rd.read_bits(10, v)) return fail(DecodeError::TruncatedFrame);
    f.fd.srb = static_cast<uint16_t>(v);
    if (f.fd.srb > kSrbMax) return fail(DecodeError::SrbOutOfRange);

    f.payload_bytes = static_cast<uint32_t>(len);
    for (uint64_t i = 0; i < len; ++i) {
        if (!rd.read_bits(8, v)) return fail(DecodeError::TruncatedFrame);
        if (v != 0) return fail(DecodeError::BadHeader);  // payload bits are zero on the wire
    }

    std::size_t crc_to = rd.pos();
    if (!rd.read_bits(kCrcBits, v)) return fail(DecodeError::TruncatedFrame);
    if (rd.remaining() != 0) return fail(DecodeError::TrailingBits);
    if (static_cast<uint32_t>(v) != crc32_bits(bits, crc_from, crc_to - crc_from))
        return fail(DecodeError::BadCrc);

    if (!f.invariant_violation().empty()) return fail(DecodeError::BadHeader);
    f.airtime_us = airtime_us(f.mac.kind, f.header_bits(), f.payload_bytes, timing);
    return DecodeResult{f, DecodeError::None};
}

}  // namespace fdmac
