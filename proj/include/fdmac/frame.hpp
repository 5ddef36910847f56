#ifndef FDMAC_FRAME_HPP_
#define FDMAC_FRAME_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "fdmac/bits.hpp"
#include "fdmac/types.hpp"

namespace fdmac {

enum class FrameKind : uint8_t { Data = 0, Ack = 1 };
enum class DupMode : uint8_t { HD = 0, FD = 1 };

const char* to_string(FrameKind k);
const char* to_string(DupMode m);

// PHY rates and preamble used for airtime accounting. Headers and ACKs go
// out at the base rate, DATA payload sections at the data rate.
struct PhyTiming {
    uint32_t base_rate_bps = 6'000'000;
    uint32_t data_rate_bps = 12'000'000;
    MicroSec preamble_us = 20;
};

// The full-duplex header appended after the MAC header. DURNXT and DURFD
// are optional on the wire; their presence is not signalled by flag bits
// but follows from the frame kind and the already-transmitted fields:
//
//   DATA:  DURNXT always present, DURFD present iff DUPMODE = FD
//   ACK:   DURNXT present iff HOL = 1, DURFD present iff DUPMODE = FD
//
// With both absent the header is exactly 13 bits (the HD ACK, HOL = 0).
struct FdHeader {
    DupMode dupmode = DupMode::HD;
    bool hol = false;           // next buffered packet is for the same peer
    bool durnxt_present = false;
    uint16_t durnxt_us = 0;     // airtime of the head-of-line packet
    bool durfd_present = false;
    uint16_t durfd_us = 0;      // agreed duration of the full-duplex round
    bool cts = false;           // receiver may send a packet back
    uint16_t srb = 0;           // shared random backoff draw, 10 bits

    unsigned wire_bits() const {
        return 13 + (durnxt_present ? 16 : 0) + (durfd_present ? 16 : 0);
    }
};

struct MacHeader {
    FrameKind kind = FrameKind::Data;
    uint16_t dur_us = 0;  // NAV: medium time reserved beyond this frame
    NodeId sa = 0;
    NodeId da = 0;
    bool frag = false;    // more fragments of this packet follow

    static constexpr unsigned kWireBits = 1 + 16 + 8 + 8 + 1;
};

struct Frame {
    MacHeader mac;
    FdHeader fd;
    uint32_t payload_bytes = 0;  // ACK frames carry none
    MicroSec airtime_us = 0;

    unsigned header_bits() const { return MacHeader::kWireBits + fd.wire_bits(); }

    // Factory helpers fill airtime_us from the timing config.
    static Frame data(NodeId sa, NodeId da, uint32_t payload_bytes, FdHeader fd,
                      const PhyTiming& timing, bool frag = false, uint16_t dur_us = 0);
    static Frame ack(NodeId sa, NodeId da, FdHeader fd, const PhyTiming& timing,
                     uint16_t dur_us = 0);

    // Empty string when all frame invariants hold, else a diagnostic.
    std::string invariant_violation() const;

    bool operator==(const Frame& other) const;
};

// airtime = preamble + ceil(bits / rate), with the rate picked per frame
// kind: ACKs ride the base rate, DATA the data rate. header_bits excludes
// the PHY preamble section, which is accounted for in time.
MicroSec airtime_us(FrameKind kind, unsigned header_bits, uint32_t payload_bytes,
                    const PhyTiming& timing);
MicroSec ack_airtime_us(const PhyTiming& timing);

enum class DecodeError : uint8_t {
    None = 0,
    TruncatedFrame,
    BadSync,
    BadCrc,
    BadHeader,      // violates a frame invariant (sa = da, ACK payload, ...)
    SrbOutOfRange,  // unreachable from the 10-bit field; kept for API parity
    TrailingBits,
};

const char* to_string(DecodeError e);

struct DecodeResult {
    std::optional<Frame> frame;
    DecodeError error = DecodeError::None;
    bool ok() const { return frame.has_value(); }
};

// Serializes a frame in wire order: SYNC(8) LEN(16) | MAC | FD | payload
// (zero bits; the simulator tracks byte counts, not content) | CRC32 over
// everything after the PHY section. Throws std::invalid_argument when a
// frame invariant is violated (srb > 1023, FD without DURFD, ...).
BitString encode(const Frame& frame, const PhyTiming& timing = PhyTiming{});

// Inverse of encode on its image; structured error otherwise.
DecodeResult decode(const BitString& bits, const PhyTiming& timing = PhyTiming{});

}  // namespace fdmac

#endif  // FDMAC_FRAME_HPP_
