#ifndef FDMAC_BITS_HPP_
#define FDMAC_BITS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fdmac {

// A bit sequence in wire order. Bit 0 is the first bit on the air; packing
// into bytes is MSB-first (bit i lives at bytes[i/8], mask 0x80 >> i%8).
class BitString {
public:
    BitString() = default;

    std::size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool get(std::size_t i) const {
        return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
    }

    void push_bit(bool b) {
        if ((nbits_ & 7) == 0) bytes_.push_back(0);
        if (b) bytes_[nbits_ >> 3] |= static_cast<uint8_t>(0x80u >> (nbits_ & 7));
        ++nbits_;
    }

    // Appends the low `width` bits of `value`, most significant first.
    void push_bits(uint64_t value, unsigned width) {
        for (unsigned i = width; i-- > 0;)
            push_bit((value >> i) & 1u);
    }

    void flip_bit(std::size_t i) {
        bytes_[i >> 3] ^= static_cast<uint8_t>(0x80u >> (i & 7));
    }

    // Drops the last `n` bits.
    void truncate(std::size_t n) {
        nbits_ = nbits_ > n ? nbits_ - n : 0;
        bytes_.resize((nbits_ + 7) / 8);
        if (nbits_ & 7) bytes_.back() &= static_cast<uint8_t>(0xFF00u >> (nbits_ & 7));
    }

    const std::vector<uint8_t>& bytes() const { return bytes_; }

    std::string to_hex() const;
    static BitString from_hex(const std::string& hex, std::size_t nbits);

    bool operator==(const BitString& other) const {
        return nbits_ == other.nbits_ && bytes_ == other.bytes_;
    }

private:
    std::vector<uint8_t> bytes_;
    std::size_t nbits_ = 0;
};

// Sequential reader over a BitString. Reads fail (return false) once the
// cursor would pass the end; the cursor never advances past it.
class BitReader {
public:
    explicit BitReader(const BitString& bits) : bits_(bits) {}

    bool read_bits(unsigned width, uint64_t& out) {
        if (pos_ + width > bits_.size()) return false;
        uint64_t v = 0;
        for (unsigned i = 0; i < width; ++i)
            v = (v << 1) | static_cast<uint64_t>(bits_.get(pos_ + i));
        pos_ += width;
        out = v;
        return true;
    }

    bool read_bit(bool& out) {
        uint64_t v;
        if (!read_bits(1, v)) return false;
        out = v != 0;
        return true;
    }

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return bits_.size() - pos_; }

private:
    const BitString& bits_;
    std::size_t pos_ = 0;
};

// CRC-32 (reflected polynomial 0xEDB88320, init/final 0xFFFFFFFF) computed
// bit-serially over a slice of a BitString in wire order. Feeding a byte
// stream LSB-first per byte reproduces the standard byte-wise CRC-32
// ("123456789" -> 0xCBF43926); the codec feeds wire bits as laid out.
uint32_t crc32_bits(const BitString& bits, std::size_t first, std::size_t count);

}  // namespace fdmac

#endif  // FDMAC_BITS_HPP_
