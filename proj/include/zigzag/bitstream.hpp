#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace zigzag::dynamics {

/// A packed binary sequence with provenance metadata. Bits are packed
/// MSB-first; the final byte is zero-padded.
class BitStream {
public:
    BitStream() = default;
    explicit BitStream(std::vector<int> bits);

    void reserve(std::size_t n) { bytes_.reserve((n + 7) / 8); }
    void push_back(int bit);
    int operator[](std::size_t i) const {
        return (bytes_[i >> 3] >> (7 - (i & 7))) & 1;
    }
    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

    /// Unpacks into one byte per bit (0/1), convenient for the test battery.
    std::vector<std::uint8_t> unpack() const;

    std::size_t count_ones() const;
    double ones_fraction() const;

    std::string to01() const;
    static BitStream from01(std::string_view s);

    /// Writes <path> (packed bytes) and <path>.json ({length, meta}).
    void save(const std::filesystem::path& path) const;
    /// Reads a packed stream and its sidecar; throws on length mismatch or
    /// nonzero padding. Paths ending in .txt are read as ASCII "01".
    static BitStream load(const std::filesystem::path& path);

    nlohmann::json meta;

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t n_ = 0;
};

}  // namespace zigzag::dynamics
