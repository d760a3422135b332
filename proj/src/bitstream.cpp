#include "zigzag/bitstream.hpp"

#include <fstream>
#include <stdexcept>

namespace zigzag::dynamics {

BitStream::BitStream(std::vector<int> bits) {
    reserve(bits.size());
    for (int b : bits) push_back(b);
}

void BitStream::push_back(int bit) {
    if ((n_ & 7) == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(1u << (7 - (n_ & 7)));
    ++n_;
}

std::vector<std::uint8_t> BitStream::unpack() const {
    std::vector<std::uint8_t> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = static_cast<std::uint8_t>((*this)[i]);
    return out;
}

std::size_t BitStream::count_ones() const {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < n_; ++i) ones += static_cast<std::size_t>((*this)[i]);
    return ones;
}

double BitStream::ones_fraction() const {
    if (n_ == 0) throw std::invalid_argument("empty bit stream");
    return static_cast<double>(count_ones()) / static_cast<double>(n_);
}

std::string BitStream::to01() const {
    std::string s;
    s.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) s.push_back((*this)[i] ? '1' : '0');
    return s;
}

BitStream BitStream::from01(std::string_view s) {
    BitStream out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '0' || c == '1') {
            out.push_back(c - '0');
        } else if (c != '\n' && c != '\r' && c != ' ') {
            throw std::invalid_argument("unexpected character in 01 stream");
        }
    }
    return out;
}

void BitStream::save(const std::filesystem::path& path) const {
    if (path.extension() == ".txt") {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << to01() << '\n';
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f.write(reinterpret_cast<const char*>(bytes_.data()),
                static_cast<std::streamsize>(bytes_.size()));
    }
    nlohmann::json side{{"length", n_}, {"meta", meta}};
    std::ofstream js(path.string() + ".json");
    if (!js) throw std::runtime_error("cannot write sidecar for " + path.string());
    js << side.dump(2) << '\n';
}

BitStream BitStream::load(const std::filesystem::path& path) {
    if (path.extension() == ".txt") {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot read " + path.string());
        std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        return from01(s);
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    std::ifstream js(path.string() + ".json");
    if (!js) throw std::runtime_error("missing sidecar " + path.string() + ".json");
    nlohmann::json side = nlohmann::json::parse(js);
    const auto length = side.at("length").get<std::size_t>();
    if ((length + 7) / 8 != bytes.size())
        throw std::runtime_error("corrupt stream: length in sidecar does not match file size");
    BitStream out;
    out.bytes_ = std::move(bytes);
    out.n_ = length;
    if (length % 8 != 0) {
        const std::uint8_t pad_mask = static_cast<std::uint8_t>(0xFFu >> (length % 8));
        if (out.bytes_.back() & pad_mask)
            throw std::runtime_error("corrupt stream: nonzero padding bits");
    }
    if (side.contains("meta")) out.meta = side["meta"];
    return out;
}

}  // namespace zigzag::dynamics
