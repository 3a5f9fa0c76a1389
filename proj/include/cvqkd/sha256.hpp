#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cvqkd {

// Incremental SHA-256 (FIPS 180-4). Used for config hashes, transcript
// digests and params fingerprints; nothing here is performance critical.
class Sha256 {
  public:
    Sha256();
    void update(const void* data, std::size_t len);
    void update(const std::vector<std::uint8_t>& v) { update(v.data(), v.size()); }
    std::array<std::uint8_t, 32> finish();

    static std::array<std::uint8_t, 32> digest(const void* data, std::size_t len);

  private:
    void process_block(const std::uint8_t* p);

    std::array<std::uint32_t, 8> h_;
    std::array<std::uint8_t, 64> buf_{};
    std::size_t buf_len_ = 0;
    std::uint64_t total_len_ = 0;
};

std::string hex_encode(const std::uint8_t* data, std::size_t len);
std::vector<std::uint8_t> hex_decode(const std::string& hex);

} // namespace cvqkd
