#include "nfbm/rng.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

namespace nfbm {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

std::array<std::uint32_t, 4> RngStream::philox(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(M0) * c[0];
        const std::uint64_t p1 = std::uint64_t(M1) * c[2];
        c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1), std::uint32_t(p0 >> 32) ^ c[3] ^ k[1],
             std::uint32_t(p0)};
        k[0] += W0;
        k[1] += W1;
    }
    return c;
}

std::uint32_t RngStream::next_u32() {
    if (used_ == 4) {
        buffer_ = philox({std::uint32_t(position_), std::uint32_t(position_ >> 32), std::uint32_t(stream_),
                          std::uint32_t(stream_ >> 32)},
                         {std::uint32_t(seed_), std::uint32_t(seed_ >> 32)});
        ++position_;
        used_ = 0;
    }
    return buffer_[used_++];
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
}

double RngStream::uniform() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double RngStream::normal() {
    // Phi^{-1}(u) = -sqrt(2) erfc^{-1}(2u)
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform());
}

Eigen::VectorXd RngStream::normals(Eigen::Index count) {
    Eigen::VectorXd z(count);
    for (Eigen::Index i = 0; i < count; ++i) z[i] = normal();
    return z;
}

}  // namespace nfbm
