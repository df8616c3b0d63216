#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>

namespace nfbm {

// Counter-based stream: Philox4x32-10 keyed by the seed, with the stream id
// in the upper half of the counter. Normals come from the inverse normal CDF,
// so a (seed, stream) pair gives the same numbers on every platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    // uniform on (0,1), never 0 or 1
    double uniform();
    double normal();
    Eigen::VectorXd normals(Eigen::Index count);

    static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

private:
    std::uint64_t seed_, stream_;
    std::uint64_t position_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
};

}  // namespace nfbm
