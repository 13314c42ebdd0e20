#pragma once

#include "copmarkov/types.hpp"

#include <cstdint>
#include <random>

namespace copmarkov {

/**
 * @brief Reproducible uniform/normal stream identified by (seed, stream_id).
 *
 * A 64-bit Mersenne Twister keyed through std::seed_seq on both halves of the
 * seed and the stream id. Bits are mapped to doubles by hand so the
 * sequence does not depend on the standard library's distribution classes.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const { return stream_id_; }

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Standard normal by inverse-CDF transform of uniform().
    double normal();

    Vector uniforms(Eigen::Index count);
    Vector normals(Eigen::Index count);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

}  // namespace copmarkov
