#include "copmarkov/rng.hpp"

#include "copmarkov/numerics.hpp"

namespace copmarkov {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                      0x636f706dU};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id))
{
}

double RngStream::uniform()
{
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * scale;
}

double RngStream::normal()
{
    return numerics::quantile(numerics::Distribution::standard_normal(), uniform());
}

Vector RngStream::uniforms(Eigen::Index count)
{
    Vector out(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        out[i] = uniform();
    }
    return out;
}

Vector RngStream::normals(Eigen::Index count)
{
    Vector out(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        out[i] = normal();
    }
    return out;
}

}  // namespace copmarkov
