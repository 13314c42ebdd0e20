#pragma once

#include "copmarkov/copula.hpp"
#include "copmarkov/numerics.hpp"
#include "copmarkov/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>

namespace copmarkov {

/// A realized path U_0, ..., U_n.
struct ChainSample {
    Vector values;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::optional<CopulaSpec> spec;  ///< absent for chains read from disk without metadata

    /// Number of transitions.
    [[nodiscard]] Eigen::Index n() const { return values.size() > 0 ? values.size() - 1 : 0; }
};

/**
 * @brief The v in [0, 1] with C_1(u_prev, v) = w.
 *
 * C_1(u_prev, .) is a continuous CDF, strictly increasing when the density is
 * positive, so the root is bracketed by [0, 1] and unique. Throws
 * NonInteriorSpec unless the density is certified strictly positive.
 */
double inverse_conditional(const CopulaSpec& spec, double u_prev, double w);

/// Same as above for an already validated copula.
double inverse_conditional(const Copula& copula, double u_prev, double w);

/**
 * @brief Stationary chain by conditional inversion.
 *
 * U_0 ~ Uniform(0,1); U_i solves C_1(U_{i-1}, U_i) = w_i for fresh uniforms w_i.
 * Deterministic in (rng.seed(), rng.stream_id()).
 */
ChainSample simulate(const CopulaSpec& spec, Eigen::Index n, RngStream& rng);

/// CSV with header "index,u" and one row per U_i, printed with round-trip precision.
void write_chain_csv(std::ostream& out, const Vector& values);

/// Reads the CSV written by write_chain_csv. Throws ParseError on malformed input.
Vector read_chain_csv(std::istream& in);

/// Sidecar metadata: the spec's key-value rendering plus seed, stream_id and n.
void write_chain_metadata(std::ostream& out, const ChainSample& chain);

}  // namespace copmarkov
