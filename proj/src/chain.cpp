#include "copmarkov/chain.hpp"

#include "copmarkov/error.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace copmarkov {

namespace {

numerics::ToleranceConfig inversion_tolerance()
{
    numerics::ToleranceConfig tol;
    tol.root_abs_tol = 1e-12;
    return tol;
}

double invert_with_weights(const Copula& copula, const Vector& weights, double w)
{
    if (w <= 0.0) {
        return 0.0;
    }
    if (w >= 1.0) {
        return 1.0;
    }
    const auto& ids = copula.ids();
    const auto residual = [&](double v) {
        double sum = v - w;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            sum += weights[static_cast<Eigen::Index>(k)] * eval_phi_integral_unchecked(ids[k], v);
        }
        return sum;
    };
    static const numerics::ToleranceConfig tol = inversion_tolerance();
    return numerics::find_root_bracketed(residual, 0.0, 1.0, tol);
}

std::string format_double(double x)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

}  // namespace

double inverse_conditional(const Copula& copula, double u_prev, double w)
{
    if (!copula.positive()) {
        throw Error(ErrorCode::NonInteriorSpec, "conditional inversion needs a strictly positive density");
    }
    if (!(u_prev >= 0.0 && u_prev <= 1.0) || !(w >= 0.0 && w <= 1.0)) {
        throw Error(ErrorCode::DomainError, "u_prev and w must lie in [0, 1]");
    }
    return invert_with_weights(copula, copula.conditional_weights(u_prev), w);
}

double inverse_conditional(const CopulaSpec& spec, double u_prev, double w)
{
    return inverse_conditional(Copula(spec), u_prev, w);
}

ChainSample simulate(const CopulaSpec& spec, Eigen::Index n, RngStream& rng)
{
    if (n < 0) {
        throw Error(ErrorCode::DomainError, "chain length must be nonnegative");
    }
    const Copula copula(spec);
    if (!copula.positive()) {
        throw Error(ErrorCode::NonInteriorSpec, "simulation needs a strictly positive density");
    }
    ChainSample chain;
    chain.seed = rng.seed();
    chain.stream_id = rng.stream_id();
    chain.spec = spec;
    chain.values.resize(n + 1);
    chain.values[0] = rng.uniform();
    for (Eigen::Index i = 1; i <= n; ++i) {
        const double w = rng.uniform();
        chain.values[i] = invert_with_weights(copula, copula.conditional_weights(chain.values[i - 1]), w);
    }
    return chain;
}

void write_chain_csv(std::ostream& out, const Vector& values)
{
    out << "index,u\n";
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        out << i << ',' << format_double(values[i]) << '\n';
    }
}

Vector read_chain_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::ParseError, "chain CSV is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "index,u") {
        throw Error(ErrorCode::ParseError, "chain CSV must start with header 'index,u'");
    }
    std::vector<double> values;
    long expected = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorCode::ParseError, "malformed chain row '" + line + "'");
        }
        long index = 0;
        double u = 0.0;
        const auto r1 = std::from_chars(line.data(), line.data() + comma, index);
        const auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), u);
        if (r1.ec != std::errc() || r1.ptr != line.data() + comma || r2.ec != std::errc() ||
            r2.ptr != line.data() + line.size()) {
            throw Error(ErrorCode::ParseError, "malformed chain row '" + line + "'");
        }
        if (index != expected) {
            throw Error(ErrorCode::ParseError, "chain rows must be indexed 0, 1, 2, ... in order");
        }
        if (!(u >= 0.0 && u <= 1.0)) {
            throw Error(ErrorCode::ParseError, "chain value outside [0, 1] at index " + std::to_string(index));
        }
        values.push_back(u);
        ++expected;
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_chain_metadata(std::ostream& out, const ChainSample& chain)
{
    if (chain.spec) {
        out << format_spec(*chain.spec);
    }
    out << "seed = " << chain.seed << "\nstream_id = " << chain.stream_id << "\nn = " << chain.n() << '\n';
}

}  // namespace copmarkov
