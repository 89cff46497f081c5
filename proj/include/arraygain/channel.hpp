#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "arraygain/errors.hpp"
#include "arraygain/gain_pattern.hpp"
#include "arraygain/geometry.hpp"
#include "arraygain/rng.hpp"

namespace arraygain {

/// M x K, column k is the channel of user k.
using ChannelMatrix = Eigen::MatrixXcd;

/// One multipath cluster as seen by one user: arrival direction and the set of
/// elements it reaches (diagonal of the binary visibility matrix).
struct ClusterSpec {
    Direction direction;
    std::vector<std::uint8_t> visibility;

    static ClusterSpec full(const Direction& dir, std::size_t element_count) {
        return {dir, std::vector<std::uint8_t>(element_count, 1)};
    }

    bool fully_visible() const {
        for (auto v : visibility)
            if (v != 1) return false;
        return true;
    }

    void validate(std::size_t element_count) const {
        direction.validate();
        detail::require(visibility.size() == element_count, "cluster visibility mask length must equal M");
        bool any = false;
        for (auto v : visibility) {
            detail::require(v == 0 || v == 1, "cluster visibility entries must be 0 or 1");
            any = any || v == 1;
        }
        detail::require(any, "cluster visibility mask must include at least one element");
    }
};

struct UserSpec {
    double alpha = 1.0;     // large-scale fading, linear
    double tx_power = 1.0;  // linear
    std::vector<ClusterSpec> clusters;

    static UserSpec line_of_sight(const Direction& dir, std::size_t element_count, double alpha = 1.0,
                                  double tx_power = 1.0) {
        return {alpha, tx_power, {ClusterSpec::full(dir, element_count)}};
    }

    void validate(std::size_t element_count) const {
        detail::require(std::isfinite(alpha) && alpha >= 0.0, "large-scale fading must be finite and nonnegative");
        detail::require(std::isfinite(tx_power) && tx_power >= 0.0, "transmit power must be finite and nonnegative");
        detail::require(!clusters.empty(), "user needs at least one cluster");
        for (const auto& c : clusters) c.validate(element_count);
    }
};

// How the sum over clusters is scaled. InverseCount is the 1/C_k prefactor as
// written in the model; InverseSqrtCount preserves average power.
enum class ClusterNormalization { InverseCount, InverseSqrtCount };

struct MultipathOptions {
    ClusterNormalization normalization = ClusterNormalization::InverseCount;
    // Test hook: force every small-scale fading coefficient to 1.
    bool unit_fading = false;
};

namespace detail {

inline void check_channel_inputs(const ArrayGeometry& geom, const GainPattern& pattern,
                                 std::span<const UserSpec> users) {
    geom.validate();
    require(pattern.element_count() == geom.size(), "pattern element count must equal geometry size");
    require(!users.empty(), "at least one user is required");
    for (const auto& u : users) u.validate(geom.size());
}

// G(dir) a(dir): per-element amplitude times steering phase.
inline Eigen::VectorXcd patterned_steering(const ArrayGeometry& geom, const GainPattern& pattern,
                                           const Direction& dir) {
    return gain_amplitudes(pattern, dir).cast<std::complex<double>>().cwiseProduct(steering_vector(geom, dir));
}

}  // namespace detail

/// Deterministic single-cluster channel: d_k = sqrt(alpha_k) G(dir_k) a(dir_k).
inline ChannelMatrix los_channel(const ArrayGeometry& geom, const GainPattern& pattern,
                                 std::span<const UserSpec> users) {
    detail::check_channel_inputs(geom, pattern, users);
    ChannelMatrix d(static_cast<Eigen::Index>(geom.size()), static_cast<Eigen::Index>(users.size()));
    for (std::size_t k = 0; k < users.size(); ++k) {
        const auto& u = users[k];
        if (u.clusters.size() != 1 || !u.clusters.front().fully_visible())
            throw InvalidInput("line-of-sight channel needs exactly one fully visible cluster per user");
        d.col(static_cast<Eigen::Index>(k)) =
            std::sqrt(u.alpha) * detail::patterned_steering(geom, pattern, u.clusters.front().direction);
    }
    return d;
}

/// Clustered channel. The fading coefficient of cluster c of user k is drawn
/// from substream (seed, Fading, {trial, k, c}), so each trial is reproducible
/// on its own.
inline ChannelMatrix multipath_channel(const ArrayGeometry& geom, const GainPattern& pattern,
                                       std::span<const UserSpec> users, std::uint64_t seed, std::uint64_t trial,
                                       const MultipathOptions& options = {}) {
    detail::check_channel_inputs(geom, pattern, users);
    const auto m = static_cast<Eigen::Index>(geom.size());
    ChannelMatrix d = ChannelMatrix::Zero(m, static_cast<Eigen::Index>(users.size()));
    for (std::size_t k = 0; k < users.size(); ++k) {
        const auto& u = users[k];
        const double c_count = static_cast<double>(u.clusters.size());
        const double scale = std::sqrt(u.alpha) / (options.normalization == ClusterNormalization::InverseCount
                                                       ? c_count
                                                       : std::sqrt(c_count));
        Eigen::VectorXcd col = Eigen::VectorXcd::Zero(m);
        for (std::size_t c = 0; c < u.clusters.size(); ++c) {
            const auto& cl = u.clusters[c];
            std::complex<double> v{1.0, 0.0};
            if (!options.unit_fading) {
                auto rng = substream(seed, StreamTag::Fading, {trial, k, c});
                v = complex_gaussian(rng);
            }
            const Eigen::VectorXcd path = detail::patterned_steering(geom, pattern, cl.direction);
            for (Eigen::Index i = 0; i < m; ++i)
                if (cl.visibility[static_cast<std::size_t>(i)]) col[i] += path[i] * v;
        }
        d.col(static_cast<Eigen::Index>(k)) = scale * col;
    }
    return d;
}

/// Bernoulli(p) visibility mask; if every draw comes out 0, one uniformly chosen
/// element is switched on so the cluster reaches at least one antenna.
template <class Rng>
std::vector<std::uint8_t> bernoulli_visibility(std::size_t element_count, double p, Rng& rng) {
    detail::require(element_count >= 1, "mask needs at least one element");
    detail::require(p >= 0.0 && p <= 1.0, "visibility probability must lie in [0, 1]");
    std::bernoulli_distribution on(p);
    std::vector<std::uint8_t> mask(element_count);
    bool any = false;
    for (auto& v : mask) {
        v = on(rng) ? 1 : 0;
        any = any || v;
    }
    if (!any) {
        std::uniform_int_distribution<std::size_t> pick(0, element_count - 1);
        mask[pick(rng)] = 1;
    }
    return mask;
}

struct UplinkOptions {
    // Test hook: drop the additive noise term.
    bool noise = true;
};

/// y = D X^{1/2} s + w with w ~ CN(0, I).
template <class Rng>
Eigen::VectorXcd apply_uplink(const ChannelMatrix& d, std::span<const double> powers,
                              const Eigen::VectorXcd& symbols, Rng& rng, const UplinkOptions& options = {}) {
    const auto k = static_cast<std::size_t>(d.cols());
    if (powers.size() != k || static_cast<std::size_t>(symbols.size()) != k)
        throw InvalidInput("uplink: power and symbol vectors must have one entry per user");
    Eigen::VectorXcd scaled(symbols.size());
    for (std::size_t i = 0; i < k; ++i) {
        detail::require(std::isfinite(powers[i]) && powers[i] >= 0.0, "transmit powers must be nonnegative");
        scaled[static_cast<Eigen::Index>(i)] = std::sqrt(powers[i]) * symbols[static_cast<Eigen::Index>(i)];
    }
    Eigen::VectorXcd y = d * scaled;
    if (options.noise)
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += complex_gaussian(rng);
    return y;
}

}  // namespace arraygain
