#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arraygain/channel.hpp"
#include "arraygain/errors.hpp"
#include "arraygain/parallel.hpp"

namespace arraygain {

// Which power multiplies the inter-user interference sum in the MRC SINR.
// PerInterferer uses x_i for interferer i; DesiredUserPower puts x_k on the
// whole sum, as the closed form is printed. Both agree when powers are equal.
enum class MrcInterference { PerInterferer, DesiredUserPower };

struct DetectorOptions {
    MrcInterference mrc_interference = MrcInterference::PerInterferer;
    // Gram matrices with a larger 2-norm condition number are degenerate for ZF.
    double max_gram_condition = 1e12;
};

namespace detail {

inline void check_powers(const ChannelMatrix& d, std::span<const double> powers) {
    require(d.cols() >= 1, "channel needs at least one user");
    require(static_cast<Eigen::Index>(powers.size()) == d.cols(), "one transmit power per user is required");
    for (double x : powers) require(std::isfinite(x) && x >= 0.0, "transmit powers must be nonnegative");
}

}  // namespace detail

/// x_k |d_k|^4 / (sum_{i != k} x_i |d_k^H d_i|^2 + |d_k|^2), unit noise.
inline double mrc_sinr(const ChannelMatrix& d, std::span<const double> powers, std::size_t k,
                       const DetectorOptions& options = {}) {
    detail::check_powers(d, powers);
    detail::require(k < static_cast<std::size_t>(d.cols()), "user index out of range");
    const auto dk = d.col(static_cast<Eigen::Index>(k));
    const double norm2 = dk.squaredNorm();
    if (norm2 == 0.0) return 0.0;
    double interference = 0.0;
    for (Eigen::Index i = 0; i < d.cols(); ++i) {
        if (static_cast<std::size_t>(i) == k) continue;
        const double weight = options.mrc_interference == MrcInterference::PerInterferer
                                  ? powers[static_cast<std::size_t>(i)]
                                  : powers[k];
        interference += weight * std::norm(dk.dot(d.col(i)));
    }
    return powers[k] * norm2 * norm2 / (interference + norm2);
}

/// Diagonal of (D^H D)^{-1} via Cholesky. Throws DegenerateChannel when the
/// Gram matrix is singular or its condition number exceeds the limit.
inline Eigen::VectorXd gram_inverse_diagonal(const ChannelMatrix& d, double max_condition = 1e12) {
    detail::require(d.cols() >= 1, "channel needs at least one user");
    if (d.cols() > d.rows()) throw DegenerateChannel("zero-forcing needs K <= M");
    const Eigen::MatrixXcd gram = d.adjoint() * d;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || !(hi / lo <= max_condition))
        throw DegenerateChannel("channel Gram matrix is singular or ill-conditioned (condition " +
                                std::to_string(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity()) + ")");
    const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success) throw DegenerateChannel("Cholesky factorization of the Gram matrix failed");
    // (D^H D)^{-1} = L^{-H} L^{-1}; entry (k,k) is the squared norm of column k of L^{-1}.
    const Eigen::MatrixXcd l_inv = llt.matrixL().solve(Eigen::MatrixXcd::Identity(d.cols(), d.cols()));
    return l_inv.colwise().squaredNorm().transpose();
}

/// x_k / [(D^H D)^{-1}]_{kk} for every user.
inline std::vector<double> zf_sinrs(const ChannelMatrix& d, std::span<const double> powers,
                                    const DetectorOptions& options = {}) {
    detail::check_powers(d, powers);
    const Eigen::VectorXd inv_diag = gram_inverse_diagonal(d, options.max_gram_condition);
    std::vector<double> out(powers.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = powers[k] / inv_diag[static_cast<Eigen::Index>(k)];
    return out;
}

inline double zf_sinr(const ChannelMatrix& d, std::span<const double> powers, std::size_t k,
                      const DetectorOptions& options = {}) {
    detail::require(k < static_cast<std::size_t>(d.cols()), "user index out of range");
    return zf_sinrs(d, powers, options)[k];
}

struct SirPair {
    double sir_k = 0.0;
    double sir_i = 0.0;
};

/// Two-user signal-to-interference ratios under MRC. Both ratios share the same
/// |d_k^H d_i|^2, so with equal powers |d_i| <= |d_k| implies sir_i <= sir_k
/// exactly in floating point. Orthogonal pairs give +inf.
inline SirPair pairwise_sir(const Eigen::VectorXcd& dk, const Eigen::VectorXcd& di, double power_k, double power_i) {
    detail::require(dk.size() == di.size(), "channel vectors must have equal length");
    const double nk = dk.squaredNorm();
    const double ni = di.squaredNorm();
    detail::require(nk > 0.0 && ni > 0.0, "channel vectors must be nonzero");
    detail::require(power_k > 0.0 && power_i > 0.0, "powers must be positive");
    const double cross = std::norm(dk.dot(di));
    if (cross == 0.0) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    return {power_k * (nk * nk) / (power_i * cross), power_i * (ni * ni) / (power_k * cross)};
}

struct ZfPowerBound {
    double exact = 0.0;  // 1 / [(D^H D)^{-1}]_{kk}
    double bound = 0.0;  // |d_k|^2
};

inline ZfPowerBound zf_power_bound(const ChannelMatrix& d, std::size_t k, const DetectorOptions& options = {}) {
    detail::require(k < static_cast<std::size_t>(d.cols()), "user index out of range");
    const Eigen::VectorXd inv_diag = gram_inverse_diagonal(d, options.max_gram_condition);
    return {1.0 / inv_diag[static_cast<Eigen::Index>(k)], d.col(static_cast<Eigen::Index>(k)).squaredNorm()};
}

struct RateSample {
    std::vector<double> mrc_sinr;
    std::vector<double> zf_sinr;  // empty when zf_degenerate
    std::vector<double> mrc_rate;
    std::vector<double> zf_rate;
    bool zf_degenerate = false;
};

inline RateSample instantaneous_rates(const ChannelMatrix& d, std::span<const double> powers,
                                      const DetectorOptions& options = {}) {
    detail::check_powers(d, powers);
    RateSample s;
    const auto k_count = static_cast<std::size_t>(d.cols());
    s.mrc_sinr.resize(k_count);
    s.mrc_rate.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        s.mrc_sinr[k] = mrc_sinr(d, powers, k, options);
        s.mrc_rate[k] = std::log2(1.0 + s.mrc_sinr[k]);
    }
    try {
        s.zf_sinr = zf_sinrs(d, powers, options);
        s.zf_rate.resize(k_count);
        for (std::size_t k = 0; k < k_count; ++k) s.zf_rate[k] = std::log2(1.0 + s.zf_sinr[k]);
    } catch (const DegenerateChannel&) {
        s.zf_sinr.clear();
        s.zf_degenerate = true;
    }
    return s;
}

struct ErgodicOptions {
    DetectorOptions detector;
    std::size_t threads = 1;
    std::size_t first_trial = 0;
};

/// Rates of trials [first_trial, first_trial + count). `draw(seed, trial)`
/// must build the channel from substreams keyed by the trial index.
template <class Sampler>
std::vector<RateSample> trial_rates(Sampler&& draw, std::span<const double> powers, std::size_t count,
                                    std::uint64_t seed, const ErgodicOptions& options = {}) {
    std::vector<RateSample> out(count);
    parallel_for(count, options.threads, [&](std::size_t i) {
        const ChannelMatrix d = draw(seed, static_cast<std::uint64_t>(options.first_trial + i));
        out[i] = instantaneous_rates(d, powers, options.detector);
    });
    return out;
}

struct ErgodicResult {
    std::vector<double> mrc_mean;
    std::vector<double> mrc_std_error;
    std::vector<double> zf_mean;  // over non-excluded trials
    std::vector<double> zf_std_error;
    std::size_t trials = 0;
    std::size_t zf_excluded = 0;
};

/// Sample means of the per-user MRC and ZF rates. Trials whose channel is
/// degenerate for ZF are left out of the ZF statistics and counted.
template <class Sampler>
ErgodicResult ergodic_rate(Sampler&& draw, std::span<const double> powers, std::size_t trials, std::uint64_t seed,
                           const ErgodicOptions& options = {}) {
    detail::require(trials >= 1, "ergodic rate needs at least one trial");
    const std::size_t users = powers.size();
    std::vector<RunningStats> mrc(users), zf(users);
    ErgodicResult r;
    r.trials = trials;

    // Bounded blocks keep memory flat; reduction is serial in trial order.
    constexpr std::size_t kBlock = 1 << 14;
    for (std::size_t start = 0; start < trials; start += kBlock) {
        ErgodicOptions block = options;
        block.first_trial = options.first_trial + start;
        const auto samples = trial_rates(draw, powers, std::min(kBlock, trials - start), seed, block);
        for (const auto& s : samples) {
            detail::require(s.mrc_rate.size() == users, "sampler returned a channel with the wrong user count");
            for (std::size_t k = 0; k < users; ++k) mrc[k].add(s.mrc_rate[k]);
            if (s.zf_degenerate) {
                ++r.zf_excluded;
                continue;
            }
            for (std::size_t k = 0; k < users; ++k) zf[k].add(s.zf_rate[k]);
        }
    }
    for (std::size_t k = 0; k < users; ++k) {
        r.mrc_mean.push_back(mrc[k].mean());
        r.mrc_std_error.push_back(mrc[k].standard_error());
        r.zf_mean.push_back(zf[k].count() ? zf[k].mean() : 0.0);
        r.zf_std_error.push_back(zf[k].standard_error());
    }
    return r;
}

}  // namespace arraygain
