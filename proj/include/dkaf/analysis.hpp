#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "dkaf/errors.hpp"
#include "dkaf/kernels.hpp"
#include "dkaf/network.hpp"

namespace dkaf {

// Monte Carlo moments of the C-weighted kernel combination
//   g = sum_l C(q,l) * k(x_l, x_probe)
// that drive the transient recursion, the misadjustment expression and the
// step-size bound.
struct KernelMoments {
    double g_mean{0.0};
    double g_abs_mean{0.0};
    double g_sq_mean{0.0};
    std::size_t sample_count{0};
};

// Emits one per-node regressor snapshot per call.
using SnapshotSampler = std::function<std::vector<Eigen::VectorXd>()>;

// How the probe is paired with a snapshot when estimating moments. SameDraw
// pairs the probe with its own snapshot (probe equals node q's regressor of
// the very snapshot it is scored against), matching the same-instant inner
// product <C_1 Phi(x), Phi(x_obs)> that the step-size bound is built on, and
// is the default; IndependentDraw scores the combined kernel against a fresh
// snapshot instead, which describes the cross-time interaction of dictionary
// entries with later inputs.
enum class ProbeMode { SameDraw, IndependentDraw };

inline KernelMoments estimate_moments(const NetworkGraph& graph, Eigen::Index node,
                                      const KernelSpec& kernel, const SnapshotSampler& sampler,
                                      std::size_t samples,
                                      ProbeMode probe_mode = ProbeMode::SameDraw) {
    if (!sampler) throw EmptySampler("estimate_moments: no sampler provided");
    if (samples < 2) throw ConfigInvalid("estimate_moments: need at least 2 samples");
    const Eigen::VectorXd weights = graph.C().row(node).transpose();
    double sum = 0.0, sum_abs = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::vector<Eigen::VectorXd> snapshot = sampler();
        if (static_cast<Eigen::Index>(snapshot.size()) != graph.node_count())
            throw GraphSizeMismatch("sampler snapshot size does not match graph");
        Eigen::VectorXd probe;
        if (probe_mode == ProbeMode::SameDraw) {
            probe = snapshot[static_cast<std::size_t>(node)];
        } else {
            probe = sampler()[static_cast<std::size_t>(node)];
        }
        const double g = combined_kernel(kernel, weights, snapshot, probe);
        sum += g;
        sum_abs += std::abs(g);
        sum_sq += g * g;
    }
    const double inv = 1.0 / static_cast<double>(samples);
    return KernelMoments{sum * inv, sum_abs * inv, sum_sq * inv, samples};
}

// Predicted learning curve m(n) = E[|y~_q(n)|^2] from the first-order
// recursion m(n) = (1 - 2 mu g_mean) m(n-1) + mu^2 sigma_n^2 g_sq_mean.
struct TheoreticalCurve {
    std::vector<double> values;
    double mu{0.0};
    double noise_variance{0.0};
    double initial{0.0};
};

inline TheoreticalCurve transient_curve(const KernelMoments& moments, double mu,
                                        double noise_variance, double initial,
                                        std::size_t n_steps) {
    if (!(mu > 0.0)) throw ConfigInvalid("transient_curve: mu must be > 0");
    if (noise_variance < 0.0) throw NegativeVariance("transient_curve: negative noise variance");
    if (n_steps < 1) throw ConfigInvalid("transient_curve: need at least one step");
    TheoreticalCurve curve;
    curve.mu = mu;
    curve.noise_variance = noise_variance;
    curve.initial = initial;
    // values[0] = m(0) = initial, then m(n) = decay*m(n-1) + drive.
    curve.values.resize(n_steps + 1);
    const double decay = 1.0 - 2.0 * mu * moments.g_mean;
    const double drive = mu * mu * noise_variance * moments.g_sq_mean;
    double m = initial;
    curve.values[0] = m;
    for (std::size_t n = 1; n <= n_steps; ++n) {
        m = decay * m + drive;
        curve.values[n] = m;
    }
    return curve;
}

// Misadjustment (mu sigma_n^2 / 2) * E[|g|].
inline double steady_state_mse(const KernelMoments& moments, double mu, double noise_variance) {
    if (!(mu > 0.0)) throw ConfigInvalid("steady_state_mse: mu must be > 0");
    if (noise_variance < 0.0) throw NegativeVariance("steady_state_mse: negative noise variance");
    return 0.5 * mu * noise_variance * moments.g_abs_mean;
}

// Exact fixed point of the transient recursion,
// mu sigma_n^2 E[g^2] / (2 E[g]); coincides with steady_state_mse only when
// g is (near-)deterministic. Both are reported by the sweeps.
inline double transient_fixed_point(const KernelMoments& moments, double mu,
                                    double noise_variance) {
    if (!(mu > 0.0)) throw ConfigInvalid("transient_fixed_point: mu must be > 0");
    if (noise_variance < 0.0)
        throw NegativeVariance("transient_fixed_point: negative noise variance");
    if (!(moments.g_mean > 0.0))
        throw NonPositiveKernelMean("transient_fixed_point: E[g] must be > 0");
    return mu * noise_variance * moments.g_sq_mean / (2.0 * moments.g_mean);
}

struct StepSizeRange {
    double lower{0.0};
    double upper{0.0};
};

// Convergence range 0 < mu < 2 / E[g].
inline StepSizeRange step_size_range(const KernelMoments& moments) {
    if (!(moments.g_mean > 0.0))
        throw NonPositiveKernelMean("step_size_range: E[g] must be > 0");
    return StepSizeRange{0.0, 2.0 / moments.g_mean};
}

} // namespace dkaf
