#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dkaf/analysis.hpp"
#include "dkaf/errors.hpp"
#include "dkaf/kernel_filters.hpp"
#include "dkaf/kernels.hpp"
#include "dkaf/linear_filters.hpp"
#include "dkaf/network.hpp"
#include "dkaf/rng.hpp"

namespace dkaf {

enum class Algorithm { Lms, DiffusionLms, Rls, DiffusionRls, Klms, DiffusionKlms };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Lms: return "lms";
        case Algorithm::DiffusionLms: return "diffusion-lms";
        case Algorithm::Rls: return "rls";
        case Algorithm::DiffusionRls: return "diffusion-rls";
        case Algorithm::Klms: return "klms";
        case Algorithm::DiffusionKlms: return "diffusion-klms";
    }
    return "?";
}

// Combining-matrix choice as it appears in config files: "uniform",
// "random:<seed>", or an explicit nested array.
struct MatrixChoice {
    enum class Kind { Uniform, Random, Explicit };
    Kind kind{Kind::Uniform};
    std::uint64_t seed{0};
    Eigen::MatrixXd values;

    StochasticMatrix build(Eigen::Index n) const {
        switch (kind) {
            case Kind::Uniform: return StochasticMatrix::uniform(n);
            case Kind::Random: return StochasticMatrix::random(n, seed);
            case Kind::Explicit: {
                if (values.rows() != n)
                    throw ConfigInvalid("explicit combining matrix does not match node count");
                return StochasticMatrix::validate(values);
            }
        }
        throw ConfigInvalid("unknown matrix choice");
    }
};

struct ExperimentConfig {
    Eigen::Index node_count{2};
    MatrixChoice a{};
    MatrixChoice c{};
    KernelSpec kernel{KernelSpec::gaussian(0.1)};
    double mu_kernel{0.2};
    double mu_linear{0.02};
    double rls_lambda{0.999};
    double rls_p0{100.0};
    std::size_t dictionary_budget{0}; // 0 = unbounded
    std::optional<double> noise_variance{0.16};
    std::optional<double> snr_db{};
    Eigen::Index embedding{1};
    std::size_t sample_count{2000};
    std::size_t monte_carlo_runs{20};
    std::uint64_t master_seed{1};
    std::vector<Algorithm> algorithms{Algorithm::Lms,  Algorithm::DiffusionLms,
                                      Algorithm::Rls,  Algorithm::DiffusionRls,
                                      Algorithm::Klms, Algorithm::DiffusionKlms};

    void validate() const {
        if (node_count < 1) throw ConfigInvalid("node_count must be >= 1");
        if (embedding < 1) throw ConfigInvalid("embedding length must be >= 1");
        if (sample_count < static_cast<std::size_t>(embedding))
            throw ConfigInvalid("sample_count must be >= embedding length");
        if (monte_carlo_runs < 1) throw ConfigInvalid("monte_carlo_runs must be >= 1");
        if (noise_variance.has_value() == snr_db.has_value())
            throw ConfigInvalid("exactly one of noise_variance and snr_db must be set");
        if (noise_variance && *noise_variance < 0.0)
            throw NegativeVariance("noise_variance must be >= 0");
        if (!(mu_kernel > 0.0)) throw ConfigInvalid("filter.mu must be > 0");
        if (!(mu_linear > 0.0)) throw ConfigInvalid("filter.mu_linear must be > 0");
        if (!(rls_lambda > 0.0) || rls_lambda > 1.0)
            throw ConfigInvalid("filter.lambda must be in (0,1]");
        if (algorithms.empty()) throw ConfigInvalid("algorithm list must not be empty");
    }

    NetworkGraph build_graph() const {
        return NetworkGraph(a.build(node_count), c.build(node_count));
    }
};

// i.i.d. +/-1 source.
inline std::vector<double> generate_source(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw ConfigInvalid("generate_source: need n >= 1");
    Rng rng(seed);
    std::vector<double> s(n);
    for (double& v : s) v = ((rng() >> 32) & 1u) ? 1.0 : -1.0;
    return s;
}

// Memoryless nonlinearity f(x) = x - 0.9 x^2.
inline std::vector<double> apply_channel(const std::vector<double>& s) {
    std::vector<double> z(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) z[i] = s[i] - 0.9 * s[i] * s[i];
    return z;
}

// Per-node observations u_l(n) = z(n) + v_l(n), noise independent across
// nodes.
inline std::vector<std::vector<double>> observe(const std::vector<double>& z,
                                                Eigen::Index node_count, double noise_variance,
                                                std::uint64_t seed) {
    if (noise_variance < 0.0) throw NegativeVariance("observe: negative noise variance");
    if (node_count < 1) throw ConfigInvalid("observe: need at least one node");
    Rng rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(noise_variance));
    std::vector<std::vector<double>> u(static_cast<std::size_t>(node_count));
    for (auto& ul : u) {
        ul.resize(z.size());
        for (std::size_t n = 0; n < z.size(); ++n)
            ul[n] = z[n] + (noise_variance > 0.0 ? noise(rng) : 0.0);
    }
    return u;
}

// Time embedding: regressor at n is (u(n), u(n-1), ..., u(n-T+1)).
inline std::vector<Eigen::VectorXd> embed(const std::vector<double>& u, Eigen::Index T) {
    if (T < 1) throw ConfigInvalid("embed: T must be >= 1");
    if (u.size() < static_cast<std::size_t>(T))
        throw SequenceTooShort("embed: sequence shorter than embedding length");
    std::vector<Eigen::VectorXd> xs(u.size() - static_cast<std::size_t>(T) + 1);
    for (std::size_t n = 0; n < xs.size(); ++n) {
        Eigen::VectorXd x(T);
        for (Eigen::Index j = 0; j < T; ++j)
            x[j] = u[n + static_cast<std::size_t>(T) - 1 - static_cast<std::size_t>(j)];
        xs[n] = std::move(x);
    }
    return xs;
}

struct MseTrace {
    std::string algorithm;
    std::vector<double> values;
    std::uint64_t master_seed{0};
    std::string config_hash;
    std::size_t runs{0};
};

inline double mse_floor(const std::vector<double>& trace, double tail_fraction = 0.2) {
    if (trace.empty()) throw EmptyTrace("mse_floor: empty trace");
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw ConfigInvalid("mse_floor: tail fraction must be in (0,1]");
    const std::size_t tail =
        static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(trace.size())));
    double sum = 0.0;
    for (std::size_t i = trace.size() - tail; i < trace.size(); ++i) sum += trace[i];
    return sum / static_cast<double>(tail);
}

inline double mse_floor(const MseTrace& trace, double tail_fraction = 0.2) {
    return mse_floor(trace.values, tail_fraction);
}

// Empirical power of the clean channel output, used for the SNR -> variance
// conversion and for the default transient initial value.
inline double clean_signal_power(std::uint64_t master_seed, std::size_t samples = 100000) {
    const auto z = apply_channel(generate_source(samples, derive_seed(master_seed, "power")));
    double sum = 0.0;
    for (double v : z) sum += v * v;
    return sum / static_cast<double>(z.size());
}

inline double resolved_noise_variance(const ExperimentConfig& config) {
    if (config.noise_variance) return *config.noise_variance;
    const double pz = clean_signal_power(config.master_seed);
    return pz / std::pow(10.0, *config.snr_db / 10.0);
}

namespace detail {

struct RunData {
    std::vector<double> desired;                   // d(n) = z(n), aligned with regressors
    std::vector<std::vector<Eigen::VectorXd>> xs;  // per node, per step
};

inline RunData make_run_data(const ExperimentConfig& config, double noise_variance,
                             std::size_t run_index) {
    const auto s = generate_source(config.sample_count,
                                   derive_seed(config.master_seed, "source", run_index));
    const auto z = apply_channel(s);
    const auto obs = observe(z, config.node_count, noise_variance,
                             derive_seed(config.master_seed, "noise", run_index));
    RunData data;
    data.xs.resize(static_cast<std::size_t>(config.node_count));
    for (Eigen::Index l = 0; l < config.node_count; ++l)
        data.xs[static_cast<std::size_t>(l)] = embed(obs[static_cast<std::size_t>(l)],
                                                     config.embedding);
    const std::size_t steps = data.xs.front().size();
    data.desired.resize(steps);
    for (std::size_t n = 0; n < steps; ++n)
        data.desired[n] = z[n + static_cast<std::size_t>(config.embedding) - 1];
    return data;
}

// Runs one algorithm over one realization, returning the per-iteration
// node-averaged squared a priori error. Non-diffusion algorithms run one
// independent filter per node.
inline std::vector<double> run_single(Algorithm alg, const ExperimentConfig& config,
                                      const NetworkGraph& graph, const RunData& data) {
    const Eigen::Index D = config.node_count;
    const std::size_t steps = data.desired.size();
    std::vector<double> mse(steps, 0.0);
    const double inv_nodes = 1.0 / static_cast<double>(D);

    auto record = [&](std::size_t n, const Eigen::VectorXd& errors) {
        mse[n] = errors.squaredNorm() * inv_nodes;
    };

    std::vector<Eigen::VectorXd> xs_at(static_cast<std::size_t>(D));
    Eigen::VectorXd ds_at(D);
    auto gather = [&](std::size_t n) {
        for (Eigen::Index l = 0; l < D; ++l)
            xs_at[static_cast<std::size_t>(l)] = data.xs[static_cast<std::size_t>(l)][n];
        ds_at.setConstant(data.desired[n]);
    };

    switch (alg) {
        case Algorithm::Lms: {
            std::vector<LmsFilter> filters(static_cast<std::size_t>(D),
                                           LmsFilter(config.embedding, config.mu_linear));
            Eigen::VectorXd e(D);
            for (std::size_t n = 0; n < steps; ++n) {
                for (Eigen::Index l = 0; l < D; ++l)
                    e[l] = filters[static_cast<std::size_t>(l)].step(
                        data.xs[static_cast<std::size_t>(l)][n], data.desired[n]);
                record(n, e);
            }
            break;
        }
        case Algorithm::DiffusionLms: {
            DiffusionLms filter(graph, config.embedding, config.mu_linear);
            for (std::size_t n = 0; n < steps; ++n) {
                gather(n);
                record(n, filter.step(xs_at, ds_at));
            }
            break;
        }
        case Algorithm::Rls: {
            std::vector<RlsFilter> filters(
                static_cast<std::size_t>(D),
                RlsFilter(config.embedding, config.rls_lambda, config.rls_p0));
            Eigen::VectorXd e(D);
            for (std::size_t n = 0; n < steps; ++n) {
                for (Eigen::Index l = 0; l < D; ++l)
                    e[l] = filters[static_cast<std::size_t>(l)].step(
                        data.xs[static_cast<std::size_t>(l)][n], data.desired[n]);
                record(n, e);
            }
            break;
        }
        case Algorithm::DiffusionRls: {
            DiffusionRls filter(graph, config.embedding, config.rls_lambda, config.rls_p0);
            for (std::size_t n = 0; n < steps; ++n) {
                gather(n);
                record(n, filter.step(xs_at, ds_at));
            }
            break;
        }
        case Algorithm::Klms: {
            std::vector<KlmsFilter> filters(
                static_cast<std::size_t>(D),
                KlmsFilter(config.kernel, config.mu_kernel, config.dictionary_budget));
            Eigen::VectorXd e(D);
            for (std::size_t n = 0; n < steps; ++n) {
                for (Eigen::Index l = 0; l < D; ++l)
                    e[l] = filters[static_cast<std::size_t>(l)].update(
                        data.xs[static_cast<std::size_t>(l)][n], data.desired[n]);
                record(n, e);
            }
            break;
        }
        case Algorithm::DiffusionKlms: {
            DiffusionKlms filter(graph, config.kernel, config.mu_kernel, config.embedding,
                                 config.dictionary_budget);
            for (std::size_t n = 0; n < steps; ++n) {
                gather(n);
                record(n, filter.step(xs_at, ds_at).raw_errors);
            }
            break;
        }
    }
    return mse;
}

} // namespace detail

// Runs every listed algorithm over the shared per-run realizations and
// returns the Monte Carlo averaged learning curves.
inline std::vector<MseTrace> run_experiment(const ExperimentConfig& config,
                                            const std::string& config_hash = {}) {
    config.validate();
    const double noise_variance = resolved_noise_variance(config);
    const NetworkGraph graph = config.build_graph();
    const std::size_t steps = config.sample_count - static_cast<std::size_t>(config.embedding) + 1;

    std::vector<MseTrace> traces;
    traces.reserve(config.algorithms.size());
    for (Algorithm alg : config.algorithms) {
        MseTrace t;
        t.algorithm = algorithm_name(alg);
        t.values.assign(steps, 0.0);
        t.master_seed = config.master_seed;
        t.config_hash = config_hash;
        t.runs = config.monte_carlo_runs;
        traces.push_back(std::move(t));
    }

    for (std::size_t run = 0; run < config.monte_carlo_runs; ++run) {
        const detail::RunData data = detail::make_run_data(config, noise_variance, run);
        for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
            const auto mse = detail::run_single(config.algorithms[a], config, graph, data);
            for (std::size_t n = 0; n < steps; ++n) traces[a].values[n] += mse[n];
        }
    }
    const double inv_runs = 1.0 / static_cast<double>(config.monte_carlo_runs);
    for (auto& t : traces)
        for (double& v : t.values) v *= inv_runs;
    return traces;
}

// i.i.d. snapshot sampler over the experiment's data distribution: each call
// draws a fresh source window, passes it through the channel, and adds
// per-node observation noise.
inline SnapshotSampler make_snapshot_sampler(const ExperimentConfig& config,
                                             double noise_variance, std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(seed);
    const Eigen::Index T = config.embedding;
    const Eigen::Index D = config.node_count;
    const double noise_std = std::sqrt(noise_variance);
    return [rng, T, D, noise_std]() {
        std::normal_distribution<double> noise(0.0, noise_std);
        Eigen::VectorXd z(T);
        for (Eigen::Index j = 0; j < T; ++j) {
            const double s = (((*rng)() >> 32) & 1u) ? 1.0 : -1.0;
            z[j] = s - 0.9 * s * s;
        }
        std::vector<Eigen::VectorXd> snapshot(static_cast<std::size_t>(D));
        for (Eigen::Index l = 0; l < D; ++l) {
            Eigen::VectorXd x(T);
            for (Eigen::Index j = 0; j < T; ++j)
                x[j] = z[j] + (noise_std > 0.0 ? noise(*rng) : 0.0);
            snapshot[static_cast<std::size_t>(l)] = std::move(x);
        }
        return snapshot;
    };
}

// Kernel-combination moments for the config's data distribution, node 0.
inline KernelMoments moments_for_config(const ExperimentConfig& config, std::size_t samples,
                                        ProbeMode probe_mode = ProbeMode::SameDraw) {
    const double noise_variance = resolved_noise_variance(config);
    const NetworkGraph graph = config.build_graph();
    const auto sampler = make_snapshot_sampler(config, noise_variance,
                                               derive_seed(config.master_seed, "moments"));
    return estimate_moments(graph, 0, config.kernel, sampler, samples, probe_mode);
}

// Mean of d^2 over the data distribution; the zero-initialized predictor's
// first-step error power, used as the transient curve's default m(0).
inline double desired_power(const ExperimentConfig& config) {
    return clean_signal_power(config.master_seed);
}

struct StepSizeSweepRow {
    double mu;
    double predicted_floor_eq21;
    double predicted_floor_fixedpoint;
    double empirical_floor;
};

inline std::vector<StepSizeSweepRow> sweep_step_size(const ExperimentConfig& base,
                                                     const std::vector<double>& mus,
                                                     std::size_t moment_samples = 100000) {
    base.validate();
    const double noise_variance = resolved_noise_variance(base);
    const KernelMoments moments = moments_for_config(base, moment_samples);
    std::vector<StepSizeSweepRow> rows;
    rows.reserve(mus.size());
    for (double mu : mus) {
        ExperimentConfig cfg = base;
        cfg.mu_kernel = mu;
        cfg.algorithms = {Algorithm::DiffusionKlms};
        const auto traces = run_experiment(cfg);
        rows.push_back({mu, steady_state_mse(moments, mu, noise_variance),
                        transient_fixed_point(moments, mu, noise_variance),
                        mse_floor(traces.front())});
    }
    return rows;
}

struct NetworkSweepRow {
    Eigen::Index size;
    double snr_db;
    double mean_floor;
    double std_floor;
    double theory_floor;
};

// Network-size sweep (fig5 preset): diffusion-KLMS floor over random (A,C) draws per
// network size and SNR.
inline std::vector<NetworkSweepRow> sweep_network_size(const ExperimentConfig& base,
                                                       const std::vector<Eigen::Index>& sizes,
                                                       const std::vector<double>& snr_db_list,
                                                       std::size_t matrix_draws,
                                                       std::size_t moment_samples = 20000) {
    if (sizes.empty()) throw ConfigInvalid("sweep_network_size: sizes must be nonempty");
    for (Eigen::Index s : sizes)
        if (s < 1) throw ConfigInvalid("sweep_network_size: sizes must be >= 1");
    if (matrix_draws < 1) throw ConfigInvalid("sweep_network_size: need at least one draw");

    const double pz = clean_signal_power(base.master_seed);
    std::vector<NetworkSweepRow> rows;
    for (Eigen::Index size : sizes) {
        for (double snr : snr_db_list) {
            const double variance = pz / std::pow(10.0, snr / 10.0);
            double sum = 0.0, sum_sq = 0.0, theory_sum = 0.0;
            for (std::size_t draw = 0; draw < matrix_draws; ++draw) {
                ExperimentConfig cfg = base;
                cfg.node_count = size;
                cfg.noise_variance = variance;
                cfg.snr_db.reset();
                cfg.algorithms = {Algorithm::DiffusionKlms};
                cfg.monte_carlo_runs = 1;
                cfg.master_seed = derive_seed(base.master_seed, "sweep-run", draw);
                cfg.a = MatrixChoice{MatrixChoice::Kind::Random,
                                     derive_seed(base.master_seed, "sweepA", draw), {}};
                cfg.c = MatrixChoice{MatrixChoice::Kind::Random,
                                     derive_seed(base.master_seed, "sweepC", draw), {}};
                const double floor = mse_floor(run_experiment(cfg).front());
                sum += floor;
                sum_sq += floor * floor;
                const KernelMoments m = moments_for_config(cfg, moment_samples);
                theory_sum += transient_fixed_point(m, cfg.mu_kernel, variance);
            }
            const double mean = sum / static_cast<double>(matrix_draws);
            const double var = std::max(0.0, sum_sq / static_cast<double>(matrix_draws) - mean * mean);
            rows.push_back({size, snr, mean, std::sqrt(var),
                            theory_sum / static_cast<double>(matrix_draws)});
        }
    }
    return rows;
}

} // namespace dkaf
