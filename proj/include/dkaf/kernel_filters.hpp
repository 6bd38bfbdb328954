#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <vector>

#include "dkaf/errors.hpp"
#include "dkaf/kernels.hpp"
#include "dkaf/network.hpp"

namespace dkaf {

// Kernel LMS. The filter is the growing expansion
//   y(x) = mu * sum_i e_i * k(x_i, x)
// over all past inputs, with zero initial conditions. A dictionary budget of
// 0 means unbounded; a positive budget drops the oldest centers.
class KlmsFilter {
public:
    KlmsFilter(KernelSpec kernel, double mu, std::size_t dictionary_budget = 0)
        : kernel_(kernel), mu_(mu), budget_(dictionary_budget) {
        if (!(mu > 0.0)) throw ConfigInvalid("KLMS step size must be > 0");
    }

    double predict(const Eigen::VectorXd& x) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < centers_.size(); ++i)
            acc += coefficients_[i] * kernel_eval(kernel_, centers_[i], x);
        return mu_ * acc;
    }

    // e = d - predict(x); the pair (x, e) joins the dictionary.
    double update(const Eigen::VectorXd& x, double d) {
        if (!x.allFinite() || !std::isfinite(d)) throw NonFiniteInput("non-finite KLMS sample");
        const double e = d - predict(x);
        centers_.push_back(x);
        coefficients_.push_back(e);
        if (budget_ > 0 && centers_.size() > budget_) {
            centers_.erase(centers_.begin());
            coefficients_.erase(coefficients_.begin());
        }
        return e;
    }

    std::size_t size() const { return centers_.size(); }
    const std::vector<Eigen::VectorXd>& centers() const { return centers_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    const KernelSpec& kernel() const { return kernel_; }
    double mu() const { return mu_; }

private:
    KernelSpec kernel_;
    double mu_;
    std::size_t budget_;
    std::vector<Eigen::VectorXd> centers_;
    std::vector<double> coefficients_;
};

// Diffusion-KLMS. Every accepted step stores the full tuple of all nodes'
// regressors together with the A-combined errors e'(.,n); node q predicts
//   y(q,n) = mu * sum_i e'(q,i) * sum_l C(q,l) * k(x_l(i), x_q(n)).
// Centers are kept in flat per-node arrays so the prediction scan over the
// history is a contiguous pass.
class DiffusionKlms {
public:
    DiffusionKlms(const NetworkGraph& graph, KernelSpec kernel, double mu, Eigen::Index dim,
                  std::size_t dictionary_budget = 0)
        : graph_(&graph), kernel_(kernel), mu_(mu), dim_(dim), budget_(dictionary_budget),
          centers_(static_cast<std::size_t>(graph.node_count())),
          coefficients_(static_cast<std::size_t>(graph.node_count())) {
        if (!(mu > 0.0)) throw ConfigInvalid("diffusion-KLMS step size must be > 0");
        if (dim < 1) throw DimensionMismatch("diffusion-KLMS regressor dimension must be >= 1");
    }

    Eigen::Index node_count() const { return graph_->node_count(); }
    Eigen::Index dim() const { return dim_; }
    std::size_t size() const { return steps_; }
    const NetworkGraph& graph() const { return *graph_; }
    const KernelSpec& kernel() const { return kernel_; }
    double mu() const { return mu_; }

    // Stored regressor of node l at history index i.
    Eigen::Map<const Eigen::VectorXd> center(Eigen::Index l, std::size_t i) const {
        return Eigen::Map<const Eigen::VectorXd>(
            centers_[static_cast<std::size_t>(l)].data() + i * static_cast<std::size_t>(dim_),
            dim_);
    }

    double coefficient(Eigen::Index q, std::size_t i) const {
        return coefficients_[static_cast<std::size_t>(q)][i];
    }

    double predict(Eigen::Index q, const std::vector<Eigen::VectorXd>& xs) const {
        if (static_cast<Eigen::Index>(xs.size()) != node_count())
            throw GraphSizeMismatch("diffusion-KLMS: one regressor per node expected");
        return predict_probe(q, xs[static_cast<std::size_t>(q)]);
    }

    double predict_probe(Eigen::Index q, const Eigen::VectorXd& probe) const {
        if (probe.size() != dim_) throw DimensionMismatch("diffusion-KLMS probe dimension mismatch");
        if (steps_ == 0) return 0.0;
        const auto& C = graph_->C();
        const std::vector<double>& coeff = coefficients_[static_cast<std::size_t>(q)];
        double acc = 0.0;
        for (Eigen::Index l = 0; l < node_count(); ++l) {
            const double w = C(q, l);
            if (w == 0.0) continue;
            acc += w * node_expansion(static_cast<std::size_t>(l), coeff, probe);
        }
        return mu_ * acc;
    }

    struct StepResult {
        Eigen::VectorXd raw_errors;      // e(l,n) = d_l - y(l,n)
        Eigen::VectorXd combined_errors; // e'(.,n) = A e(.,n)
    };

    StepResult step(const std::vector<Eigen::VectorXd>& xs, const Eigen::VectorXd& ds) {
        const Eigen::Index n = node_count();
        if (static_cast<Eigen::Index>(xs.size()) != n || ds.size() != n)
            throw GraphSizeMismatch("diffusion-KLMS: one regressor and desired value per node");
        for (Eigen::Index l = 0; l < n; ++l) {
            const auto& x = xs[static_cast<std::size_t>(l)];
            if (x.size() != dim_) throw DimensionMismatch("diffusion-KLMS regressor dimension mismatch");
            if (!x.allFinite() || !std::isfinite(ds[l]))
                throw NonFiniteInput("non-finite diffusion-KLMS sample");
        }

        StepResult result;
        result.raw_errors.resize(n);
        for (Eigen::Index l = 0; l < n; ++l)
            result.raw_errors[l] = ds[l] - predict_probe(l, xs[static_cast<std::size_t>(l)]);
        result.combined_errors = graph_->A().combine(result.raw_errors);

        for (Eigen::Index l = 0; l < n; ++l) {
            const auto& x = xs[static_cast<std::size_t>(l)];
            auto& store = centers_[static_cast<std::size_t>(l)];
            store.insert(store.end(), x.data(), x.data() + x.size());
            coefficients_[static_cast<std::size_t>(l)].push_back(result.combined_errors[l]);
        }
        ++steps_;

        if (budget_ > 0 && steps_ > budget_) {
            for (Eigen::Index l = 0; l < n; ++l) {
                auto& store = centers_[static_cast<std::size_t>(l)];
                store.erase(store.begin(), store.begin() + dim_);
                auto& coeff = coefficients_[static_cast<std::size_t>(l)];
                coeff.erase(coeff.begin());
            }
            --steps_;
        }
        return result;
    }

private:
    // sum_i coeff[i] * k(x_l(i), probe) over the stored history of node l.
    double node_expansion(std::size_t l, const std::vector<double>& coeff,
                          const Eigen::VectorXd& probe) const {
        const double* data = centers_[l].data();
        const std::size_t d = static_cast<std::size_t>(dim_);
        double acc = 0.0;
        if (kernel_.family == KernelFamily::Gaussian) {
            const double peak = kernel_.gaussian_peak();
            for (std::size_t i = 0; i < steps_; ++i) {
                const double* c = data + i * d;
                double sq = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double diff = c[j] - probe[static_cast<Eigen::Index>(j)];
                    sq += diff * diff;
                }
                acc += coeff[i] * detail::gaussian_from_sqdist(sq, kernel_.sigma, peak);
            }
        } else {
            for (std::size_t i = 0; i < steps_; ++i) {
                Eigen::Map<const Eigen::VectorXd> c(data + i * d, dim_);
                acc += coeff[i] * kernel_eval(kernel_, c, probe);
            }
        }
        return acc;
    }

    const NetworkGraph* graph_;
    KernelSpec kernel_;
    double mu_;
    Eigen::Index dim_;
    std::size_t budget_;
    std::size_t steps_{0};
    std::vector<std::vector<double>> centers_;      // per node, flat (steps * dim)
    std::vector<std::vector<double>> coefficients_; // per node, length steps
};

} // namespace dkaf
