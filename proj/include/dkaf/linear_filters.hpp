#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <vector>

#include "dkaf/errors.hpp"
#include "dkaf/network.hpp"

namespace dkaf {

enum class DiffusionMode { ATC, CTA };

namespace detail {

inline void check_finite(const Eigen::VectorXd& x, double d) {
    if (!x.allFinite() || !std::isfinite(d)) throw NonFiniteInput("non-finite sample");
}

} // namespace detail

// Widrow-Hoff LMS, zero-initialized.
class LmsFilter {
public:
    LmsFilter(Eigen::Index dim, double mu)
        : w_(Eigen::VectorXd::Zero(dim)), mu_(mu) {
        if (!(mu > 0.0)) throw ConfigInvalid("LMS step size must be > 0");
    }

    // Returns the a priori error e = d - w'x.
    double step(const Eigen::VectorXd& x, double d) {
        if (x.size() != w_.size()) throw DimensionMismatch("LMS regressor dimension mismatch");
        detail::check_finite(x, d);
        const double e = d - w_.dot(x);
        w_ += mu_ * e * x;
        return e;
    }

    const Eigen::VectorXd& weights() const { return w_; }
    double mu() const { return mu_; }

private:
    Eigen::VectorXd w_;
    double mu_;
};

// Diffusion-LMS over a node graph. ATC adapts each node on its C-weighted
// neighborhood errors and then A-combines the intermediates; CTA combines
// first and adapts the combined weights.
class DiffusionLms {
public:
    DiffusionLms(const NetworkGraph& graph, Eigen::Index dim, double mu,
                 DiffusionMode mode = DiffusionMode::ATC)
        : graph_(&graph), mu_(mu), mode_(mode),
          w_(static_cast<std::size_t>(graph.node_count()), Eigen::VectorXd::Zero(dim)) {
        if (!(mu > 0.0)) throw ConfigInvalid("diffusion-LMS step size must be > 0");
    }

    // One network step; returns the per-node local errors.
    Eigen::VectorXd step(const std::vector<Eigen::VectorXd>& xs, const Eigen::VectorXd& ds) {
        const Eigen::Index n = graph_->node_count();
        if (static_cast<Eigen::Index>(xs.size()) != n || ds.size() != n)
            throw GraphSizeMismatch("diffusion-LMS: one regressor and desired value per node");
        for (Eigen::Index q = 0; q < n; ++q) {
            if (xs[static_cast<std::size_t>(q)].size() != dim())
                throw DimensionMismatch("diffusion-LMS regressor dimension mismatch");
            detail::check_finite(xs[static_cast<std::size_t>(q)], ds[q]);
        }

        if (mode_ == DiffusionMode::CTA) combine_weights();

        Eigen::VectorXd errors(n);
        for (Eigen::Index l = 0; l < n; ++l)
            errors[l] = ds[l] - w_[static_cast<std::size_t>(l)].dot(xs[static_cast<std::size_t>(l)]);

        std::vector<Eigen::VectorXd> p(static_cast<std::size_t>(n));
        const auto& C = graph_->C();
        for (Eigen::Index q = 0; q < n; ++q) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
            for (Eigen::Index l = 0; l < n; ++l)
                g += mu_ * C(q, l) * errors[l] * xs[static_cast<std::size_t>(l)];
            p[static_cast<std::size_t>(q)] = w_[static_cast<std::size_t>(q)] + g;
        }

        if (mode_ == DiffusionMode::ATC) {
            const auto& A = graph_->A();
            for (Eigen::Index q = 0; q < n; ++q) {
                Eigen::VectorXd wq = Eigen::VectorXd::Zero(dim());
                for (Eigen::Index l = 0; l < n; ++l) wq += A(q, l) * p[static_cast<std::size_t>(l)];
                w_[static_cast<std::size_t>(q)] = std::move(wq);
            }
        } else {
            w_ = std::move(p);
        }
        return errors;
    }

    Eigen::Index dim() const { return w_.front().size(); }
    const Eigen::VectorXd& weights(Eigen::Index node) const {
        return w_[static_cast<std::size_t>(node)];
    }

private:
    void combine_weights() {
        const Eigen::Index n = graph_->node_count();
        const auto& A = graph_->A();
        std::vector<Eigen::VectorXd> combined(static_cast<std::size_t>(n));
        for (Eigen::Index q = 0; q < n; ++q) {
            Eigen::VectorXd wq = Eigen::VectorXd::Zero(dim());
            for (Eigen::Index l = 0; l < n; ++l) wq += A(q, l) * w_[static_cast<std::size_t>(l)];
            combined[static_cast<std::size_t>(q)] = std::move(wq);
        }
        w_ = std::move(combined);
    }

    const NetworkGraph* graph_;
    double mu_;
    DiffusionMode mode_;
    std::vector<Eigen::VectorXd> w_;
};

// Exponentially weighted RLS with forgetting factor lambda, P0 = p0 * I.
class RlsFilter {
public:
    RlsFilter(Eigen::Index dim, double lambda = 0.999, double p0 = 100.0)
        : w_(Eigen::VectorXd::Zero(dim)),
          P_(Eigen::MatrixXd::Identity(dim, dim) * p0), lambda_(lambda) {
        if (!(lambda > 0.0) || lambda > 1.0) throw ConfigInvalid("RLS forgetting must be in (0,1]");
        if (!(p0 > 0.0)) throw ConfigInvalid("RLS P0 scale must be > 0");
    }

    double step(const Eigen::VectorXd& x, double d) {
        if (x.size() != w_.size()) throw DimensionMismatch("RLS regressor dimension mismatch");
        detail::check_finite(x, d);
        const Eigen::VectorXd Px = P_ * x;
        const double denom = lambda_ + x.dot(Px);
        if (!(denom > 0.0)) throw NumericalBreakdown("RLS gain denominator <= 0");
        const Eigen::VectorXd k = Px / denom;
        const double e = d - w_.dot(x);
        w_ += k * e;
        P_ = (P_ - k * Px.transpose()) / lambda_;
        P_ = 0.5 * (P_ + P_.transpose().eval());
        return e;
    }

    const Eigen::VectorXd& weights() const { return w_; }
    const Eigen::MatrixXd& inverse_correlation() const { return P_; }

protected:
    Eigen::VectorXd& mutable_weights() { return w_; }

private:
    Eigen::VectorXd w_;
    Eigen::MatrixXd P_;
    double lambda_;
};

// Baseline diffusion-RLS: per-node RLS update, then ATC-style A-combination
// of the weight vectors.
class DiffusionRls {
public:
    DiffusionRls(const NetworkGraph& graph, Eigen::Index dim, double lambda = 0.999,
                 double p0 = 100.0)
        : graph_(&graph) {
        nodes_.reserve(static_cast<std::size_t>(graph.node_count()));
        for (Eigen::Index q = 0; q < graph.node_count(); ++q)
            nodes_.emplace_back(dim, lambda, p0);
    }

    Eigen::VectorXd step(const std::vector<Eigen::VectorXd>& xs, const Eigen::VectorXd& ds) {
        const Eigen::Index n = graph_->node_count();
        if (static_cast<Eigen::Index>(xs.size()) != n || ds.size() != n)
            throw GraphSizeMismatch("diffusion-RLS: one regressor and desired value per node");
        Eigen::VectorXd errors(n);
        for (Eigen::Index q = 0; q < n; ++q)
            errors[q] = nodes_[static_cast<std::size_t>(q)].step(xs[static_cast<std::size_t>(q)], ds[q]);

        const auto& A = graph_->A();
        const Eigen::Index dim = nodes_.front().weights().size();
        std::vector<Eigen::VectorXd> combined(static_cast<std::size_t>(n));
        for (Eigen::Index q = 0; q < n; ++q) {
            Eigen::VectorXd wq = Eigen::VectorXd::Zero(dim);
            for (Eigen::Index l = 0; l < n; ++l)
                wq += A(q, l) * nodes_[static_cast<std::size_t>(l)].weights();
            combined[static_cast<std::size_t>(q)] = std::move(wq);
        }
        for (Eigen::Index q = 0; q < n; ++q)
            nodes_[static_cast<std::size_t>(q)].set_weights(combined[static_cast<std::size_t>(q)]);
        return errors;
    }

    const RlsFilter& node(Eigen::Index q) const { return nodes_[static_cast<std::size_t>(q)]; }

private:
    // DiffusionRls needs to overwrite node weights after combination.
    class CombinableRls : public dkaf::RlsFilter {
    public:
        using dkaf::RlsFilter::RlsFilter;
        void set_weights(const Eigen::VectorXd& w) { mutable_weights() = w; }
    };

    const NetworkGraph* graph_;
    std::vector<CombinableRls> nodes_;
};

// Distributed Wiener solution (sum_l c_l R_l)^-1 (sum_l c_l r_l).
inline Eigen::VectorXd distributed_wiener(const std::vector<Eigen::MatrixXd>& correlations,
                                          const std::vector<Eigen::VectorXd>& cross,
                                          const Eigen::VectorXd& c_row) {
    if (correlations.size() != cross.size() ||
        static_cast<Eigen::Index>(correlations.size()) != c_row.size())
        throw DimensionMismatch("distributed_wiener: per-node inputs must align with c_row");
    if (correlations.empty()) throw DimensionMismatch("distributed_wiener: no nodes");
    const Eigen::Index dim = correlations.front().rows();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(dim);
    for (std::size_t l = 0; l < correlations.size(); ++l) {
        if (correlations[l].rows() != dim || correlations[l].cols() != dim ||
            cross[l].size() != dim)
            throw DimensionMismatch("distributed_wiener: inconsistent dimensions");
        R += c_row[static_cast<Eigen::Index>(l)] * correlations[l];
        r += c_row[static_cast<Eigen::Index>(l)] * cross[l];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > 1e12)
        throw SingularMatrix("combined correlation matrix is singular or ill-conditioned");
    return svd.solve(r);
}

struct SpectralRadiusResult {
    double rho_combined;
    double max_rho_individual;
    bool bound_holds;
};

namespace detail {

// Largest-magnitude eigenvalue of a symmetric PSD matrix by power iteration.
inline double spectral_radius(const Eigen::MatrixXd& m, double tol = 1e-10,
                              int max_iter = 10000) {
    const Eigen::Index n = m.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
    double rho = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd mv = m * v;
        const double norm = mv.norm();
        if (norm == 0.0) return 0.0;
        mv /= norm;
        const double next = mv.dot(m * mv);
        if (std::abs(next - rho) <= tol * std::max(1.0, std::abs(next))) return next;
        rho = next;
        v = std::move(mv);
    }
    return rho;
}

} // namespace detail

// Jensen bound on the spectral radius of the C-weighted correlation matrix:
// rho(sum_l c_l R_l) <= max_l rho(R_l).
inline SpectralRadiusResult spectral_radius_check(const std::vector<Eigen::MatrixXd>& correlations,
                                                  const Eigen::VectorXd& c_row) {
    if (static_cast<Eigen::Index>(correlations.size()) != c_row.size() || correlations.empty())
        throw DimensionMismatch("spectral_radius_check: per-node inputs must align with c_row");
    const Eigen::Index dim = correlations.front().rows();
    Eigen::MatrixXd combined = Eigen::MatrixXd::Zero(dim, dim);
    double max_individual = 0.0;
    for (std::size_t l = 0; l < correlations.size(); ++l) {
        const Eigen::MatrixXd& R = correlations[l];
        if (!R.isApprox(R.transpose(), 1e-10))
            throw NonSymmetricInput("correlation matrix must be symmetric");
        combined += c_row[static_cast<Eigen::Index>(l)] * R;
        max_individual = std::max(max_individual, detail::spectral_radius(R));
    }
    const double rho = detail::spectral_radius(combined);
    return {rho, max_individual, rho <= max_individual + 1e-9};
}

} // namespace dkaf
