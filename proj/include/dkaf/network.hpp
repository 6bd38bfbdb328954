#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include "dkaf/errors.hpp"
#include "dkaf/rng.hpp"

namespace dkaf {

// Row-stochastic combining matrix. Rows whose printed sums are slightly off
// (|sum - 1| <= 1e-2) are renormalized on validation; larger deviations are
// rejected. Immutable after construction.
class StochasticMatrix {
public:
    static constexpr double kRowSumTolerance = 1e-9;
    static constexpr double kRenormalizeLimit = 1e-2;

    static StochasticMatrix validate(Eigen::MatrixXd entries) {
        if (entries.rows() != entries.cols()) {
            std::ostringstream os;
            os << "stochastic matrix must be square, got " << entries.rows()
               << "x" << entries.cols();
            throw NotSquare(os.str());
        }
        if (entries.rows() == 0) throw ZeroNodes("stochastic matrix must have at least one row");
        for (Eigen::Index q = 0; q < entries.rows(); ++q) {
            for (Eigen::Index l = 0; l < entries.cols(); ++l) {
                const double v = entries(q, l);
                if (!std::isfinite(v) || v < 0.0) {
                    std::ostringstream os;
                    os << "negative or non-finite entry " << v << " at (" << q << "," << l << ")";
                    throw NegativeEntry(os.str());
                }
            }
            const double sum = entries.row(q).sum();
            if (std::abs(sum - 1.0) > kRenormalizeLimit) {
                std::ostringstream os;
                os << "row " << q << " sums to " << sum << " (deviation "
                   << std::abs(sum - 1.0) << ")";
                throw RowSumViolation(os.str());
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance) entries.row(q) /= sum;
        }
        return StochasticMatrix(std::move(entries));
    }

    // All entries 1/n.
    static StochasticMatrix uniform(Eigen::Index n) {
        if (n < 1) throw ZeroNodes("uniform stochastic matrix needs n >= 1");
        return StochasticMatrix(Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n)));
    }

    static StochasticMatrix identity(Eigen::Index n) {
        if (n < 1) throw ZeroNodes("identity stochastic matrix needs n >= 1");
        return StochasticMatrix(Eigen::MatrixXd::Identity(n, n));
    }

    // Rows sampled uniformly from the probability simplex (normalized
    // unit-rate exponentials), deterministic per seed.
    static StochasticMatrix random(Eigen::Index n, std::uint64_t seed) {
        if (n < 1) throw ZeroNodes("random stochastic matrix needs n >= 1");
        Rng rng(seed);
        std::exponential_distribution<double> exp1(1.0);
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index q = 0; q < n; ++q) {
            double sum = 0.0;
            for (Eigen::Index l = 0; l < n; ++l) {
                m(q, l) = exp1(rng);
                sum += m(q, l);
            }
            m.row(q) /= sum;
        }
        return StochasticMatrix(std::move(m));
    }

    Eigen::Index size() const { return entries_.rows(); }
    const Eigen::MatrixXd& entries() const { return entries_; }
    double operator()(Eigen::Index q, Eigen::Index l) const { return entries_(q, l); }
    Eigen::MatrixXd::ConstRowXpr row(Eigen::Index q) const { return entries_.row(q); }

    // output[q] = sum_l M(q,l) * values[l]
    Eigen::VectorXd combine(const Eigen::VectorXd& values) const {
        if (values.size() != entries_.rows()) {
            std::ostringstream os;
            os << "combine: matrix is " << entries_.rows() << "x" << entries_.cols()
               << " but vector has length " << values.size();
            throw DimensionMismatch(os.str());
        }
        return entries_ * values;
    }

    bool is_identity() const {
        return entries_.isApprox(Eigen::MatrixXd::Identity(entries_.rows(), entries_.cols()), 0.0);
    }

private:
    explicit StochasticMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}

    Eigen::MatrixXd entries_;
};

using Adjacency = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Node graph with its two combining matrices. Neighborhoods always include
// the node itself, so the adjacency diagonal is forced true.
class NetworkGraph {
public:
    // Note: the adjacency must be computed before a and c are moved from.
    NetworkGraph(const StochasticMatrix& a, const StochasticMatrix& c)
        : NetworkGraph(default_adjacency(a, c), a, c) {}

    NetworkGraph(Adjacency adjacency, StochasticMatrix a, StochasticMatrix c)
        : adjacency_(std::move(adjacency)), a_(std::move(a)), c_(std::move(c)) {
        const Eigen::Index n = adjacency_.rows();
        if (adjacency_.cols() != n) throw NotSquare("adjacency must be square");
        if (a_.size() != n || c_.size() != n)
            throw GraphSizeMismatch("combining matrices must match adjacency dimension");
        for (Eigen::Index q = 0; q < n; ++q) {
            if (!adjacency_(q, q)) throw ConfigInvalid("adjacency diagonal must be true");
            for (Eigen::Index l = 0; l < n; ++l) {
                if (adjacency_(q, l) != adjacency_(l, q))
                    throw NonSymmetricInput("adjacency must be symmetric");
                if (!adjacency_(q, l) && (a_(q, l) != 0.0 || c_(q, l) != 0.0))
                    throw ConfigInvalid("combining weight outside neighborhood");
            }
        }
    }

    Eigen::Index node_count() const { return adjacency_.rows(); }
    const Adjacency& adjacency() const { return adjacency_; }
    const StochasticMatrix& A() const { return a_; }
    const StochasticMatrix& C() const { return c_; }

private:
    static Adjacency default_adjacency(const StochasticMatrix& a, const StochasticMatrix& c) {
        if (a.size() != c.size())
            throw GraphSizeMismatch("A and C must have equal dimension");
        const Eigen::Index n = a.size();
        Adjacency adj = Adjacency::Constant(n, n, false);
        for (Eigen::Index q = 0; q < n; ++q) {
            adj(q, q) = true;
            for (Eigen::Index l = 0; l < n; ++l) {
                if (a(q, l) != 0.0 || c(q, l) != 0.0) {
                    adj(q, l) = true;
                    adj(l, q) = true;
                }
            }
        }
        return adj;
    }

    Adjacency adjacency_;
    StochasticMatrix a_;
    StochasticMatrix c_;
};

} // namespace dkaf
