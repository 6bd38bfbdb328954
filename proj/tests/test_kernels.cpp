#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <vector>

#include "dkaf/kernels.hpp"
#include "dkaf/rng.hpp"

using dkaf::KernelSpec;
using dkaf::kernel_eval;

namespace {

Eigen::VectorXd vec1(double v) {
    Eigen::VectorXd x(1);
    x << v;
    return x;
}

} // namespace

TEST_CASE("Gaussian self-value equals the normalization peak") {
    const auto spec = KernelSpec::gaussian(0.1);
    const Eigen::VectorXd x = vec1(0.37);
    CHECK(kernel_eval(spec, x, x) == Catch::Approx(3.98942280).epsilon(1e-8));
    CHECK(spec.gaussian_peak() == Catch::Approx(1.0 / std::sqrt(2.0 * M_PI * 0.01)));
}

TEST_CASE("Gaussian value at unit distance, sigma 1") {
    const auto spec = KernelSpec::gaussian(1.0);
    const double v = kernel_eval(spec, vec1(0.0), vec1(1.0));
    CHECK(v == Catch::Approx(0.24197072).epsilon(1e-7));
}

TEST_CASE("Gaussian decays toward zero with distance") {
    const auto spec = KernelSpec::gaussian(0.5);
    double prev = kernel_eval(spec, vec1(0.0), vec1(0.0));
    for (double d : {0.5, 1.0, 2.0, 4.0}) {
        const double v = kernel_eval(spec, vec1(0.0), vec1(d));
        CHECK(v < prev);
        CHECK(v >= 0.0);
        prev = v;
    }
    CHECK(kernel_eval(spec, vec1(0.0), vec1(100.0)) == 0.0);
}

TEST_CASE("unnormalized option drops the peak factor") {
    const auto spec = KernelSpec::gaussian(0.1, false);
    const Eigen::VectorXd x = vec1(1.0);
    CHECK(kernel_eval(spec, x, x) == 1.0);
}

TEST_CASE("polynomial kernel") {
    const auto spec = KernelSpec::polynomial(2, 1.0);
    Eigen::VectorXd x(2), y(2);
    x << 1.0, 2.0;
    y << 3.0, 4.0;
    CHECK(kernel_eval(spec, x, y) == Catch::Approx(144.0)); // (11 + 1)^2
}

TEST_CASE("kernel rejects mismatched dimensions") {
    const auto spec = KernelSpec::gaussian(1.0);
    CHECK_THROWS_AS(kernel_eval(spec, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)),
                    dkaf::DimensionMismatch);
}

TEST_CASE("Gaussian symmetry and peak bound") {
    const auto spec = KernelSpec::gaussian(0.3);
    dkaf::Rng rng(5);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd x(3), y(3);
        for (Eigen::Index i = 0; i < 3; ++i) {
            x[i] = dist(rng);
            y[i] = dist(rng);
        }
        const double kxy = kernel_eval(spec, x, y);
        const double kyx = kernel_eval(spec, y, x);
        CHECK(kxy == kyx);
        CHECK(kxy >= 0.0);
        CHECK(kxy <= spec.gaussian_peak() + 1e-15);
    }
}

TEST_CASE("Gaussian Gram matrices are positive semidefinite") {
    const auto spec = KernelSpec::gaussian(0.4);
    dkaf::Rng rng(11);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5); // up to 8 points
        std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n));
        for (auto& p : pts) {
            p.resize(2);
            p << dist(rng), dist(rng);
        }
        Eigen::MatrixXd gram(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gram(i, j) = kernel_eval(spec, pts[static_cast<std::size_t>(i)],
                                         pts[static_cast<std::size_t>(j)]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
}

TEST_CASE("combined kernel with a single unit weight reduces to kernel_eval") {
    const auto spec = KernelSpec::gaussian(0.1);
    const Eigen::VectorXd probe = vec1(0.2);
    const double v = dkaf::combined_kernel(spec, Eigen::VectorXd::Ones(1), {probe}, probe);
    CHECK(v == Catch::Approx(3.98942280).epsilon(1e-8));
}

TEST_CASE("combined kernel of equal centers equals the self value") {
    const auto spec = KernelSpec::gaussian(0.1);
    const Eigen::VectorXd probe = vec1(-1.0);
    Eigen::VectorXd w(2);
    w << 0.5, 0.5;
    const double v = dkaf::combined_kernel(spec, w, {probe, probe}, probe);
    CHECK(v == Catch::Approx(3.98942280).epsilon(1e-8));
}

TEST_CASE("combined kernel matches the two-term hand value") {
    const auto spec = KernelSpec::gaussian(1.0);
    Eigen::VectorXd w(2);
    w << 0.5, 0.5;
    const double v = dkaf::combined_kernel(spec, w, {vec1(0.0), vec1(1.0)}, vec1(0.0));
    CHECK(v == Catch::Approx(0.32045650).epsilon(1e-7));
}

TEST_CASE("combined kernel stays inside the convex hull of kernel values") {
    const auto spec = KernelSpec::gaussian(0.25);
    dkaf::Rng rng(21);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng() % 4;
        std::vector<Eigen::VectorXd> centers(n);
        for (auto& c : centers) c = vec1(dist(rng));
        const Eigen::VectorXd probe = vec1(dist(rng));
        Eigen::VectorXd w(static_cast<Eigen::Index>(n));
        double sum = 0.0;
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            w[i] = std::abs(dist(rng)) + 1e-3;
            sum += w[i];
        }
        w /= sum;
        double lo = 1e300, hi = -1e300;
        for (const auto& c : centers) {
            const double k = kernel_eval(spec, c, probe);
            lo = std::min(lo, k);
            hi = std::max(hi, k);
        }
        const double v = dkaf::combined_kernel(spec, w, centers, probe);
        CHECK(v >= lo - 1e-12);
        CHECK(v <= hi + 1e-12);
    }
}

TEST_CASE("combined kernel rejects weight/center length mismatch") {
    const auto spec = KernelSpec::gaussian(1.0);
    CHECK_THROWS_AS(dkaf::combined_kernel(spec, Eigen::VectorXd::Ones(2), {vec1(0.0)}, vec1(0.0)),
                    dkaf::DimensionMismatch);
}
