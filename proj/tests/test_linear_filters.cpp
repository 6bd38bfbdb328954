#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "dkaf/linear_filters.hpp"
#include "dkaf/network.hpp"
#include "dkaf/rng.hpp"

using dkaf::DiffusionLms;
using dkaf::DiffusionMode;
using dkaf::LmsFilter;
using dkaf::NetworkGraph;
using dkaf::RlsFilter;
using dkaf::StochasticMatrix;

namespace {

Eigen::VectorXd vec1(double v) {
    Eigen::VectorXd x(1);
    x << v;
    return x;
}

NetworkGraph uniform_graph(Eigen::Index n) {
    return NetworkGraph(StochasticMatrix::uniform(n), StochasticMatrix::uniform(n));
}

NetworkGraph identity_graph(Eigen::Index n) {
    return NetworkGraph(StochasticMatrix::identity(n), StochasticMatrix::identity(n));
}

} // namespace

TEST_CASE("LMS hand-worked steps") {
    LmsFilter f(1, 0.5);
    CHECK(f.step(vec1(1.0), 1.0) == Catch::Approx(1.0));
    CHECK(f.weights()[0] == Catch::Approx(0.5));

    // fixed point: d = w'x leaves the weights untouched
    const double e = f.step(vec1(2.0), 1.0);
    CHECK(e == Catch::Approx(0.0));
    CHECK(f.weights()[0] == Catch::Approx(0.5));
}

TEST_CASE("LMS example w=[0.2], x=[2], d=1, mu=0.1") {
    // reach w=0.2 via one crafted step: w0=0, x=[1], d=2, mu=0.1 -> w=0.2
    LmsFilter f(1, 0.1);
    f.step(vec1(1.0), 2.0);
    REQUIRE(f.weights()[0] == Catch::Approx(0.2));
    const double e = f.step(vec1(2.0), 1.0);
    CHECK(e == Catch::Approx(0.6));
    CHECK(f.weights()[0] == Catch::Approx(0.32));
}

TEST_CASE("LMS rejects bad input") {
    LmsFilter f(2, 0.1);
    CHECK_THROWS_AS(f.step(Eigen::VectorXd::Ones(3), 1.0), dkaf::DimensionMismatch);
    CHECK_THROWS_AS(f.step(Eigen::VectorXd::Ones(2), std::nan("")), dkaf::NonFiniteInput);
}

TEST_CASE("single-node diffusion-LMS equals plain LMS over 100 random steps") {
    const auto graph = uniform_graph(1);
    DiffusionLms diff(graph, 2, 0.05);
    LmsFilter plain(2, 0.05);
    dkaf::Rng rng(3);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int n = 0; n < 100; ++n) {
        Eigen::VectorXd x(2);
        x << dist(rng), dist(rng);
        const double d = dist(rng);
        const double e_plain = plain.step(x, d);
        const Eigen::VectorXd e_diff = diff.step({x}, vec1(d));
        CHECK(e_diff[0] == e_plain);
        CHECK(diff.weights(0).isApprox(plain.weights(), 0.0));
    }
}

TEST_CASE("identical data at both nodes keeps weights identical") {
    const auto graph = uniform_graph(2);
    DiffusionLms diff(graph, 2, 0.02);
    dkaf::Rng rng(9);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int n = 0; n < 200; ++n) {
        Eigen::VectorXd x(2);
        x << dist(rng), dist(rng);
        Eigen::VectorXd d(2);
        d.setConstant(dist(rng));
        diff.step({x, x}, d);
        CHECK(diff.weights(0).isApprox(diff.weights(1), 1e-14));
    }
}

TEST_CASE("diffusion-LMS with identity matrices decouples the nodes") {
    const auto graph = identity_graph(2);
    DiffusionLms diff(graph, 1, 0.1);
    LmsFilter node0(1, 0.1), node1(1, 0.1);
    dkaf::Rng rng(17);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int n = 0; n < 100; ++n) {
        const Eigen::VectorXd x0 = vec1(dist(rng)), x1 = vec1(dist(rng));
        Eigen::VectorXd d(2);
        d << dist(rng), dist(rng);
        const Eigen::VectorXd e = diff.step({x0, x1}, d);
        CHECK(e[0] == node0.step(x0, d[0]));
        CHECK(e[1] == node1.step(x1, d[1]));
        CHECK(diff.weights(0)[0] == node0.weights()[0]);
        CHECK(diff.weights(1)[0] == node1.weights()[0]);
    }
}

TEST_CASE("diffusion-LMS identifies a linear plant") {
    const auto graph = uniform_graph(2);
    Eigen::VectorXd w_true(2);
    w_true << 0.5, -0.3;
    DiffusionLms diff(graph, 2, 0.02, DiffusionMode::ATC);
    dkaf::Rng rng(77);
    std::normal_distribution<double> noise(0.0, 0.1);
    for (int n = 0; n < 2000; ++n) {
        std::vector<Eigen::VectorXd> xs(2);
        Eigen::VectorXd d(2);
        for (int l = 0; l < 2; ++l) {
            Eigen::VectorXd x(2);
            x << (rng() & 1 ? 1.0 : -1.0), (rng() & 1 ? 1.0 : -1.0);
            d[l] = w_true.dot(x) + noise(rng);
            xs[static_cast<std::size_t>(l)] = std::move(x);
        }
        diff.step(xs, d);
    }
    CHECK((diff.weights(0) - w_true).norm() < 0.1);
    CHECK((diff.weights(1) - w_true).norm() < 0.1);
}

TEST_CASE("CTA mode also converges on the linear plant") {
    const auto graph = uniform_graph(2);
    Eigen::VectorXd w_true(2);
    w_true << 0.5, -0.3;
    DiffusionLms diff(graph, 2, 0.02, DiffusionMode::CTA);
    dkaf::Rng rng(78);
    std::normal_distribution<double> noise(0.0, 0.1);
    for (int n = 0; n < 2000; ++n) {
        std::vector<Eigen::VectorXd> xs(2);
        Eigen::VectorXd d(2);
        for (int l = 0; l < 2; ++l) {
            Eigen::VectorXd x(2);
            x << (rng() & 1 ? 1.0 : -1.0), (rng() & 1 ? 1.0 : -1.0);
            d[l] = w_true.dot(x) + noise(rng);
            xs[static_cast<std::size_t>(l)] = std::move(x);
        }
        diff.step(xs, d);
    }
    CHECK((diff.weights(0) - w_true).norm() < 0.1);
}

TEST_CASE("single-node LMS settles to a noise floor for stable step sizes") {
    // white +/-1 inputs: R = I, so any mu in (0,2) is stable; check the
    // tail weight error stays small across seeds
    Eigen::VectorXd w_true(2);
    w_true << 1.0, -0.5;
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        LmsFilter f(2, 0.05);
        dkaf::Rng rng(seed * 13 + 1);
        std::normal_distribution<double> noise(0.0, 0.1);
        for (int n = 0; n < 1500; ++n) {
            Eigen::VectorXd x(2);
            x << (rng() & 1 ? 1.0 : -1.0), (rng() & 1 ? 1.0 : -1.0);
            f.step(x, w_true.dot(x) + noise(rng));
        }
        if ((f.weights() - w_true).norm() < 0.15) ++ok;
    }
    CHECK(ok >= 19);
}

TEST_CASE("RLS hand-worked first step") {
    RlsFilter f(1, 1.0, 100.0);
    const double e = f.step(vec1(1.0), 1.0);
    CHECK(e == Catch::Approx(1.0));
    CHECK(f.weights()[0] == Catch::Approx(100.0 / 101.0).epsilon(1e-9));
}

TEST_CASE("RLS fixed point leaves weights unchanged") {
    RlsFilter f(2, 0.999, 100.0);
    dkaf::Rng rng(31);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXd x(2);
    x << dist(rng), dist(rng);
    f.step(x, 0.7);
    const Eigen::VectorXd w = f.weights();
    const double e = f.step(x, w.dot(x));
    CHECK(e == Catch::Approx(0.0).margin(1e-12));
    CHECK((f.weights() - w).norm() < 1e-12);
}

TEST_CASE("RLS weight error decreases on a stationary linear plant") {
    Eigen::VectorXd w_true(2);
    w_true << 0.8, -0.2;
    RlsFilter f(2, 1.0, 100.0);
    dkaf::Rng rng(41);
    std::normal_distribution<double> noise(0.0, 0.05);
    double err_at_50 = 0.0, err_at_500 = 0.0;
    for (int n = 0; n < 500; ++n) {
        Eigen::VectorXd x(2);
        x << (rng() & 1 ? 1.0 : -1.0), (rng() & 1 ? 1.0 : -1.0);
        f.step(x, w_true.dot(x) + noise(rng));
        if (n == 49) err_at_50 = (f.weights() - w_true).norm();
        if (n == 499) err_at_500 = (f.weights() - w_true).norm();
    }
    CHECK(err_at_500 < err_at_50 + 1e-6);
    CHECK(err_at_500 < 0.05);
}

TEST_CASE("RLS inverse-correlation matrix stays symmetric positive definite") {
    RlsFilter f(3, 0.999, 100.0);
    dkaf::Rng rng(53);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int n = 0; n < 500; ++n) {
        Eigen::VectorXd x(3);
        x << dist(rng), dist(rng), dist(rng);
        f.step(x, dist(rng));
        if ((n + 1) % 100 == 0) {
            const Eigen::MatrixXd& P = f.inverse_correlation();
            CHECK((P - P.transpose()).cwiseAbs().maxCoeff() < 1e-8);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
            CHECK(es.eigenvalues().minCoeff() > 0.0);
        }
    }
}

TEST_CASE("single-node diffusion-RLS equals plain RLS") {
    const auto graph = uniform_graph(1);
    dkaf::DiffusionRls diff(graph, 2, 0.999, 100.0);
    RlsFilter plain(2, 0.999, 100.0);
    dkaf::Rng rng(61);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int n = 0; n < 100; ++n) {
        Eigen::VectorXd x(2);
        x << dist(rng), dist(rng);
        const double d = dist(rng);
        const double e_plain = plain.step(x, d);
        const Eigen::VectorXd e_diff = diff.step({x}, vec1(d));
        CHECK(e_diff[0] == e_plain);
        CHECK(diff.node(0).weights().isApprox(plain.weights(), 0.0));
    }
}

TEST_CASE("diffusion-RLS combination is a no-op on identical node states") {
    const auto graph = uniform_graph(2);
    dkaf::DiffusionRls diff(graph, 2);
    dkaf::Rng rng(67);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int n = 0; n < 100; ++n) {
        Eigen::VectorXd x(2);
        x << dist(rng), dist(rng);
        Eigen::VectorXd d(2);
        d.setConstant(dist(rng));
        diff.step({x, x}, d);
        CHECK(diff.node(0).weights().isApprox(diff.node(1).weights(), 1e-13));
    }
}

TEST_CASE("distributed Wiener solution") {
    SECTION("identity correlations return the cross vector") {
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
        Eigen::VectorXd r(2);
        r << 0.3, -0.7;
        Eigen::VectorXd c(2);
        c << 0.5, 0.5;
        const Eigen::VectorXd w = dkaf::distributed_wiener({I, I}, {r, r}, c);
        CHECK(w.isApprox(r, 1e-12));
    }
    SECTION("single node reduces to R^-1 r") {
        Eigen::MatrixXd R(2, 2);
        R << 2.0, 0.5, 0.5, 1.0;
        Eigen::VectorXd r(2);
        r << 1.0, 0.0;
        const Eigen::VectorXd w =
            dkaf::distributed_wiener({R}, {r}, Eigen::VectorXd::Ones(1));
        CHECK((R * w - r).norm() < 1e-10);
    }
    SECTION("hand-worked diagonal pair") {
        Eigen::MatrixXd R1 = Eigen::Vector2d(2.0, 1.0).asDiagonal();
        Eigen::MatrixXd R2 = Eigen::Vector2d(1.0, 2.0).asDiagonal();
        Eigen::VectorXd r(2);
        r << 1.0, 1.0;
        Eigen::VectorXd c(2);
        c << 0.5, 0.5;
        const Eigen::VectorXd w = dkaf::distributed_wiener({R1, R2}, {r, r}, c);
        CHECK(w[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-10));
        CHECK(w[1] == Catch::Approx(2.0 / 3.0).epsilon(1e-10));
    }
    SECTION("singular combined matrix is rejected") {
        const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(2, 2);
        CHECK_THROWS_AS(dkaf::distributed_wiener({Z}, {Eigen::VectorXd::Ones(2)},
                                                 Eigen::VectorXd::Ones(1)),
                        dkaf::SingularMatrix);
    }
}

TEST_CASE("spectral radius bound") {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd c(2);
    c << 0.5, 0.5;

    SECTION("identity correlations") {
        const auto res = dkaf::spectral_radius_check({I, I}, c);
        CHECK(res.rho_combined == Catch::Approx(1.0).epsilon(1e-9));
        CHECK(res.max_rho_individual == Catch::Approx(1.0).epsilon(1e-9));
        CHECK(res.bound_holds);
    }
    SECTION("hand-worked diagonal pair") {
        Eigen::MatrixXd R1 = Eigen::Vector2d(4.0, 1.0).asDiagonal();
        Eigen::MatrixXd R2 = Eigen::Vector2d(1.0, 4.0).asDiagonal();
        const auto res = dkaf::spectral_radius_check({R1, R2}, c);
        CHECK(res.rho_combined == Catch::Approx(2.5).epsilon(1e-8));
        CHECK(res.max_rho_individual == Catch::Approx(4.0).epsilon(1e-8));
        CHECK(res.bound_holds);
    }
    SECTION("asymmetric input is rejected") {
        Eigen::MatrixXd bad(2, 2);
        bad << 1.0, 0.5, 0.0, 1.0;
        CHECK_THROWS_AS(dkaf::spectral_radius_check({bad}, Eigen::VectorXd::Ones(1)),
                        dkaf::NonSymmetricInput);
    }
    SECTION("holds on 100 random PSD instances") {
        dkaf::Rng rng(101);
        std::normal_distribution<double> dist(0.0, 1.0);
        for (int t = 0; t < 100; ++t) {
            const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 3);
            const std::size_t nodes = 2 + rng() % 3;
            std::vector<Eigen::MatrixXd> Rs(nodes);
            for (auto& R : Rs) {
                Eigen::MatrixXd B(dim, dim);
                for (Eigen::Index i = 0; i < dim; ++i)
                    for (Eigen::Index j = 0; j < dim; ++j) B(i, j) = dist(rng);
                R = B * B.transpose();
            }
            Eigen::VectorXd weights(static_cast<Eigen::Index>(nodes));
            double sum = 0.0;
            for (Eigen::Index i = 0; i < weights.size(); ++i) {
                weights[i] = std::abs(dist(rng)) + 1e-3;
                sum += weights[i];
            }
            weights /= sum;
            const auto res = dkaf::spectral_radius_check(Rs, weights);
            CHECK(res.bound_holds);
        }
    }
}
