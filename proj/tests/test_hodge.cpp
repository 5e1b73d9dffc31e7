#include "hodgecover/errors.hpp"
#include "hodgecover/hodge.hpp"
#include "hodgecover/verify.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace hodgecover;

namespace {

Eigen::VectorXd gaussian(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> d;
    Eigen::VectorXd v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

}  // namespace

TEST_CASE("pure gradient signal has no curl or harmonic part") {
    std::mt19937_64 rng(11);
    const auto k = random_complex(rng, 10, 0.6, 0.5);
    const auto inc = build_incidence(k);
    const Eigen::VectorXd phi = gaussian(rng, k.n);
    const EdgeSignal b{oracle::boundary1(k).cast<double>().transpose() * phi};
    const auto d = decompose(k, inc, b);
    CHECK(d.harm.values.norm() < 1e-8);
    CHECK(d.curl.values.norm() < 1e-8);
    CHECK(harmonic_fraction(b, d) < 1e-12);
    CHECK(residual_certificate(k, inc, b, d).residual_lsq < 1e-12);
}

TEST_CASE("pure curl signal has no gradient or harmonic part") {
    std::mt19937_64 rng(12);
    const auto k = random_complex(rng, 9, 0.8, 0.5);
    const auto inc = build_incidence(k);
    const Eigen::VectorXd psi = gaussian(rng, static_cast<Eigen::Index>(k.triangles.size()));
    const EdgeSignal b{oracle::boundary2(k).cast<double>() * psi};
    const auto d = decompose(k, inc, b);
    CHECK(d.grad.values.norm() < 1e-8);
    CHECK(d.harm.values.norm() < 1e-8);
}

TEST_CASE("cycle on a hollow triangle is fully harmonic") {
    const auto k = Complex2::complete_graph(3);
    const EdgeSignal b{Eigen::Vector3d(1.0, -1.0, 1.0)};
    // d1 b = 0 by hand: vertex 0 gets -1 + 1, vertex 1 gets 1 - 1, vertex 2 gets -1 + 1.
    CHECK((oracle::boundary1(k).cast<double>() * b.values).norm() == 0.0);
    const auto inc = build_incidence(k);
    const auto d = decompose(k, inc, b);
    CHECK((d.harm.values - b.values).norm() < 1e-12);
    CHECK(harmonic_fraction(b, d) == doctest::Approx(1.0).epsilon(1e-12));
    const auto r = residual_certificate(k, inc, b, d);
    CHECK(r.residual_lsq == doctest::Approx(b.values.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("orthogonality, reconstruction and closure on random pairs") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
        const auto k = random_complex(rng, 3 + t % 17, 0.6, 0.4);
        const auto inc = build_incidence(k);
        const EdgeSignal b{gaussian(rng, static_cast<Eigen::Index>(k.edges.size()))};
        const auto d = decompose(k, inc, b);
        const double e = b.values.squaredNorm();
        CHECK(std::abs(d.grad.values.dot(d.curl.values)) < 1e-8 * e);
        CHECK(std::abs(d.grad.values.dot(d.harm.values)) < 1e-8 * e);
        CHECK(std::abs(d.curl.values.dot(d.harm.values)) < 1e-8 * e);
        CHECK((d.grad.values + d.curl.values + d.harm.values - b.values).norm() < 1e-8 * std::sqrt(e));
        CHECK(d.energy_grad + d.energy_curl + d.energy_harm == doctest::Approx(1.0).epsilon(1e-8));
        CHECK((oracle::boundary1(k).cast<double>() * d.harm.values).norm() < 1e-8);
        CHECK((oracle::boundary2(k).cast<double>().transpose() * d.harm.values).norm() < 1e-8);
    }
}

TEST_CASE("harmonic energy equals the stacked least-squares residual") {
    std::mt19937_64 rng(14);
    for (int t = 0; t < 50; ++t) {
        const auto k = random_complex(rng, 4 + t % 10, 0.6, 0.3);
        const auto inc = build_incidence(k);
        const EdgeSignal b{gaussian(rng, static_cast<Eigen::Index>(k.edges.size()))};
        const auto d = decompose(k, inc, b);
        const double expected = oracle::stacked_residual(k, b.values);
        const double h = d.harm.values.squaredNorm();
        CHECK(std::abs(h - expected) <= 1e-7 * std::max({h, expected, 1e-12 * b.values.squaredNorm()}));
        const auto r = residual_certificate(k, inc, b, d);
        CHECK(std::abs(r.residual_lsq - expected) <= 1e-7 * std::max({expected, 1e-12 * b.values.squaredNorm()}));
        CHECK(r.harm_energy == doctest::Approx(h));
    }
}

TEST_CASE("decomposing the harmonic part is idempotent") {
    std::mt19937_64 rng(15);
    const auto k = random_complex(rng, 12, 0.5, 0.4);
    const auto inc = build_incidence(k);
    const auto d = decompose(k, inc, EdgeSignal{gaussian(rng, static_cast<Eigen::Index>(k.edges.size()))});
    const auto again = decompose(k, inc, d.harm);
    CHECK(again.grad.values.norm() < 1e-8);
    CHECK(again.curl.values.norm() < 1e-8);
}

TEST_CASE("edge exposure: inner product with harm sees only the harmonic part of w") {
    std::mt19937_64 rng(16);
    const auto k = random_complex(rng, 11, 0.6, 0.3);
    const auto inc = build_incidence(k);
    const auto ne = static_cast<Eigen::Index>(k.edges.size());
    const auto d = decompose(k, inc, EdgeSignal{gaussian(rng, ne)});
    for (int t = 0; t < 20; ++t) {
        const EdgeSignal w{gaussian(rng, ne)};
        const auto dw = decompose(k, inc, w);
        CHECK(w.values.dot(d.harm.values) == doctest::Approx(dw.harm.values.dot(d.harm.values)).epsilon(1e-8));
    }
}

TEST_CASE("complete 2-skeleton leaves nothing harmonic") {
    std::mt19937_64 rng(17);
    const auto k = Complex2::complete_2_skeleton(6);
    const auto d = decompose(k, build_incidence(k), EdgeSignal{gaussian(rng, 15)});
    CHECK(d.harm.values.norm() < 1e-8);
}

TEST_CASE("zero signal and shape errors") {
    const auto k = Complex2::complete_graph(4);
    const auto inc = build_incidence(k);
    const EdgeSignal zero{Eigen::VectorXd::Zero(6)};
    const auto d = decompose(k, inc, zero);
    CHECK(d.energy_grad == 0.0);
    CHECK(d.energy_harm == 0.0);
    CHECK_THROWS_AS(harmonic_fraction(zero, d), UndefinedError);
    CHECK_THROWS_AS(decompose(k, inc, EdgeSignal{Eigen::VectorXd::Zero(5)}), ShapeError);
}
