#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "svarladder/statespace.hpp"
#include "svarladder/synth.hpp"

using namespace svl;

TEST_CASE("layout for 4 channels, one lag: 28 factors, 12 structural + 16 lagged") {
    const StateLayout layout = state_layout(4, 1);
    CHECK(layout.factor_count() == 28);
    int structural = 0, lagged = 0;
    for (const auto& id : layout.entries) (id.lag == 0 ? structural : lagged)++;
    CHECK(structural == 12);
    CHECK(lagged == 16);
}

TEST_CASE("single channel has exactly one factor, the SNL one") {
    const StateLayout layout = state_layout(1, 1);
    REQUIRE(layout.factor_count() == 1);
    CHECK(layout.entries[0] == FactorId{0, 0, 1});
    CHECK(layout.entries[0].kind() == FactorKind::SNL);
}

TEST_CASE("two-channel ordering is structural first, then lags, cause ascending") {
    const StateLayout layout = state_layout(2, 1);
    const std::vector<FactorId> expected = {
        {0, 1, 0}, {0, 0, 1}, {0, 1, 1}, {1, 0, 0}, {1, 0, 1}, {1, 1, 1},
    };
    CHECK(layout.entries == expected);
}

TEST_CASE("layout round-trips and matches the closed form for small G, D") {
    for (int g = 1; g <= 6; ++g) {
        for (int d = 1; d <= 3; ++d) {
            const StateLayout layout = state_layout(g, d);
            CHECK(layout.factor_count() == g * ((d + 1) * g - 1));
            for (int i = 0; i < layout.factor_count(); ++i)
                CHECK(layout.index_of(layout.entries[i]) == i);
            for (const auto& id : layout.entries)
                CHECK_FALSE((id.lag == 0 && id.effect == id.cause));
        }
    }
}

TEST_CASE("layout rejects invalid dimensions") {
    CHECK_THROWS_AS(state_layout(0, 1), InvalidDimension);
    CHECK_THROWS_AS(state_layout(2, 0), InvalidDimension);
}

TEST_CASE("transition blocks: integrated random walk") {
    Hyperparameters hyper;
    hyper.alpha = hyper.beta = hyper.gamma = 1.0;
    hyper.delta = 0.0;
    hyper.epsilon = 1.0;
    hyper.process_noise_variance = 0.01;
    const TransitionModel tm = build_transition(hyper, state_layout(1, 1));

    Eigen::MatrixXd a(2, 2), q(2, 2);
    a << 1, 1, 0, 1;
    q << 0, 0, 0, 0.01;
    CHECK(tm.A == a);
    CHECK(tm.Q == q);
}

TEST_CASE("zero noise gains give a zero process covariance") {
    Hyperparameters hyper;
    hyper.delta = 0.0;
    hyper.epsilon = 0.0;
    const TransitionModel tm = build_transition(hyper, state_layout(2, 1));
    CHECK(tm.Q.isZero(0.0));
}

TEST_CASE("transition is block diagonal with identical copies") {
    Hyperparameters hyper;
    hyper.alpha = 0.9;
    hyper.beta = 0.3;
    hyper.gamma = 0.8;
    const StateLayout layout = state_layout(1, 3);  // F = 3
    const TransitionModel tm = build_transition(hyper, layout);
    REQUIRE(tm.A.rows() == 6);
    Eigen::Matrix2d a0;
    a0 << 0.9, 0.3, 0.0, 0.8;
    for (int i = 0; i < 3; ++i) CHECK(tm.A.block<2, 2>(2 * i, 2 * i) == a0);
    Eigen::MatrixXd off = tm.A;
    for (int i = 0; i < 3; ++i) off.block<2, 2>(2 * i, 2 * i).setZero();
    CHECK(off.isZero(0.0));
}

TEST_CASE("observation matrix entries for a two-channel window") {
    const StateLayout layout = state_layout(2, 1);
    Eigen::MatrixXd window(2, 2);
    window << 2, 3,   // y[n]
              5, 7;   // y[n-1]
    const Eigen::MatrixXd h = build_observation(window, layout);

    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 12);
    expected(0, 0) = 3;   // effect 0, structural cause 1: y1[n]
    expected(0, 2) = 5;   // effect 0, lag-1 cause 0
    expected(0, 4) = 7;   // effect 0, lag-1 cause 1
    expected(1, 6) = 2;   // effect 1, structural cause 0: y0[n]
    expected(1, 8) = 5;   // effect 1, lag-1 cause 0
    expected(1, 10) = 7;  // effect 1, lag-1 cause 1
    CHECK(h == expected);
}

TEST_CASE("observation matrix for one channel") {
    const StateLayout layout = state_layout(1, 1);
    Eigen::MatrixXd window(2, 1);
    window << 9, 4;
    const Eigen::MatrixXd h = build_observation(window, layout);
    REQUIRE(h.rows() == 1);
    REQUIRE(h.cols() == 2);
    CHECK(h(0, 0) == 4);
    CHECK(h(0, 1) == 0);
}

TEST_CASE("all-zero window gives a zero observation matrix") {
    const StateLayout layout = state_layout(3, 2);
    CHECK(build_observation(Eigen::MatrixXd::Zero(3, 3), layout).isZero(0.0));
}

TEST_CASE("short window is rejected") {
    const StateLayout layout = state_layout(2, 2);
    CHECK_THROWS_AS(build_observation(Eigen::MatrixXd::Zero(2, 2), layout), IncompleteWindow);
}

TEST_CASE("slope columns of every built observation matrix are zero") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int g = 1 + trial % 4;
        const int d = 1 + trial % 3;
        const StateLayout layout = state_layout(g, d);
        Eigen::MatrixXd window(d + 1, g);
        for (long i = 0; i < window.size(); ++i) window(i) = dist(rng);
        const Eigen::MatrixXd h = build_observation(window, layout);
        for (int f = 0; f < layout.factor_count(); ++f)
            CHECK(h.col(2 * f + 1).isZero(0.0));
    }
}

TEST_CASE("H[n] times the true state reproduces noise-free model data") {
    // Noise-free generation with a nonzero presample: every sample past the
    // warm-up must satisfy y[n] = H[n] s_true exactly, with arbitrary slopes.
    CausalFactors truth;
    truth.channel_names = {"a", "b", "c"};
    truth.structural = Eigen::MatrixXd::Zero(3, 3);
    truth.structural(1, 0) = 0.4;
    truth.structural(2, 1) = -0.3;
    Eigen::MatrixXd lag1 = Eigen::MatrixXd::Zero(3, 3);
    lag1.diagonal() << 0.5, 0.4, 0.3;
    lag1(0, 2) = 0.2;
    truth.lagged = {lag1};

    SynthSpec spec;
    spec.factors = truth;
    spec.noise_scale = Eigen::VectorXd::Zero(3);
    spec.length = 40;
    spec.burn_in = 0;
    Eigen::MatrixXd init(1, 3);
    init << 1.0, -2.0, 0.5;
    spec.initial_values = init;
    const MultiChannelSeries series = simulate(spec);

    const StateLayout layout = state_layout(3, 1);
    Eigen::VectorXd s_true = Eigen::VectorXd::Zero(2 * layout.factor_count());
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < layout.factor_count(); ++i) {
        const FactorId& id = layout.entries[i];
        s_true(2 * i) = id.lag == 0 ? truth.structural(id.effect, id.cause)
                                    : truth.lagged[id.lag - 1](id.effect, id.cause);
        s_true(2 * i + 1) = dist(rng);  // slopes are never observed
    }

    for (long n = 1; n < series.samples(); ++n) {
        Eigen::MatrixXd window(2, 3);
        window.row(0) = series.data.row(n);
        window.row(1) = series.data.row(n - 1);
        const Eigen::MatrixXd h = build_observation(window, layout);
        const Eigen::VectorXd reproduced = h * s_true;
        CHECK((series.data.row(n).transpose() - reproduced).cwiseAbs().maxCoeff() <= 1e-12);
    }
}
