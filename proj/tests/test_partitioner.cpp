#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>
#include <random>

#include "skott/partitioner.hpp"

using skott::EpochObservation;
using skott::MediaObjectAccumulators;
using skott::PartitionerParams;
using skott::QualityVector;
using skott::WeightVector;

namespace {

MediaObjectAccumulators acc_with(std::vector<double> clicks, std::vector<double> budgets) {
    MediaObjectAccumulators acc = MediaObjectAccumulators::initial(static_cast<int>(clicks.size()), 1.0);
    acc.disc_clicks = std::move(clicks);
    acc.disc_budgets = std::move(budgets);
    return acc;
}

double l1_distance_to_uniform(const WeightVector& w) {
    const double u = 1.0 / w.size();
    double d = 0.0;
    for (int i = 0; i < w.size(); ++i) d += std::abs(w[i] - u);
    return d;
}

}  // namespace

TEST_CASE("quality rescales by the maximum") {
    const QualityVector q = skott::quality(acc_with({1.0, 2.0}, {1.0, 1.0}));
    CHECK(q.rescaled[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(q.rescaled[1] == doctest::Approx(1.0).epsilon(1e-12));

    const QualityVector symmetric = skott::quality(acc_with({3.0, 3.0, 3.0}, {2.0, 2.0, 2.0}));
    for (double v : symmetric.rescaled) CHECK(v == doctest::Approx(1.0));

    const QualityVector dead = skott::quality(acc_with({0.0, 0.0}, {1.0, 1.0}));
    CHECK(dead.rescaled[0] == 0.0);
    CHECK(dead.rescaled[1] == 0.0);

    // No accumulated budget on one media object: its quality is zero.
    const QualityVector partial = skott::quality(acc_with({1.0, 1.0}, {0.0, 2.0}));
    CHECK(partial.rescaled[0] == 0.0);
    CHECK(partial.rescaled[1] == 1.0);
}

TEST_CASE("regularization schedule") {
    CHECK(skott::regularization_lambda(1.0, 10, 0.95, 0) == doctest::Approx(10.0));
    CHECK(1.0 - 1.0 / 20.0 == doctest::Approx(0.95));  // 20-day exploration horizon
    CHECK(skott::regularization_lambda(2.0, 5, 1.0, 0) ==
          skott::regularization_lambda(2.0, 5, 1.0, 30));
    for (int day = 1; day < 10; ++day) {
        CHECK(skott::regularization_lambda(1.0, 10, 0.95, day) <
              skott::regularization_lambda(1.0, 10, 0.95, day - 1));
    }
}

TEST_CASE("loss gradient and clipping") {
    const WeightVector u = WeightVector::uniform(4);
    QualityVector ones{{1, 1, 1, 1}, {1, 1, 1, 1}};
    for (double g : skott::loss_gradient(ones, u, 3.0, 1.0)) {
        CHECK(g == doctest::Approx(-1.0));  // regularizer vanishes at u
    }

    QualityVector q{{0.5, 1.0}, {0.5, 1.0}};
    const auto pure = skott::loss_gradient(q, WeightVector::uniform(2), 0.0, 1.0);
    CHECK(pure[0] == doctest::Approx(-0.5));
    CHECK(pure[1] == doctest::Approx(-1.0));

    // A raw value of -50 is clipped to -10/alpha with alpha = 1.
    QualityVector zero{{0.0, 0.0}, {0.0, 0.0}};
    const auto clipped = skott::loss_gradient(zero, WeightVector({0.0, 1.0}), 100.0, 1.0);
    CHECK(clipped[0] == doctest::Approx(-10.0));
    CHECK(clipped[1] == doctest::Approx(10.0));
}

TEST_CASE("exponentiated update basics") {
    const WeightVector u = WeightVector::uniform(3);
    const WeightVector same = skott::exponentiated_update(u, {4.0, 4.0, 4.0}, 0.7);
    for (int i = 0; i < 3; ++i) CHECK(same[i] == doctest::Approx(u[i]).epsilon(1e-12));

    const WeightVector pushed = skott::exponentiated_update(u, {-1.0, 0.0, 0.0}, 0.5);
    CHECK(pushed[0] > 1.0 / 3.0);
    CHECK(pushed[1] == doctest::Approx(pushed[2]).epsilon(1e-12));
    CHECK(pushed[1] < 1.0 / 3.0);

    const WeightVector zeros = skott::exponentiated_update(WeightVector({0.0, 1.0}), {-5.0, 0.0}, 1.0);
    CHECK(zeros[0] == 0.0);
    CHECK(zeros[1] == 1.0);

    // Huge exponents survive thanks to the max shift.
    const WeightVector extreme = skott::exponentiated_update(u, {-1e8, 0.0, 0.0}, 1.0);
    CHECK(extreme[0] == doctest::Approx(1.0));
    CHECK(std::isfinite(extreme[1]));
}

TEST_CASE("simplex preservation and shift invariance over random inputs") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> grad_dist(-10.0, 10.0);
    std::uniform_real_distribution<double> alpha_dist(0.05, 2.0);
    std::uniform_real_distribution<double> raw_dist(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 8);
        std::vector<double> raw(static_cast<std::size_t>(k));
        for (double& v : raw) v = raw_dist(rng) + 1e-6;
        const WeightVector w = WeightVector::normalized(raw);
        std::vector<double> grad(static_cast<std::size_t>(k));
        for (double& g : grad) g = grad_dist(rng);
        const double alpha = alpha_dist(rng);

        const WeightVector next = skott::exponentiated_update(w, grad, alpha);
        double sum = 0.0;
        for (int i = 0; i < k; ++i) {
            CHECK(next[i] >= 0.0);
            sum += next[i];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

        std::vector<double> shifted = grad;
        for (double& g : shifted) g += 3.21;
        const WeightVector next_shifted = skott::exponentiated_update(w, shifted, alpha);
        for (int i = 0; i < k; ++i) {
            CHECK(next_shifted[i] == doctest::Approx(next[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("strong regularization pulls random starts toward uniform") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> raw_dist(0.01, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 5;
        std::vector<double> raw(k);
        for (double& v : raw) v = raw_dist(rng);
        WeightVector w = WeightVector::normalized(raw);
        QualityVector q{{}, {}};
        q.rescaled.resize(k);
        for (double& v : q.rescaled) v = raw_dist(rng);

        // With lambda large the fixed point sits within quality-spread /
        // lambda of uniform; the distance must fall monotonically until it
        // enters that neighborhood.
        const double fixed_point_ball = 0.01;
        double dist = l1_distance_to_uniform(w);
        for (int it = 0; it < 50; ++it) {
            const auto grad = skott::loss_gradient(q, w, 500.0, 0.002);
            w = skott::exponentiated_update(w, grad, 0.002);
            const double next_dist = l1_distance_to_uniform(w);
            if (dist > fixed_point_ball) CHECK(next_dist <= dist + 1e-9);
            dist = next_dist;
        }
        CHECK(dist < fixed_point_ball);
    }
}

TEST_CASE("partition step composes the pipeline") {
    PartitionerParams params;
    params.learning_rate = 0.5;
    params.exploration = 1.0;
    params.regularization_discount = 0.95;
    params.discount = 0.87;
    CHECK(params.clip_bound() == doctest::Approx(20.0));

    const int k = 4;
    const WeightVector u = WeightVector::uniform(k);
    MediaObjectAccumulators acc = MediaObjectAccumulators::initial(k, 1.0);

    // Identical observations keep the uniform split.
    EpochObservation same{{100, 100, 100, 100}, {2, 2, 2, 2}, {1, 1, 1, 1}};
    const auto sym = skott::partition_step(acc, same, {2, 2, 2, 2}, u, params, 0);
    for (int i = 0; i < k; ++i) CHECK(sym.weights[i] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sym.acc.disc_clicks[0] == doctest::Approx(2.0));

    // With the regularizer off (deep into exploitation), the best media
    // object strictly gains weight.
    PartitionerParams late = params;
    late.regularization_discount = 0.5;
    EpochObservation skewed{{100, 100, 100, 100}, {9, 2, 2, 2}, {1, 1, 1, 1}};
    const auto pushed = skott::partition_step(acc, skewed, {2, 2, 2, 2}, u, late, 60);
    CHECK(pushed.weights[0] > 0.25);
    for (int i = 1; i < k; ++i) CHECK(pushed.weights[i] < 0.25);
}

TEST_CASE("initial weight floor avoids absorbing zeros") {
    const WeightVector w = skott::floor_initial_weights({0.0, 1.0});
    CHECK(w[0] > 0.0);
    CHECK(w[0] <= 2e-12);
}
