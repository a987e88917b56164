#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "skott/bid_landscape.hpp"
#include "skott/market.hpp"

using skott::EpochObservation;
using skott::MarketSimulator;
using skott::MarketTruth;
using skott::SimulatorConfig;
using skott::TruthField;
using skott::TruthModifier;

namespace {

MarketTruth flat_truth(int k, double ctr, double itot, double beta) {
    MarketTruth t;
    t.ctr.assign(static_cast<std::size_t>(k), ctr);
    t.itot.assign(static_cast<std::size_t>(k), itot);
    t.beta.assign(static_cast<std::size_t>(k), beta);
    return t;
}

}  // namespace

TEST_CASE("truth generation is deterministic and respects intervals") {
    SimulatorConfig cfg;
    cfg.ctr_interval = {0.003, 0.003};  // degenerate
    const MarketTruth a = skott::generate_truth(cfg, 5, 42);
    const MarketTruth b = skott::generate_truth(cfg, 5, 42);
    CHECK(a.hash() == b.hash());
    for (double c : a.ctr) CHECK(c == 0.003);

    SimulatorConfig wide;
    const MarketTruth big = skott::generate_truth(wide, 10000, 7);
    for (double c : big.ctr) {
        CHECK(c >= 0.0005);
        CHECK(c <= 0.002);
    }
    for (double i : big.itot) {
        CHECK(i >= 1e4);
        CHECK(i <= 1e6);
    }
    for (double be : big.beta) {
        CHECK(be >= 0.5);
        CHECK(be <= 2.0);
    }

    SimulatorConfig bad;
    bad.beta_interval = {2.0, 1.0};
    CHECK_THROWS_AS(skott::generate_truth(bad, 3, 1), std::invalid_argument);
}

TEST_CASE("epoch simulation follows the purchase model") {
    std::mt19937_64 rng(1);
    const MarketTruth t = flat_truth(1, 0.0, 1e12, 1.0);

    const double cpm = skott::expected_cpm(1.0, 1.0);
    EpochObservation obs = skott::simulate_epoch(t, {1.0}, {1.0}, rng);
    CHECK(obs.impressions[0] == std::floor(1000.0 / cpm));
    CHECK(obs.spend[0] == doctest::Approx(obs.impressions[0] * cpm / 1000.0));
    CHECK(obs.spend[0] <= 1.0);
    CHECK(obs.clicks[0] == 0.0);  // ctr 0 never clicks

    obs = skott::simulate_epoch(t, {0.0}, {1.0}, rng);
    CHECK(obs.impressions[0] == 0.0);
    obs = skott::simulate_epoch(t, {1.0}, {0.0}, rng);
    CHECK(obs.impressions[0] == 0.0);
    CHECK(obs.spend[0] == 0.0);
}

TEST_CASE("budget and click caps hold over random markets") {
    std::mt19937_64 rng(99);
    std::mt19937_64 market_rng(5);
    std::uniform_real_distribution<double> budget_dist(0.0, 10.0);
    std::uniform_real_distribution<double> bid_dist(0.0, 5.0);
    SimulatorConfig cfg;
    for (int trial = 0; trial < 200; ++trial) {
        const MarketTruth t = skott::generate_truth(cfg, 5, trial);
        std::vector<double> budgets(5), bids(5);
        for (auto& b : budgets) b = budget_dist(rng);
        for (auto& b : bids) b = bid_dist(rng);
        const EpochObservation obs = skott::simulate_epoch(t, budgets, bids, market_rng);
        for (int i = 0; i < 5; ++i) {
            CHECK(obs.spend[i] <= budgets[i] + 1e-12);
            CHECK(obs.clicks[i] <= obs.impressions[i]);
        }
    }
}

TEST_CASE("click rate concentrates on the true CTR") {
    std::mt19937_64 rng(17);
    const double ctr = 0.0015;
    const MarketTruth t = flat_truth(1, ctr, 1e12, 1.0);
    double clicks = 0.0;
    double impressions = 0.0;
    for (int e = 0; e < 100; ++e) {
        const EpochObservation obs = skott::simulate_epoch(t, {1000.0}, {1.0}, rng);
        clicks += obs.clicks[0];
        impressions += obs.impressions[0];
    }
    REQUIRE(impressions > 1e5);
    const double sigma = std::sqrt(ctr * (1.0 - ctr) / impressions);
    CHECK(std::abs(clicks / impressions - ctr) < 3.0 * sigma);
}

TEST_CASE("bought impressions grow with the bid while inventory-bound") {
    std::mt19937_64 rng(2);
    const MarketTruth t = flat_truth(1, 0.001, 5e4, 1.0);
    double prev = -1.0;
    for (double bid = 0.1; bid < 6.0; bid += 0.25) {
        const EpochObservation obs = skott::simulate_epoch(t, {1e9}, {bid}, rng);
        CHECK(obs.impressions[0] >= prev);
        prev = obs.impressions[0];
    }
}

TEST_CASE("scheduled modifiers apply per epoch") {
    MarketTruth t = flat_truth(3, 0.001, 1e5, 1.0);
    CHECK(skott::evolve_truth(t, 4).hash() == t.hash());  // empty schedule

    t.schedule.push_back({5, 2, TruthField::itot, 0.0});
    const MarketTruth at5 = skott::evolve_truth(t, 5);
    CHECK(at5.itot[2] == 0.0);
    CHECK(at5.itot[1] == 1e5);
    const MarketTruth at6 = skott::evolve_truth(t, 6);
    CHECK(at6.itot[2] == 1e5);  // modifier does not persist

    std::mt19937_64 rng(3);
    const EpochObservation blocked = skott::simulate_epoch(at5, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, rng);
    CHECK(blocked.impressions[2] == 0.0);

    // CTR pushed above 1 is clamped.
    t.schedule.push_back({7, 0, TruthField::ctr, 5000.0});
    const MarketTruth at7 = skott::evolve_truth(t, 7);
    CHECK(at7.ctr[0] == 1.0);
}

TEST_CASE("night-time inventory drop reduces bought volume") {
    MarketTruth t = flat_truth(1, 0.001, 1e5, 1.0);
    for (int h = 0; h < 24; ++h) {
        const double night = (h < 6 || h >= 22) ? 0.1 : 1.0;
        t.schedule.push_back({h, 0, TruthField::itot, night});
    }
    std::mt19937_64 rng(4);
    double night_sum = 0.0;
    double day_sum = 0.0;
    for (int h = 0; h < 24; ++h) {
        const EpochObservation obs =
            skott::simulate_epoch(skott::evolve_truth(t, h), {1e9}, {1.0}, rng);
        if (h < 6 || h >= 22) night_sum += obs.impressions[0];
        else day_sum += obs.impressions[0];
    }
    CHECK(night_sum < day_sum);
}

TEST_CASE("truth JSON round trip") {
    SimulatorConfig cfg;
    MarketTruth t = skott::generate_truth(cfg, 4, 11);
    t.schedule.push_back({3, 1, TruthField::beta, 1.5});
    const MarketTruth back = skott::truth_from_json_text(skott::truth_to_json_text(t));
    CHECK(back.hash() == t.hash());

    CHECK_THROWS_AS(skott::truth_from_json_text("{"), std::invalid_argument);
}

TEST_CASE("simulator instances are reproducible") {
    SimulatorConfig cfg;
    const MarketTruth t = skott::generate_truth(cfg, 3, 21);
    MarketSimulator a(t, 77);
    MarketSimulator b(t, 77);
    for (int e = 0; e < 10; ++e) {
        const std::vector<double> budgets{1.0, 2.0, 3.0};
        const std::vector<double> bids{1.0, 1.5, 0.5};
        const EpochObservation oa = a.epoch(e, budgets, bids);
        const EpochObservation ob = b.epoch(e, budgets, bids);
        CHECK(oa.impressions == ob.impressions);
        CHECK(oa.clicks == ob.clicks);
        CHECK(oa.spend == ob.spend);
    }
}
