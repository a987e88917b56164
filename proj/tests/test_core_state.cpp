#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdlib>
#include <random>

#include "skott/campaign.hpp"

using skott::CampaignConfig;
using skott::EpochObservation;
using skott::MediaObjectAccumulators;
using skott::WeightVector;

TEST_CASE("weight vector invariants") {
    const WeightVector u = WeightVector::uniform(4);
    CHECK(u[0] == doctest::Approx(0.25));
    CHECK_THROWS_AS(WeightVector({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({-0.1, 1.1}), std::invalid_argument);
    const WeightVector n = WeightVector::normalized({2.0, 6.0});
    CHECK(n[0] == doctest::Approx(0.25));
    CHECK(n[1] == doctest::Approx(0.75));
    CHECK_THROWS_AS(WeightVector::normalized({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("observation validation") {
    EpochObservation obs{{10, 5}, {2, 1}, {0.5, 0.2}};
    CHECK_NOTHROW(obs.validate());
    EpochObservation bad{{1}, {2}, {0.1}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("discounted accumulators follow the recursion") {
    MediaObjectAccumulators acc = MediaObjectAccumulators::initial(1, 1.0);
    acc.disc_clicks = {9.0};
    acc.disc_budgets = {3.0};
    const EpochObservation obs{{100}, {2}, {1.0}};

    const auto no_memory = skott::update_discounted(acc, obs, {4.0}, 0.0);
    CHECK(no_memory.disc_clicks[0] == 2.0);
    CHECK(no_memory.disc_budgets[0] == 4.0);

    const auto full_memory = skott::update_discounted(acc, obs, {4.0}, 1.0);
    CHECK(full_memory.disc_clicks[0] == 11.0);
    CHECK(full_memory.disc_budgets[0] == 7.0);

    CHECK_THROWS_AS(skott::update_discounted(acc, obs, {-1.0}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(skott::update_discounted(acc, obs, {4.0}, 1.5), std::invalid_argument);
}

TEST_CASE("a one-week memory horizon gives gamma near 0.87") {
    CHECK(std::exp(-1.0 / 7.0) == doctest::Approx(0.87).epsilon(0.005));
}

TEST_CASE("discounted clicks stay below the raw cumulative sum") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> gamma_dist(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double gamma = gamma_dist(rng);
        MediaObjectAccumulators acc = MediaObjectAccumulators::initial(1, 1.0);
        double raw_sum = 0.0;
        for (int t = 0; t < 40; ++t) {
            const double clicks = static_cast<double>(rng() % 50);
            raw_sum += clicks;
            acc = skott::update_discounted(acc, EpochObservation{{clicks}, {clicks}, {0.0}},
                                           {1.0}, gamma);
            CHECK(acc.disc_clicks[0] >= 0.0);
            CHECK(acc.disc_clicks[0] <= raw_sum + 1e-9);
        }
    }
}

TEST_CASE("campaign config parses JSON and rejects unknown keys") {
    const auto cfg = skott::campaign_config_from_json_text(
        R"({"total_budget": 500.0, "epochs": 30, "media_objects": 10, "aggressiveness": 5.0})");
    CHECK(cfg.total_budget == 500.0);
    CHECK(cfg.aggressiveness == 5.0);
    CHECK_NOTHROW(cfg.validate());
    CHECK_THROWS_AS(skott::campaign_config_from_json_text(R"({"budgt": 1})"),
                    std::invalid_argument);

    CampaignConfig bad = cfg;
    bad.aggressiveness = 100.0;  // above the epoch count
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.bid_upper = bad.bid_lower;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("environment overrides any config key") {
    CampaignConfig cfg;
    ::setenv("SKOTT_total_budget", "777.5", 1);
    ::setenv("SKOTT_day_parting", "false", 1);
    skott::apply_env_overrides(cfg);
    ::unsetenv("SKOTT_total_budget");
    ::unsetenv("SKOTT_day_parting");
    CHECK(cfg.total_budget == 777.5);
    CHECK(cfg.day_parting == false);
}

TEST_CASE("observation CSV import handles missing cells and rows") {
    const std::string csv =
        "epoch,media_object_id,impressions,clicks,spend\n"
        "0,0,100,1,0.5\n"
        "0,1,200,2,0.8\n"
        "1,0,,0,NaN\n"
        "1,1,210,1,0.9\n"
        "2,0,120,2,0.6\n";  // epoch 2 for mo 1 entirely absent
    const auto series = skott::observation_series_from_csv_text(csv);
    CHECK(series.media_objects == 2);
    CHECK(series.epochs == 3);
    CHECK(skott::is_missing(series.impressions[0][1]));
    CHECK(skott::is_missing(series.spend[0][1]));
    CHECK(series.clicks[0][1] == 0.0);
    CHECK(skott::is_missing(series.impressions[1][2]));

    CHECK_THROWS_AS(skott::to_epoch_observations(series), std::invalid_argument);

    const auto filled = skott::preprocess(series);
    const auto epochs = skott::to_epoch_observations(filled);
    REQUIRE(epochs.size() == 3);
    CHECK(epochs[1].impressions[0] == doctest::Approx(110.0));  // interpolated
    for (const auto& obs : epochs) CHECK_NOTHROW(obs.validate());
}
