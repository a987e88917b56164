#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "skott/bid_landscape.hpp"
#include "skott/bid_setter.hpp"

using skott::BidGradientInput;
using skott::CampaignConfig;
using skott::EpochObservation;
using skott::MediaObjectAccumulators;
using skott::NadamHyper;

namespace {

BidGradientInput base_input() {
    BidGradientInput in;
    in.impressions = 10000;
    in.budget = 5.0;
    in.spend = 5.0;
    in.clicks = 10;
    in.bid = 1.0;
    in.beta = 1.0;
    in.tau = 0.95;
    in.alpha = 0.5;
    in.budget_min = 0.01;
    return in;
}

}  // namespace

TEST_CASE("bid gradient branch structure") {
    BidGradientInput in = base_input();

    in.budget = 0.001;  // below budget_min
    CHECK(skott::bid_loss_gradient(in) == 0.0);

    in = base_input();
    in.spend = 0.0;
    CHECK(skott::bid_loss_gradient(in) == doctest::Approx(-2.0));  // -1/alpha

    // Fully delivered (S/B = 1 >= tau): only the CPM term remains and the
    // gradient pushes the bid down.
    in = base_input();
    CHECK(skott::bid_loss_gradient(in) == doctest::Approx(6.1370563888010938).epsilon(1e-12));
}

TEST_CASE("theta gate adds exactly the spend term") {
    BidGradientInput delivered = base_input();  // S/B = 1
    BidGradientInput starved = base_input();
    starved.budget = 50.0;  // S/B = 0.1 < tau

    const double diff = skott::bid_loss_gradient(starved) - skott::bid_loss_gradient(delivered);
    const double spend_term = -delivered.clicks / delivered.spend *
                              (delivered.impressions / 1000.0) * delivered.beta /
                              (delivered.bid + delivered.beta);
    CHECK(diff == doctest::Approx(spend_term).epsilon(1e-12));

    // Exactly at the threshold counts as delivered.
    BidGradientInput boundary = base_input();
    boundary.spend = 0.95 * boundary.budget;
    BidGradientInput above = base_input();
    above.spend = 0.951 * above.budget;
    const double cpm_only_boundary = skott::bid_loss_gradient(boundary);
    const double cpm_only_above = skott::bid_loss_gradient(above);
    CHECK(cpm_only_boundary > 0.0);
    CHECK(cpm_only_above > 0.0);
}

TEST_CASE("nadam single step matches the hand trace") {
    MediaObjectAccumulators acc = MediaObjectAccumulators::initial(1, 1.0);
    NadamHyper hyper;
    hyper.step_size = 0.1;
    hyper.mu = 0.9;
    hyper.nu = 0.999;
    hyper.epsilon = 1e-8;

    const auto result = skott::nadam_step(acc, {1.0}, hyper);
    CHECK(result.bids[0] - acc.bids[0] == doctest::Approx(-0.1).epsilon(1e-8));
    CHECK(result.acc.nadam_step == 1);
    CHECK(result.acc.nadam_mu_product == doctest::Approx(0.9));
    CHECK(result.acc.nadam_m[0] == doctest::Approx(0.1));
    CHECK(result.acc.nadam_n[0] == doctest::Approx(0.001));
}

TEST_CASE("nadam fixed points and descent direction") {
    NadamHyper hyper;
    MediaObjectAccumulators acc = MediaObjectAccumulators::initial(2, 1.0);

    const auto still = skott::nadam_step(acc, {0.0, 0.0}, hyper);
    CHECK(still.bids[0] == 1.0);
    CHECK(still.bids[1] == 1.0);

    // A constant positive gradient walks the bid down monotonically.
    double prev = 1.0;
    MediaObjectAccumulators state = MediaObjectAccumulators::initial(1, 1.0);
    for (int i = 0; i < 20; ++i) {
        const auto step = skott::nadam_step(state, {0.5}, hyper);
        state = step.acc;
        CHECK(step.bids[0] < prev);
        prev = step.bids[0];
    }
}

TEST_CASE("clamp keeps bids in the client interval") {
    const auto clamped = skott::clamp_bids({0.5, -0.5, 7.0}, 0.0, 2.0);
    CHECK(clamped[0] == 0.5);
    CHECK(clamped[1] == 0.0);
    CHECK(clamped[2] == 2.0);
    CHECK_THROWS_AS(skott::clamp_bids({1.0}, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("bid step pipeline") {
    CampaignConfig cfg;
    cfg.media_objects = 2;
    cfg.bid_lower = 0.05;
    cfg.bid_upper = 4.0;
    cfg.initial_bid = 2.0;
    cfg.budget_min = 0.01;
    NadamHyper hyper = NadamHyper::from(cfg);

    MediaObjectAccumulators acc = MediaObjectAccumulators::initial(2, cfg.initial_bid);
    std::vector<double> betas{cfg.initial_bid, cfg.initial_bid};

    SUBCASE("no budget anywhere leaves bids untouched") {
        EpochObservation obs{{0, 0}, {0, 0}, {0, 0}};
        const auto out = skott::bid_step(acc, obs, {0.0, 0.0}, betas, cfg, hyper);
        CHECK(out.acc.bids[0] == cfg.initial_bid);
        CHECK(out.acc.bids[1] == cfg.initial_bid);
        CHECK(out.betas[0] == cfg.initial_bid);  // no impressions, estimate kept
    }

    SUBCASE("spend without impressions is rejected") {
        EpochObservation obs{{0, 10}, {0, 0}, {1.0, 0.1}};
        CHECK_THROWS_AS(skott::bid_step(acc, obs, {1.0, 1.0}, betas, cfg, hyper),
                        std::invalid_argument);
    }

    SUBCASE("observed CPM recovers the landscape parameter") {
        const double true_beta = 0.7;
        const double cpm = skott::expected_cpm(cfg.initial_bid, true_beta);
        const double n = 5000.0;
        EpochObservation obs{{n, n}, {5, 5}, {n * cpm / 1000.0, n * cpm / 1000.0}};
        const auto out = skott::bid_step(acc, obs, {10.0, 10.0}, betas, cfg, hyper);
        CHECK(out.betas[0] == doctest::Approx(true_beta).epsilon(1e-6));
    }

    SUBCASE("a chronic underbidder climbs to the upper bound") {
        EpochObservation nothing{{0, 0}, {0, 0}, {0, 0}};
        MediaObjectAccumulators state = acc;
        std::vector<double> b = betas;
        for (int t = 0; t < 300; ++t) {
            auto out = skott::bid_step(state, nothing, {5.0, 5.0}, b, cfg, hyper);
            state = std::move(out.acc);
            b = std::move(out.betas);
            CHECK(state.bids[0] >= cfg.bid_lower);
            CHECK(state.bids[0] <= cfg.bid_upper);
        }
        CHECK(state.bids[0] == doctest::Approx(cfg.bid_upper));
    }
}
