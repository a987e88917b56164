#pragma once

#include <vector>

#include "skott/campaign.hpp"

namespace skott {

// Nadam hyperparameters. The momentum schedule is constant (mu_t = mu for
// every t); the running mu-product is still tracked per step so a decaying
// schedule could be dropped in.
struct NadamHyper {
    double step_size = 0.1;  // alpha_t; the harness defaults to 0.05*(ub-lb)
    double mu = 0.9;
    double nu = 0.999;
    double epsilon = 1e-8;

    void validate() const;
    static NadamHyper from(const CampaignConfig& cfg);
};

struct BidGradientInput {
    double impressions = 0.0;  // N
    double budget = 0.0;       // B, allocated
    double spend = 0.0;        // S
    double clicks = 0.0;       // C
    double bid = 0.0;          // b
    double beta = 0.0;
    double tau = 0.95;         // under-delivery threshold
    double alpha = 0.1;        // bid learning rate, sets the no-spend kick
    double budget_min = 0.0;   // B_min
};

// Gradient of the click loss with respect to the base bid:
//   B < B_min           -> 0                    (nothing to optimize)
//   S = 0               -> -1/alpha             (underbidding, push up)
//   otherwise           -> -C * N/(1000 S) *
//        { beta/(b+beta) * theta(tau - S/B) - (beta/b)[1 - (beta/b) ln(1+b/beta)] }
// theta(0) counts as delivered (theta := 0 at the boundary).
double bid_loss_gradient(const BidGradientInput& in);

struct NadamResult {
    MediaObjectAccumulators acc;
    std::vector<double> bids;
};

// One Nadam iteration over all media objects; updates moments, the step
// counter and the mu-product, and returns the moved bids (unclamped).
NadamResult nadam_step(const MediaObjectAccumulators& acc, const std::vector<double>& grad,
                       const NadamHyper& hyper);

std::vector<double> clamp_bids(std::vector<double> bids, double lower, double upper);

struct BidStepResult {
    MediaObjectAccumulators acc;
    std::vector<double> betas;  // per-media-object landscape estimates
};

// Full bid-setting epoch: estimate beta from the observed CPM (1000*S/N,
// falling back to the previous estimate when no impressions were bought),
// evaluate the loss gradient, apply Nadam, clamp to [bid_lower, bid_upper].
BidStepResult bid_step(const MediaObjectAccumulators& acc, const EpochObservation& obs,
                       const std::vector<double>& budgets, std::vector<double> betas,
                       const CampaignConfig& cfg, const NadamHyper& hyper);

}  // namespace skott
