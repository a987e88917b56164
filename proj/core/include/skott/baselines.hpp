#pragma once

#include <random>
#include <vector>

#include "skott/campaign.hpp"

namespace skott {

// exp3 adversarial bandit adapted to budget repartition. Arms are media
// objects; one arm is drawn per epoch and updated with an importance-weighted
// reward in [0,1); budgets map from the mixed probabilities
//   p_i = (1-gamma) w_i / sum(w) + gamma/K.
class Exp3Partitioner {
public:
    struct Params {
        double gamma = 0.1;      // exploration mixing, in (0,1]
        double cpc_goal = 0.4;
        double smoothing = 0.87;  // clicks running-average factor
    };

    Exp3Partitioner(int k, Params params);
    // Resume from explicit arm weights (all > 0).
    Exp3Partitioner(std::vector<double> weights, Params params);

    std::vector<double> probabilities() const;

    // R = x/(1+x) with x = (C/C_goal) * (CPC_goal/CPC); zero clicks give 0.
    static double reward(double clicks, double cpc, double clicks_goal, double cpc_goal);

    // Importance-weighted update of the drawn arm: w_i *= exp(gamma*(R/p_i)/K).
    void apply_reward(int arm, double reward01);

    // Full epoch: draw an arm, update it with the reward realized in `obs`
    // (the clicks goal is the max of the running click average and the arm's
    // previous allotment over the goal CPC), return epoch_budget * p.
    std::vector<double> budget_step(const EpochObservation& obs, double epoch_budget,
                                    std::mt19937_64& rng);

private:
    Params params_;
    std::vector<double> weights_;
    std::vector<double> clicks_avg_;
    std::vector<double> prev_budgets_;
    bool seen_obs_ = false;
};

// Greedy analytic solution of the click-maximizing linear program: every
// media object gets its lower bound alpha_l * S_prev, then the surplus fills
// media objects in order of estimated CPC (cheapest clicks first) up to
// alpha_u * S_prev. CPC estimates use discounted spend/clicks.
class LopPartitioner {
public:
    struct Params {
        double alpha_lower = 0.5;  // < 1
        double alpha_upper = 2.0;  // > 1
        double discount = 0.87;
    };

    LopPartitioner(int k, Params params);

    std::vector<double> step(const EpochObservation& obs, double epoch_budget);

private:
    Params params_;
    std::vector<double> disc_spend_;
    std::vector<double> disc_clicks_;
    std::vector<double> prev_spend_;
    bool seen_obs_ = false;
};

// Rule-based bid setter: raise the bid slightly while under-delivering,
// otherwise cut it whenever the CPC runs above goal (zero clicks count as
// above goal). At most one multiplier applies per epoch.
struct PstParams {
    double cpc_goal = 0.4;
    double down_multiplier = 0.9;
    double up_multiplier = 1.05;
    double underdelivery_ratio = 0.95;

    void validate() const;
};

std::vector<double> pst_step(const PstParams& params, const EpochObservation& obs,
                             const std::vector<double>& budgets, std::vector<double> bids,
                             double bid_lower, double bid_upper);

}  // namespace skott
