#include "skott/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "skott/bid_setter.hpp"

namespace skott {

Exp3Partitioner::Exp3Partitioner(int k, Params params)
    : Exp3Partitioner(std::vector<double>(static_cast<std::size_t>(std::max(k, 1)), 1.0), params) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
}

Exp3Partitioner::Exp3Partitioner(std::vector<double> weights, Params params)
    : params_(params), weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("weights must not be empty");
    for (double w : weights_) {
        if (!(w > 0.0)) throw std::invalid_argument("weights must be > 0");
    }
    if (!(params_.gamma > 0.0 && params_.gamma <= 1.0)) {
        throw std::invalid_argument("gamma must be in (0,1]");
    }
    if (!(params_.cpc_goal > 0.0)) throw std::invalid_argument("cpc_goal must be > 0");
    if (!(params_.smoothing >= 0.0 && params_.smoothing < 1.0)) {
        throw std::invalid_argument("smoothing must be in [0,1)");
    }
    clicks_avg_.assign(weights_.size(), 0.0);
}

std::vector<double> Exp3Partitioner::probabilities() const {
    const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    const double k = static_cast<double>(weights_.size());
    std::vector<double> p(weights_.size());
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        p[i] = (1.0 - params_.gamma) * weights_[i] / sum + params_.gamma / k;
    }
    return p;
}

double Exp3Partitioner::reward(double clicks, double cpc, double clicks_goal, double cpc_goal) {
    if (!(cpc_goal > 0.0)) throw std::invalid_argument("cpc_goal must be > 0");
    if (clicks <= 0.0 || clicks_goal <= 0.0) return 0.0;
    if (!(cpc > 0.0) || !std::isfinite(cpc)) return 0.0;
    const double x = clicks / clicks_goal * (cpc_goal / cpc);
    return x / (1.0 + x);
}

void Exp3Partitioner::apply_reward(int arm, double reward01) {
    if (arm < 0 || arm >= static_cast<int>(weights_.size())) {
        throw std::out_of_range("arm index out of range");
    }
    if (!(reward01 >= 0.0 && reward01 < 1.0)) {
        throw std::invalid_argument("reward must be in [0,1)");
    }
    const std::vector<double> p = probabilities();
    const double x_hat = reward01 / p[static_cast<std::size_t>(arm)];
    weights_[static_cast<std::size_t>(arm)] *=
        std::exp(params_.gamma * x_hat / static_cast<double>(weights_.size()));

    const double max_w = *std::max_element(weights_.begin(), weights_.end());
    if (max_w > 1e100) {
        for (double& w : weights_) w /= max_w;
    }
}

std::vector<double> Exp3Partitioner::budget_step(const EpochObservation& obs, double epoch_budget,
                                                 std::mt19937_64& rng) {
    obs.validate();
    const auto k = weights_.size();
    if (obs.impressions.size() != k) throw std::invalid_argument("dimension mismatch");
    if (!(epoch_budget >= 0.0)) throw std::invalid_argument("epoch budget must be >= 0");

    const std::vector<double> p = probabilities();
    std::discrete_distribution<int> dist(p.begin(), p.end());
    const int arm = dist(rng);

    for (std::size_t i = 0; i < k; ++i) {
        clicks_avg_[i] = seen_obs_
                             ? params_.smoothing * clicks_avg_[i] +
                                   (1.0 - params_.smoothing) * obs.clicks[i]
                             : obs.clicks[i];
    }
    seen_obs_ = true;

    const auto a = static_cast<std::size_t>(arm);
    const double clicks = obs.clicks[a];
    const double cpc = clicks > 0.0 ? obs.spend[a] / clicks
                                    : std::numeric_limits<double>::infinity();
    const double allotted =
        prev_budgets_.empty() ? epoch_budget / static_cast<double>(k) : prev_budgets_[a];
    const double clicks_goal = std::max(clicks_avg_[a], allotted / params_.cpc_goal);
    apply_reward(arm, reward(clicks, cpc, clicks_goal, params_.cpc_goal));

    const std::vector<double> p_next = probabilities();
    std::vector<double> budgets(k);
    for (std::size_t i = 0; i < k; ++i) budgets[i] = epoch_budget * p_next[i];
    prev_budgets_ = budgets;
    return budgets;
}

LopPartitioner::LopPartitioner(int k, Params params) : params_(params) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (!(params_.alpha_lower < 1.0 && params_.alpha_lower >= 0.0)) {
        throw std::invalid_argument("alpha_lower must be in [0,1)");
    }
    if (!(params_.alpha_upper > 1.0)) throw std::invalid_argument("alpha_upper must be > 1");
    if (!(params_.discount >= 0.0 && params_.discount <= 1.0)) {
        throw std::invalid_argument("discount must be in [0,1]");
    }
    disc_spend_.assign(static_cast<std::size_t>(k), 0.0);
    disc_clicks_.assign(static_cast<std::size_t>(k), 0.0);
}

std::vector<double> LopPartitioner::step(const EpochObservation& obs, double epoch_budget) {
    obs.validate();
    const auto k = disc_spend_.size();
    if (obs.impressions.size() != k) throw std::invalid_argument("dimension mismatch");
    if (!(epoch_budget >= 0.0)) throw std::invalid_argument("epoch budget must be >= 0");

    for (std::size_t i = 0; i < k; ++i) {
        disc_spend_[i] = obs.spend[i] + params_.discount * disc_spend_[i];
        disc_clicks_[i] = obs.clicks[i] + params_.discount * disc_clicks_[i];
    }

    // First call has no prior spend; seed the bounds from the uniform split.
    std::vector<double> lower(k), upper(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double base = seen_obs_ ? prev_spend_[i] : epoch_budget / static_cast<double>(k);
        lower[i] = params_.alpha_lower * base;
        upper[i] = params_.alpha_upper * base;
    }

    double lower_sum = std::accumulate(lower.begin(), lower.end(), 0.0);
    if (lower_sum > epoch_budget && lower_sum > 0.0) {
        std::cerr << "warning: lop lower bounds exceed the epoch budget, rescaling\n";
        const double scale = epoch_budget / lower_sum;
        for (double& l : lower) l *= scale;
        lower_sum = epoch_budget;
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> cpc(k);
    for (std::size_t i = 0; i < k; ++i) {
        cpc[i] = disc_clicks_[i] > 0.0 ? disc_spend_[i] / disc_clicks_[i]
                                       : std::numeric_limits<double>::infinity();
    }
    // Cheapest estimated clicks first.
    std::sort(order.begin(), order.end(), [&cpc](std::size_t a, std::size_t b) {
        if (cpc[a] != cpc[b]) return cpc[a] < cpc[b];
        return a < b;
    });

    std::vector<double> budgets = lower;
    double remaining = epoch_budget - lower_sum;
    for (std::size_t i : order) {
        const double add = std::min(remaining, upper[i] - budgets[i]);
        if (add > 0.0) {
            budgets[i] += add;
            remaining -= add;
        }
    }

    prev_spend_ = obs.spend;
    seen_obs_ = true;
    return budgets;
}

void PstParams::validate() const {
    if (!(cpc_goal > 0.0)) throw std::invalid_argument("cpc_goal must be > 0");
    if (!(down_multiplier > 0.0 && down_multiplier < 1.0)) {
        throw std::invalid_argument("down_multiplier must be in (0,1)");
    }
    if (!(up_multiplier > 1.0)) throw std::invalid_argument("up_multiplier must be > 1");
    if (!(underdelivery_ratio > 0.0 && underdelivery_ratio < 1.0)) {
        throw std::invalid_argument("underdelivery_ratio must be in (0,1)");
    }
}

std::vector<double> pst_step(const PstParams& params, const EpochObservation& obs,
                             const std::vector<double>& budgets, std::vector<double> bids,
                             double bid_lower, double bid_upper) {
    params.validate();
    obs.validate();
    const auto k = bids.size();
    if (obs.impressions.size() != k || budgets.size() != k) {
        throw std::invalid_argument("dimension mismatch");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!(budgets[i] > 0.0)) continue;  // nothing was deliverable
        const double delivery = obs.spend[i] / budgets[i];
        const double cpc = obs.clicks[i] > 0.0 ? obs.spend[i] / obs.clicks[i]
                                               : std::numeric_limits<double>::infinity();
        if (delivery < params.underdelivery_ratio) {
            bids[i] *= params.up_multiplier;
        } else if (cpc > params.cpc_goal) {
            bids[i] *= params.down_multiplier;
        }
    }
    return clamp_bids(std::move(bids), bid_lower, bid_upper);
}

}  // namespace skott
