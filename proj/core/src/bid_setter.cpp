#include "skott/bid_setter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skott/bid_landscape.hpp"

namespace skott {

void NadamHyper::validate() const {
    if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be > 0");
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mu must be in (0,1)");
    if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("nu must be in (0,1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
}

NadamHyper NadamHyper::from(const CampaignConfig& cfg) {
    NadamHyper h;
    h.step_size = 0.05 * (cfg.bid_upper - cfg.bid_lower);
    h.validate();
    return h;
}

double bid_loss_gradient(const BidGradientInput& in) {
    if (in.budget < in.budget_min) return 0.0;  // no budget set, ignore
    if (in.spend <= 0.0) return -1.0 / in.alpha;  // no money spent, raise the bid

    const double delivery = in.spend / in.budget;
    const double theta = (in.tau - delivery) > 0.0 ? 1.0 : 0.0;
    const double spend_term = theta * in.beta / (in.bid + in.beta);
    const double cpm_term = cpm_derivative(in.bid, in.beta);
    return -in.clicks * in.impressions / (1000.0 * in.spend) * (spend_term - cpm_term);
}

NadamResult nadam_step(const MediaObjectAccumulators& acc, const std::vector<double>& grad,
                       const NadamHyper& hyper) {
    hyper.validate();
    const auto k = static_cast<std::size_t>(acc.size());
    if (grad.size() != k) throw std::invalid_argument("dimension mismatch");

    NadamResult out{acc, acc.bids};
    const long t = acc.nadam_step + 1;  // 1-based step being taken
    const double mu_prod_t = acc.nadam_mu_product * hyper.mu;    // prod_{i<=t} mu_i
    const double mu_prod_t1 = mu_prod_t * hyper.mu;              // prod_{i<=t+1} mu_i
    const double nu_corr = 1.0 - std::pow(hyper.nu, static_cast<double>(t));

    for (std::size_t i = 0; i < k; ++i) {
        const double g = grad[i];
        // Nesterov-corrected moment, from the pre-update m as in the
        // reference pseudocode.
        const double m_hat = hyper.mu * acc.nadam_m[i] / (1.0 - mu_prod_t1) +
                             (1.0 - hyper.mu) * g / (1.0 - mu_prod_t);
        const double n_new = hyper.nu * acc.nadam_n[i] + (1.0 - hyper.nu) * g * g;
        const double n_hat = n_new / nu_corr;
        out.bids[i] = acc.bids[i] - hyper.step_size * m_hat / std::sqrt(n_hat + hyper.epsilon);
        out.acc.nadam_m[i] = hyper.mu * acc.nadam_m[i] + (1.0 - hyper.mu) * g;
        out.acc.nadam_n[i] = n_new;
    }
    out.acc.nadam_step = t;
    out.acc.nadam_mu_product = mu_prod_t;
    out.acc.bids = out.bids;
    return out;
}

std::vector<double> clamp_bids(std::vector<double> bids, double lower, double upper) {
    if (!(lower < upper)) throw std::invalid_argument("lower bound must be below upper bound");
    for (double& b : bids) b = std::clamp(b, lower, upper);
    return bids;
}

BidStepResult bid_step(const MediaObjectAccumulators& acc, const EpochObservation& obs,
                       const std::vector<double>& budgets, std::vector<double> betas,
                       const CampaignConfig& cfg, const NadamHyper& hyper) {
    obs.validate();
    const auto k = static_cast<std::size_t>(acc.size());
    if (obs.impressions.size() != k || budgets.size() != k || betas.size() != k) {
        throw std::invalid_argument("dimension mismatch");
    }

    std::vector<double> grad(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double n = obs.impressions[i];
        const double s = obs.spend[i];
        if (n <= 0.0 && s > 0.0) {
            throw std::invalid_argument("money spent with no impressions bought");
        }
        if (n > 0.0 && s > 0.0) {
            betas[i] = estimate_beta(1000.0 * s / n, acc.bids[i]).beta;
        }
        // else: keep the previous estimate (initialized to the initial bid)

        BidGradientInput in;
        in.impressions = n;
        in.budget = budgets[i];
        in.spend = s;
        in.clicks = obs.clicks[i];
        in.bid = acc.bids[i];
        in.beta = betas[i];
        in.tau = cfg.delivery_threshold;
        in.alpha = hyper.step_size;
        in.budget_min = cfg.budget_min;
        grad[i] = bid_loss_gradient(in);
    }

    NadamResult moved = nadam_step(acc, grad, hyper);
    moved.acc.bids = clamp_bids(std::move(moved.acc.bids), cfg.bid_lower, cfg.bid_upper);
    return BidStepResult{std::move(moved.acc), std::move(betas)};
}

}  // namespace skott
