#include "skott/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace skott {

PartitionerParams PartitionerParams::from(const CampaignConfig& cfg) {
    PartitionerParams p;
    p.learning_rate = cfg.learning_rate;
    p.exploration = cfg.exploration;
    p.regularization_discount = cfg.regularization_discount;
    p.discount = cfg.discount;
    p.validate();
    return p;
}

void PartitionerParams::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (!(exploration > 0.0)) throw std::invalid_argument("exploration must be > 0");
    if (!(regularization_discount > 0.0 && regularization_discount <= 1.0)) {
        throw std::invalid_argument("regularization_discount must be in (0,1]");
    }
    if (!(discount >= 0.0 && discount <= 1.0)) throw std::invalid_argument("discount must be in [0,1]");
}

QualityVector quality(const MediaObjectAccumulators& acc) {
    const auto k = static_cast<std::size_t>(acc.size());
    const double total = std::accumulate(acc.disc_budgets.begin(), acc.disc_budgets.end(), 0.0);

    QualityVector q;
    q.raw.resize(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        if (acc.disc_budgets[i] > 0.0) {
            q.raw[i] = total * acc.disc_clicks[i] / acc.disc_budgets[i];
        }
    }
    const double max_q = *std::max_element(q.raw.begin(), q.raw.end());
    q.rescaled.resize(k, 0.0);
    if (max_q > 0.0) {
        for (std::size_t i = 0; i < k; ++i) q.rescaled[i] = q.raw[i] / max_q;
    }
    return q;
}

double regularization_lambda(double eta, int k, double gamma_r, int day) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
    if (!(gamma_r > 0.0 && gamma_r <= 1.0)) throw std::invalid_argument("gamma_r must be in (0,1]");
    if (day < 0) throw std::invalid_argument("day must be >= 0");
    return eta * static_cast<double>(k) * std::pow(gamma_r, day);
}

std::vector<double> loss_gradient(const QualityVector& q, const WeightVector& w,
                                  double lambda, double alpha) {
    const int k = w.size();
    if (static_cast<int>(q.rescaled.size()) != k) throw std::invalid_argument("dimension mismatch");
    const double u = 1.0 / k;
    const double bound = 10.0 / alpha;
    std::vector<double> grad(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double g = -q.rescaled[i] + lambda * (w[i] - u);
        grad[i] = std::clamp(g, -bound, bound);
    }
    return grad;
}

WeightVector exponentiated_update(const WeightVector& w, const std::vector<double>& grad,
                                  double alpha) {
    const int k = w.size();
    if (static_cast<int>(grad.size()) != k) throw std::invalid_argument("dimension mismatch");

    // Shift exponents by their maximum over the support; cancels in the
    // normalization and keeps exp() in range.
    double max_exp = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        if (w[i] > 0.0) max_exp = std::max(max_exp, -alpha * grad[i]);
    }
    if (!std::isfinite(max_exp)) throw std::invalid_argument("all weights are zero");

    std::vector<double> next(static_cast<std::size_t>(k), 0.0);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        if (w[i] > 0.0) {
            next[i] = w[i] * std::exp(-alpha * grad[i] - max_exp);
            sum += next[i];
        }
    }
    if (!(sum > 0.0)) throw std::invalid_argument("degenerate update: zero normalization");
    for (double& v : next) v /= sum;
    return WeightVector(std::move(next));
}

WeightVector floor_initial_weights(std::vector<double> weights) {
    for (double& w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("weights must be non-negative");
        if (w == 0.0) w = 1e-12;
    }
    return WeightVector::normalized(std::move(weights));
}

PartitionStep partition_step(const MediaObjectAccumulators& acc, const EpochObservation& obs,
                             const std::vector<double>& allocated, const WeightVector& w,
                             const PartitionerParams& params, int day) {
    params.validate();
    if (acc.size() != w.size()) throw std::invalid_argument("dimension mismatch");
    PartitionStep step{update_discounted(acc, obs, allocated, params.discount), w};
    const QualityVector q = quality(step.acc);
    const double lambda =
        regularization_lambda(params.exploration, w.size(), params.regularization_discount, day);
    const std::vector<double> grad = loss_gradient(q, w, lambda, params.learning_rate);
    step.weights = exponentiated_update(w, grad, params.learning_rate);
    return step;
}

}  // namespace skott
