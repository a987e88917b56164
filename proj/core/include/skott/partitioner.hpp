#pragma once

#include <vector>

#include "skott/campaign.hpp"

namespace skott {

// Exponentiated gradient descent over the budget repartition:
//   Q = sum(B-hat) * C-hat / B-hat, rescaled by its max
//   grad = -Q~ + lambda_t (w - u), clipped to +-10/alpha
//   w' = w * exp(-alpha * grad) / sum(...)
// with lambda_t = eta * K * gamma_r^d(t) decaying over days.
struct PartitionerParams {
    double learning_rate = 0.5;             // alpha
    double exploration = 1.0;               // eta
    double regularization_discount = 0.95;  // gamma_r
    double discount = 0.87;                 // gamma

    // Hard gradient bound; tied to the learning rate by construction.
    double clip_bound() const { return 10.0 / learning_rate; }

    static PartitionerParams from(const CampaignConfig& cfg);
    void validate() const;
};

struct QualityVector {
    std::vector<double> raw;       // >= 0
    std::vector<double> rescaled;  // in [0,1]; max element 1 unless all zero
};

// Quality per media object: discounted clicks over discounted budgets, with
// the (irrelevant after rescaling) global budget factor applied. Media
// objects with no accumulated budget get quality 0.
QualityVector quality(const MediaObjectAccumulators& acc);

// lambda_t = eta * K * gamma_r^day
double regularization_lambda(double eta, int k, double gamma_r, int day);

std::vector<double> loss_gradient(const QualityVector& q, const WeightVector& w,
                                  double lambda, double alpha);

// Multiplicative update, normalized back onto the simplex. Exponents are
// shifted by their maximum before exponentiation so large gradients cannot
// overflow. Exact zero weights stay zero.
WeightVector exponentiated_update(const WeightVector& w, const std::vector<double>& grad,
                                  double alpha);

// Zero entries are floored at 1e-12 (then renormalized) so the multiplicative
// update can still reach them; applies at initialization only.
WeightVector floor_initial_weights(std::vector<double> weights);

struct PartitionStep {
    MediaObjectAccumulators acc;
    WeightVector weights;
};

// One epoch of budget partitioning: update discounted quantities, estimate
// quality, build the regularized gradient, update the weights.
PartitionStep partition_step(const MediaObjectAccumulators& acc, const EpochObservation& obs,
                             const std::vector<double>& allocated, const WeightVector& w,
                             const PartitionerParams& params, int day);

}  // namespace skott
