#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skott/preprocess.hpp"

namespace skott {

// Campaign-level parameters shared by the optimizer sub-routines and the
// harness. Loaded from a JSON config file; any key can be overridden through
// the environment as SKOTT_<key> (e.g. SKOTT_total_budget=500).
struct CampaignConfig {
    double total_budget = 15000.0;
    int epochs = 30;                          // T
    int media_objects = 10;                   // K
    bool day_parting = true;                  // one optimizer per hour of day
    double cpc_goal = 0.40;                   // used by the pst baseline
    int repetitions = 20;                     // E
    double learning_rate = 1.5;               // alpha, exponentiated gradient
    double discount = 0.87;                   // gamma, quality memory
    double exploration = 1.0;                 // eta, regularization strength
    double regularization_discount = 0.95;    // gamma_r
    double delivery_threshold = 0.95;         // tau
    double aggressiveness = 2.0;              // eta, pacing
    double bid_lower = 0.05;                  // l_b
    double bid_upper = 4.0;                   // u_b
    double budget_min = 1e-6;                 // B_min
    double initial_bid = 2.0;                 // b_0, also the initial beta guess
    std::uint64_t seed = 1;

    // Throws std::invalid_argument on the first violated constraint.
    void validate() const;
};

CampaignConfig campaign_config_from_json_text(const std::string& text);
CampaignConfig load_campaign_config(const std::string& path);
// Applies SKOTT_<key> environment overrides in place.
void apply_env_overrides(CampaignConfig& cfg);

// Budget repartition over K media objects: non-negative, sums to one.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> weights);
    static WeightVector uniform(int k);
    // Rescales a non-negative vector with positive sum onto the simplex.
    static WeightVector normalized(std::vector<double> raw);

    int size() const { return static_cast<int>(w_.size()); }
    double operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return w_; }

private:
    std::vector<double> w_;
};

// One epoch of per-media-object market feedback. Counts are kept as doubles
// so gap-imputed values can flow through the same pipeline; simulator output
// is always integer-valued.
struct EpochObservation {
    std::vector<double> impressions;  // N
    std::vector<double> clicks;       // C
    std::vector<double> spend;        // S

    int size() const { return static_cast<int>(impressions.size()); }
    void validate() const;
};

// Per-media-object running state: discounted clicks/budgets for the quality
// estimate, plus the bid-setter state (current bids, Nadam moments).
struct MediaObjectAccumulators {
    std::vector<double> disc_clicks;   // C-hat
    std::vector<double> disc_budgets;  // B-hat
    std::vector<double> bids;
    std::vector<double> nadam_m;
    std::vector<double> nadam_n;
    long nadam_step = 0;               // optimizer iterations taken so far
    double nadam_mu_product = 1.0;     // prod of mu_i over taken steps

    static MediaObjectAccumulators initial(int k, double initial_bid);
    int size() const { return static_cast<int>(disc_clicks.size()); }
};

// C-hat_t = C_t + gamma * C-hat_{t-1}, same for budgets. Zero-initialized
// accumulators make the t=0 branch (C-hat_0 = C_0) fall out of the formula.
MediaObjectAccumulators update_discounted(const MediaObjectAccumulators& acc,
                                          const EpochObservation& obs,
                                          const std::vector<double>& allocated,
                                          double gamma);

// Observation CSV import: columns (epoch, media_object_id, impressions,
// clicks, spend). Missing cells (empty or "nan", any case) become NaN;
// missing rows leave the whole epoch missing for that media object.
struct ObservationSeries {
    int media_objects = 0;
    int epochs = 0;
    std::vector<TimeSeries> impressions;  // [media object][epoch]
    std::vector<TimeSeries> clicks;
    std::vector<TimeSeries> spend;
};

ObservationSeries load_observation_csv(const std::string& path);
ObservationSeries observation_series_from_csv_text(const std::string& text);
// Runs the gap-filling pipeline on every series.
ObservationSeries preprocess(ObservationSeries series);
// Requires gap-free input; clamps clicks to impressions (imputation can
// overshoot) and validates.
std::vector<EpochObservation> to_epoch_observations(const ObservationSeries& series);

}  // namespace skott
