#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "skott/campaign.hpp"

namespace skott {

enum class TruthField { ctr, itot, beta };

std::string to_string(TruthField field);
TruthField truth_field_from_string(const std::string& name);

// One scheduled multiplicative change: at `epoch`, the given field of the
// given media object is scaled by `multiplier` (relative to the base truth).
struct TruthModifier {
    int epoch = 0;
    int media_object = 0;
    TruthField field = TruthField::itot;
    double multiplier = 1.0;
};

// Ground truth of the synthetic market: per-media-object CTR, inventory per
// epoch at infinite bid, and median winning bid, plus an optional schedule of
// per-epoch modifiers.
struct MarketTruth {
    std::vector<double> ctr;
    std::vector<double> itot;
    std::vector<double> beta;
    std::vector<TruthModifier> schedule;

    int size() const { return static_cast<int>(ctr.size()); }
    void validate() const;
    // Content hash over all fields; used for cross-algorithm fairness checks.
    std::uint64_t hash() const;
};

struct SimulatorConfig {
    std::array<double, 2> ctr_interval{0.0005, 0.002};
    std::array<double, 2> itot_interval{1e4, 1e6};
    std::array<double, 2> beta_interval{0.5, 2.0};
    std::vector<TruthModifier> schedule;
    // Probability that an observation cell is lost (exercises gap filling).
    double gap_probability = 0.0;

    void validate() const;
};

// K independent uniform draws per field, deterministic for a given seed.
MarketTruth generate_truth(const SimulatorConfig& cfg, int media_objects, std::uint64_t seed);

// Applies the modifiers scheduled for `epoch` to the base truth. CTR values
// pushed above 1 are clamped (with a warning on stderr).
MarketTruth evolve_truth(const MarketTruth& base, int epoch);

// Converts (budget, bid) into (impressions, spend, clicks):
//   N = floor(min(1000 B / CPM(b), Itot * P(b))),  S = N * CPM / 1000,
//   C ~ Binomial(N, ctr).
// Guarantees S <= B and C <= N; zero bid or zero budget buys nothing.
EpochObservation simulate_epoch(const MarketTruth& truth, const std::vector<double>& budgets,
                                const std::vector<double>& bids, std::mt19937_64& rng);

// Owns the RNG stream so repeated runs with the same seed and the same
// decision sequence reproduce the observation stream exactly.
class MarketSimulator {
public:
    MarketSimulator(MarketTruth truth, std::uint64_t seed);

    EpochObservation epoch(int t, const std::vector<double>& budgets,
                           const std::vector<double>& bids);
    const MarketTruth& truth() const { return truth_; }

private:
    MarketTruth truth_;
    std::mt19937_64 rng_;
};

std::string truth_to_json_text(const MarketTruth& truth);
MarketTruth truth_from_json_text(const std::string& text);
void save_truth(const MarketTruth& truth, const std::string& path);
MarketTruth load_truth(const std::string& path);

}  // namespace skott
