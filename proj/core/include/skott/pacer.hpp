#pragma once

#include <string>
#include <vector>

namespace skott {

// Ideal cumulative spend per epoch: non-decreasing, ends at the campaign
// budget. Uniform is the default; arbitrary profiles load from a CSV with
// columns (epoch, ideal_cumulative).
class SpendProfile {
public:
    static SpendProfile uniform(double total_budget, int epochs);
    static SpendProfile from_cumulative(std::vector<double> cumulative);
    static SpendProfile load_csv(const std::string& path);

    int epochs() const { return static_cast<int>(cumulative_.size()); }
    double total() const { return cumulative_.back(); }
    // Ideal spend through epoch t, inclusive.
    double ideal_cumulative(int epoch) const;
    // cumulative_t - cumulative_{t-1}
    double ideal_epoch_budget(int epoch) const;

private:
    explicit SpendProfile(std::vector<double> cumulative);
    std::vector<double> cumulative_;
};

// Budget for the next epoch, corrected toward the ideal spend curve:
//   B_{t+1} = Bbar_{t+1} + eta * (Sbar_t - S_t) / epochs_left
// floored at zero. eta is clamped to epochs_left near the campaign end (the
// whole residual is then recovered in one step). Throws when no epochs are
// left or eta < 1.
double pacing_step(double ideal_spent, double actual_spent, double ideal_next_budget,
                   double eta, int epochs_left);

}  // namespace skott
