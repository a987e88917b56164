#pragma once

#include <string>
#include <vector>

#include "skott/campaign.hpp"

namespace skott {

// KL divergence from the uniform distribution, rescaled by log(K) so the
// greedy distribution measures exactly 1. K=1 is defined as 0.
double kl_divergence_rescaled(const WeightVector& w);

// Total spend over total clicks; +inf when no clicks were generated.
double cumulative_cpc(const std::vector<double>& spend, const std::vector<double>& clicks);

// Per-epoch evaluation series of one campaign run.
struct RunMetrics {
    std::vector<double> spend;
    std::vector<double> clicks;
    std::vector<double> cumulative_cpc;
    std::vector<double> rescaled_kld;

    int epochs() const { return static_cast<int>(spend.size()); }
    double total_spend() const;
    double total_clicks() const;
    double final_cpc() const;
    double final_kld() const;
};

// One row of the results table: percent of budget spent, clicks relative to
// the baseline, total CPC, final divergence from uniform; all averaged over
// repetitions.
struct SummaryRow {
    std::string algo;
    double spt = 0.0;  // percent of configured budget
    double clk = 0.0;  // percent of baseline clicks
    double cpc = 0.0;
    double kld = 0.0;
};

SummaryRow summarize(const std::string& algo, const std::vector<RunMetrics>& runs,
                     const std::vector<RunMetrics>& baseline_runs, double total_budget);

// Centered moving average (window 5 by default) used for plot-friendly
// series; the raw series is always emitted alongside.
std::vector<double> smooth_series(const std::vector<double>& series, int window = 5);

struct EpochRecord {
    int repetition = 0;
    int epoch = 0;
    std::string algo;
    double spend = 0.0;
    double clicks = 0.0;
    double cumulative_cpc = 0.0;
    double rescaled_kld = 0.0;
};

std::string per_epoch_csv_text(const std::vector<EpochRecord>& records);
void write_per_epoch_csv(const std::vector<EpochRecord>& records, const std::string& path);
std::vector<EpochRecord> per_epoch_records_from_csv_text(const std::string& text);
std::vector<EpochRecord> load_per_epoch_csv(const std::string& path);

// Rebuilds per-run metrics from flat records, keyed by algorithm then
// repetition (used by the report command).
std::vector<std::string> algorithms_in(const std::vector<EpochRecord>& records);
std::vector<RunMetrics> runs_for(const std::vector<EpochRecord>& records,
                                 const std::string& algo);

// The same records with every per-(algorithm, repetition) series replaced by
// its centered moving average; emitted next to the raw CSV for plotting.
std::vector<EpochRecord> smoothed_records(const std::vector<EpochRecord>& records,
                                          int window = 5);

}  // namespace skott
