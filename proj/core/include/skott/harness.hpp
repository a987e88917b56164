#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "skott/baselines.hpp"
#include "skott/campaign.hpp"
#include "skott/market.hpp"
#include "skott/metrics.hpp"
#include "skott/pacer.hpp"

namespace skott {

enum class PartitionerKind { none, mab, lop, skt1 };
enum class BidderKind { none, pst, skt2 };

// An algorithm stack: which budget partitioner, which bid setter, and whether
// pacing control runs on top. "vnl" is the empty stack that changes nothing.
struct StackSpec {
    PartitionerKind partitioner = PartitionerKind::none;
    BidderKind bidder = BidderKind::none;
    bool pacing = false;

    // Canonical name, e.g. "vnl", "skt1+skt2+skt3", "skt1+pst".
    std::string name() const;
    // Accepts '+'-joined tokens from {vnl, mab, lop, skt1, pst, skt2, skt3}.
    static StackSpec parse(const std::string& text);
};

struct BaselineParams {
    Exp3Partitioner::Params exp3;
    LopPartitioner::Params lop;
    PstParams pst;
};

struct ExperimentPlan {
    CampaignConfig campaign;
    SimulatorConfig simulator;
    BaselineParams baselines;
    std::vector<StackSpec> stacks;
    std::string baseline;  // clk reference; defaults to the first stack
    std::string output_dir = "out";
    std::string slot = "all";  // "all" or an hour 0..23, used when day_parting
    // Optional CSV (epoch, ideal_cumulative) replacing the uniform delivery
    // profile; must cover the campaign epochs and end at the total budget.
    std::string spend_profile_csv;

    void validate() const;
};

ExperimentPlan plan_from_json_text(const std::string& text);
// Reads the plan and applies SKOTT_* environment overrides to the campaign.
ExperimentPlan load_plan(const std::string& path);

// Deterministic seed derivation (FNV-1a over master, repetition and tag), so
// every stack sees the identical market draw of a repetition while keeping
// its own algorithm stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t repetition, std::string_view tag);

struct RunSeeds {
    std::uint64_t truth = 0;   // market truth draw, shared across stacks
    std::uint64_t market = 0;  // simulator stream, shared across stacks
    std::uint64_t algo = 0;    // algorithm-internal randomness, per stack
    std::uint64_t gaps = 0;    // observation-gap mask, shared across stacks

    static RunSeeds for_run(std::uint64_t master, int repetition, const std::string& stack_name,
                            const std::string& scope_tag);
};

struct CampaignResult {
    RunMetrics metrics;
    std::uint64_t truth_hash = 0;
};

// Closed loop over one campaign: simulate the epoch, feed the (gap-filtered)
// observation to the stack, collect next budgets/bids, repeat. The uniform
// delivery profile is the default; a custom profile must span cfg.epochs and
// end at cfg.total_budget.
CampaignResult run_campaign(const StackSpec& stack, const CampaignConfig& cfg,
                            const SimulatorConfig& sim_cfg, const BaselineParams& baselines,
                            const RunSeeds& seeds);
CampaignResult run_campaign(const StackSpec& stack, const CampaignConfig& cfg,
                            const SimulatorConfig& sim_cfg, const BaselineParams& baselines,
                            const RunSeeds& seeds, const SpendProfile& profile);

// 24 independent optimizer instances, one per hour of day, interleaved over
// a chronological hourly simulation. Requires epochs % 24 == 0.
CampaignResult run_day_parted(const StackSpec& stack, const CampaignConfig& cfg,
                              const SimulatorConfig& sim_cfg, const BaselineParams& baselines,
                              const RunSeeds& seeds);

// The per-hour slice of a full hourly campaign: budget and epoch count
// divided by 24, day-parted epoch counting.
CampaignConfig slot_config(const CampaignConfig& cfg);

struct ExperimentSummary {
    std::vector<SummaryRow> rows;
    std::vector<EpochRecord> records;
    std::vector<std::string> failures;  // one line per aborted (stack, repetition)
    std::vector<std::string> truth_hashes;  // per repetition, hex
    int repetitions = 0;
};

// E repetitions of every stack with derived seeds; every stack of a
// repetition runs against the identical market truth (checked by hash).
ExperimentSummary run_experiment(const ExperimentPlan& plan);

std::string summary_to_json_text(const ExperimentSummary& summary, const ExperimentPlan& plan);
// Writes per_epoch.csv and summary.json into plan.output_dir.
void write_experiment_outputs(const ExperimentSummary& summary, const ExperimentPlan& plan);

}  // namespace skott
