// Command line front end for the campaign optimizer and its back-test
// harness. Subcommands:
//   run     execute an experiment plan (simulate, optimize, report)
//   truth   dump a derived market truth to JSON, or load and describe one
//   report  re-summarize an existing per-epoch CSV
// Exit codes: 0 success, 1 configuration error, 2 partial repetition failures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "skott/harness.hpp"
#include "skott/market.hpp"
#include "skott/metrics.hpp"

namespace {

struct RunOptions {
    std::string plan_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<std::string> out;
    std::optional<bool> day_parting;
    std::optional<std::string> stacks;
    std::optional<std::string> slot;
};

skott::ExperimentPlan resolve_plan(const RunOptions& opt) {
    skott::ExperimentPlan plan = skott::load_plan(opt.plan_path);
    if (opt.seed) plan.campaign.seed = *opt.seed;
    if (opt.reps) plan.campaign.repetitions = *opt.reps;
    if (opt.out) plan.output_dir = *opt.out;
    if (opt.day_parting) plan.campaign.day_parting = *opt.day_parting;
    if (opt.slot) plan.slot = *opt.slot;
    if (opt.stacks) {
        plan.stacks.clear();
        std::istringstream in(*opt.stacks);
        std::string token;
        while (std::getline(in, token, ',')) {
            if (!token.empty()) plan.stacks.push_back(skott::StackSpec::parse(token));
        }
        const bool baseline_present =
            std::any_of(plan.stacks.begin(), plan.stacks.end(),
                        [&plan](const skott::StackSpec& s) { return s.name() == plan.baseline; });
        if (!baseline_present && !plan.stacks.empty()) plan.baseline = plan.stacks.front().name();
    }
    plan.validate();
    return plan;
}

int cmd_run(const RunOptions& opt) {
    const skott::ExperimentPlan plan = resolve_plan(opt);
    const skott::ExperimentSummary summary = skott::run_experiment(plan);
    skott::write_experiment_outputs(summary, plan);

    std::printf("%-20s %8s %8s %8s %8s\n", "algo", "spt", "clk", "cpc", "kld");
    for (const skott::SummaryRow& row : summary.rows) {
        std::printf("%-20s %7.1f%% %7.1f%% %8.3f %8.3f\n", row.algo.c_str(), row.spt, row.clk,
                    row.cpc, row.kld);
    }
    std::printf("outputs written to %s\n", plan.output_dir.c_str());
    if (!summary.failures.empty()) {
        for (const std::string& f : summary.failures) std::fprintf(stderr, "failure: %s\n", f.c_str());
        return 2;
    }
    return 0;
}

int cmd_truth(const std::string& plan_path, const std::string& in_path,
              std::optional<std::uint64_t> seed, int rep, const std::string& out_path) {
    if (!in_path.empty()) {
        const skott::MarketTruth truth = skott::load_truth(in_path);
        std::printf("media objects: %d\n", truth.size());
        std::printf("truth hash: %016llx\n", static_cast<unsigned long long>(truth.hash()));
        for (int i = 0; i < truth.size(); ++i) {
            std::printf("  mo %2d  ctr %.6f  itot %12.0f  beta %.4f\n", i, truth.ctr[i],
                        truth.itot[i], truth.beta[i]);
        }
        return 0;
    }
    skott::ExperimentPlan plan = skott::load_plan(plan_path);
    if (seed) plan.campaign.seed = *seed;
    const std::uint64_t truth_seed =
        skott::derive_seed(plan.campaign.seed, static_cast<std::uint64_t>(rep), "truth");
    const skott::MarketTruth truth =
        skott::generate_truth(plan.simulator, plan.campaign.media_objects, truth_seed);
    skott::save_truth(truth, out_path);
    std::printf("truth for repetition %d written to %s (hash %016llx)\n", rep, out_path.c_str(),
                static_cast<unsigned long long>(truth.hash()));
    return 0;
}

int cmd_report(const std::string& in_path, const std::string& out_path,
               const std::string& baseline, double budget, const std::string& smoothed_path) {
    const std::vector<skott::EpochRecord> records = skott::load_per_epoch_csv(in_path);
    if (!smoothed_path.empty()) {
        skott::write_per_epoch_csv(skott::smoothed_records(records), smoothed_path);
        std::printf("smoothed series written to %s\n", smoothed_path.c_str());
    }
    const std::vector<std::string> algos = skott::algorithms_in(records);
    if (algos.empty()) throw std::invalid_argument("no records in '" + in_path + "'");
    std::string base = baseline.empty() ? algos.front() : baseline;
    const std::vector<skott::RunMetrics> baseline_runs = skott::runs_for(records, base);

    nlohmann::json j;
    j["baseline"] = base;
    j["rows"] = nlohmann::json::array();
    std::printf("%-20s %8s %8s %8s %8s\n", "algo", "spt", "clk", "cpc", "kld");
    for (const std::string& algo : algos) {
        const skott::SummaryRow row =
            skott::summarize(algo, skott::runs_for(records, algo), baseline_runs,
                             budget > 0.0 ? budget : 1.0);
        const double spt = budget > 0.0 ? row.spt : std::nan("");
        j["rows"].push_back({{"algo", row.algo},
                             {"spt", spt},
                             {"clk", row.clk},
                             {"cpc", row.cpc},
                             {"kld", row.kld}});
        std::printf("%-20s %7.1f%% %7.1f%% %8.3f %8.3f\n", row.algo.c_str(), spt, row.clk, row.cpc,
                    row.kld);
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write '" + out_path + "'");
        out << j.dump(2) << "\n";
        std::printf("summary written to %s\n", out_path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"campaign optimizer back-test harness"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "execute an experiment plan");
    run->add_option("--plan", run_opt.plan_path, "experiment plan JSON")->required();
    std::uint64_t seed_value = 0;
    int reps_value = 0;
    std::string out_value, stacks_value, slot_value;
    bool day_parting_value = false;
    auto* seed_opt = run->add_option("--seed", seed_value, "master seed override");
    auto* reps_opt = run->add_option("--reps", reps_value, "repetition count override");
    auto* out_opt = run->add_option("--out", out_value, "output directory override");
    auto* dp_opt = run->add_option("--day-parting", day_parting_value, "day parting override");
    auto* stacks_opt = run->add_option("--stacks", stacks_value, "comma separated stack list");
    auto* slot_opt = run->add_option("--slot", slot_value, "hour slot 0..23 or 'all'");

    std::string truth_plan, truth_in, truth_out = "truth.json";
    std::uint64_t truth_seed = 0;
    int truth_rep = 0;
    CLI::App* truth = app.add_subcommand("truth", "dump or load a market truth");
    truth->add_option("--plan", truth_plan, "experiment plan JSON (dump mode)");
    truth->add_option("--in", truth_in, "truth JSON to load and describe");
    auto* truth_seed_opt = truth->add_option("--seed", truth_seed, "master seed override");
    truth->add_option("--rep", truth_rep, "repetition index (dump mode)");
    truth->add_option("--out", truth_out, "output truth JSON path (dump mode)");

    std::string report_in, report_out, report_baseline, report_smoothed;
    double report_budget = 0.0;
    CLI::App* report = app.add_subcommand("report", "re-summarize a per-epoch CSV");
    report->add_option("--in", report_in, "per-epoch CSV")->required();
    report->add_option("--out", report_out, "summary JSON path");
    report->add_option("--baseline", report_baseline, "baseline algorithm for clk");
    report->add_option("--budget", report_budget, "campaign budget (enables spt)");
    report->add_option("--smoothed", report_smoothed, "also write a smoothed per-epoch CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (*seed_opt) run_opt.seed = seed_value;
            if (*reps_opt) run_opt.reps = reps_value;
            if (*out_opt) run_opt.out = out_value;
            if (*dp_opt) run_opt.day_parting = day_parting_value;
            if (*stacks_opt) run_opt.stacks = stacks_value;
            if (*slot_opt) run_opt.slot = slot_value;
            return cmd_run(run_opt);
        }
        if (truth->parsed()) {
            if (truth_in.empty() && truth_plan.empty()) {
                std::fprintf(stderr, "error: truth needs --plan (dump) or --in (load)\n");
                return 1;
            }
            std::optional<std::uint64_t> seed;
            if (*truth_seed_opt) seed = truth_seed;
            return cmd_truth(truth_plan, truth_in, seed, truth_rep, truth_out);
        }
        if (report->parsed()) {
            return cmd_report(report_in, report_out, report_baseline, report_budget,
                              report_smoothed);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
