#include "skott/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "skott/bid_setter.hpp"
#include "skott/pacer.hpp"
#include "skott/partitioner.hpp"
#include "skott/preprocess.hpp"

namespace skott {

std::string StackSpec::name() const {
    std::vector<std::string> parts;
    switch (partitioner) {
        case PartitionerKind::none: break;
        case PartitionerKind::mab: parts.emplace_back("mab"); break;
        case PartitionerKind::lop: parts.emplace_back("lop"); break;
        case PartitionerKind::skt1: parts.emplace_back("skt1"); break;
    }
    switch (bidder) {
        case BidderKind::none: break;
        case BidderKind::pst: parts.emplace_back("pst"); break;
        case BidderKind::skt2: parts.emplace_back("skt2"); break;
    }
    if (pacing) parts.emplace_back("skt3");
    if (parts.empty()) return "vnl";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += "+" + parts[i];
    return out;
}

StackSpec StackSpec::parse(const std::string& text) {
    StackSpec spec;
    bool saw_vnl = false;
    int tokens = 0;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, '+')) {
        ++tokens;
        if (token == "vnl") {
            saw_vnl = true;
        } else if (token == "mab" || token == "lop" || token == "skt1") {
            if (spec.partitioner != PartitionerKind::none) {
                throw std::invalid_argument("stack '" + text + "' has two partitioners");
            }
            spec.partitioner = token == "mab"   ? PartitionerKind::mab
                               : token == "lop" ? PartitionerKind::lop
                                                : PartitionerKind::skt1;
        } else if (token == "pst" || token == "skt2") {
            if (spec.bidder != BidderKind::none) {
                throw std::invalid_argument("stack '" + text + "' has two bid setters");
            }
            spec.bidder = token == "pst" ? BidderKind::pst : BidderKind::skt2;
        } else if (token == "skt3") {
            spec.pacing = true;
        } else {
            throw std::invalid_argument("unknown stack component '" + token + "'");
        }
    }
    if (tokens == 0) throw std::invalid_argument("empty stack specification");
    if (saw_vnl && tokens > 1) {
        throw std::invalid_argument("'vnl' cannot be combined with other components");
    }
    return spec;
}

void ExperimentPlan::validate() const {
    campaign.validate();
    simulator.validate();
    baselines.pst.validate();
    if (stacks.empty()) throw std::invalid_argument("plan needs at least one stack");
    if (slot != "all") {
        const int h = std::stoi(slot);
        if (h < 0 || h > 23) throw std::invalid_argument("slot must be 'all' or 0..23");
    }
    if (!baseline.empty()) {
        const bool found = std::any_of(stacks.begin(), stacks.end(), [this](const StackSpec& s) {
            return s.name() == baseline;
        });
        if (!found) throw std::invalid_argument("baseline '" + baseline + "' is not among the stacks");
    }
}

namespace {

using nlohmann::json;

[[noreturn]] void plan_error(const std::string& what) {
    throw std::invalid_argument("experiment plan: " + what);
}

std::array<double, 2> interval_from(const json& j) {
    if (!j.is_array() || j.size() != 2) plan_error("intervals must be [low, high]");
    return {j[0].get<double>(), j[1].get<double>()};
}

SimulatorConfig simulator_from_json(const json& j) {
    SimulatorConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "ctr_interval") cfg.ctr_interval = interval_from(value);
        else if (key == "itot_interval") cfg.itot_interval = interval_from(value);
        else if (key == "beta_interval") cfg.beta_interval = interval_from(value);
        else if (key == "gap_probability") cfg.gap_probability = value.get<double>();
        else if (key == "schedule") {
            for (const json& m : value) {
                TruthModifier mod;
                mod.epoch = m.at("epoch").get<int>();
                mod.media_object = m.at("media_object").get<int>();
                mod.field = truth_field_from_string(m.at("field").get<std::string>());
                mod.multiplier = m.at("multiplier").get<double>();
                cfg.schedule.push_back(mod);
            }
        } else plan_error("unknown simulator key '" + key + "'");
    }
    return cfg;
}

void baselines_from_json(const json& j, BaselineParams& p) {
    for (const auto& [key, value] : j.items()) {
        if (key == "exp3_gamma") p.exp3.gamma = value.get<double>();
        else if (key == "exp3_smoothing") p.exp3.smoothing = value.get<double>();
        else if (key == "exp3_cpc_goal") p.exp3.cpc_goal = value.get<double>();
        else if (key == "lop_alpha_lower") p.lop.alpha_lower = value.get<double>();
        else if (key == "lop_alpha_upper") p.lop.alpha_upper = value.get<double>();
        else if (key == "lop_discount") p.lop.discount = value.get<double>();
        else if (key == "pst_cpc_goal") p.pst.cpc_goal = value.get<double>();
        else if (key == "pst_down") p.pst.down_multiplier = value.get<double>();
        else if (key == "pst_up") p.pst.up_multiplier = value.get<double>();
        else if (key == "pst_underdelivery") p.pst.underdelivery_ratio = value.get<double>();
        else plan_error("unknown baselines key '" + key + "'");
    }
}

}  // namespace

ExperimentPlan plan_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        plan_error(e.what());
    }
    if (!j.is_object()) plan_error("top-level value must be an object");

    ExperimentPlan plan;
    for (const auto& [key, value] : j.items()) {
        if (key == "campaign") plan.campaign = campaign_config_from_json_text(value.dump());
        else if (key == "simulator") plan.simulator = simulator_from_json(value);
        else if (key == "baselines") continue;  // needs campaign defaults first
        else if (key == "stacks") {
            for (const json& s : value) plan.stacks.push_back(StackSpec::parse(s.get<std::string>()));
        } else if (key == "baseline") plan.baseline = value.get<std::string>();
        else if (key == "output_dir") plan.output_dir = value.get<std::string>();
        else if (key == "slot") {
            plan.slot = value.is_number() ? std::to_string(value.get<int>())
                                          : value.get<std::string>();
        } else if (key == "spend_profile_csv") {
            plan.spend_profile_csv = value.get<std::string>();
        } else plan_error("unknown key '" + key + "'");
    }
    plan.baselines.exp3.cpc_goal = plan.campaign.cpc_goal;
    plan.baselines.pst.cpc_goal = plan.campaign.cpc_goal;
    plan.baselines.lop.discount = plan.campaign.discount;
    plan.baselines.exp3.smoothing = plan.campaign.discount;
    if (j.contains("baselines")) baselines_from_json(j.at("baselines"), plan.baselines);
    if (plan.baseline.empty() && !plan.stacks.empty()) plan.baseline = plan.stacks.front().name();
    return plan;
}

ExperimentPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) plan_error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    ExperimentPlan plan = plan_from_json_text(buf.str());
    apply_env_overrides(plan.campaign);
    return plan;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t repetition, std::string_view tag) {
    std::uint64_t h = 14695981039346656037ull;
    const auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(master);
    mix(repetition);
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

RunSeeds RunSeeds::for_run(std::uint64_t master, int repetition, const std::string& stack_name,
                           const std::string& scope_tag) {
    const auto rep = static_cast<std::uint64_t>(repetition);
    RunSeeds s;
    s.truth = derive_seed(master, rep, "truth" + scope_tag);
    s.market = derive_seed(master, rep, "market" + scope_tag);
    s.algo = derive_seed(master, rep, stack_name + "/algo" + scope_tag);
    s.gaps = derive_seed(master, rep, "gaps" + scope_tag);
    return s;
}

namespace {

double vector_sum(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

WeightVector weights_of(const std::vector<double>& budgets) {
    const double sum = vector_sum(budgets);
    if (sum > 0.0) return WeightVector::normalized(budgets);
    return WeightVector::uniform(static_cast<int>(budgets.size()));
}

// Drops observation cells per the fault mask and fills them back with the
// gap pipeline over each series' own history, the way a production loop
// would repair a patchy feed before optimizing on it.
class GapFilter {
public:
    GapFilter(int k, double probability, std::uint64_t seed)
        : p_(probability), rng_(seed),
          impressions_(static_cast<std::size_t>(k)),
          clicks_(static_cast<std::size_t>(k)),
          spend_(static_cast<std::size_t>(k)) {}

    EpochObservation filter(const EpochObservation& obs) {
        if (p_ <= 0.0) return obs;
        std::bernoulli_distribution missing(p_);
        EpochObservation out = obs;
        const auto k = impressions_.size();
        for (std::size_t i = 0; i < k; ++i) {
            out.impressions[i] = push(impressions_[i], obs.impressions[i], missing);
            out.clicks[i] = push(clicks_[i], obs.clicks[i], missing);
            out.spend[i] = push(spend_[i], obs.spend[i], missing);
            out.clicks[i] = std::min(out.clicks[i], out.impressions[i]);
        }
        out.validate();
        return out;
    }

private:
    double push(TimeSeries& hist, double value, std::bernoulli_distribution& missing) {
        if (missing(rng_)) {
            hist.push_back(std::nan(""));
            const bool any_valid =
                std::any_of(hist.begin(), hist.end(), [](double v) { return !is_missing(v); });
            if (!any_valid) return 0.0;  // nothing observed yet
            return preprocess(hist).back();
        }
        hist.push_back(value);
        return value;
    }

    double p_;
    std::mt19937_64 rng_;
    std::vector<TimeSeries> impressions_, clicks_, spend_;
};

// One optimizer stack bound to one (slot-scoped) campaign: owns the weights,
// accumulators, bid state and pacing state, and produces the budgets and bids
// for its next epoch after each observation.
class Instance {
public:
    Instance(const StackSpec& stack, const CampaignConfig& cfg, const BaselineParams& baselines,
             std::uint64_t algo_seed, SpendProfile profile)
        : stack_(stack),
          cfg_(cfg),
          profile_(std::move(profile)),
          pparams_(PartitionerParams::from(cfg)),
          nadam_(NadamHyper::from(cfg)),
          w_(WeightVector::uniform(cfg.media_objects)),
          acc_(MediaObjectAccumulators::initial(cfg.media_objects, cfg.initial_bid)),
          betas_(static_cast<std::size_t>(cfg.media_objects), cfg.initial_bid),
          bids_(static_cast<std::size_t>(cfg.media_objects), cfg.initial_bid),
          rng_(algo_seed) {
        if (stack.partitioner == PartitionerKind::mab) {
            exp3_.emplace(cfg.media_objects, baselines.exp3);
        } else if (stack.partitioner == PartitionerKind::lop) {
            lop_.emplace(cfg.media_objects, baselines.lop);
        }
        pst_params_ = baselines.pst;
        epoch_total_ = profile_.ideal_epoch_budget(0);
        rebuild_budgets();
    }

    const std::vector<double>& budgets() const { return budgets_; }
    const std::vector<double>& bids() const { return bids_; }
    bool finished() const { return next_epoch_ >= cfg_.epochs; }

    // Consumes the (possibly gap-repaired) observation of the epoch that was
    // just simulated with budgets()/bids(), then prepares the next epoch.
    void advance(const EpochObservation& obs) {
        const int t = next_epoch_;
        actual_cum_ += vector_sum(obs.spend);
        ++next_epoch_;
        if (finished()) return;

        const int day = cfg_.day_parting ? t : t / 24;
        if (stack_.partitioner == PartitionerKind::skt1) {
            PartitionStep step = partition_step(acc_, obs, budgets_, w_, pparams_, day);
            acc_ = std::move(step.acc);
            w_ = std::move(step.weights);
        }

        if (stack_.bidder == BidderKind::skt2) {
            BidStepResult r = bid_step(acc_, obs, budgets_, std::move(betas_), cfg_, nadam_);
            acc_ = std::move(r.acc);
            betas_ = std::move(r.betas);
            bids_ = acc_.bids;
        } else if (stack_.bidder == BidderKind::pst) {
            bids_ = pst_step(pst_params_, obs, budgets_, std::move(bids_), cfg_.bid_lower,
                             cfg_.bid_upper);
            acc_.bids = bids_;
        }

        if (stack_.pacing) {
            epoch_total_ = pacing_step(profile_.ideal_cumulative(t), actual_cum_,
                                       profile_.ideal_epoch_budget(t + 1), cfg_.aggressiveness,
                                       cfg_.epochs - (t + 1));
        } else {
            epoch_total_ = profile_.ideal_epoch_budget(t + 1);
        }

        switch (stack_.partitioner) {
            case PartitionerKind::none:
            case PartitionerKind::skt1:
                rebuild_budgets();
                break;
            case PartitionerKind::mab:
                budgets_ = exp3_->budget_step(obs, epoch_total_, rng_);
                break;
            case PartitionerKind::lop:
                budgets_ = lop_->step(obs, epoch_total_);
                break;
        }
    }

private:
    void rebuild_budgets() {
        budgets_.resize(static_cast<std::size_t>(cfg_.media_objects));
        for (int i = 0; i < cfg_.media_objects; ++i) {
            budgets_[static_cast<std::size_t>(i)] = w_[i] * epoch_total_;
        }
    }

    StackSpec stack_;
    CampaignConfig cfg_;
    SpendProfile profile_;
    PartitionerParams pparams_;
    NadamHyper nadam_;
    PstParams pst_params_;
    WeightVector w_;
    MediaObjectAccumulators acc_;
    std::vector<double> betas_;
    std::vector<double> bids_;
    std::vector<double> budgets_;
    double epoch_total_ = 0.0;
    double actual_cum_ = 0.0;
    int next_epoch_ = 0;
    std::optional<Exp3Partitioner> exp3_;
    std::optional<LopPartitioner> lop_;
    std::mt19937_64 rng_;
};

void record_epoch(RunMetrics& m, const EpochObservation& obs, const WeightVector& w_used,
                  double& cum_spend, double& cum_clicks) {
    const double spend = vector_sum(obs.spend);
    const double clicks = vector_sum(obs.clicks);
    cum_spend += spend;
    cum_clicks += clicks;
    m.spend.push_back(spend);
    m.clicks.push_back(clicks);
    m.cumulative_cpc.push_back(cum_clicks > 0.0 ? cum_spend / cum_clicks
                                                : std::numeric_limits<double>::infinity());
    m.rescaled_kld.push_back(kl_divergence_rescaled(w_used));
}

void check_profile(const SpendProfile& profile, const CampaignConfig& cfg) {
    if (profile.epochs() != cfg.epochs) {
        throw std::invalid_argument("spend profile must cover exactly the campaign epochs");
    }
    if (std::abs(profile.total() - cfg.total_budget) > 1e-6 * std::max(cfg.total_budget, 1.0)) {
        throw std::invalid_argument("spend profile must end at the total budget");
    }
}

}  // namespace

CampaignResult run_campaign(const StackSpec& stack, const CampaignConfig& cfg,
                            const SimulatorConfig& sim_cfg, const BaselineParams& baselines,
                            const RunSeeds& seeds) {
    return run_campaign(stack, cfg, sim_cfg, baselines, seeds,
                        SpendProfile::uniform(cfg.total_budget, cfg.epochs));
}

CampaignResult run_campaign(const StackSpec& stack, const CampaignConfig& cfg,
                            const SimulatorConfig& sim_cfg, const BaselineParams& baselines,
                            const RunSeeds& seeds, const SpendProfile& profile) {
    cfg.validate();
    sim_cfg.validate();
    check_profile(profile, cfg);

    const MarketTruth truth = generate_truth(sim_cfg, cfg.media_objects, seeds.truth);
    MarketSimulator sim(truth, seeds.market);
    GapFilter gaps(cfg.media_objects, sim_cfg.gap_probability, seeds.gaps);
    Instance inst(stack, cfg, baselines, seeds.algo, profile);

    CampaignResult out;
    out.truth_hash = truth.hash();
    double cum_spend = 0.0;
    double cum_clicks = 0.0;
    for (int t = 0; t < cfg.epochs; ++t) {
        const WeightVector w_used = weights_of(inst.budgets());
        const EpochObservation obs = sim.epoch(t, inst.budgets(), inst.bids());
        record_epoch(out.metrics, obs, w_used, cum_spend, cum_clicks);
        inst.advance(gaps.filter(obs));
    }
    return out;
}

CampaignConfig slot_config(const CampaignConfig& cfg) {
    if (cfg.epochs % 24 != 0) {
        throw std::invalid_argument("hourly campaign length must be a multiple of 24");
    }
    CampaignConfig slot = cfg;
    slot.epochs = cfg.epochs / 24;
    slot.total_budget = cfg.total_budget / 24.0;
    slot.day_parting = true;
    slot.aggressiveness = std::min(cfg.aggressiveness, static_cast<double>(slot.epochs));
    return slot;
}

CampaignResult run_day_parted(const StackSpec& stack, const CampaignConfig& cfg,
                              const SimulatorConfig& sim_cfg, const BaselineParams& baselines,
                              const RunSeeds& seeds) {
    cfg.validate();
    sim_cfg.validate();
    const CampaignConfig slot = slot_config(cfg);

    const MarketTruth truth = generate_truth(sim_cfg, cfg.media_objects, seeds.truth);
    MarketSimulator sim(truth, seeds.market);
    GapFilter gaps(cfg.media_objects, sim_cfg.gap_probability, seeds.gaps);

    std::vector<Instance> instances;
    instances.reserve(24);
    for (int h = 0; h < 24; ++h) {
        instances.emplace_back(stack, slot, baselines,
                               derive_seed(seeds.algo, static_cast<std::uint64_t>(h), "slot"),
                               SpendProfile::uniform(slot.total_budget, slot.epochs));
    }

    CampaignResult out;
    out.truth_hash = truth.hash();
    double cum_spend = 0.0;
    double cum_clicks = 0.0;
    for (int t = 0; t < cfg.epochs; ++t) {
        Instance& inst = instances[static_cast<std::size_t>(t % 24)];
        const WeightVector w_used = weights_of(inst.budgets());
        const EpochObservation obs = sim.epoch(t, inst.budgets(), inst.bids());
        record_epoch(out.metrics, obs, w_used, cum_spend, cum_clicks);
        inst.advance(gaps.filter(obs));
    }
    return out;
}

ExperimentSummary run_experiment(const ExperimentPlan& plan) {
    plan.validate();
    const CampaignConfig& cfg = plan.campaign;

    // Resolve the execution mode. A day-parted campaign whose length is not
    // a multiple of 24 is treated as a single already-sliced slot.
    enum class Mode { plain, day_parted_all, single_slot };
    Mode mode = Mode::plain;
    std::string scope_tag;
    if (cfg.day_parting && cfg.epochs % 24 == 0) {
        if (plan.slot == "all") {
            mode = Mode::day_parted_all;
        } else {
            mode = Mode::single_slot;
            scope_tag = "/slot" + plan.slot;
        }
    }

    std::optional<SpendProfile> profile;
    if (!plan.spend_profile_csv.empty()) {
        if (mode == Mode::day_parted_all) {
            throw std::invalid_argument(
                "custom spend profiles require a single-slot or non-day-parted run");
        }
        profile = SpendProfile::load_csv(plan.spend_profile_csv);
        check_profile(*profile, mode == Mode::single_slot ? slot_config(cfg) : cfg);
    }

    ExperimentSummary summary;
    summary.repetitions = cfg.repetitions;

    struct StackRuns {
        std::string name;
        std::vector<RunMetrics> runs;
    };
    std::vector<StackRuns> all_runs;
    std::vector<std::uint64_t> rep_hashes(static_cast<std::size_t>(cfg.repetitions), 0);
    std::vector<bool> rep_hash_set(static_cast<std::size_t>(cfg.repetitions), false);

    double effective_budget = cfg.total_budget;
    if (mode == Mode::single_slot) effective_budget = cfg.total_budget / 24.0;

    for (const StackSpec& stack : plan.stacks) {
        StackRuns stack_runs;
        stack_runs.name = stack.name();
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
            const RunSeeds seeds = RunSeeds::for_run(cfg.seed, rep, stack_runs.name, scope_tag);
            try {
                CampaignResult result;
                switch (mode) {
                    case Mode::plain:
                        result = profile ? run_campaign(stack, cfg, plan.simulator,
                                                        plan.baselines, seeds, *profile)
                                         : run_campaign(stack, cfg, plan.simulator,
                                                        plan.baselines, seeds);
                        break;
                    case Mode::day_parted_all:
                        result = run_day_parted(stack, cfg, plan.simulator, plan.baselines, seeds);
                        break;
                    case Mode::single_slot: {
                        const CampaignConfig sliced = slot_config(cfg);
                        result = profile ? run_campaign(stack, sliced, plan.simulator,
                                                        plan.baselines, seeds, *profile)
                                         : run_campaign(stack, sliced, plan.simulator,
                                                        plan.baselines, seeds);
                        break;
                    }
                }
                // Fairness: every stack of a repetition must see the same market.
                const auto r = static_cast<std::size_t>(rep);
                if (rep_hash_set[r] && rep_hashes[r] != result.truth_hash) {
                    throw std::logic_error("market truth diverged across stacks");
                }
                rep_hashes[r] = result.truth_hash;
                rep_hash_set[r] = true;

                for (int t = 0; t < result.metrics.epochs(); ++t) {
                    EpochRecord rec;
                    rec.repetition = rep;
                    rec.epoch = t;
                    rec.algo = stack_runs.name;
                    rec.spend = result.metrics.spend[static_cast<std::size_t>(t)];
                    rec.clicks = result.metrics.clicks[static_cast<std::size_t>(t)];
                    rec.cumulative_cpc = result.metrics.cumulative_cpc[static_cast<std::size_t>(t)];
                    rec.rescaled_kld = result.metrics.rescaled_kld[static_cast<std::size_t>(t)];
                    summary.records.push_back(std::move(rec));
                }
                stack_runs.runs.push_back(std::move(result.metrics));
            } catch (const std::exception& e) {
                summary.failures.push_back("stack=" + stack_runs.name + " repetition=" +
                                           std::to_string(rep) + " error=" + e.what());
            }
        }
        all_runs.push_back(std::move(stack_runs));
    }

    for (std::size_t r = 0; r < rep_hashes.size(); ++r) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(rep_hash_set[r] ? rep_hashes[r] : 0));
        summary.truth_hashes.emplace_back(buf);
    }

    const auto baseline_it =
        std::find_if(all_runs.begin(), all_runs.end(),
                     [&plan](const StackRuns& s) { return s.name == plan.baseline; });
    if (baseline_it == all_runs.end() || baseline_it->runs.empty()) {
        throw std::runtime_error("baseline stack '" + plan.baseline +
                                 "' produced no completed repetitions");
    }
    for (const StackRuns& s : all_runs) {
        if (s.runs.empty()) continue;  // fully failed stack, recorded above
        summary.rows.push_back(summarize(s.name, s.runs, baseline_it->runs, effective_budget));
    }
    return summary;
}

std::string summary_to_json_text(const ExperimentSummary& summary, const ExperimentPlan& plan) {
    nlohmann::json j;
    j["master_seed"] = plan.campaign.seed;
    j["repetitions"] = summary.repetitions;
    j["baseline"] = plan.baseline;
    j["total_budget"] = plan.campaign.total_budget;
    j["truth_hashes"] = summary.truth_hashes;
    j["failures"] = summary.failures;
    j["rows"] = nlohmann::json::array();
    for (const SummaryRow& row : summary.rows) {
        j["rows"].push_back({{"algo", row.algo},
                             {"spt", row.spt},
                             {"clk", row.clk},
                             {"cpc", row.cpc},
                             {"kld", row.kld}});
    }
    return j.dump(2) + "\n";
}

void write_experiment_outputs(const ExperimentSummary& summary, const ExperimentPlan& plan) {
    std::filesystem::create_directories(plan.output_dir);
    write_per_epoch_csv(summary.records,
                        (std::filesystem::path(plan.output_dir) / "per_epoch.csv").string());
    std::ofstream out(std::filesystem::path(plan.output_dir) / "summary.json", std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write summary.json");
    out << summary_to_json_text(summary, plan);
}

}  // namespace skott
