#include "skott/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace skott {

void CampaignConfig::validate() const {
    if (!(total_budget >= 0.0)) throw std::invalid_argument("total_budget must be >= 0");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (media_objects < 1) throw std::invalid_argument("media_objects must be >= 1");
    if (!(cpc_goal > 0.0)) throw std::invalid_argument("cpc_goal must be > 0");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (!(discount >= 0.0 && discount <= 1.0)) throw std::invalid_argument("discount must be in [0,1]");
    if (!(exploration > 0.0)) throw std::invalid_argument("exploration must be > 0");
    if (!(regularization_discount > 0.0 && regularization_discount <= 1.0)) {
        throw std::invalid_argument("regularization_discount must be in (0,1]");
    }
    if (!(delivery_threshold > 0.0 && delivery_threshold <= 1.0)) {
        throw std::invalid_argument("delivery_threshold must be in (0,1]");
    }
    if (!(aggressiveness >= 1.0)) throw std::invalid_argument("aggressiveness must be >= 1");
    if (!(aggressiveness <= static_cast<double>(epochs))) {
        throw std::invalid_argument("aggressiveness must not exceed the number of epochs");
    }
    if (!(bid_lower >= 0.0)) throw std::invalid_argument("bid_lower must be >= 0");
    if (!(bid_upper > bid_lower)) throw std::invalid_argument("bid_upper must exceed bid_lower");
    if (!(budget_min >= 0.0)) throw std::invalid_argument("budget_min must be >= 0");
    if (!(initial_bid >= bid_lower && initial_bid <= bid_upper)) {
        throw std::invalid_argument("initial_bid must lie in [bid_lower, bid_upper]");
    }
}

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
    throw std::invalid_argument("campaign config: " + what);
}

}  // namespace

CampaignConfig campaign_config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        config_error(e.what());
    }
    if (!j.is_object()) config_error("top-level value must be an object");

    CampaignConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "total_budget") cfg.total_budget = value.get<double>();
        else if (key == "epochs") cfg.epochs = value.get<int>();
        else if (key == "media_objects") cfg.media_objects = value.get<int>();
        else if (key == "day_parting") cfg.day_parting = value.get<bool>();
        else if (key == "cpc_goal") cfg.cpc_goal = value.get<double>();
        else if (key == "repetitions") cfg.repetitions = value.get<int>();
        else if (key == "learning_rate") cfg.learning_rate = value.get<double>();
        else if (key == "discount") cfg.discount = value.get<double>();
        else if (key == "exploration") cfg.exploration = value.get<double>();
        else if (key == "regularization_discount") cfg.regularization_discount = value.get<double>();
        else if (key == "delivery_threshold") cfg.delivery_threshold = value.get<double>();
        else if (key == "aggressiveness") cfg.aggressiveness = value.get<double>();
        else if (key == "bid_lower") cfg.bid_lower = value.get<double>();
        else if (key == "bid_upper") cfg.bid_upper = value.get<double>();
        else if (key == "budget_min") cfg.budget_min = value.get<double>();
        else if (key == "initial_bid") cfg.initial_bid = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else config_error("unknown key '" + key + "'");
    }
    return cfg;
}

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return campaign_config_from_json_text(buf.str());
}

namespace {

bool env_bool(const char* text) {
    std::string v(text);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    config_error("boolean override must be true/false, got '" + v + "'");
}

template <typename T, typename Parse>
void override_from_env(const char* name, T& field, Parse parse) {
    if (const char* text = std::getenv(name)) field = parse(text);
}

}  // namespace

void apply_env_overrides(CampaignConfig& cfg) {
    const auto as_double = [](const char* t) { return std::strtod(t, nullptr); };
    const auto as_int = [](const char* t) { return static_cast<int>(std::strtol(t, nullptr, 10)); };
    const auto as_u64 = [](const char* t) { return static_cast<std::uint64_t>(std::strtoull(t, nullptr, 10)); };
    override_from_env("SKOTT_total_budget", cfg.total_budget, as_double);
    override_from_env("SKOTT_epochs", cfg.epochs, as_int);
    override_from_env("SKOTT_media_objects", cfg.media_objects, as_int);
    override_from_env("SKOTT_day_parting", cfg.day_parting, env_bool);
    override_from_env("SKOTT_cpc_goal", cfg.cpc_goal, as_double);
    override_from_env("SKOTT_repetitions", cfg.repetitions, as_int);
    override_from_env("SKOTT_learning_rate", cfg.learning_rate, as_double);
    override_from_env("SKOTT_discount", cfg.discount, as_double);
    override_from_env("SKOTT_exploration", cfg.exploration, as_double);
    override_from_env("SKOTT_regularization_discount", cfg.regularization_discount, as_double);
    override_from_env("SKOTT_delivery_threshold", cfg.delivery_threshold, as_double);
    override_from_env("SKOTT_aggressiveness", cfg.aggressiveness, as_double);
    override_from_env("SKOTT_bid_lower", cfg.bid_lower, as_double);
    override_from_env("SKOTT_bid_upper", cfg.bid_upper, as_double);
    override_from_env("SKOTT_budget_min", cfg.budget_min, as_double);
    override_from_env("SKOTT_initial_bid", cfg.initial_bid, as_double);
    override_from_env("SKOTT_seed", cfg.seed, as_u64);
}

WeightVector::WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw std::invalid_argument("weight vector must not be empty");
    double sum = 0.0;
    for (double w : w_) {
        if (!(w >= 0.0)) throw std::invalid_argument("weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("weights must sum to 1");
}

WeightVector WeightVector::uniform(int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    return WeightVector(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
}

WeightVector WeightVector::normalized(std::vector<double> raw) {
    double sum = 0.0;
    for (double w : raw) {
        if (!(w >= 0.0)) throw std::invalid_argument("weights must be non-negative");
        sum += w;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("weights must have a positive sum");
    for (double& w : raw) w /= sum;
    return WeightVector(std::move(raw));
}

void EpochObservation::validate() const {
    const std::size_t k = impressions.size();
    if (clicks.size() != k || spend.size() != k) {
        throw std::invalid_argument("observation fields must have equal length");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!(impressions[i] >= 0.0) || !(clicks[i] >= 0.0) || !(spend[i] >= 0.0)) {
            throw std::invalid_argument("observation values must be non-negative");
        }
        if (clicks[i] > impressions[i]) {
            throw std::invalid_argument("clicks cannot exceed impressions");
        }
    }
}

MediaObjectAccumulators MediaObjectAccumulators::initial(int k, double initial_bid) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    MediaObjectAccumulators acc;
    const auto n = static_cast<std::size_t>(k);
    acc.disc_clicks.assign(n, 0.0);
    acc.disc_budgets.assign(n, 0.0);
    acc.bids.assign(n, initial_bid);
    acc.nadam_m.assign(n, 0.0);
    acc.nadam_n.assign(n, 0.0);
    return acc;
}

MediaObjectAccumulators update_discounted(const MediaObjectAccumulators& acc,
                                          const EpochObservation& obs,
                                          const std::vector<double>& allocated,
                                          double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0,1]");
    obs.validate();
    const auto k = static_cast<std::size_t>(acc.size());
    if (obs.impressions.size() != k || allocated.size() != k) {
        throw std::invalid_argument("dimension mismatch");
    }
    MediaObjectAccumulators out = acc;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(allocated[i] >= 0.0)) throw std::invalid_argument("allocated budgets must be >= 0");
        out.disc_clicks[i] = obs.clicks[i] + gamma * acc.disc_clicks[i];
        out.disc_budgets[i] = allocated[i] + gamma * acc.disc_budgets[i];
    }
    return out;
}

namespace {

double parse_cell(const std::string& cell) {
    std::string v;
    for (char c : cell) {
        if (!std::isspace(static_cast<unsigned char>(c))) v += c;
    }
    if (v.empty()) return std::nan("");
    std::string lower = v;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "nan") return std::nan("");
    std::size_t used = 0;
    const double parsed = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("bad numeric cell '" + cell + "'");
    return parsed;
}

}  // namespace

ObservationSeries observation_series_from_csv_text(const std::string& text) {
    struct Row {
        int epoch;
        int mo;
        double n, c, s;
    };
    std::vector<Row> rows;
    int max_epoch = -1;
    int max_mo = -1;

    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        while (cells.size() < 5) cells.emplace_back();
        if (first) {
            first = false;
            if (line.find("epoch") != std::string::npos) continue;  // header
        }
        if (cells.size() > 5) throw std::invalid_argument("observation CSV expects 5 columns");
        Row r;
        r.epoch = static_cast<int>(parse_cell(cells[0]));
        r.mo = static_cast<int>(parse_cell(cells[1]));
        if (r.epoch < 0 || r.mo < 0) throw std::invalid_argument("epoch and media_object_id must be >= 0");
        r.n = parse_cell(cells[2]);
        r.c = parse_cell(cells[3]);
        r.s = parse_cell(cells[4]);
        max_epoch = std::max(max_epoch, r.epoch);
        max_mo = std::max(max_mo, r.mo);
        rows.push_back(r);
    }
    if (rows.empty()) throw std::invalid_argument("observation CSV has no data rows");

    ObservationSeries out;
    out.media_objects = max_mo + 1;
    out.epochs = max_epoch + 1;
    const TimeSeries blank(static_cast<std::size_t>(out.epochs), std::nan(""));
    out.impressions.assign(static_cast<std::size_t>(out.media_objects), blank);
    out.clicks.assign(static_cast<std::size_t>(out.media_objects), blank);
    out.spend.assign(static_cast<std::size_t>(out.media_objects), blank);
    for (const Row& r : rows) {
        out.impressions[r.mo][r.epoch] = r.n;
        out.clicks[r.mo][r.epoch] = r.c;
        out.spend[r.mo][r.epoch] = r.s;
    }
    return out;
}

ObservationSeries load_observation_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return observation_series_from_csv_text(buf.str());
}

ObservationSeries preprocess(ObservationSeries series) {
    for (auto& s : series.impressions) s = preprocess(std::move(s));
    for (auto& s : series.clicks) s = preprocess(std::move(s));
    for (auto& s : series.spend) s = preprocess(std::move(s));
    return series;
}

std::vector<EpochObservation> to_epoch_observations(const ObservationSeries& series) {
    std::vector<EpochObservation> out;
    out.reserve(static_cast<std::size_t>(series.epochs));
    for (int t = 0; t < series.epochs; ++t) {
        EpochObservation obs;
        for (int m = 0; m < series.media_objects; ++m) {
            const double n = series.impressions[m][t];
            double c = series.clicks[m][t];
            const double s = series.spend[m][t];
            if (is_missing(n) || is_missing(c) || is_missing(s)) {
                throw std::invalid_argument("series still contains gaps; preprocess first");
            }
            c = std::min(c, n);
            obs.impressions.push_back(n);
            obs.clicks.push_back(c);
            obs.spend.push_back(s);
        }
        obs.validate();
        out.push_back(std::move(obs));
    }
    return out;
}

}  // namespace skott
