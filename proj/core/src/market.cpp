#include "skott/market.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "skott/bid_landscape.hpp"

namespace skott {

std::string to_string(TruthField field) {
    switch (field) {
        case TruthField::ctr: return "ctr";
        case TruthField::itot: return "itot";
        case TruthField::beta: return "beta";
    }
    throw std::logic_error("unreachable");
}

TruthField truth_field_from_string(const std::string& name) {
    if (name == "ctr") return TruthField::ctr;
    if (name == "itot") return TruthField::itot;
    if (name == "beta") return TruthField::beta;
    throw std::invalid_argument("unknown truth field '" + name + "'");
}

void MarketTruth::validate() const {
    const auto k = ctr.size();
    if (itot.size() != k || beta.size() != k || k == 0) {
        throw std::invalid_argument("truth fields must be non-empty and equally sized");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!(ctr[i] >= 0.0 && ctr[i] <= 1.0)) throw std::invalid_argument("ctr must be in [0,1]");
        if (!(itot[i] >= 0.0)) throw std::invalid_argument("itot must be >= 0");
        if (!(beta[i] > 0.0)) throw std::invalid_argument("beta must be > 0");
    }
    for (const TruthModifier& m : schedule) {
        if (m.epoch < 0 || m.media_object < 0 || m.media_object >= static_cast<int>(k)) {
            throw std::invalid_argument("schedule entry references an invalid epoch/media object");
        }
        if (!(m.multiplier >= 0.0)) throw std::invalid_argument("multiplier must be >= 0");
    }
}

namespace {

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;  // FNV-1a
    }
}

void hash_doubles(std::uint64_t& h, const std::vector<double>& v) {
    for (double d : v) hash_bytes(h, &d, sizeof(d));
}

}  // namespace

std::uint64_t MarketTruth::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    hash_doubles(h, ctr);
    hash_doubles(h, itot);
    hash_doubles(h, beta);
    for (const TruthModifier& m : schedule) {
        hash_bytes(h, &m.epoch, sizeof(m.epoch));
        hash_bytes(h, &m.media_object, sizeof(m.media_object));
        const int f = static_cast<int>(m.field);
        hash_bytes(h, &f, sizeof(f));
        hash_bytes(h, &m.multiplier, sizeof(m.multiplier));
    }
    return h;
}

void SimulatorConfig::validate() const {
    const auto ordered = [](const std::array<double, 2>& iv) { return iv[0] <= iv[1]; };
    if (!ordered(ctr_interval) || !ordered(itot_interval) || !ordered(beta_interval)) {
        throw std::invalid_argument("interval bounds must satisfy low <= high");
    }
    if (!(ctr_interval[0] >= 0.0 && ctr_interval[1] <= 1.0)) {
        throw std::invalid_argument("ctr interval must lie in [0,1]");
    }
    if (!(itot_interval[0] >= 0.0)) throw std::invalid_argument("itot interval must be >= 0");
    if (!(beta_interval[0] > 0.0)) throw std::invalid_argument("beta interval must be > 0");
    if (!(gap_probability >= 0.0 && gap_probability <= 1.0)) {
        throw std::invalid_argument("gap_probability must be in [0,1]");
    }
}

MarketTruth generate_truth(const SimulatorConfig& cfg, int media_objects, std::uint64_t seed) {
    cfg.validate();
    if (media_objects < 1) throw std::invalid_argument("media_objects must be >= 1");
    std::mt19937_64 rng(seed);
    const auto draw = [&rng](const std::array<double, 2>& iv, int k) {
        std::uniform_real_distribution<double> dist(iv[0], iv[1]);
        std::vector<double> out(static_cast<std::size_t>(k));
        for (double& v : out) v = (iv[0] == iv[1]) ? iv[0] : dist(rng);
        return out;
    };
    MarketTruth truth;
    truth.ctr = draw(cfg.ctr_interval, media_objects);
    truth.itot = draw(cfg.itot_interval, media_objects);
    truth.beta = draw(cfg.beta_interval, media_objects);
    truth.schedule = cfg.schedule;
    truth.validate();
    return truth;
}

MarketTruth evolve_truth(const MarketTruth& base, int epoch) {
    if (epoch < 0) throw std::invalid_argument("epoch must be >= 0");
    if (base.schedule.empty()) return base;
    MarketTruth out = base;
    for (const TruthModifier& m : base.schedule) {
        if (m.epoch != epoch) continue;
        const auto i = static_cast<std::size_t>(m.media_object);
        switch (m.field) {
            case TruthField::ctr:
                out.ctr[i] *= m.multiplier;
                if (out.ctr[i] > 1.0) {
                    std::cerr << "warning: ctr modifier at epoch " << epoch
                              << " exceeds 1, clamping\n";
                    out.ctr[i] = 1.0;
                }
                break;
            case TruthField::itot:
                out.itot[i] *= m.multiplier;
                break;
            case TruthField::beta:
                out.beta[i] *= m.multiplier;
                break;
        }
    }
    return out;
}

EpochObservation simulate_epoch(const MarketTruth& truth, const std::vector<double>& budgets,
                                const std::vector<double>& bids, std::mt19937_64& rng) {
    truth.validate();
    const auto k = static_cast<std::size_t>(truth.size());
    if (budgets.size() != k || bids.size() != k) throw std::invalid_argument("dimension mismatch");

    EpochObservation obs;
    obs.impressions.assign(k, 0.0);
    obs.clicks.assign(k, 0.0);
    obs.spend.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double budget = budgets[i];
        const double bid = bids[i];
        if (!(budget >= 0.0) || !(bid >= 0.0)) {
            throw std::invalid_argument("budgets and bids must be >= 0");
        }
        if (budget <= 0.0 || bid <= 0.0) continue;  // cannot buy at zero bid/budget

        const double cpm = expected_cpm(bid, truth.beta[i]);
        const double affordable = 1000.0 * budget / cpm;
        const double available = truth.itot[i] * win_probability(bid, truth.beta[i]);
        const auto n = static_cast<long long>(std::floor(std::min(affordable, available)));
        if (n <= 0) continue;

        obs.impressions[i] = static_cast<double>(n);
        obs.spend[i] = static_cast<double>(n) * cpm / 1000.0;
        if (truth.ctr[i] > 0.0) {
            std::binomial_distribution<long long> clicks(n, truth.ctr[i]);
            obs.clicks[i] = static_cast<double>(clicks(rng));
        }
    }
    obs.validate();
    return obs;
}

MarketSimulator::MarketSimulator(MarketTruth truth, std::uint64_t seed)
    : truth_(std::move(truth)), rng_(seed) {
    truth_.validate();
}

EpochObservation MarketSimulator::epoch(int t, const std::vector<double>& budgets,
                                        const std::vector<double>& bids) {
    const MarketTruth current = evolve_truth(truth_, t);
    return simulate_epoch(current, budgets, bids, rng_);
}

namespace {

using nlohmann::json;

json modifier_to_json(const TruthModifier& m) {
    return json{{"epoch", m.epoch},
                {"media_object", m.media_object},
                {"field", to_string(m.field)},
                {"multiplier", m.multiplier}};
}

TruthModifier modifier_from_json(const json& j) {
    TruthModifier m;
    m.epoch = j.at("epoch").get<int>();
    m.media_object = j.at("media_object").get<int>();
    m.field = truth_field_from_string(j.at("field").get<std::string>());
    m.multiplier = j.at("multiplier").get<double>();
    return m;
}

}  // namespace

std::string truth_to_json_text(const MarketTruth& truth) {
    json j{{"media_objects", truth.size()},
           {"ctr", truth.ctr},
           {"itot", truth.itot},
           {"beta", truth.beta}};
    j["schedule"] = json::array();
    for (const TruthModifier& m : truth.schedule) j["schedule"].push_back(modifier_to_json(m));
    return j.dump(2) + "\n";
}

MarketTruth truth_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("truth file: ") + e.what());
    }
    MarketTruth truth;
    truth.ctr = j.at("ctr").get<std::vector<double>>();
    truth.itot = j.at("itot").get<std::vector<double>>();
    truth.beta = j.at("beta").get<std::vector<double>>();
    if (j.contains("schedule")) {
        for (const json& m : j.at("schedule")) truth.schedule.push_back(modifier_from_json(m));
    }
    if (j.contains("media_objects") && j.at("media_objects").get<int>() != truth.size()) {
        throw std::invalid_argument("truth file: media_objects does not match field lengths");
    }
    truth.validate();
    return truth;
}

void save_truth(const MarketTruth& truth, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << truth_to_json_text(truth);
}

MarketTruth load_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return truth_from_json_text(buf.str());
}

}  // namespace skott
