#include "skott/pacer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace skott {

SpendProfile::SpendProfile(std::vector<double> cumulative) : cumulative_(std::move(cumulative)) {
    if (cumulative_.empty()) throw std::invalid_argument("profile must cover at least one epoch");
    double prev = 0.0;
    for (double c : cumulative_) {
        if (c < prev - 1e-9) throw std::invalid_argument("profile must be non-decreasing");
        prev = c;
    }
}

SpendProfile SpendProfile::uniform(double total_budget, int epochs) {
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (!(total_budget >= 0.0)) throw std::invalid_argument("budget must be >= 0");
    std::vector<double> cum(static_cast<std::size_t>(epochs));
    for (int t = 0; t < epochs; ++t) {
        cum[t] = total_budget * static_cast<double>(t + 1) / epochs;
    }
    return SpendProfile(std::move(cum));
}

SpendProfile SpendProfile::from_cumulative(std::vector<double> cumulative) {
    return SpendProfile(std::move(cumulative));
}

SpendProfile SpendProfile::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::vector<std::pair<int, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.find("epoch") != std::string::npos) continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) {
            throw std::invalid_argument("profile CSV expects 2 columns");
        }
        rows.emplace_back(std::stoi(a), std::stod(b));
    }
    std::sort(rows.begin(), rows.end());
    std::vector<double> cum;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].first != static_cast<int>(i)) {
            throw std::invalid_argument("profile CSV must cover epochs 0..T-1 without gaps");
        }
        cum.push_back(rows[i].second);
    }
    return SpendProfile(std::move(cum));
}

double SpendProfile::ideal_cumulative(int epoch) const {
    if (epoch < 0 || epoch >= epochs()) throw std::out_of_range("epoch out of range");
    return cumulative_[static_cast<std::size_t>(epoch)];
}

double SpendProfile::ideal_epoch_budget(int epoch) const {
    if (epoch == 0) return ideal_cumulative(0);
    return ideal_cumulative(epoch) - ideal_cumulative(epoch - 1);
}

double pacing_step(double ideal_spent, double actual_spent, double ideal_next_budget,
                   double eta, int epochs_left) {
    if (epochs_left < 1) throw std::invalid_argument("campaign over: no epochs left");
    if (!(eta >= 1.0)) throw std::invalid_argument("aggressiveness must be >= 1");
    const double eta_eff = std::min(eta, static_cast<double>(epochs_left));
    const double correction = eta_eff * (ideal_spent - actual_spent) / epochs_left;
    return std::max(0.0, ideal_next_budget + correction);
}

}  // namespace skott
