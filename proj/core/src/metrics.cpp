#include "skott/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace skott {

double kl_divergence_rescaled(const WeightVector& w) {
    const int k = w.size();
    if (k == 1) return 0.0;
    const double u = 1.0 / k;
    double kl = 0.0;
    for (int i = 0; i < k; ++i) {
        if (w[i] > 0.0) kl += w[i] * std::log(w[i] / u);
    }
    return kl / std::log(static_cast<double>(k));
}

double cumulative_cpc(const std::vector<double>& spend, const std::vector<double>& clicks) {
    if (spend.size() != clicks.size()) throw std::invalid_argument("history length mismatch");
    const double total_spend = std::accumulate(spend.begin(), spend.end(), 0.0);
    const double total_clicks = std::accumulate(clicks.begin(), clicks.end(), 0.0);
    if (total_clicks <= 0.0) return std::numeric_limits<double>::infinity();
    return total_spend / total_clicks;
}

double RunMetrics::total_spend() const { return std::accumulate(spend.begin(), spend.end(), 0.0); }
double RunMetrics::total_clicks() const { return std::accumulate(clicks.begin(), clicks.end(), 0.0); }
double RunMetrics::final_cpc() const {
    return cumulative_cpc.empty() ? std::numeric_limits<double>::infinity() : cumulative_cpc.back();
}
double RunMetrics::final_kld() const { return rescaled_kld.empty() ? 0.0 : rescaled_kld.back(); }

SummaryRow summarize(const std::string& algo, const std::vector<RunMetrics>& runs,
                     const std::vector<RunMetrics>& baseline_runs, double total_budget) {
    if (runs.empty() || baseline_runs.empty()) {
        throw std::invalid_argument("summarize needs at least one run and one baseline run");
    }
    if (!(total_budget > 0.0)) throw std::invalid_argument("total_budget must be > 0");

    const auto mean = [](const auto& items, auto&& get) {
        double sum = 0.0;
        for (const auto& item : items) sum += get(item);
        return sum / static_cast<double>(items.size());
    };

    const double baseline_clicks =
        mean(baseline_runs, [](const RunMetrics& r) { return r.total_clicks(); });
    if (!(baseline_clicks > 0.0)) throw std::invalid_argument("baseline generated no clicks");

    SummaryRow row;
    row.algo = algo;
    row.spt = 100.0 * mean(runs, [](const RunMetrics& r) { return r.total_spend(); }) / total_budget;
    row.clk = 100.0 * mean(runs, [](const RunMetrics& r) { return r.total_clicks(); }) / baseline_clicks;
    row.cpc = mean(runs, [](const RunMetrics& r) { return r.final_cpc(); });
    row.kld = mean(runs, [](const RunMetrics& r) { return r.final_kld(); });
    return row;
}

std::vector<double> smooth_series(const std::vector<double>& series, int window) {
    if (window < 1 || window % 2 == 0) throw std::invalid_argument("window must be odd and >= 1");
    const int n = static_cast<int>(series.size());
    const int half = window / 2;
    std::vector<double> out(series.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += series[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

namespace {

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double parse_value(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(s);
}

}  // namespace

std::string per_epoch_csv_text(const std::vector<EpochRecord>& records) {
    std::string out = "repetition,epoch,algorithm,spend,clicks,cumulative_cpc,rescaled_kld\n";
    for (const EpochRecord& r : records) {
        out += std::to_string(r.repetition);
        out += ',';
        out += std::to_string(r.epoch);
        out += ',';
        out += r.algo;
        out += ',';
        out += format_value(r.spend);
        out += ',';
        out += format_value(r.clicks);
        out += ',';
        out += format_value(r.cumulative_cpc);
        out += ',';
        out += format_value(r.rescaled_kld);
        out += '\n';
    }
    return out;
}

void write_per_epoch_csv(const std::vector<EpochRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << per_epoch_csv_text(records);
}

std::vector<EpochRecord> per_epoch_records_from_csv_text(const std::string& text) {
    std::vector<EpochRecord> records;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("repetition,", 0) == 0) continue;
        }
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) throw std::invalid_argument("per-epoch CSV expects 7 columns");
        EpochRecord r;
        r.repetition = std::stoi(cells[0]);
        r.epoch = std::stoi(cells[1]);
        r.algo = cells[2];
        r.spend = parse_value(cells[3]);
        r.clicks = parse_value(cells[4]);
        r.cumulative_cpc = parse_value(cells[5]);
        r.rescaled_kld = parse_value(cells[6]);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<EpochRecord> load_per_epoch_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return per_epoch_records_from_csv_text(buf.str());
}

std::vector<std::string> algorithms_in(const std::vector<EpochRecord>& records) {
    std::vector<std::string> algos;
    for (const EpochRecord& r : records) {
        if (std::find(algos.begin(), algos.end(), r.algo) == algos.end()) algos.push_back(r.algo);
    }
    return algos;
}

std::vector<EpochRecord> smoothed_records(const std::vector<EpochRecord>& records, int window) {
    std::map<std::pair<std::string, int>, std::vector<EpochRecord>> groups;
    for (const EpochRecord& r : records) groups[{r.algo, r.repetition}].push_back(r);

    std::vector<EpochRecord> out;
    out.reserve(records.size());
    for (auto& [key, rows] : groups) {
        std::sort(rows.begin(), rows.end(),
                  [](const EpochRecord& a, const EpochRecord& b) { return a.epoch < b.epoch; });
        std::vector<double> spend, clicks, cpc, kld;
        for (const EpochRecord& r : rows) {
            spend.push_back(r.spend);
            clicks.push_back(r.clicks);
            cpc.push_back(r.cumulative_cpc);
            kld.push_back(r.rescaled_kld);
        }
        const auto s_spend = smooth_series(spend, window);
        const auto s_clicks = smooth_series(clicks, window);
        const auto s_cpc = smooth_series(cpc, window);
        const auto s_kld = smooth_series(kld, window);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            EpochRecord r = rows[i];
            r.spend = s_spend[i];
            r.clicks = s_clicks[i];
            r.cumulative_cpc = s_cpc[i];
            r.rescaled_kld = s_kld[i];
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<RunMetrics> runs_for(const std::vector<EpochRecord>& records, const std::string& algo) {
    std::map<int, std::vector<const EpochRecord*>> by_rep;
    for (const EpochRecord& r : records) {
        if (r.algo == algo) by_rep[r.repetition].push_back(&r);
    }
    std::vector<RunMetrics> runs;
    for (auto& [rep, rows] : by_rep) {
        std::sort(rows.begin(), rows.end(),
                  [](const EpochRecord* a, const EpochRecord* b) { return a->epoch < b->epoch; });
        RunMetrics m;
        for (const EpochRecord* r : rows) {
            m.spend.push_back(r->spend);
            m.clicks.push_back(r->clicks);
            m.cumulative_cpc.push_back(r->cumulative_cpc);
            m.rescaled_kld.push_back(r->rescaled_kld);
        }
        runs.push_back(std::move(m));
    }
    if (runs.empty()) throw std::invalid_argument("no records for algorithm '" + algo + "'");
    return runs;
}

}  // namespace skott
