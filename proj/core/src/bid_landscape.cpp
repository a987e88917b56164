#include "skott/bid_landscape.hpp"

#include <cmath>
#include <stdexcept>

namespace skott {

namespace {

void require_positive_beta(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
}

void require_positive_bid(double bid) {
    if (!(bid > 0.0)) throw std::invalid_argument("bid must be > 0");
}

// (1 + 1/x) * ln(1 + x) - 1 for x = b/beta. The direct form cancels badly
// for small x, where the alternating series sum_{n>=1} (-1)^{n+1} x^n /
// (n(n+1)) converges immediately.
double cpm_shape(double x) {
    if (x < 1e-3) {
        double term = x / 2.0;  // n = 1
        double sum = term;
        double xn = x;
        for (int n = 2; n <= 6; ++n) {
            xn *= -x;
            sum += xn / (static_cast<double>(n) * (n + 1.0));
        }
        return sum;
    }
    return (1.0 + 1.0 / x) * std::log1p(x) - 1.0;
}

// (1/x) * [1 - ln(1 + x)/x] = 1/2 - x/3 + x^2/4 - ... for x = b/beta.
double cpm_derivative_shape(double x) {
    if (x < 1e-3) {
        double sum = 0.0;
        double xn = 1.0;
        for (int n = 1; n <= 6; ++n) {
            sum += xn / (n + 1.0);
            xn *= -x;
        }
        return sum;
    }
    return (1.0 / x) * (1.0 - std::log1p(x) / x);
}

}  // namespace

double win_probability(double bid, double beta) {
    require_positive_beta(beta);
    if (bid < 0.0) throw std::invalid_argument("bid must be >= 0");
    return bid / (bid + beta);
}

double expected_cpm(double bid, double beta) {
    require_positive_bid(bid);
    require_positive_beta(beta);
    return beta * cpm_shape(bid / beta);
}

double cpm_derivative(double bid, double beta) {
    require_positive_bid(bid);
    require_positive_beta(beta);
    // (beta/b) * [1 - (beta/b) ln(1 + b/beta)] == shape(b/beta).
    return cpm_derivative_shape(bid / beta);
}

double spend_model(double bid, double beta, double total_inventory) {
    require_positive_bid(bid);
    require_positive_beta(beta);
    if (total_inventory < 0.0) throw std::invalid_argument("inventory must be >= 0");
    const double x = bid / beta;
    return total_inventory / 1000.0 * beta * (std::log1p(x) - bid / (bid + beta));
}

double spend_derivative(double bid, double beta, double impressions) {
    require_positive_bid(bid);
    require_positive_beta(beta);
    if (impressions < 0.0) throw std::invalid_argument("impressions must be >= 0");
    return impressions / 1000.0 * beta / (bid + beta);
}

BetaEstimate estimate_beta(double observed_cpm, double bid) {
    require_positive_bid(bid);
    if (!(observed_cpm > 0.0)) throw std::invalid_argument("observed CPM must be > 0");

    BetaEstimate out;
    double target = observed_cpm;
    if (target >= bid / 2.0) {
        target = bid / 2.0 * (1.0 - 1e-6);
        out.clamped = true;
    }

    double lo = 1e-9 * bid;
    double hi = 1e6 * bid;
    if (expected_cpm(bid, lo) >= target) {
        out.beta = lo;
        return out;
    }
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-9 * lo; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (expected_cpm(bid, mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.beta = 0.5 * (lo + hi);
    return out;
}

}  // namespace skott
