#pragma once

namespace skott {

// Second-price bid landscape parameterized by the median winning bid beta.
// Bids and beta are offers per thousand impressions.

// P(b) = b / (b + beta), the probability of winning an auction at base bid b.
double win_probability(double bid, double beta);

// Mean price paid per thousand impressions when bidding b:
//   CPM(b) = beta * [(1 + beta/b) * ln(1 + b/beta) - 1]
// Strictly increasing in both arguments and always below b/2.
double expected_cpm(double bid, double beta);

// dCPM/db = (beta/b) * [1 - (beta/b) * ln(1 + b/beta)], positive everywhere.
double cpm_derivative(double bid, double beta);

// Money spent when the media object buys all inventory accessible at bid b:
//   S(b) = Itot/1000 * beta * [ln(1 + b/beta) - b/(b + beta)]
double spend_model(double bid, double beta, double total_inventory);

// dS/db = N/1000 * beta/(b + beta), using Itot = N / P(b).
double spend_derivative(double bid, double beta, double impressions);

struct BetaEstimate {
    double beta = 0.0;
    // Set when observed_cpm >= bid/2 (outside the model's range) and the
    // target had to be pulled back just below the asymptote.
    bool clamped = false;
};

// Inverts expected_cpm in beta by bisection on [1e-9*b, 1e6*b]; valid because
// CPM is strictly increasing in beta for fixed b, with range (0, b/2).
BetaEstimate estimate_beta(double observed_cpm, double bid);

}  // namespace skott
