#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rns/heat.hpp"
#include "rns/random.hpp"

namespace rns {

struct EnsembleConfig {
    std::size_t samples = 10000;
    std::uint64_t master_seed = 1;
    double alpha = 0.5;
    DataFamily family;
    int grid_size = 16;
    std::vector<std::pair<double, double>> pq;  ///< (p, q) pairs
    std::vector<double> horizons;               ///< T values
    std::vector<double> lambdas;                ///< strictly increasing
    std::vector<double> r_grid;
    unsigned threads = 0;                       ///< 0: hardware concurrency
    int time_nodes = 17;                        ///< base log-spaced nodes

    /// Throws InsufficientSamples / ValidationError.
    void validate_for_tail() const;
};

/// Runs body(i) for i in [0, n) on `threads` workers (0: hardware
/// concurrency). Each index is visited exactly once; the first exception
/// thrown by any worker is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Seed of ensemble member i.
std::uint64_t member_seed(std::uint64_t master, std::size_t i);

/// (E|Z|^r)^{1/r} for a standard normal Z.
double gaussian_abs_moment(double r);
/// max over r in [2, 8] of (E|Z|^r)^{1/r} / sqrt(r), by a fine grid.
double gaussian_moment_constant();

struct Interval {
    double lo, hi;
};
/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct MomentRow {
    double r, estimate, oracle, std_error;
    bool within_bound;  ///< estimate - 3 se <= C sqrt(r) ||c||
};

/// Monte Carlo (E|sum c_i h_i|^r)^{1/r}, one independent draw per sample.
std::vector<MomentRow> run_moment_experiment(std::span<const double> c, std::span<const double> r_grid,
                                             const EnsembleConfig& cfg);

struct TailRow {
    double p, q, T, lambda, freq, ci_lo, ci_hi;
    std::size_t exceed;
};

struct TailFit {
    double beta = 0.0;       ///< minus the slope of log P against lambda^2
    double intercept = 0.0;
    double r_squared = 0.0;
    int points = 0;
};

/// Weighted least squares of log P against lambda^2 over the bins with
/// P in [10/n, 0.5], weights n P / (1 - P). Throws DegenerateTail when
/// fewer than two bins qualify or all frequencies are 0 or 1.
TailFit fit_tail(std::span<const double> lambdas, std::span<const double> freqs, std::size_t samples);

struct TailReport {
    std::vector<TailRow> rows;
    TailFit fit;
    double f_norm = 0.0;                ///< ||f||_{H^{-alpha}}
    std::vector<double> sample_norms;   ///< one per member
    TimeGrid grid;                      ///< accepted quadrature grid
};

/// Exceedance frequencies P(||e^{t Delta} f^w||_{L^p_T L^q_x} > lambda ||f||_{H^{-alpha}}).
TailReport run_tail_experiment(const SpectralField& f, double p, double q, double T,
                               std::span<const double> lambdas, const EnsembleConfig& cfg);

/// norm_value < lambda f_norm.
bool event_membership(double norm_value, double lambda, double f_norm);

struct CoverageConfig {
    double p1 = 3.0, q1 = 4.0, delta = 1.0;     ///< lambda ladder: E(2^j, delta)
    double p2 = 3.0, q2 = 4.0, lambda = 1.0;    ///< delta ladder: E(lambda, 2^{-i})
    int max_rung = 10;
};

struct CoverageRow {
    std::string ladder;  ///< "lambda", "delta" or "joint"
    int J;
    double fraction;
};

struct CoverageReport {
    std::vector<CoverageRow> rows;
    /// Least rung per member (max_rung + 1 if never covered).
    std::vector<int> lambda_rung, delta_rung;
};

CoverageReport coverage_study(const SpectralField& f, const CoverageConfig& cov, const EnsembleConfig& cfg);

/// Time grid holding the log-spaced base nodes on (0, T] plus the extra
/// times, merged and deduplicated.
TimeGrid merged_grid(double T, int base_nodes, std::span<const double> extra);

void write_tail_csv(std::ostream& out, std::span<const TailRow> rows);
void write_moment_csv(std::ostream& out, std::span<const MomentRow> rows);
void write_coverage_csv(std::ostream& out, std::span<const CoverageRow> rows);

}  // namespace rns
