#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rns/spectral_field.hpp"

namespace rns {

enum class TimeScheme { log_spaced, uniform };

/// Quadrature nodes in (0, T]. The origin is always an implicit extra node
/// for the L^p_t trapezoid rule.
struct TimeGrid {
    std::vector<double> nodes;
    TimeScheme scheme = TimeScheme::log_spaced;
    double T = 0.0;

    /// n nodes from first = T * first_fraction to T, geometrically spaced.
    static TimeGrid log_spaced(double T, int n = 33, double first_fraction = 1e-4);
    static TimeGrid uniform(double T, int n = 33);

    /// Inserts a node in every interval, including (0, t_0].
    TimeGrid refined() const;
    /// Throws ValidationError if the invariants fail.
    void validate() const;
    /// {0, nodes...}
    std::vector<double> with_origin() const;
};

/// e^{t Delta} f: per-mode factor e^{-t |n|^2}. Throws NegativeTime for t < 0.
SpectralField heat_evolve(const SpectralField& f, double t);
void heat_evolve_into(SpectralField& out, const SpectralField& f, double t);

/// sup over y > 0 of y^s e^{-y^2}, (s/2)^{s/2} e^{-s/2}.
double modewise_decay_constant(double s);

/// sup over grid nodes of t^{(alpha+k)/2} ||D^k e^{t Delta} f||_{L^2} / ||f||_{H^{-alpha}}.
double deterministic_decay_ratio(const SpectralField& f, double alpha, int k, const TimeGrid& grid);

/// ||e^{t Delta} f||_{L^q_x} at t = 0 and at every node, for each q.
/// Result is indexed [q][node], node 0 being the origin.
std::vector<std::vector<double>> lq_profile(const SpectralField& f, std::span<const double> qs,
                                            const TimeGrid& grid);

/// Running trapezoid values (int_0^{t_i} v(t)^p dt)^{1/p}; times[0] must be 0.
std::vector<double> cumulative_lp(std::span<const double> values, std::span<const double> times, double p);

struct LpLqResult {
    double value = 0.0;            ///< on the finest grid evaluated
    double relative_change = 0.0;  ///< between the last two refinements
    int doublings = 0;
    /// The accepted grid: the coarsest one whose doubling moved the value by
    /// less than the tolerance.
    TimeGrid grid;
};

/// ||e^{t Delta} f||_{L^p([0,T]; L^q_x)} by trapezoid quadrature with node
/// doubling until successive values agree to `tolerance` relative. At most
/// `max_doublings` refinements, then UnconvergedQuadrature.
LpLqResult heat_lplq_detailed(const SpectralField& f, double p, double q, const TimeGrid& grid,
                              double tolerance = 5e-3, int max_doublings = 3);
double heat_lplq(const SpectralField& f, double p, double q, const TimeGrid& grid);

/// 1/p - alpha/2.
double sigma_exponent(double p, double alpha);

/// K(alpha, p) = sup_{u>0} u^{(alpha - 2/p)/2} (1 - e^{-p u})^{1/p}.
double compute_K(double alpha, double p);
/// J(T) = sup_{y>0} y^{alpha - 2/p} (1 - e^{-p y^2 T})^{1/p}, maximized
/// directly in y (not through K).
double compute_J(double T, double alpha, double p);
/// The same supremum restricted to |n|^2 = m for integer lattice points
/// 0 < m <= max_k2.
double compute_J_lattice(double T, double alpha, double p, int max_k2);

struct NormRow {
    double alpha, p, q, T;
    std::uint64_t seed;
    double value;
};
void write_norm_table(std::ostream& out, std::span<const NormRow> rows);

struct JKRow {
    double alpha, p, T, J, K, sigma;
};
void write_jk_table(std::ostream& out, std::span<const JKRow> rows);

}  // namespace rns
