#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rns/error.hpp"
#include "rns/manifest.hpp"
#include "rns/spectral_field.hpp"

namespace rns {

enum class Integrator { if_rk4, picard };

struct SolverConfig {
    GridSpec grid{16};
    double N = 4.0;          ///< smooth truncation scale of P_{<=N}
    double dt = 1e-3;
    double T = 0.25;
    double alpha = 0.5;
    SpectralField data{GridSpec(16)};  ///< randomized data f^w
    Integrator integrator = Integrator::if_rk4;
    int snapshot_every = 0;  ///< 0: keep only the initial and final state
    bool nonlinear = true;   ///< false drops the quadratic term (linear tests)

    /// Throws ValidationError for dt <= 0, T <= 0, N < 1, N > M/3, or data on
    /// another grid.
    void validate() const;
    int steps() const;
};

struct LedgerRow {
    double t;
    double l2sq_v;           ///< ||v(t)||^2
    double cum_dissipation;  ///< int_0^t ||grad v||^2
    double E_v;              ///< ||v||^2 + int ||grad v||^2
    double E_u;              ///< same for u = g + v
    double rhs_identity;     ///< 2 int int grad(Pv):(g (x) Pv) + grad(Pv):(g (x) g)
    double residual;         ///< (||v||^2 + 2 int ||grad Pv||^2 - rhs) / max(E_v, eps)
    double cum_smoothed;     ///< int_0^t ||grad Pv||^2
};

struct Snapshot {
    double t;
    SpectralField field;
};

struct SolveResult {
    std::vector<Snapshot> snapshots;
    std::vector<LedgerRow> ledger;
    SpectralField final_state;
    double t_final = 0.0;
    int steps = 0;
    std::vector<std::string> warnings;
};

/// Carries the trajectory computed up to the step that produced a
/// non-finite coefficient.
class NonFiniteStateError : public Error {
public:
    NonFiniteStateError(const std::string& what, std::shared_ptr<SolveResult> partial)
        : Error(ErrorCode::NonFiniteState, what), partial_(std::move(partial)) {}
    const SolveResult& partial() const noexcept { return *partial_; }

private:
    std::shared_ptr<SolveResult> partial_;
};

/// Identifiers recorded in run manifests.
inline constexpr const char* kIntegratorName = "integrating-factor-rk4-lawson";
inline constexpr const char* kDealiasName = "two-thirds";

/// The data the solver actually uses: f^w restricted to the dealiased band.
SpectralField dealiased_data(const SpectralField& data);

/// g(t) = e^{t Delta} f^w on the dealiased band.
SpectralField forcing_at(const SolverConfig& cfg, double t);

/// Nonlinear tendency -rho P div(w (x) w) with w = P_{<=N} v + g(t). The
/// linear part -|n|^2 rho^2 v is not included. Throws StateInvariantViolation
/// when v is not hermitian, mean-zero and divergence-free to 1e-10.
SpectralField nonlinear_term(const SpectralField& v, double t, const SolverConfig& cfg);
/// Full right-hand side: -|n|^2 rho^2 v + nonlinear_term.
SpectralField assemble_rhs(const SpectralField& v, double t, const SolverConfig& cfg);

/// One integrating-factor RK4 step of size cfg.dt from (v, t).
SpectralField step(const SpectralField& v, double t, const SolverConfig& cfg);

/// Integrates the smoothed system from v(0) = 0 on [0, T].
SolveResult solve(const SolverConfig& cfg);

/// Plain Navier-Stokes (no smoothing, no g) from u_tau, for cfg.T time units.
/// The ledger's l2sq_v / cum_dissipation columns then refer to u.
SolveResult restart_full_nse(const SpectralField& u_tau, const SolverConfig& cfg);

/// u(tau) = g(tau) + v(tau) for a snapshot of a smoothed run.
SpectralField assemble_full_field(const SolverConfig& cfg, const Snapshot& v_tau);

/// Residual columns of a ledger (already filled in by solve).
std::vector<double> energy_identity_residual(const SolveResult& result);

/// True when ||u(t)||^2 + 2 int_tau^t ||grad u||^2 <= ||u(tau)||^2 (1 + tol)
/// at every ledger row; `worst` receives the largest relative excess.
bool leray_inequality_holds(const SolveResult& restart, double tol, double* worst = nullptr);

/// Dealiased pseudo-spectral divergence of a (x) b: component i holds
/// sum_j i n_j F(a_i b_j).
SpectralField divergence_of_product(const SpectralField& a, const SpectralField& b);

struct CancellationResult {
    double self;       ///< |int v . P div(v (x) v)|
    double transport;  ///< |int v . P div(v (x) g)|
    double scale;      ///< ||v||_{L^2} ||grad v||_{L^2}^2 (+ g terms)
    double normalized() const { return scale > 0 ? std::max(self, transport) / scale : 0.0; }
};
CancellationResult cancellation_check(const SpectralField& v, const SpectralField* g = nullptr);

struct InequalityResult {
    double lhs, rhs;
    bool holds;
    double margin() const { return rhs - lhs; }
};
/// ||v||_{18/7} <= ||v||_2^{2/3} ||v||_6^{1/3} on the grid, slack 1e-10.
InequalityResult holder_interpolation_check(const SpectralField& v);
/// ||w||_2 <= ||w||_{H^{-2}}^{1/3} ||w||_{H^1}^{2/3}, slack 1e-10.
InequalityResult negative_interpolation_check(const SpectralField& w);

struct PicardResult {
    std::vector<double> differences;  ///< ||v^{k+1} - v^k||_X, one per iteration
    std::vector<double> ratios;       ///< successive difference ratios
    bool non_contraction = false;     ///< some ratio > 1
    SpectralField at_t1;              ///< last iterate at t1
};
/// Picard iteration of the Duhamel map on [0, t1] with `intervals` trapezoid
/// intervals, starting from the zero function.
PicardResult picard_iterate(const SolverConfig& cfg, double t1, int iters, int intervals = 32);

/// u_lambda(n, t / lambda^2) = lambda u(n / lambda, t) on `target`; throws
/// FrequencyOverflow when lambda n leaves the target's dealiased band.
std::vector<Snapshot> scaling_transform(const std::vector<Snapshot>& u, int lambda, const GridSpec& target);

/// Largest relative residual of the plain NSE, central differences in time
/// on consecutive equally spaced snapshots.
double nse_residual(const std::vector<Snapshot>& u);

void write_ledger_csv(std::ostream& out, const std::vector<LedgerRow>& rows);
void record_solver(Manifest& manifest, const SolverConfig& cfg);

}  // namespace rns
