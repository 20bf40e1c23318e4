#ifndef QCLAB_OPTIMIZER_HPP
#define QCLAB_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qclab/energy.hpp"
#include "qclab/functional.hpp"
#include "qclab/grid.hpp"
#include "qclab/rng.hpp"

namespace qclab {

struct SecantConfig {
    double alpha0 = 0.0;
    double alpha1 = 1e-3;
    int max_iters = 20;
    double root_tol = 1e-10;
    double denom_floor = 1e-14;
    double fallback_tau = 1e-4;
    int max_halvings = 30;

    void validate() const;
    friend bool operator==(const SecantConfig&, const SecantConfig&) = default;
};

enum class SecantStatus { Converged, MaxIterations, FlatDenominator, NonFinite };

struct SecantResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;  // secant updates performed
    SecantStatus status = SecantStatus::MaxIterations;
};

/// Secant iteration a_{k+1} = a_k - h(a_k) (a_k - a_{k-1}) / (h(a_k) - h(a_{k-1})).
SecantResult secant_root(const std::function<double(double)>& h, const SecantConfig& cfg);

struct LineSearchResult {
    double tau = 0.0;
    bool used_fallback = false;
    SecantResult secant;
};

/// Step length for phi - tau g: secant root of d psi / d alpha, accepted when
/// positive, finite and strictly decreasing psi; otherwise fallback_tau halved
/// until psi(tau) <= psi(0). Returns tau = 0 if no halving succeeds.
LineSearchResult secant_line_search(const EnergyParams& p, const Matrix2& xi,
                                    const VectorField& f, const VectorField& g,
                                    const SecantConfig& cfg,
                                    Scheme scheme = Scheme::TrapezoidNodal);

struct StepResult {
    VectorField field;
    double tau = 0.0;
    double j_before = 0.0;
    double j_after = 0.0;
    bool diverged = false;  // J stayed non-finite after the fallback retry
};

StepResult descent_step(const EnergyParams& p, const Matrix2& xi, const VectorField& f,
                        const SecantConfig& cfg, Scheme scheme = Scheme::TrapezoidNodal);

/// Four independent draws uniform on [0, scale).
Matrix2 sample_xi(Rng& rng, double scale);

enum class XiMode { Fixed, RandomPerIteration };

struct DescentConfig {
    GridSpec grid{10};
    double gamma_start = rank_one_threshold();
    double gamma_end = 2.0;
    double gamma_step = 0.005;
    XiMode xi_mode = XiMode::Fixed;
    Matrix2 xi_fixed = Matrix2::diag(1.0, 1.7320508075688772);
    double xi_scale = 1.0;
    int max_iters_per_gamma = 200;
    SecantConfig secant;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::TrapezoidNodal;
    double violation_tol = 1e-6;
    Initializer initializer = Initializer::P1;
    bool reset_on_gamma_change = false;

    void validate() const;
    friend bool operator==(const DescentConfig&, const DescentConfig&) = default;
};

/// A candidate violation: the state at an iteration with J < -violation_tol.
struct TrialRecord {
    Matrix2 xi;
    double gamma = 0.0;
    double j_value = 0.0;
    std::int64_t iteration = 0;
    VectorField field_snapshot{GridSpec(2)};
    bool verified = false;
    double j_exact_p1 = 0.0;
    double j_refined = 0.0;
};

struct TraceEntry {
    std::int64_t iteration = 0;
    double gamma = 0.0;
    double j_value = 0.0;
    double tau = 0.0;
};

using IterationTrace = std::vector<TraceEntry>;

struct SearchResult {
    std::vector<TrialRecord> records;
    IterationTrace trace;
};

/// Gamma values visited: gamma_start - s * gamma_step while above gamma_end.
std::vector<double> gamma_schedule(const DescentConfig& cfg);

/// Steepest descent over the gamma schedule. Each gamma stage runs
/// max_iters_per_gamma steps carrying the field forward; iterations with
/// J < -violation_tol are recorded (unverified) and the stage continues.
SearchResult run_search(const DescentConfig& cfg);

/// Recompute J exactly on the P1 interpolant (and on a refined copy);
/// verified iff the exact value is below -violation_tol.
TrialRecord verify_record(TrialRecord r, int refine_factor, double violation_tol);

}  // namespace qclab

#endif  // QCLAB_OPTIMIZER_HPP
