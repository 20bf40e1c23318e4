#include "qclab/optimizer.hpp"

#include <cmath>
#include <limits>

namespace qclab {

void SecantConfig::validate() const {
    if (alpha0 == alpha1) throw ConfigError("secant: alpha0 and alpha1 must differ");
    if (max_iters < 1) throw ConfigError("secant: max_iters must be >= 1");
    if (!(root_tol > 0.0)) throw ConfigError("secant: root_tol must be > 0");
    if (!(denom_floor > 0.0)) throw ConfigError("secant: denom_floor must be > 0");
    if (!(fallback_tau > 0.0)) throw ConfigError("secant: fallback_tau must be > 0");
    if (max_halvings < 0) throw ConfigError("secant: max_halvings must be >= 0");
}

SecantResult secant_root(const std::function<double(double)>& h, const SecantConfig& cfg) {
    SecantResult res;
    double a_prev = cfg.alpha0;
    double a_cur = cfg.alpha1;
    double h_prev = h(a_prev);
    double h_cur = h(a_cur);
    res.root = a_cur;
    res.residual = h_cur;

    while (true) {
        if (!std::isfinite(h_cur) || !std::isfinite(h_prev)) {
            res.status = SecantStatus::NonFinite;
            return res;
        }
        if (std::abs(h_cur) < cfg.root_tol) {
            res.status = SecantStatus::Converged;
            return res;
        }
        if (res.iterations >= cfg.max_iters) {
            res.status = SecantStatus::MaxIterations;
            return res;
        }
        const double denom = h_cur - h_prev;
        if (std::abs(denom) < cfg.denom_floor) {
            res.status = SecantStatus::FlatDenominator;
            return res;
        }
        const double a_next = a_cur - h_cur * (a_cur - a_prev) / denom;
        ++res.iterations;
        if (!std::isfinite(a_next)) {
            res.status = SecantStatus::NonFinite;
            return res;
        }
        a_prev = a_cur;
        h_prev = h_cur;
        a_cur = a_next;
        h_cur = h(a_cur);
        res.root = a_cur;
        res.residual = h_cur;
    }
}

LineSearchResult secant_line_search(const EnergyParams& p, const Matrix2& xi,
                                    const VectorField& f, const VectorField& g,
                                    const SecantConfig& cfg, Scheme scheme) {
    LineSearchResult out;
    const double psi0 = psi(p, xi, f, g, 0.0, scheme);

    out.secant = secant_root([&](double a) { return h_alpha(p, xi, f, g, a); }, cfg);
    const double a = out.secant.root;
    if (out.secant.status != SecantStatus::NonFinite &&
        out.secant.status != SecantStatus::FlatDenominator && std::isfinite(a) && a > 0.0) {
        const double psi_a = psi(p, xi, f, g, a, scheme);
        if (std::isfinite(psi_a) && psi_a < psi0) {
            out.tau = a;
            return out;
        }
    }

    out.used_fallback = true;
    double tau = cfg.fallback_tau;
    for (int k = 0; k <= cfg.max_halvings; ++k, tau *= 0.5) {
        const double psi_t = psi(p, xi, f, g, tau, scheme);
        if (std::isfinite(psi_t) && psi_t <= psi0) {
            out.tau = tau;
            return out;
        }
    }
    out.tau = 0.0;
    return out;
}

StepResult descent_step(const EnergyParams& p, const Matrix2& xi, const VectorField& f,
                        const SecantConfig& cfg, Scheme scheme) {
    const VectorField g = grad_J_divergence(p, xi, f);
    StepResult res{f};
    res.j_before = eval_J(p, xi, f, scheme);
    res.tau = secant_line_search(p, xi, f, g, cfg, scheme).tau;
    res.field = project_boundary_zero(field_axpy(-res.tau, g, f));
    res.j_after = eval_J(p, xi, res.field, scheme);
    if (!std::isfinite(res.j_after)) {
        res.tau = cfg.fallback_tau;
        res.field = project_boundary_zero(field_axpy(-res.tau, g, f));
        res.j_after = eval_J(p, xi, res.field, scheme);
        res.diverged = !std::isfinite(res.j_after);
    }
    return res;
}

Matrix2 sample_xi(Rng& rng, double scale) {
    // Evaluation order of braced initializers is left to right.
    return Matrix2{rng.uniform(0.0, scale), rng.uniform(0.0, scale), rng.uniform(0.0, scale),
                   rng.uniform(0.0, scale)};
}

void DescentConfig::validate() const {
    if (!std::isfinite(gamma_start) || !std::isfinite(gamma_end) || !std::isfinite(gamma_step))
        throw ConfigError("gamma values must be finite");
    if (!(gamma_end < gamma_start)) throw ConfigError("gamma_end must be below gamma_start");
    if (!(gamma_step > 0.0)) throw ConfigError("gamma_step must be > 0");
    if (!(violation_tol > 0.0)) throw ConfigError("violation_tol must be > 0");
    if (max_iters_per_gamma < 1) throw ConfigError("max_iters_per_gamma must be >= 1");
    if (xi_mode == XiMode::RandomPerIteration && !(xi_scale > 0.0))
        throw ConfigError("xi_scale must be > 0");
    if (!xi_fixed.is_finite()) throw ConfigError("xi must be finite");
    secant.validate();
}

std::vector<double> gamma_schedule(const DescentConfig& cfg) {
    std::vector<double> out;
    for (std::int64_t s = 0;; ++s) {
        const double gamma = cfg.gamma_start - static_cast<double>(s) * cfg.gamma_step;
        if (!(gamma > cfg.gamma_end)) break;
        out.push_back(gamma);
    }
    return out;
}

SearchResult run_search(const DescentConfig& cfg) {
    cfg.validate();
    SearchResult result;
    Rng rng(cfg.seed);
    const VectorField initial = make_field(cfg.grid, cfg.initializer);
    VectorField field = initial;
    Matrix2 xi = cfg.xi_fixed;
    std::int64_t iteration = 1;

    for (const double gamma : gamma_schedule(cfg)) {
        const EnergyParams p{gamma};
        if (cfg.reset_on_gamma_change) field = initial;
        for (int k = 0; k < cfg.max_iters_per_gamma; ++k, ++iteration) {
            if (cfg.xi_mode == XiMode::RandomPerIteration) xi = sample_xi(rng, cfg.xi_scale);

            StepResult step = descent_step(p, xi, field, cfg.secant, cfg.scheme);
            result.trace.push_back({iteration, gamma, step.j_after, step.tau});
            if (step.diverged) {
                field = initial;
                ++iteration;
                break;
            }
            field = std::move(step.field);
            if (step.j_after < -cfg.violation_tol) {
                TrialRecord rec;
                rec.xi = xi;
                rec.gamma = gamma;
                rec.j_value = step.j_after;
                rec.iteration = iteration;
                rec.field_snapshot = field;
                result.records.push_back(std::move(rec));
            }
        }
    }
    return result;
}

TrialRecord verify_record(TrialRecord r, int refine_factor, double violation_tol) {
    const EnergyParams p{r.gamma};
    r.j_exact_p1 = p1_exact_integral(p, r.xi, r.field_snapshot);
    r.j_refined = refine_factor >= 2
                      ? p1_exact_integral(p, r.xi, refine(r.field_snapshot, refine_factor))
                      : std::numeric_limits<double>::quiet_NaN();
    r.verified = r.j_exact_p1 < -violation_tol;
    return r;
}

}  // namespace qclab
