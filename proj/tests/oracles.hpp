// Independent reference computations used only by the tests.
#ifndef QCLAB_TESTS_ORACLES_HPP
#define QCLAB_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "qclab/energy.hpp"
#include "qclab/grid.hpp"
#include "qclab/rng.hpp"

namespace qclab::oracle {

inline double rel_err(double got, double want) {
    const double scale = std::max(std::abs(got), std::abs(want));
    return scale == 0.0 ? 0.0 : std::abs(got - want) / scale;
}

/// f(m) written out entry by entry, no shared code with eval_f.
inline double energy_expanded(double gamma, double a, double b, double c, double d) {
    const double n2 = a * a + b * b + c * c + d * d;
    return n2 * n2 - gamma * n2 * (a * d - b * c);
}

/// Central finite difference of energy_expanded in entry (row, col).
inline double energy_partial_fd(double gamma, const Matrix2& m, int row, int col, double step) {
    double e[4] = {m.a11, m.a12, m.a21, m.a22};
    const int k = (row - 1) * 2 + (col - 1);
    double plus[4], minus[4];
    std::copy(e, e + 4, plus);
    std::copy(e, e + 4, minus);
    plus[k] += step;
    minus[k] -= step;
    return (energy_expanded(gamma, plus[0], plus[1], plus[2], plus[3]) -
            energy_expanded(gamma, minus[0], minus[1], minus[2], minus[3])) /
           (2.0 * step);
}

/// Centered difference of a scalar functional of a field with respect to one nodal value.
inline double nodal_fd(const std::function<double(const VectorField&)>& functional,
                       const VectorField& f, int comp, int i, int j, double step) {
    VectorField plus = f;
    VectorField minus = f;
    plus.component(comp)(i, j) += step;
    minus.component(comp)(i, j) -= step;
    return (functional(plus) - functional(minus)) / (2.0 * step);
}

/// Boundary-zero field with interior entries uniform in [-amp, amp].
inline VectorField random_field(const GridSpec& spec, Rng& rng, double amp) {
    VectorField f(spec);
    for (int j = 1; j < spec.n(); ++j)
        for (int i = 1; i < spec.n(); ++i) {
            f.comp1(i, j) = rng.uniform(-amp, amp);
            f.comp2(i, j) = rng.uniform(-amp, amp);
        }
    return f;
}

/// Minimum second difference over `samples` random rank-one lines (brute force,
/// independent stream and loop from search_rank_one_violation).
inline double min_rank_one_second_diff(double gamma, std::uint64_t seed, int samples) {
    Rng rng(seed);
    double worst = INFINITY;
    for (int k = 0; k < samples; ++k) {
        double e[4];
        for (double& v : e) v = rng.uniform(-1.0, 1.0);
        const double ta = 2.0 * M_PI * rng.uniform();
        const double tb = 2.0 * M_PI * rng.uniform();
        const double a[2] = {std::cos(ta), std::sin(ta)};
        const double b[2] = {std::cos(tb), std::sin(tb)};
        const double t = rng.uniform(-1.0, 1.0);
        const double s = 1e-3;
        auto along = [&](double tt) {
            return energy_expanded(gamma, e[0] + tt * a[0] * b[0], e[1] + tt * a[0] * b[1],
                                   e[2] + tt * a[1] * b[0], e[3] + tt * a[1] * b[1]);
        };
        worst = std::min(worst, along(t + s) - 2.0 * along(t) + along(t - s));
    }
    return worst;
}

}  // namespace qclab::oracle

#endif  // QCLAB_TESTS_ORACLES_HPP
