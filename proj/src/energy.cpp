#include "qclab/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "qclab/rng.hpp"

namespace qclab {

double Matrix2::operator()(int i, int j) const {
    if (i == 1 && j == 1) return a11;
    if (i == 1 && j == 2) return a12;
    if (i == 2 && j == 1) return a21;
    if (i == 2 && j == 2) return a22;
    throw std::out_of_range("Matrix2 index out of range");
}

bool Matrix2::is_finite() const {
    return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
}

double frob_norm_sq(const Matrix2& m) {
    return m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22;
}

double det2(const Matrix2& m) { return m.a11 * m.a22 - m.a12 * m.a21; }

Matrix2 cofactor(const Matrix2& m) { return {m.a22, -m.a21, -m.a12, m.a11}; }

Matrix2 outer(const Vec2& a, const Vec2& b) {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

double eval_f(const EnergyParams& p, const Matrix2& m) {
    const double n2 = frob_norm_sq(m);
    return n2 * n2 - p.gamma * n2 * det2(m);
}

Matrix2 df_dxi(const EnergyParams& p, const Matrix2& m) {
    const double n2 = frob_norm_sq(m);
    const double d = det2(m);
    const double lin = 4.0 * n2 - 2.0 * p.gamma * d;
    const Matrix2 c = cofactor(m);
    const double gn = p.gamma * n2;
    return {lin * m.a11 - gn * c.a11, lin * m.a12 - gn * c.a12,
            lin * m.a21 - gn * c.a21, lin * m.a22 - gn * c.a22};
}

double rank_one_threshold() { return 4.0 / std::sqrt(3.0); }

double second_diff_along_rank_one(const EnergyParams& p, const Matrix2& base, const Vec2& a,
                                  const Vec2& b, double t, double step) {
    const Matrix2 dir = outer(a, b);
    return eval_f(p, base + (t + step) * dir) - 2.0 * eval_f(p, base + t * dir) +
           eval_f(p, base + (t - step) * dir);
}

std::optional<RankOneWitness> search_rank_one_violation(const EnergyParams& p,
                                                        std::uint64_t seed,
                                                        std::int64_t budget,
                                                        const RankOneSampling& sampling) {
    Rng rng(seed);
    const double w = sampling.base_half_width;
    for (std::int64_t k = 0; k < budget; ++k) {
        RankOneWitness cand;
        cand.base = {rng.uniform(-w, w), rng.uniform(-w, w), rng.uniform(-w, w),
                     rng.uniform(-w, w)};
        cand.dir_a = rng.unit_vector();
        cand.dir_b = rng.unit_vector();
        cand.t = rng.uniform(-sampling.t_half_width, sampling.t_half_width);
        cand.second_diff = second_diff_along_rank_one(p, cand.base, cand.dir_a, cand.dir_b,
                                                       cand.t, sampling.step);
        if (cand.second_diff < -sampling.negativity_tol) return cand;
    }
    return std::nullopt;
}

}  // namespace qclab
