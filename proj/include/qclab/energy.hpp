#ifndef QCLAB_ENERGY_HPP
#define QCLAB_ENERGY_HPP

#include <array>
#include <cstdint>
#include <optional>

namespace qclab {

/// 2x2 real matrix, row-major entries a_ij.
struct Matrix2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 0.0;

    static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Matrix2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

    /// Entry access with 1-based (row, col) indices, as used in the formulas.
    double operator()(int i, int j) const;

    bool is_finite() const;

    friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
        return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
    }
    friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
        return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
    }
    friend Matrix2 operator*(double s, const Matrix2& a) {
        return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
    }
    friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

using Vec2 = std::array<double, 2>;

/// Parameter of f_gamma(m) = |m|^4 - gamma |m|^2 det m.
struct EnergyParams {
    double gamma = 0.0;
};

/// A point and rank-one direction a (x) b along which f_gamma fails to be convex.
struct RankOneWitness {
    Matrix2 base;
    Vec2 dir_a{};
    Vec2 dir_b{};
    double t = 0.0;
    double second_diff = 0.0;
};

/// Sampling constants of the rank-one tester.
struct RankOneSampling {
    double base_half_width = 1.0;  // base entries ~ U[-w, w]
    double t_half_width = 1.0;     // t ~ U[-w, w]
    double step = 1e-3;
    double negativity_tol = 1e-12;  // witness iff second_diff < -tol
};

double frob_norm_sq(const Matrix2& m);
double det2(const Matrix2& m);

/// Cofactor matrix [a22, -a21; -a12, a11]; entry (i,j) is d(det)/d(a_ij).
Matrix2 cofactor(const Matrix2& m);

/// Outer product a b^T.
Matrix2 outer(const Vec2& a, const Vec2& b);

double eval_f(const EnergyParams& p, const Matrix2& m);

/// Matrix of partials d f_gamma / d m_ij:
///   4 m |m|^2 - 2 gamma det(m) m - gamma |m|^2 cof(m).
Matrix2 df_dxi(const EnergyParams& p, const Matrix2& m);

/// 4/sqrt(3): f_gamma is rank-one convex exactly for gamma up to this value.
double rank_one_threshold();

/// Centered second difference of t -> f(base + t a (x) b) at t with the given step.
double second_diff_along_rank_one(const EnergyParams& p, const Matrix2& base, const Vec2& a,
                                  const Vec2& b, double t, double step);

/// Randomized search for a negative second difference along rank-one lines.
/// Deterministic in `seed`; returns the first witness found within `budget` draws.
std::optional<RankOneWitness> search_rank_one_violation(const EnergyParams& p,
                                                        std::uint64_t seed,
                                                        std::int64_t budget,
                                                        const RankOneSampling& sampling = {});

}  // namespace qclab

#endif  // QCLAB_ENERGY_HPP
