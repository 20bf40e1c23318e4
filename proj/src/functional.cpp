#include "qclab/functional.hpp"

namespace qclab {

Scheme parse_scheme(std::string_view id) {
    if (id == "trapezoid") return Scheme::TrapezoidNodal;
    if (id == "p1exact") return Scheme::P1Exact;
    throw ConfigError("unknown scheme '" + std::string(id) + "' (expected trapezoid|p1exact)");
}

std::string to_string(Scheme s) {
    return s == Scheme::TrapezoidNodal ? "trapezoid" : "p1exact";
}

double eval_J(const EnergyParams& p, const Matrix2& xi, const VectorField& f, Scheme s) {
    if (s == Scheme::P1Exact) return p1_exact_integral(p, xi, f);

    const NodalMatrixField grad = gradient_at_nodes(f);
    const double f_xi = eval_f(p, xi);
    NodalArray integrand(f.spec);
    const int n = f.spec.n();
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) integrand(i, j) = eval_f(p, xi + grad.at(i, j)) - f_xi;
    return integrate_trapezoid(integrand);
}

VectorField grad_J_divergence(const EnergyParams& p, const Matrix2& xi, const VectorField& f) {
    const GridSpec& spec = f.spec;
    const int n = spec.n();
    const NodalMatrixField grad = gradient_at_nodes(f);

    NodalMatrixField stress(spec);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) stress.set(i, j, df_dxi(p, xi + grad.at(i, j)));

    const NodalArray d1_p11 = partial(stress.m11, 1);
    const NodalArray d2_p12 = partial(stress.m12, 2);
    const NodalArray d1_p21 = partial(stress.m21, 1);
    const NodalArray d2_p22 = partial(stress.m22, 2);

    VectorField g(spec);
    for (int j = 1; j < n; ++j) {
        for (int i = 1; i < n; ++i) {
            g.comp1(i, j) = -(d1_p11(i, j) + d2_p12(i, j));
            g.comp2(i, j) = -(d1_p21(i, j) + d2_p22(i, j));
        }
    }
    return g;
}

VectorField grad_J_expanded(const EnergyParams& p, const Matrix2& xi, const VectorField& f) {
    const GridSpec& spec = f.spec;
    const int n = spec.n();
    const double gamma = p.gamma;
    const NodalMatrixField grad = gradient_at_nodes(f);

    // dd[c][l][k] = d^2 phi_c / (dx_l dx_k), so d(m_cl)/dx_k = dd[c][l][k].
    NodalArray dd[2][2][2] = {
        {{second_derivative(f, 1, 1, 1), second_derivative(f, 1, 1, 2)},
         {second_derivative(f, 1, 2, 1), second_derivative(f, 1, 2, 2)}},
        {{second_derivative(f, 2, 1, 1), second_derivative(f, 2, 1, 2)},
         {second_derivative(f, 2, 2, 1), second_derivative(f, 2, 2, 2)}},
    };

    VectorField g(spec);
    for (int q = 1; q < n; ++q) {
        for (int r = 1; r < n; ++r) {
            const Matrix2 m = xi + grad.at(r, q);
            const double norm2 = frob_norm_sq(m);
            const double det = det2(m);

            // dm[k](c, l) = d(m_cl)/dx_k
            Matrix2 dm[2];
            for (int k = 0; k < 2; ++k)
                dm[k] = {dd[0][0][k](r, q), dd[0][1][k](r, q), dd[1][0][k](r, q),
                         dd[1][1][k](r, q)};

            // Helper derivatives of |xi + grad phi|^2 and det(xi + grad phi).
            double d_norm2[2];
            double d_det[2];
            for (int k = 0; k < 2; ++k) {
                const Matrix2& a = dm[k];
                d_norm2[k] = 2.0 * (m.a11 * a.a11 + m.a12 * a.a12 + m.a21 * a.a21 + m.a22 * a.a22);
                d_det[k] = a.a11 * m.a22 + a.a22 * m.a11 - a.a21 * m.a12 - a.a12 * m.a21;
            }

            // d/dx_j of d f / d xi_ij, with d(det)/d(xi_ij) the signed cofactor entry.
            auto mixed = [&](double m_ij, double dm_ij, double cof_ij, double dcof_ij, int j) {
                return 4.0 * dm_ij * norm2 + 4.0 * m_ij * d_norm2[j] -
                       2.0 * gamma * dm_ij * det - 2.0 * gamma * m_ij * d_det[j] -
                       gamma * dcof_ij * norm2 - gamma * cof_ij * d_norm2[j];
            };

            const double t11 = mixed(m.a11, dm[0].a11, m.a22, dm[0].a22, 0);
            const double t12 = mixed(m.a12, dm[1].a12, -m.a21, -dm[1].a21, 1);
            const double t21 = mixed(m.a21, dm[0].a21, -m.a12, -dm[0].a12, 0);
            const double t22 = mixed(m.a22, dm[1].a22, m.a11, dm[1].a11, 1);

            g.comp1(r, q) = -(t11 + t12);
            g.comp2(r, q) = -(t21 + t22);
        }
    }
    return g;
}

VectorField grad_J(const EnergyParams& p, const Matrix2& xi, const VectorField& f,
                   GradMethod method) {
    return method == GradMethod::DivergenceForm ? grad_J_divergence(p, xi, f)
                                                : grad_J_expanded(p, xi, f);
}

double psi(const EnergyParams& p, const Matrix2& xi, const VectorField& f, const VectorField& g,
           double alpha, Scheme s) {
    return eval_J(p, xi, project_boundary_zero(field_axpy(-alpha, g, f)), s);
}

double h_alpha(const EnergyParams& p, const Matrix2& xi, const VectorField& f,
               const VectorField& g, double alpha) {
    const VectorField trial = project_boundary_zero(field_axpy(-alpha, g, f));
    return -field_dot(grad_J_divergence(p, xi, trial), g);
}

}  // namespace qclab
