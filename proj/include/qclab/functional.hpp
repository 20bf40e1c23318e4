#ifndef QCLAB_FUNCTIONAL_HPP
#define QCLAB_FUNCTIONAL_HPP

#include <string>
#include <string_view>

#include "qclab/energy.hpp"
#include "qclab/grid.hpp"

namespace qclab {

/// Quadrature backend for the Jensen functional.
enum class Scheme {
    TrapezoidNodal,  // nodal finite-difference gradients, trapezoid rule
    P1Exact,         // exact integral of the piecewise-linear interpolant
};

/// Discretization of the Gateaux gradient.
enum class GradMethod {
    DivergenceForm,  // -div of the nodal field d f / d xi (xi + grad phi)
    ExpandedForm,    // product-rule expansion with second derivatives of phi
};

Scheme parse_scheme(std::string_view id);
std::string to_string(Scheme s);

/// J(xi, phi) = integral over the unit square of f(xi + grad phi) - f(xi).
double eval_J(const EnergyParams& p, const Matrix2& xi, const VectorField& f,
              Scheme s = Scheme::TrapezoidNodal);

/// Gateaux gradient g with field_dot(g, v) equal to the first variation of the
/// trapezoid-nodal J in direction v, for every boundary-zero v. Inside the
/// grid this is -(d_1 P_i1 + d_2 P_i2) with central differences, where
/// P = df_dxi(xi + grad phi). Boundary values are zero.
VectorField grad_J_divergence(const EnergyParams& p, const Matrix2& xi, const VectorField& f);

/// Same continuum gradient, assembled term by term from first and second
/// derivatives of phi and the derivatives of |xi + grad phi|^2 and
/// det(xi + grad phi). Boundary values are zero.
VectorField grad_J_expanded(const EnergyParams& p, const Matrix2& xi, const VectorField& f);

VectorField grad_J(const EnergyParams& p, const Matrix2& xi, const VectorField& f,
                   GradMethod method);

/// psi(alpha) = J(f - alpha g).
double psi(const EnergyParams& p, const Matrix2& xi, const VectorField& f, const VectorField& g,
           double alpha, Scheme s = Scheme::TrapezoidNodal);

/// d psi / d alpha for the trapezoid scheme: -<grad_J_divergence(f - alpha g), g>.
/// Negative at alpha = 0 whenever g is the (nonzero) gradient at f.
double h_alpha(const EnergyParams& p, const Matrix2& xi, const VectorField& f,
               const VectorField& g, double alpha);

}  // namespace qclab

#endif  // QCLAB_FUNCTIONAL_HPP
