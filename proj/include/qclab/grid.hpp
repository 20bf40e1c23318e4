#ifndef QCLAB_GRID_HPP
#define QCLAB_GRID_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qclab/energy.hpp"

namespace qclab {

/// Raised when two fields on different grids are combined.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for bad user-facing configuration (unknown initializer, bad literal, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Uniform grid on the unit square with n subdivisions per axis.
class GridSpec {
public:
    explicit GridSpec(int n);

    int n() const { return n_; }
    double h() const { return 1.0 / n_; }
    int nodes_per_axis() const { return n_ + 1; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(n_ + 1) * static_cast<std::size_t>(n_ + 1);
    }
    bool is_boundary(int i, int j) const { return i == 0 || j == 0 || i == n_ || j == n_; }
    double coord(int i) const { return static_cast<double>(i) / n_; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int n_;
};

/// Scalar value per node; (i, j) is the node at (i h, j h).
class NodalArray {
public:
    explicit NodalArray(const GridSpec& spec, double fill = 0.0)
        : spec_(spec), values_(spec.node_count(), fill) {}

    const GridSpec& spec() const { return spec_; }
    double& operator()(int i, int j) { return values_[index(i, j)]; }
    double operator()(int i, int j) const { return values_[index(i, j)]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const NodalArray&, const NodalArray&) = default;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(spec_.nodes_per_axis()) +
               static_cast<std::size_t>(i);
    }

    GridSpec spec_;
    std::vector<double> values_;
};

/// Nodal values of phi = (phi_1, phi_2).
struct VectorField {
    explicit VectorField(const GridSpec& s) : spec(s), comp1(s), comp2(s) {}

    GridSpec spec;
    NodalArray comp1;
    NodalArray comp2;

    NodalArray& component(int c) { return c == 1 ? comp1 : comp2; }
    const NodalArray& component(int c) const { return c == 1 ? comp1 : comp2; }
    bool is_finite() const;
    bool boundary_is_zero() const;

    friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// One 2x2 matrix per node; entry (i, j) is stored in m_ij.
struct NodalMatrixField {
    explicit NodalMatrixField(const GridSpec& s) : spec(s), m11(s), m12(s), m21(s), m22(s) {}

    GridSpec spec;
    NodalArray m11, m12, m21, m22;

    Matrix2 at(int i, int j) const { return {m11(i, j), m12(i, j), m21(i, j), m22(i, j)}; }
    void set(int i, int j, const Matrix2& m);
    NodalArray& entry(int row, int col);
};

/// Built-in initial fields.
enum class Initializer {
    Zero,
    P1,  // [sin(b), sin(b)^2] with b = x(x-1)y(y-1)
    P2,  // [x(x-1)y(y-1), 0]
    P3,  // [sin(2 pi x) / 2pi, sin(2 pi y) / 2pi]
    P4,  // [sin(pi x) / 100, sin(3 pi y / 2) / 100]
};

Initializer parse_initializer(std::string_view id);
std::string to_string(Initializer init);

/// Triangulation diagonal used by the exact P1 integral.
enum class Diagonal {
    LowerLeftToUpperRight,
    UpperLeftToLowerRight,
};

VectorField make_field(const GridSpec& spec, Initializer init);
VectorField project_boundary_zero(VectorField f);

/// First derivative along `axis` (1 = x1, 2 = x2): central inside, first-order
/// one-sided where the stencil would leave the grid.
NodalArray partial(const NodalArray& v, int axis);

/// Node matrix (c, j) holds d(phi_c)/d(x_j).
NodalMatrixField gradient_at_nodes(const VectorField& f);

/// d^2 phi_comp / (dx_j dx_k).
NodalArray second_derivative(const VectorField& f, int comp, int j, int k);

double integrate_trapezoid(const NodalArray& g);

/// Exact integral of f_gamma(xi + grad phi_h) - f_gamma(xi) for the continuous
/// piecewise-linear interpolant phi_h on the two-triangle split of every cell.
double p1_exact_integral(const EnergyParams& p, const Matrix2& xi, const VectorField& f,
                         Diagonal diagonal = Diagonal::LowerLeftToUpperRight);

VectorField field_axpy(double alpha, const VectorField& x, const VectorField& y);
double field_dot(const VectorField& x, const VectorField& y);
VectorField field_scale(double alpha, const VectorField& x);

/// Bilinear interpolation onto a grid with n * factor subdivisions.
VectorField refine(const VectorField& f, int factor);

/// Text snapshot: "n=<n>" then "i j phi1 phi2" per node, 17 significant digits.
void write_snapshot(std::ostream& os, const VectorField& f);
VectorField read_snapshot(std::istream& is);
void save_snapshot(const std::filesystem::path& path, const VectorField& f);
VectorField load_snapshot(const std::filesystem::path& path);

}  // namespace qclab

#endif  // QCLAB_GRID_HPP
