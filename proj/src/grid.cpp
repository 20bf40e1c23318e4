#include "qclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qclab/format.hpp"

namespace qclab {

GridSpec::GridSpec(int n) : n_(n) {
    if (n < 2) throw ConfigError("grid needs n >= 2, got " + std::to_string(n));
}

bool VectorField::is_finite() const {
    for (double v : comp1.values())
        if (!std::isfinite(v)) return false;
    for (double v : comp2.values())
        if (!std::isfinite(v)) return false;
    return true;
}

bool VectorField::boundary_is_zero() const {
    const int n = spec.n();
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            if (spec.is_boundary(i, j) && (comp1(i, j) != 0.0 || comp2(i, j) != 0.0))
                return false;
    return true;
}

void NodalMatrixField::set(int i, int j, const Matrix2& m) {
    m11(i, j) = m.a11;
    m12(i, j) = m.a12;
    m21(i, j) = m.a21;
    m22(i, j) = m.a22;
}

NodalArray& NodalMatrixField::entry(int row, int col) {
    if (row == 1) return col == 1 ? m11 : m12;
    return col == 1 ? m21 : m22;
}

Initializer parse_initializer(std::string_view id) {
    if (id == "zero") return Initializer::Zero;
    if (id == "p1") return Initializer::P1;
    if (id == "p2") return Initializer::P2;
    if (id == "p3") return Initializer::P3;
    if (id == "p4") return Initializer::P4;
    throw ConfigError("unknown initializer '" + std::string(id) + "' (expected p1|p2|p3|p4|zero)");
}

std::string to_string(Initializer init) {
    switch (init) {
        case Initializer::Zero: return "zero";
        case Initializer::P1: return "p1";
        case Initializer::P2: return "p2";
        case Initializer::P3: return "p3";
        case Initializer::P4: return "p4";
    }
    return "zero";
}

namespace {

Vec2 initial_value(Initializer init, double x, double y) {
    using std::numbers::pi;
    const double bump = x * (x - 1.0) * y * (y - 1.0);
    switch (init) {
        case Initializer::Zero: return {0.0, 0.0};
        case Initializer::P1: {
            const double s = std::sin(bump);
            return {s, s * s};
        }
        case Initializer::P2: return {bump, 0.0};
        case Initializer::P3:
            return {std::sin(2.0 * pi * x) / (2.0 * pi), std::sin(2.0 * pi * y) / (2.0 * pi)};
        case Initializer::P4:
            return {std::sin(pi * x) / 100.0, std::sin(1.5 * pi * y) / 100.0};
    }
    return {0.0, 0.0};
}

}  // namespace

VectorField make_field(const GridSpec& spec, Initializer init) {
    VectorField f(spec);
    const int n = spec.n();
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const Vec2 v = initial_value(init, spec.coord(i), spec.coord(j));
            f.comp1(i, j) = v[0];
            f.comp2(i, j) = v[1];
        }
    }
    return project_boundary_zero(std::move(f));
}

VectorField project_boundary_zero(VectorField f) {
    const int n = f.spec.n();
    for (int k = 0; k <= n; ++k) {
        for (NodalArray* c : {&f.comp1, &f.comp2}) {
            (*c)(k, 0) = 0.0;
            (*c)(k, n) = 0.0;
            (*c)(0, k) = 0.0;
            (*c)(n, k) = 0.0;
        }
    }
    return f;
}

NodalArray partial(const NodalArray& v, int axis) {
    const GridSpec& spec = v.spec();
    const int n = spec.n();
    const double h = spec.h();
    NodalArray out(spec);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const int pos = axis == 1 ? i : j;
            auto at = [&](int shift) {
                return axis == 1 ? v(i + shift, j) : v(i, j + shift);
            };
            if (pos == 0)
                out(i, j) = (at(1) - at(0)) / h;
            else if (pos == n)
                out(i, j) = (at(0) - at(-1)) / h;
            else
                out(i, j) = (at(1) - at(-1)) / (2.0 * h);
        }
    }
    return out;
}

NodalMatrixField gradient_at_nodes(const VectorField& f) {
    NodalMatrixField g(f.spec);
    g.m11 = partial(f.comp1, 1);
    g.m12 = partial(f.comp1, 2);
    g.m21 = partial(f.comp2, 1);
    g.m22 = partial(f.comp2, 2);
    return g;
}

NodalArray second_derivative(const VectorField& f, int comp, int j, int k) {
    const NodalArray& v = f.component(comp);
    const GridSpec& spec = f.spec;
    const int n = spec.n();
    const double h = spec.h();
    NodalArray out(spec);

    if (j == k) {
        for (int q = 0; q <= n; ++q) {
            for (int p = 0; p <= n; ++p) {
                const int pos = j == 1 ? p : q;
                // Shift the three-point stencil inward at the boundary.
                const int c = pos == 0 ? 1 : (pos == n ? n - 1 : pos);
                auto at = [&](int idx) { return j == 1 ? v(idx, q) : v(p, idx); };
                out(p, q) = (at(c + 1) - 2.0 * at(c) + at(c - 1)) / (h * h);
            }
        }
        return out;
    }

    // Mixed: the symmetric four-point stencil inside, composed one-sided
    // differences on the boundary.
    const NodalArray composed = partial(partial(v, 1), 2);
    for (int q = 0; q <= n; ++q) {
        for (int p = 0; p <= n; ++p) {
            if (spec.is_boundary(p, q)) {
                out(p, q) = composed(p, q);
            } else {
                out(p, q) = (v(p + 1, q + 1) - v(p + 1, q - 1) - v(p - 1, q + 1) +
                             v(p - 1, q - 1)) /
                            (4.0 * h * h);
            }
        }
    }
    return out;
}

double integrate_trapezoid(const NodalArray& g) {
    const GridSpec& spec = g.spec();
    const int n = spec.n();
    const double h = spec.h();
    double sum = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
        for (int i = 0; i <= n; ++i) {
            const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
            sum += wi * wj * g(i, j);
        }
    }
    return sum * h * h;
}

double p1_exact_integral(const EnergyParams& p, const Matrix2& xi, const VectorField& f,
                         Diagonal diagonal) {
    const int n = f.spec.n();
    const double h = f.spec.h();
    const double f_xi = eval_f(p, xi);
    const NodalArray& u = f.comp1;
    const NodalArray& v = f.comp2;

    // Constant gradient of the linear interpolant on a triangle whose x-edge
    // runs (ax -> bx) and y-edge runs (ay -> by).
    auto tri = [&](int ax_i, int ax_j, int bx_i, int bx_j, int ay_i, int ay_j, int by_i,
                   int by_j) {
        const Matrix2 grad{(u(bx_i, bx_j) - u(ax_i, ax_j)) / h, (u(by_i, by_j) - u(ay_i, ay_j)) / h,
                           (v(bx_i, bx_j) - v(ax_i, ax_j)) / h, (v(by_i, by_j) - v(ay_i, ay_j)) / h};
        return eval_f(p, xi + grad) - f_xi;
    };

    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (diagonal == Diagonal::LowerLeftToUpperRight) {
                // {(i,j), (i+1,j), (i+1,j+1)} and {(i,j), (i+1,j+1), (i,j+1)}
                sum += tri(i, j, i + 1, j, i + 1, j, i + 1, j + 1);
                sum += tri(i, j + 1, i + 1, j + 1, i, j, i, j + 1);
            } else {
                // {(i,j), (i+1,j), (i,j+1)} and {(i+1,j), (i+1,j+1), (i,j+1)}
                sum += tri(i, j, i + 1, j, i, j, i, j + 1);
                sum += tri(i, j + 1, i + 1, j + 1, i + 1, j, i + 1, j + 1);
            }
        }
    }
    return sum * 0.5 * h * h;
}

namespace {

void require_same_grid(const VectorField& x, const VectorField& y) {
    if (!(x.spec == y.spec))
        throw DimensionError("field grids differ: n=" + std::to_string(x.spec.n()) +
                             " vs n=" + std::to_string(y.spec.n()));
}

}  // namespace

VectorField field_axpy(double alpha, const VectorField& x, const VectorField& y) {
    require_same_grid(x, y);
    VectorField out = y;
    auto& o1 = out.comp1.values();
    auto& o2 = out.comp2.values();
    const auto& x1 = x.comp1.values();
    const auto& x2 = x.comp2.values();
    for (std::size_t k = 0; k < o1.size(); ++k) {
        o1[k] += alpha * x1[k];
        o2[k] += alpha * x2[k];
    }
    return out;
}

double field_dot(const VectorField& x, const VectorField& y) {
    require_same_grid(x, y);
    const auto& x1 = x.comp1.values();
    const auto& x2 = x.comp2.values();
    const auto& y1 = y.comp1.values();
    const auto& y2 = y.comp2.values();
    double sum = 0.0;
    for (std::size_t k = 0; k < x1.size(); ++k) sum += x1[k] * y1[k] + x2[k] * y2[k];
    const double h = x.spec.h();
    return sum * h * h;
}

VectorField field_scale(double alpha, const VectorField& x) {
    VectorField out = x;
    for (double& v : out.comp1.values()) v *= alpha;
    for (double& v : out.comp2.values()) v *= alpha;
    return out;
}

VectorField refine(const VectorField& f, int factor) {
    if (factor < 2) throw ConfigError("refine factor must be >= 2");
    const int n = f.spec.n();
    const GridSpec fine(n * factor);
    VectorField out(fine);
    for (int q = 0; q <= fine.n(); ++q) {
        const int cj = std::min(q / factor, n - 1);
        const double ty = static_cast<double>(q - cj * factor) / factor;
        for (int p = 0; p <= fine.n(); ++p) {
            const int ci = std::min(p / factor, n - 1);
            const double tx = static_cast<double>(p - ci * factor) / factor;
            for (int c = 1; c <= 2; ++c) {
                const NodalArray& v = f.component(c);
                out.component(c)(p, q) =
                    (1.0 - tx) * (1.0 - ty) * v(ci, cj) + tx * (1.0 - ty) * v(ci + 1, cj) +
                    (1.0 - tx) * ty * v(ci, cj + 1) + tx * ty * v(ci + 1, cj + 1);
            }
        }
    }
    return project_boundary_zero(std::move(out));
}

void write_snapshot(std::ostream& os, const VectorField& f) {
    const int n = f.spec.n();
    os << "n=" << n << '\n';
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            os << i << ' ' << j << ' ' << format_double(f.comp1(i, j)) << ' '
               << format_double(f.comp2(i, j)) << '\n';
}

VectorField read_snapshot(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("n=", 0) != 0)
        throw ConfigError("snapshot: missing 'n=<int>' header");
    int n = 0;
    try {
        n = std::stoi(header.substr(2));
    } catch (const std::exception&) {
        throw ConfigError("snapshot: malformed header '" + header + "'");
    }
    VectorField f{GridSpec(n)};
    std::vector<char> seen(f.spec.node_count(), 0);
    std::size_t count = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        int i = -1, j = -1;
        double a = 0.0, b = 0.0;
        if (!(row >> i >> j >> a >> b) || i < 0 || j < 0 || i > n || j > n)
            throw ConfigError("snapshot: malformed row '" + line + "'");
        const std::size_t idx = static_cast<std::size_t>(j) * (n + 1) + i;
        if (!seen[idx]) ++count;
        seen[idx] = 1;
        f.comp1(i, j) = a;
        f.comp2(i, j) = b;
    }
    if (count != f.spec.node_count())
        throw ConfigError("snapshot: expected " + std::to_string(f.spec.node_count()) +
                          " nodes, found " + std::to_string(count));
    return f;
}

void save_snapshot(const std::filesystem::path& path, const VectorField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open snapshot for writing: " + path.string());
    write_snapshot(os, f);
    if (!os) throw std::runtime_error("failed writing snapshot: " + path.string());
}

VectorField load_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open snapshot: " + path.string());
    return read_snapshot(is);
}

}  // namespace qclab
