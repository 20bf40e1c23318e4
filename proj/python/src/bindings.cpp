#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qclab/campaign.hpp"

namespace py = pybind11;
using namespace qclab;

namespace {

Matrix2 to_matrix(const py::object& obj) {
    if (py::isinstance<Matrix2>(obj)) return obj.cast<Matrix2>();
    auto a = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(obj);
    if (!a || a.ndim() != 2 || a.shape(0) != 2 || a.shape(1) != 2)
        throw py::value_error("expected a Matrix2 or a 2x2 array");
    auto r = a.unchecked<2>();
    return {r(0, 0), r(0, 1), r(1, 0), r(1, 1)};
}

py::array_t<double> matrix_to_numpy(const Matrix2& m) {
    py::array_t<double> out({2, 2});
    auto w = out.mutable_unchecked<2>();
    w(0, 0) = m.a11;
    w(0, 1) = m.a12;
    w(1, 0) = m.a21;
    w(1, 1) = m.a22;
    return out;
}

// Shape (2, n+1, n+1), indexed [component, i, j] with i along x1.
py::array_t<double> field_to_numpy(const VectorField& f) {
    const py::ssize_t m = f.spec.nodes_per_axis();
    py::array_t<double> out({py::ssize_t{2}, m, m});
    auto w = out.mutable_unchecked<3>();
    for (int c = 0; c < 2; ++c)
        for (py::ssize_t i = 0; i < m; ++i)
            for (py::ssize_t j = 0; j < m; ++j)
                w(c, i, j) = f.component(c + 1)(static_cast<int>(i), static_cast<int>(j));
    return out;
}

VectorField field_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 3 || a.shape(0) != 2 || a.shape(1) != a.shape(2) || a.shape(1) < 3)
        throw py::value_error("expected an array of shape (2, n+1, n+1) with n >= 2");
    const int n = static_cast<int>(a.shape(1)) - 1;
    VectorField f{GridSpec(n)};
    auto r = a.unchecked<3>();
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) f.component(c + 1)(i, j) = r(c, i, j);
    return f;
}

py::dict record_to_dict(const TrialRecord& r) {
    py::dict d;
    d["xi"] = matrix_to_numpy(r.xi);
    d["gamma"] = r.gamma;
    d["j_value"] = r.j_value;
    d["iteration"] = r.iteration;
    d["field"] = field_to_numpy(r.field_snapshot);
    d["verified"] = r.verified;
    d["j_exact_p1"] = r.j_exact_p1;
    d["j_refined"] = r.j_refined;
    return d;
}

}  // namespace

PYBIND11_MODULE(_qclab, m) {
    m.doc() = "Energy, grid functional and descent search core";
    m.attr("__version__") = tool_version();

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Matrix2>(m, "Matrix2")
        .def(py::init<>())
        .def(py::init<double, double, double, double>(), py::arg("a11"), py::arg("a12"),
             py::arg("a21"), py::arg("a22"))
        .def(py::init([](const py::object& o) { return to_matrix(o); }))
        .def_readwrite("a11", &Matrix2::a11)
        .def_readwrite("a12", &Matrix2::a12)
        .def_readwrite("a21", &Matrix2::a21)
        .def_readwrite("a22", &Matrix2::a22)
        .def_static("identity", &Matrix2::identity)
        .def_static("diag", &Matrix2::diag)
        .def("to_numpy", &matrix_to_numpy)
        .def(py::self == py::self)
        .def("__repr__", [](const Matrix2& x) {
            return "Matrix2(" + format_matrix_literal(x) + ")";
        });

    m.def("eval_f", [](double gamma, const py::object& x) { return eval_f({gamma}, to_matrix(x)); },
          py::arg("gamma"), py::arg("xi"));
    m.def("df_dxi",
          [](double gamma, const py::object& x) { return matrix_to_numpy(df_dxi({gamma}, to_matrix(x))); },
          py::arg("gamma"), py::arg("xi"));
    m.def("rank_one_threshold", &rank_one_threshold);
    m.def(
        "search_rank_one_violation",
        [](double gamma, std::uint64_t seed, int budget) -> py::object {
            const auto w = search_rank_one_violation({gamma}, seed, budget);
            if (!w) return py::none();
            py::dict d;
            d["base"] = matrix_to_numpy(w->base);
            d["dir_a"] = w->dir_a;
            d["dir_b"] = w->dir_b;
            d["t"] = w->t;
            d["second_diff"] = w->second_diff;
            return d;
        },
        py::arg("gamma"), py::arg("seed") = 0, py::arg("budget") = 100000);

    m.def(
        "make_field",
        [](int n, const std::string& init) {
            return field_to_numpy(make_field(GridSpec(n), parse_initializer(init)));
        },
        py::arg("n"), py::arg("init") = "p1");

    auto scheme_of = [](const std::string& s) { return parse_scheme(s); };
    m.def(
        "eval_J",
        [scheme_of](double gamma, const py::object& xi, py::array_t<double> field,
                    const std::string& scheme) {
            return eval_J({gamma}, to_matrix(xi), field_from_numpy(field), scheme_of(scheme));
        },
        py::arg("gamma"), py::arg("xi"), py::arg("field"), py::arg("scheme") = "trapezoid");
    m.def(
        "grad_J",
        [](double gamma, const py::object& xi, py::array_t<double> field,
           const std::string& method) {
            GradMethod g;
            if (method == "divergence")
                g = GradMethod::DivergenceForm;
            else if (method == "expanded")
                g = GradMethod::ExpandedForm;
            else
                throw py::value_error("method must be 'divergence' or 'expanded'");
            return field_to_numpy(grad_J({gamma}, to_matrix(xi), field_from_numpy(field), g));
        },
        py::arg("gamma"), py::arg("xi"), py::arg("field"), py::arg("method") = "divergence");
    m.def(
        "p1_exact_integral",
        [](double gamma, const py::object& xi, py::array_t<double> field) {
            return p1_exact_integral({gamma}, to_matrix(xi), field_from_numpy(field));
        },
        py::arg("gamma"), py::arg("xi"), py::arg("field"));

    m.def(
        "run_search",
        [](const std::vector<std::string>& args) {
            const CampaignOptions o = parse_config(args);
            SearchResult r;
            {
                py::gil_scoped_release release;
                r = run_search(o.config);
            }
            py::list records;
            for (TrialRecord& rec : r.records)
                records.append(record_to_dict(verify_record(rec, o.verify_refine,
                                                            o.config.violation_tol)));
            py::dict trace;
            std::vector<std::int64_t> it;
            std::vector<double> gamma, j, tau;
            for (const TraceEntry& e : r.trace) {
                it.push_back(e.iteration);
                gamma.push_back(e.gamma);
                j.push_back(e.j_value);
                tau.push_back(e.tau);
            }
            trace["iteration"] = py::array(py::cast(it));
            trace["gamma"] = py::array(py::cast(gamma));
            trace["j_value"] = py::array(py::cast(j));
            trace["tau"] = py::array(py::cast(tau));
            py::dict out;
            out["records"] = records;
            out["trace"] = trace;
            return out;
        },
        py::arg("args") = std::vector<std::string>{},
        "Single-seed descent search configured with `qclab run` flags.");
}
