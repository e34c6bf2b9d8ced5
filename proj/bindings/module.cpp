#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tavi/harness.hpp"
#include "tavi/integrators_so3.hpp"
#include "tavi/integrators_vector.hpp"
#include "tavi/verify.hpp"

namespace py = pybind11;
using namespace tavi;

namespace {

using PyVec3 = std::array<double, 3>;
using PyMat3 = std::array<std::array<double, 3>, 3>;

Vec3 to_vec3(const PyVec3& v) { return {v[0], v[1], v[2]}; }
PyVec3 from_vec3(const Vec3& v) { return {v.x, v.y, v.z}; }

Mat3 to_mat3(const PyMat3& m) {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out(r, c) = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return out;
}

PyMat3 from_mat3(const Mat3& m) {
    PyMat3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
    return out;
}

Objective objective_from_python(int dim, py::function eval, py::function grad) {
    Objective obj;
    obj.dim = dim;
    obj.eval = [eval](std::span<const double> x) {
        return eval(std::vector<double>(x.begin(), x.end())).cast<double>();
    };
    obj.grad = [grad](std::span<const double> x) {
        return grad(std::vector<double>(x.begin(), x.end())).cast<std::vector<double>>();
    };
    return obj;
}

py::dict trace_to_dict(const Trace& trace) {
    py::list rows;
    for (const TraceRow& row : trace.rows) {
        py::dict r;
        r["iter"] = row.iter;
        r["tau"] = row.tau;
        r["t"] = row.t;
        r["f_err"] = row.f_err;
        r["grad_norm"] = row.grad_norm;
        r["step_physical"] = row.step_physical;
        r["orth_err"] = row.orth_err ? py::object(py::float_(*row.orth_err)) : py::none();
        rows.append(r);
    }
    py::dict out;
    out["so3"] = trace.so3;
    out["rows"] = rows;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Time-adaptive variational integrators for Bregman accelerated optimization";

    // base first: translators run newest-first, so derived types match
    // before the catch-all
    py::register_exception<Error>(m, "TaviError");
    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<StepTooLargeError>(m, "StepTooLargeError");
    py::register_exception<NonFiniteError>(m, "NonFiniteError");
    py::register_exception<NotSkewError>(m, "NotSkewError");
    py::register_exception<NotRotationError>(m, "NotRotationError");

    // ---- geometry ----------------------------------------------------------
    m.def("hat", [](const PyVec3& v) { return from_mat3(hat(to_vec3(v))); },
          "Skew matrix S with S w = v x w");
    m.def("vee", [](const PyMat3& s) { return from_vec3(vee(to_mat3(s))); });
    m.def("rodrigues_exp",
          [](const PyVec3& v) { return from_mat3(rodrigues_exp(to_vec3(v)).matrix()); });
    m.def("asin_step_map",
          [](const PyVec3& a) { return from_mat3(asin_step_map(to_vec3(a)).matrix()); });
    m.def("svd3", [](const PyMat3& a) {
        const Svd3 f = svd3(to_mat3(a));
        return py::make_tuple(from_mat3(f.u), from_vec3(f.s), from_mat3(f.v));
    });
    m.def("orthogonality_error",
          [](const PyMat3& r) { return orthogonality_error(to_mat3(r)); });

    // ---- Bregman family ----------------------------------------------------
    py::class_<BregmanParams>(m, "BregmanParams")
        .def(py::init([](double p, double p_ring, double c, double h, double t0) {
                 BregmanParams params{p, p_ring, c, h, t0};
                 params.validate();
                 return params;
             }),
             py::arg("p"), py::arg("p_ring"), py::arg("c") = 1.0, py::arg("h") = 1e-3,
             py::arg("t0") = 1.0)
        .def_readonly("p", &BregmanParams::p)
        .def_readonly("p_ring", &BregmanParams::p_ring)
        .def_readonly("c", &BregmanParams::c)
        .def_readonly("h", &BregmanParams::h)
        .def_readonly("t0", &BregmanParams::t0)
        .def("direct", &BregmanParams::direct);

    m.def("monitor_g", &monitor_g, py::arg("t"), py::arg("params"));
    m.def("exact_time_map", &exact_time_map, py::arg("tau"), py::arg("params"));

    // ---- objectives --------------------------------------------------------
    py::class_<Objective>(m, "Objective")
        .def_readonly("dim", &Objective::dim)
        .def("eval", [](const Objective& o, const std::vector<double>& x) { return o.eval(x); })
        .def("grad", [](const Objective& o, const std::vector<double>& x) { return o.grad(x); });
    py::class_<So3Objective>(m, "So3Objective")
        .def("eval",
             [](const So3Objective& o, const PyMat3& r) {
                 return o.eval(Rotation::from_matrix(to_mat3(r)));
             })
        .def("grad_left",
             [](const So3Objective& o, const PyMat3& r) {
                 return from_vec3(o.grad_left(Rotation::from_matrix(to_mat3(r))));
             })
        .def_property_readonly("f_star",
                               [](const So3Objective& o) { return o.f_star; });

    m.def("quartic_objective", &make_quartic_objective, py::arg("dim"));
    m.def("custom_objective", &objective_from_python, py::arg("dim"), py::arg("eval"),
          py::arg("grad"));
    m.def("quartic_eval", [](const std::vector<double>& x) {
        return quartic_eval(x, QuarticSpec(static_cast<int>(x.size())));
    });
    m.def("quartic_grad", [](const std::vector<double>& x) {
        return quartic_grad(x, QuarticSpec(static_cast<int>(x.size())));
    });
    m.def("wahba_objective",
          [](const PyMat3& a) { return make_wahba_objective(to_mat3(a)); });
    m.def("wahba_eval", [](const PyMat3& r, const PyMat3& a) {
        return wahba_eval(Rotation::from_matrix(to_mat3(r)), to_mat3(a));
    });
    m.def("wahba_grad_left", [](const PyMat3& r, const PyMat3& a) {
        return from_vec3(wahba_grad_left(Rotation::from_matrix(to_mat3(r)), to_mat3(a)));
    });
    m.def("wahba_optimal",
          [](const PyMat3& a) { return from_mat3(wahba_optimal(to_mat3(a)).matrix()); });
    m.def("random_wahba_matrix",
          [](std::uint64_t seed) { return from_mat3(random_wahba_matrix(seed)); });
    m.def("fd_check_vector", [](const Objective& obj, const std::vector<double>& x) {
        return fd_check_vector(obj, x);
    });

    // ---- vector-space steppers ----------------------------------------------
    py::class_<VectorState>(m, "VectorState")
        .def(py::init([](std::vector<double> q, std::vector<double> r, double qt, long k) {
                 return VectorState{std::move(q), std::move(r), qt, k};
             }),
             py::arg("q"), py::arg("r"), py::arg("qt"), py::arg("k") = 0)
        .def_readonly("q", &VectorState::q)
        .def_readonly("r", &VectorState::r)
        .def_readonly("qt", &VectorState::qt)
        .def_readonly("k", &VectorState::k);

    m.def("vector_init", [](std::vector<double> q0, const BregmanParams& params) {
        return vector_init(std::move(q0), params);
    });
    m.def("ltvi_adaptive_step", &ltvi_adaptive_step);
    m.def("ltvi_direct_step", &ltvi_direct_step);
    m.def("htvi_adaptive_step", &htvi_adaptive_step);
    m.def("htvi_direct_step", &htvi_direct_step);
    m.def("reference_flow_vector",
          [](const std::vector<double>& q0, const std::vector<double>& v0, double t0, double t1,
             long n_steps, const Objective& obj, const BregmanParams& params) {
              const FlowPoint fp = reference_flow_vector(q0, v0, t0, t1, n_steps, obj, params);
              return py::make_tuple(fp.q, fp.v);
          });

    // ---- SO(3) stepper -------------------------------------------------------
    py::class_<So3State>(m, "So3State")
        .def_property_readonly("R",
                               [](const So3State& s) { return from_mat3(s.R.matrix()); })
        .def_property_readonly("mu", [](const So3State& s) { return from_vec3(s.mu); })
        .def_readonly("qt", &So3State::qt)
        .def_readonly("k", &So3State::k);

    m.def("llgvi_init", [](const PyMat3& r0, const BregmanParams& params) {
        return llgvi_init(Rotation::from_matrix(to_mat3(r0)), params);
    });
    m.def("llgvi_adaptive_step", &llgvi_adaptive_step);

    // ---- harness --------------------------------------------------------------
    m.def("check_termination", &check_termination, py::arg("f_k"), py::arg("f_km1"),
          py::arg("f_star"), py::arg("delta"));
    m.def("run", [](const std::string& config_json) {
        const RunResult r = run_trajectory(parse_config(config_json));
        py::dict out = trace_to_dict(r.trace);
        out["converged"] = r.converged;
        out["iterations"] = r.iterations;
        out["final_f_err"] = r.final_f_err;
        out["wall_seconds"] = r.wall_seconds;
        return out;
    });
    m.def("compare", [](const std::string& config_json) {
        const ComparisonReport rep = compare_runs(parse_compare_config(config_json));
        py::list out;
        for (const RunSummary& s : rep.summaries) {
            py::dict d;
            d["label"] = s.label;
            d["converged"] = s.converged;
            d["iterations"] = s.iterations;
            d["final_f_err"] = s.final_f_err;
            d["wall_seconds"] = s.wall_seconds;
            out.append(d);
        }
        return out;
    });
    m.def("verification_suite", [](bool quick) {
        py::list out;
        for (const CheckResult& r : verification_suite(quick)) {
            py::dict d;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            out.append(d);
        }
        return out;
    }, py::arg("quick") = false);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
