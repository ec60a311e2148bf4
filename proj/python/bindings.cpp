#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "legsynth/errors.hpp"
#include "legsynth/evaluation.hpp"
#include "legsynth/io.hpp"
#include "legsynth/kinematics.hpp"
#include "legsynth/line_fit.hpp"
#include "legsynth/optimizer.hpp"
#include "legsynth/oracle.hpp"
#include "legsynth/pareto.hpp"

namespace py = pybind11;
using namespace legsynth;

namespace {

LinkLengths lengths_of(MechanismKind kind, double l1, double l2, std::optional<double> l3) {
    if (kind == MechanismKind::SlotFollower) {
        l3.reset();
    }
    return {l1, l2, l3};
}

PipeSpec pipe_of(double r_min, double r_max) {
    PipeSpec p;
    p.r_min = r_min;
    p.r_max = r_max;
    return p;
}

std::vector<ObjectivePoint> points_of(const std::vector<std::pair<double, double>>& pts) {
    std::vector<ObjectivePoint> out;
    out.reserve(pts.size());
    for (const auto& [dx, eta] : pts) {
        out.push_back({dx, eta});
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_legsynth, m) {
    m.doc() = "Dimensional synthesis of in-pipe robot leg mechanisms";

    static py::exception<Error> error(m, "LegsynthError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object inst = py::handle(error)(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error.ptr(), inst.ptr());
        }
    });

    py::enum_<MechanismKind>(m, "MechanismKind")
        .value("SlotFollower", MechanismKind::SlotFollower)
        .value("CrankSlider4", MechanismKind::CrankSlider4)
        .value("CrankSlider6", MechanismKind::CrankSlider6);

    py::class_<ObjectivePoint>(m, "ObjectivePoint")
        .def(py::init<double, double>(), py::arg("delta_x"), py::arg("eta"))
        .def_readwrite("delta_x", &ObjectivePoint::delta_x)
        .def_readwrite("eta", &ObjectivePoint::eta)
        .def("__repr__", [](const ObjectivePoint& p) {
            std::ostringstream os;
            os << "ObjectivePoint(delta_x=" << p.delta_x << ", eta=" << p.eta << ")";
            return os.str();
        });

    m.def(
        "direct_kinematics",
        [](MechanismKind kind, double l1, double l2, std::optional<double> l3, double rho) {
            return direct_kinematics(kind, lengths_of(kind, l1, l2, l3), rho);
        },
        py::arg("kind"), py::arg("l1"), py::arg("l2"), py::arg("l3"), py::arg("rho"));
    m.def(
        "inverse_kinematics",
        [](MechanismKind kind, double l1, double l2, std::optional<double> l3, double y) {
            return inverse_kinematics(kind, lengths_of(kind, l1, l2, l3), y);
        },
        py::arg("kind"), py::arg("l1"), py::arg("l2"), py::arg("l3"), py::arg("y"));
    m.def(
        "transmission_efficiency",
        [](MechanismKind kind, double l1, double l2, std::optional<double> l3, double rho) {
            return transmission_efficiency(kind, lengths_of(kind, l1, l2, l3), rho);
        },
        py::arg("kind"), py::arg("l1"), py::arg("l2"), py::arg("l3"), py::arg("rho"));
    m.def(
        "joint_layout",
        [](MechanismKind kind, double l1, double l2, std::optional<double> l3, double rho) {
            const JointLayout j = joint_layout(kind, lengths_of(kind, l1, l2, l3), rho);
            py::dict out;
            const auto pt = [](const Point2& p) { return py::make_tuple(p.x, p.y); };
            out["O"] = pt(j.O);
            out["A"] = pt(j.A);
            out["B"] = pt(j.B);
            if (j.C) {
                out["C"] = pt(*j.C);
                out["D"] = pt(*j.D);
            }
            out["P"] = pt(j.P);
            return out;
        },
        py::arg("kind"), py::arg("l1"), py::arg("l2"), py::arg("l3"), py::arg("rho"));
    m.def(
        "elbow_max_length",
        [](double r_p, double r_c, double d_r) { return elbow_max_length(ElbowSpec{r_p, r_c, d_r}); },
        py::arg("r_p") = 20.0, py::arg("r_c") = 45.0, py::arg("d_r") = 30.0);

    m.def(
        "evaluate_design",
        [](MechanismKind kind, double l1, double l2, std::optional<double> l3, double r_min, double r_max,
           std::size_t samples) {
            EvaluationOptions opts;
            opts.samples = samples;
            const Evaluation e = evaluate_design({kind, lengths_of(kind, l1, l2, l3)}, pipe_of(r_min, r_max), opts);
            py::dict out;
            out["delta_x"] = e.delta_x ? py::cast(*e.delta_x) : py::none();
            out["eta_min"] = e.eta_min ? py::cast(*e.eta_min) : py::none();
            out["feasible"] = e.feasible;
            py::dict margins;
            for (const auto& c : e.constraints) {
                margins[py::str(std::string(to_string(c.id)))] = c.margin;
            }
            out["margins"] = margins;
            out["note"] = e.note;
            return out;
        },
        py::arg("kind"), py::arg("l1"), py::arg("l2"), py::arg("l3") = py::none(), py::arg("r_min") = 14.0,
        py::arg("r_max") = 29.0, py::arg("samples") = 512);

    m.def(
        "hypervolume",
        [](const std::vector<std::pair<double, double>>& pts, std::pair<double, double> ref) {
            return hypervolume(points_of(pts), {ref.first, ref.second});
        },
        py::arg("points"), py::arg("reference") = std::pair<double, double>{35.0, 0.3});
    m.def(
        "non_dominated_filter",
        [](const std::vector<std::pair<double, double>>& pts) { return non_dominated_filter(points_of(pts)); },
        py::arg("points"));

    py::class_<OptimizerSettings>(m, "OptimizerSettings")
        .def(py::init<>())
        .def_readwrite("population", &OptimizerSettings::population)
        .def_readwrite("generations", &OptimizerSettings::generations)
        .def_readwrite("pareto_fraction", &OptimizerSettings::pareto_fraction)
        .def_readwrite("tolerance", &OptimizerSettings::tolerance)
        .def_readwrite("stall_generations", &OptimizerSettings::stall_generations)
        .def_readwrite("sessions", &OptimizerSettings::sessions)
        .def_readwrite("seed", &OptimizerSettings::seed)
        .def_readwrite("crossover_rate", &OptimizerSettings::crossover_rate)
        .def_readwrite("mutation_rate", &OptimizerSettings::mutation_rate)
        .def_readwrite("samples", &OptimizerSettings::samples)
        .def_readwrite("threads", &OptimizerSettings::threads)
        .def("validate", &OptimizerSettings::validate);

    py::class_<ParetoSet>(m, "ParetoSet")
        .def("__len__", [](const ParetoSet& f) { return f.members.size(); })
        .def("points", &ParetoSet::points)
        .def("hypervolume", [](const ParetoSet& f) { return hypervolume(f.points()); })
        .def("designs",
             [](const ParetoSet& f) {
                 py::list out;
                 for (const auto& m : f.members) {
                     const auto& l = m.design.lengths;
                     out.append(py::make_tuple(m.design.kind, l.l1, l.l2,
                                               l.l3 ? py::cast(*l.l3) : py::none()));
                 }
                 return out;
             })
        .def("to_csv",
             [](const ParetoSet& f) {
                 std::ostringstream os;
                 write_front_csv(os, export_order(f.members));
                 return os.str();
             })
        .def("to_svg",
             [](const ParetoSet& f) {
                 std::ostringstream os;
                 write_front_svg(os, export_order(f.members));
                 return os.str();
             })
        .def_property_readonly("method", [](const ParetoSet& f) { return f.provenance.method; })
        .def_property_readonly("seeds", [](const ParetoSet& f) { return f.provenance.seeds; })
        .def_property_readonly("evaluations", [](const ParetoSet& f) { return f.provenance.evaluations; });

    m.def(
        "nsga2_run",
        [](const OptimizerSettings& s, std::optional<MechanismKind> kind, double r_min, double r_max) {
            py::gil_scoped_release release;
            return nsga2_run(s, pipe_of(r_min, r_max), kind);
        },
        py::arg("settings"), py::arg("fixed_kind") = py::none(), py::arg("r_min") = 14.0, py::arg("r_max") = 29.0);

    m.def(
        "grid_oracle",
        [](const std::vector<MechanismKind>& kinds, const std::string& l1, const std::string& l2,
           const std::string& l3, double r_min, double r_max, std::size_t samples) {
            GridSpec g;
            g.kinds = kinds;
            g.l1 = parse_grid_range(l1);
            g.l2 = parse_grid_range(l2);
            g.l3 = parse_grid_range(l3);
            OracleOptions opts;
            opts.samples = samples;
            py::gil_scoped_release release;
            return grid_oracle(g, pipe_of(r_min, r_max), opts);
        },
        py::arg("kinds"), py::arg("l1"), py::arg("l2"), py::arg("l3") = "1:1:1", py::arg("r_min") = 14.0,
        py::arg("r_max") = 29.0, py::arg("samples") = 512);

    m.def(
        "pareto_line_fit",
        [](const ParetoSet& f) {
            py::list out;
            for (const PlaneFit& p : pareto_line_fit(f)) {
                py::dict d;
                d["coefficients"] = p.coefficients;
                d["constant"] = p.constant;
                d["rms"] = p.rms;
                d["direction"] = p.direction;
                d["line_ratio"] = p.line_ratio;
                d["collinear"] = p.collinear;
                d["members"] = p.members;
                out.append(d);
            }
            return out;
        },
        py::arg("front"));

    m.attr("__version__") = version_string();
}
