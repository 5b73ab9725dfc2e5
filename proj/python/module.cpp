#include "elite_surge/acquisition.hpp"
#include "elite_surge/bench.hpp"
#include "elite_surge/gpr.hpp"
#include "elite_surge/harness.hpp"
#include "elite_surge/hybrid.hpp"
#include "elite_surge/stats.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace elite_surge;

PYBIND11_MODULE(elite_surge, m) {
    m.doc() = "Surrogate-assisted evolutionary optimization toolkit";

    py::register_exception<BudgetExhausted>(m, "BudgetExhaustedError");
    py::register_exception<DimensionMismatch>(m, "DimensionMismatchError");
    py::register_exception<SingularKernel>(m, "SingularKernelError");

    py::class_<Bounds>(m, "Bounds")
        .def(py::init([](const Vector& lo, const Vector& hi) { return Bounds{lo, hi}; }))
        .def_readonly("lo", &Bounds::lo)
        .def_readonly("hi", &Bounds::hi)
        .def("dimension", &Bounds::dimension)
        .def("clip", &Bounds::clip);
    m.def("uniform_bounds", &uniform_bounds, py::arg("dimension"), py::arg("lo"), py::arg("hi"));

    py::class_<EvaluationBudget>(m, "EvaluationBudget")
        .def(py::init<std::int64_t>(), py::arg("max_evaluations"))
        .def_property_readonly("max_evaluations", &EvaluationBudget::max_evaluations)
        .def_property_readonly("used", &EvaluationBudget::used)
        .def_property_readonly("remaining", &EvaluationBudget::remaining);

    py::class_<BenchmarkProblem>(m, "BenchmarkProblem")
        .def_property_readonly("id", &BenchmarkProblem::id)
        .def_property_readonly("dimension", &BenchmarkProblem::dimension)
        .def_property_readonly("family",
                               [](const BenchmarkProblem& p) { return family_name(p.family()); })
        .def_property_readonly("bias", &BenchmarkProblem::bias)
        .def_property_readonly("optimum_value", &BenchmarkProblem::optimum_value)
        .def_property_readonly("shift", &BenchmarkProblem::shift)
        .def_property_readonly("bounds", &BenchmarkProblem::bounds)
        .def("value", &BenchmarkProblem::value, py::arg("x"),
             "Raw objective value (no budget accounting)")
        .def("evaluate",
             [](const BenchmarkProblem& p, const Vector& x, EvaluationBudget& budget) {
                 return evaluate(p, x, budget);
             },
             py::arg("x"), py::arg("budget"), "True evaluation: consumes one budget unit");

    m.def("make_suite", &make_suite, py::arg("seed"), py::arg("dimension"));
    m.def(
        "make_problem",
        [](const std::string& id, const std::string& base, const Bounds& bounds,
           const Vector& shift, double bias, std::optional<std::uint64_t> rotation_seed) {
            BaseFunction bf;
            ProblemFamily family = ProblemFamily::Multimodal;
            if (base == "sphere") {
                bf = BaseFunction::Sphere;
                family = ProblemFamily::Unimodal;
            } else if (base == "elliptic") {
                bf = BaseFunction::Elliptic;
                family = ProblemFamily::Unimodal;
            } else if (base == "bent_cigar") {
                bf = BaseFunction::BentCigar;
                family = ProblemFamily::Unimodal;
            } else if (base == "rastrigin") {
                bf = BaseFunction::Rastrigin;
            } else if (base == "ackley") {
                bf = BaseFunction::Ackley;
            } else if (base == "griewank") {
                bf = BaseFunction::Griewank;
            } else if (base == "rosenbrock") {
                bf = BaseFunction::Rosenbrock;
            } else if (base == "schwefel") {
                bf = BaseFunction::Schwefel;
            } else {
                throw std::invalid_argument("unknown base function '" + base + "'");
            }
            Matrix rotation = Matrix::Identity(bounds.dimension(), bounds.dimension());
            if (rotation_seed) {
                Rng rng(*rotation_seed);
                rotation = random_rotation(bounds.dimension(), rng);
            }
            return BenchmarkProblem(id, family, bf, bounds, shift, rotation, bias);
        },
        py::arg("id"), py::arg("base"), py::arg("bounds"), py::arg("shift"), py::arg("bias") = 0.0,
        py::arg("rotation_seed") = std::nullopt);

    py::class_<GprModel>(m, "GprModel")
        .def_static(
            "fit",
            [](const std::vector<std::pair<Vector, double>>& points, const Bounds& bounds) {
                return GprModel::fit(points, bounds);
            },
            py::arg("points"), py::arg("bounds"))
        .def("predict",
             [](const GprModel& model, const Vector& x) {
                 const auto p = model.predict(x);
                 return std::make_pair(p.mu, p.sigma);
             })
        .def_property_readonly("training_size", &GprModel::training_size)
        .def_property_readonly("degenerate", &GprModel::degenerate)
        .def_property_readonly("length_scale",
                               [](const GprModel& m_) { return m_.kernel_params().length_scale; })
        .def_property_readonly("signal_variance", [](const GprModel& m_) {
            return m_.kernel_params().signal_variance;
        });

    m.def("pi_score", &pi_score, py::arg("mu"), py::arg("sigma"), py::arg("incumbent"),
          py::arg("xi") = 0.0);
    m.def("ei_score", &ei_score, py::arg("mu"), py::arg("sigma"), py::arg("incumbent"));
    m.def("lcb_score", &lcb_score, py::arg("mu"), py::arg("sigma"), py::arg("beta"));

    m.def(
        "mann_whitney_u",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            const auto r = mann_whitney_u(a, b);
            return std::make_pair(r.u_statistic, r.p_two_sided);
        },
        py::arg("a"), py::arg("b"), "Returns (U of a, two-sided p), normal approximation");
    m.def(
        "mann_whitney_u_exact",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            const auto r = mann_whitney_u_exact(a, b);
            return std::make_pair(r.u_statistic, r.p_two_sided);
        },
        py::arg("a"), py::arg("b"), "Exact enumeration (combined size <= 20)");
    m.def(
        "classify",
        [](const std::vector<double>& hybrid_errors, const std::vector<double>& baseline_errors) {
            const auto v = classify(hybrid_errors, baseline_errors);
            py::dict out;
            out["u_statistic"] = v.u_statistic;
            out["p_two_sided"] = v.p_two_sided;
            out["direction"] = direction_name(v.direction);
            out["symbol"] = significance_name(v.symbol);
            return out;
        },
        py::arg("hybrid_errors"), py::arg("baseline_errors"));

    py::enum_<BackendKind>(m, "BackendKind")
        .value("GA", BackendKind::GA)
        .value("DE", BackendKind::DE)
        .value("CMAES", BackendKind::CMAES);

    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("problem_id", &TrialRecord::problem_id)
        .def_readonly("hybrid", &TrialRecord::hybrid)
        .def_readonly("dimension", &TrialRecord::dimension)
        .def_readonly("seed", &TrialRecord::seed)
        .def_readonly("history", &TrialRecord::history)
        .def_readonly("best_value", &TrialRecord::best_value)
        .def_readonly("best_x", &TrialRecord::best_x)
        .def_readonly("final_error", &TrialRecord::final_error)
        .def_readonly("evaluations", &TrialRecord::evaluations)
        .def_readonly("generations", &TrialRecord::generations)
        .def_readonly("elite_attempted", &TrialRecord::elite_attempted)
        .def_readonly("elite_accepted", &TrialRecord::elite_accepted);

    m.def(
        "run_trial",
        [](const BenchmarkProblem& problem, BackendKind backend, bool hybrid, std::uint64_t seed,
           double epsilon, int population_size, std::int64_t max_evaluations,
           const py::object& observer) {
            HybridConfig config;
            config.backend = backend;
            config.hybrid_enabled = hybrid;
            config.acquisition = AcquisitionSpec::epsilon_greedy(epsilon);
            config.population_size = population_size;
            RunOptions options;
            if (!observer.is_none()) {
                options.evaluation_observer = [&observer](const Vector& x, double f) {
                    observer(x, f);
                };
                return run_trial(problem, config, seed, max_evaluations, options);
            }
            py::gil_scoped_release release;
            return run_trial(problem, config, seed, max_evaluations, options);
        },
        py::arg("problem"), py::arg("backend"), py::arg("hybrid"), py::arg("seed"),
        py::arg("epsilon") = 0.1, py::arg("population_size") = 0,
        py::arg("max_evaluations") = 0, py::arg("observer") = py::none());

    m.def(
        "run_boa",
        [](const std::function<double(const Vector&)>& objective, const Bounds& bounds,
           int n_init, int max_iter, const std::string& acquisition, std::uint64_t seed) {
            AcquisitionSpec spec;
            if (acquisition == "ei")
                spec = AcquisitionSpec::expected_improvement();
            else if (acquisition == "pi")
                spec = AcquisitionSpec::probability_of_improvement();
            else if (acquisition == "ucb")
                spec = AcquisitionSpec::upper_confidence_bound();
            else
                spec = AcquisitionSpec::epsilon_greedy();
            const BoaResult result = run_boa(objective, bounds, n_init, max_iter, spec, seed);
            py::dict out;
            out["best_x"] = result.best_x;
            out["best_value"] = result.best_value;
            out["incumbent_history"] = result.incumbent_history;
            out["evaluations"] = result.evaluations;
            return out;
        },
        py::arg("objective"), py::arg("bounds"), py::arg("n_init"), py::arg("max_iter"),
        py::arg("acquisition") = "ei", py::arg("seed") = 0);
}
