#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "codecsel/bounds.hpp"
#include "codecsel/global_sampling.hpp"
#include "codecsel/io.hpp"
#include "codecsel/psp.hpp"
#include "codecsel/synth.hpp"

namespace py = pybind11;
using namespace codecsel;

namespace {

py::object optional_to_py(const std::optional<double>& v) {
  if (!v) return py::none();
  return py::float_(*v);
}

}  // namespace

PYBIND11_MODULE(_codecsel, m) {
  m.doc() = "statistically certified selection from a finite codec family";

  py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<BoundViolationError>(m, "BoundViolationError", PyExc_RuntimeError);

  py::enum_<BoundMethod>(m, "BoundMethod")
      .value("finite_sample_emd", BoundMethod::finite_sample_emd)
      .value("asymptotic_emd", BoundMethod::asymptotic_emd)
      .value("hoeffding_union", BoundMethod::hoeffding_union)
      .value("gaussian_chernoff_union", BoundMethod::gaussian_chernoff_union);

  py::enum_<Tails>(m, "Tails").value("one", Tails::one).value("two", Tails::two);

  py::enum_<Feasibility>(m, "Feasibility")
      .value("certainly_feasible", Feasibility::certainly_feasible)
      .value("possibly_feasible", Feasibility::possibly_feasible)
      .value("certainly_infeasible", Feasibility::certainly_infeasible);

  py::enum_<TerminationReason>(m, "TerminationReason")
      .value("singleton", TerminationReason::singleton)
      .value("epsilon_optimal", TerminationReason::epsilon_optimal)
      .value("samples_exhausted", TerminationReason::samples_exhausted)
      .value("not_applicable", TerminationReason::not_applicable);

  py::enum_<DistKind>(m, "DistKind")
      .value("point", DistKind::point)
      .value("uniform", DistKind::uniform)
      .value("beta", DistKind::beta)
      .value("truncated_gaussian", DistKind::truncated_gaussian)
      .value("gaussian", DistKind::gaussian);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readonly("lo", &Interval::lo)
      .def_readonly("hi", &Interval::hi)
      .def("width", &Interval::width)
      .def("contains", &Interval::contains)
      .def("__repr__", [](const Interval& iv) {
        return "Interval(" + format_double(iv.lo) + ", " + format_double(iv.hi) + ")";
      });

  py::class_<CriterionMatrix>(m, "CriterionMatrix")
      .def(py::init<std::vector<std::string>, std::vector<std::string>,
                    std::vector<std::string>, std::vector<double>>(),
           py::arg("codec_ids"), py::arg("criterion_ids"), py::arg("sample_ids"),
           py::arg("values"))
      .def_property_readonly("codec_ids", &CriterionMatrix::codec_ids)
      .def_property_readonly("criterion_ids", &CriterionMatrix::criterion_ids)
      .def_property_readonly("sample_ids", &CriterionMatrix::sample_ids)
      .def("value", &CriterionMatrix::value)
      .def("mean", &CriterionMatrix::mean)
      .def("shuffled", &CriterionMatrix::shuffled);

  py::class_<Objective>(m, "Objective")
      .def(py::init([](std::map<std::string, double> weights) {
             Objective o;
             o.weights = std::move(weights);
             o.validate();
             return o;
           }),
           py::arg("weights"))
      .def_readonly("weights", &Objective::weights);

  py::class_<ConstraintSpace::HalfSpace>(m, "HalfSpace")
      .def(py::init([](std::map<std::string, double> coeffs, double bound) {
             return ConstraintSpace::HalfSpace{std::move(coeffs), bound};
           }),
           py::arg("coeffs"), py::arg("bound"))
      .def_readonly("coeffs", &ConstraintSpace::HalfSpace::coeffs)
      .def_readonly("bound", &ConstraintSpace::HalfSpace::bound);

  py::class_<ConstraintSpace>(m, "ConstraintSpace")
      .def(py::init<>())
      .def(py::init([](std::vector<ConstraintSpace::HalfSpace> halfspaces) {
             ConstraintSpace s;
             s.halfspaces = std::move(halfspaces);
             return s;
           }),
           py::arg("halfspaces"))
      .def_readonly("halfspaces", &ConstraintSpace::halfspaces);

  py::class_<ConfidenceRectangle>(m, "ConfidenceRectangle")
      .def_readonly("intervals", &ConfidenceRectangle::intervals)
      .def_readonly("delta", &ConfidenceRectangle::delta)
      .def_readonly("method", &ConfidenceRectangle::method)
      .def("at", &ConfidenceRectangle::at);

  py::class_<TraceEntry>(m, "TraceEntry")
      .def_readonly("iteration", &TraceEntry::iteration)
      .def_readonly("batch_size", &TraceEntry::batch_size)
      .def_readonly("active_codecs", &TraceEntry::active_codecs)
      .def_readonly("intervals", &TraceEntry::intervals)
      .def_readonly("liberal", &TraceEntry::liberal)
      .def_readonly("conservative", &TraceEntry::conservative)
      .def_readonly("violations", &TraceEntry::violations);

  py::class_<SelectionReport>(m, "SelectionReport")
      .def_readonly("liberal_set", &SelectionReport::liberal_set)
      .def_readonly("conservative_set", &SelectionReport::conservative_set)
      .def_readonly("estimates", &SelectionReport::estimates)
      .def_readonly("rectangle", &SelectionReport::rectangle)
      .def_readonly("objective_intervals", &SelectionReport::objective_intervals)
      .def_readonly("trace", &SelectionReport::trace)
      .def_readonly("terminated_reason", &SelectionReport::terminated_reason)
      .def_readonly("no_feasible_codec", &SelectionReport::no_feasible_codec)
      .def_readonly("certified", &SelectionReport::certified)
      .def_readonly("samples_used", &SelectionReport::samples_used)
      .def_property_readonly("sandwich", [](const SelectionReport& r) {
        return py::make_tuple(optional_to_py(r.sandwich.lower),
                              optional_to_py(r.sandwich.upper));
      });

  py::class_<GsConfig>(m, "GsConfig")
      .def(py::init([](double delta, BoundMethod method, Objective objective,
                       ConstraintSpace constraints) {
             return GsConfig{delta, method, std::move(objective), std::move(constraints)};
           }),
           py::arg("delta"), py::arg("method"), py::arg("objective"),
           py::arg("constraints") = ConstraintSpace{});

  py::class_<PspConfig>(m, "PspConfig")
      .def(py::init([](std::size_t s0, double epsilon, double delta, BoundMethod method,
                       Objective objective, ConstraintSpace constraints) {
             return PspConfig{s0, epsilon, delta, method, std::move(objective),
                              std::move(constraints)};
           }),
           py::arg("s0"), py::arg("epsilon"), py::arg("delta"), py::arg("method"),
           py::arg("objective"), py::arg("constraints") = ConstraintSpace{});

  py::class_<VarianceEstimate>(m, "VarianceEstimate")
      .def(py::init([](double sigma_sq) {
             VarianceEstimate v;
             v.sigma_sq = sigma_sq;
             return v;
           }),
           py::arg("sigma_sq"))
      .def_readonly("sigma_sq", &VarianceEstimate::sigma_sq)
      .def_readonly("per_codec", &VarianceEstimate::per_codec);

  py::class_<BatchSchedule>(m, "BatchSchedule")
      .def_readonly("iterations", &BatchSchedule::iterations)
      .def_readonly("sizes", &BatchSchedule::sizes)
      .def("total_used", &BatchSchedule::total_used);

  py::class_<DistSpec>(m, "DistSpec")
      .def_static("point", &DistSpec::point)
      .def_static("uniform", &DistSpec::uniform)
      .def_static("beta", &DistSpec::beta)
      .def_static("truncated_gaussian", &DistSpec::truncated_gaussian)
      .def_static("gaussian", &DistSpec::gaussian)
      .def_readonly("kind", &DistSpec::kind)
      .def("mean", &DistSpec::mean)
      .def("variance", &DistSpec::variance)
      .def("unit_bounded", &DistSpec::unit_bounded);

  py::class_<SyntheticWorld>(m, "SyntheticWorld")
      .def(py::init<std::vector<std::string>, std::vector<std::string>, std::vector<DistSpec>,
                    std::uint64_t>(),
           py::arg("codec_ids"), py::arg("criterion_ids"), py::arg("dists"), py::arg("seed"))
      .def_readonly("codec_ids", &SyntheticWorld::codec_ids)
      .def_readonly("criterion_ids", &SyntheticWorld::criterion_ids)
      .def("true_mean", &SyntheticWorld::true_mean)
      .def("true_variance", &SyntheticWorld::true_variance)
      .def("unit_bounded", &SyntheticWorld::unit_bounded);

  py::class_<OracleSelection>(m, "OracleSelection")
      .def_readonly("feasible", &OracleSelection::feasible)
      .def_readonly("optimal", &OracleSelection::optimal)
      .def_property_readonly("value",
                             [](const OracleSelection& s) { return optional_to_py(s.value); });

  py::class_<CoverageStats>(m, "CoverageStats")
      .def_readonly("trials", &CoverageStats::trials)
      .def_readonly("config_rejections", &CoverageStats::config_rejections)
      .def_readonly("rectangle_miss_failures", &CoverageStats::rectangle_miss_failures)
      .def_readonly("liberal_empty_failures", &CoverageStats::liberal_empty_failures)
      .def_readonly("conservative_failures", &CoverageStats::conservative_failures)
      .def_readonly("sandwich_failures", &CoverageStats::sandwich_failures)
      .def_readonly("optimum_pruned_failures", &CoverageStats::optimum_pruned_failures)
      .def_readonly("simultaneous_failures", &CoverageStats::simultaneous_failures)
      .def("simultaneous_fraction", &CoverageStats::simultaneous_fraction);

  m.def("emd", &emd, py::arg("matrix"), py::arg("criterion"));
  m.def("emd_raw", &emd_raw, py::arg("matrix"), py::arg("criterion"));
  m.def("epsilon_finite_emd", &epsilon_finite_emd, py::arg("d"), py::arg("m"),
        py::arg("n_criteria"), py::arg("delta"));
  m.def("epsilon_hoeffding", &epsilon_hoeffding, py::arg("m"), py::arg("n_codecs"),
        py::arg("n_criteria"), py::arg("delta"));
  m.def("epsilon_gaussian_chernoff", &epsilon_gaussian_chernoff, py::arg("sigma_hat"),
        py::arg("m"), py::arg("n_codecs"), py::arg("n_criteria"), py::arg("delta"));
  m.def("epsilon_asymptotic_emd", &epsilon_asymptotic_emd, py::arg("d"), py::arg("var"),
        py::arg("m"), py::arg("n_criteria"), py::arg("delta"), py::arg("tails"));
  m.def("empirical_variance_estimate", &empirical_variance_estimate, py::arg("matrix"),
        py::arg("criterion"));
  m.def("variance_interval", &variance_interval, py::arg("interval_c_sq"),
        py::arg("interval_c"));
  m.def("hoeffding_dominates", &hoeffding_dominates, py::arg("emd_method"),
        py::arg("n_codecs"), py::arg("delta"), py::arg("sigma") = py::none());
  m.def("build_rectangle", &build_rectangle, py::arg("matrix"), py::arg("method"),
        py::arg("delta"), py::arg("budget_slots"), py::arg("union_codec_count") = 0);
  m.def("objective_interval", &objective_interval, py::arg("rect"), py::arg("objective"),
        py::arg("codec"));
  m.def("rectangle_vs_constraints", &rectangle_vs_constraints, py::arg("rect"),
        py::arg("codec"), py::arg("constraints"));
  m.def("global_sampling", &global_sampling, py::arg("matrix"), py::arg("config"));
  m.def("batch_schedule", &batch_schedule, py::arg("total_samples"), py::arg("s0"));
  m.def("psp", &psp, py::arg("matrix"), py::arg("config"));
  m.def("sample_matrix", &sample_matrix, py::arg("world"), py::arg("m"), py::arg("seed"));
  m.def("oracle_select", &oracle_select, py::arg("world"), py::arg("objective"),
        py::arg("constraints") = ConstraintSpace{});
  m.def(
      "coverage_trial",
      [](const SyntheticWorld& world, std::size_t m, const GsConfig& cfg, std::size_t trials,
         std::uint64_t seed) { return coverage_trial(world, m, cfg, trials, seed); },
      py::arg("world"), py::arg("m"), py::arg("config"), py::arg("trials"), py::arg("seed"));
  m.def(
      "coverage_trial_psp",
      [](const SyntheticWorld& world, std::size_t m, const PspConfig& cfg, std::size_t trials,
         std::uint64_t seed) { return coverage_trial(world, m, cfg, trials, seed); },
      py::arg("world"), py::arg("m"), py::arg("config"), py::arg("trials"), py::arg("seed"));
  m.def("load_matrix", &load_matrix, py::arg("path"));
  m.def(
      "save_matrix",
      [](const CriterionMatrix& matrix, const std::string& path) { save_matrix(matrix, path); },
      py::arg("matrix"), py::arg("path"));
  m.def("load_world", &load_world, py::arg("path"));
}
