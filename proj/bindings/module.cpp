#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "zigzag/analysis.hpp"
#include "zigzag/dynamics.hpp"
#include "zigzag/maps.hpp"
#include "zigzag/postprocess.hpp"
#include "zigzag/stats.hpp"
#include "zigzag/variability.hpp"

namespace py = pybind11;
using namespace zigzag;

namespace {

// json <-> python via the string representation; plenty for metadata
py::object json_to_py(const nlohmann::json& j) {
    py::module_ pyjson = py::module_::import("json");
    return pyjson.attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_zigzag, m) {
    m.doc() = "chaotic-map TRNG simulator: maps, dynamics, analysis, post-processing, tests";
    m.attr("__version__") = kVersion;

    py::register_exception<OutOfDomainError>(m, "OutOfDomainError");
    py::register_exception<OrbitEscapeError>(m, "OrbitEscapeError");

    py::enum_<maps::MapKind>(m, "MapKind")
        .value("Zigzag", maps::MapKind::Zigzag)
        .value("Tent", maps::MapKind::Tent)
        .value("Bernoulli", maps::MapKind::Bernoulli)
        .value("NonIdealSymmetric", maps::MapKind::NonIdealSymmetric)
        .value("Custom", maps::MapKind::Custom);

    py::class_<maps::Segment>(m, "Segment")
        .def_readonly("lower_x", &maps::Segment::lower_x)
        .def_readonly("upper_x", &maps::Segment::upper_x)
        .def_readonly("slope", &maps::Segment::slope)
        .def_readonly("intercept", &maps::Segment::intercept);

    py::class_<maps::PiecewiseAffineMap>(m, "PiecewiseAffineMap")
        .def("eval", &maps::PiecewiseAffineMap::eval, py::arg("x"))
        .def("__call__", &maps::PiecewiseAffineMap::eval, py::arg("x"))
        .def_property_readonly("kind", &maps::PiecewiseAffineMap::kind)
        .def_property_readonly("lo", &maps::PiecewiseAffineMap::lo)
        .def_property_readonly("hi", &maps::PiecewiseAffineMap::hi)
        .def_property_readonly("segments",
                               [](const maps::PiecewiseAffineMap& self) {
                                   return std::vector<maps::Segment>(self.segments().begin(),
                                                                     self.segments().end());
                               })
        .def("to_json", [](const maps::PiecewiseAffineMap& self) { return json_to_py(self.to_json()); })
        .def_static("from_json", [](const py::object& obj) {
            py::module_ pyjson = py::module_::import("json");
            const std::string dumped = py::cast<std::string>(pyjson.attr("dumps")(obj));
            return maps::PiecewiseAffineMap::from_json(nlohmann::json::parse(dumped));
        });

    py::class_<maps::NonIdealParams>(m, "NonIdealParams")
        .def_readonly("dg1", &maps::NonIdealParams::dg1)
        .def_readonly("dg2", &maps::NonIdealParams::dg2)
        .def_readonly("x_b", &maps::NonIdealParams::x_b)
        .def_readonly("delta_o", &maps::NonIdealParams::delta_o)
        .def_readonly("x_t1", &maps::NonIdealParams::x_t1)
        .def_readonly("x_t2", &maps::NonIdealParams::x_t2);

    py::class_<maps::NonIdealMap>(m, "NonIdealMap")
        .def_readonly("map", &maps::NonIdealMap::map)
        .def_readonly("params", &maps::NonIdealMap::params);

    m.def("make_generalized_zigzag", &maps::make_generalized_zigzag, py::arg("m"));
    m.def("make_zigzag", &maps::make_zigzag);
    m.def("make_tent", &maps::make_tent);
    m.def("make_bernoulli", &maps::make_bernoulli);
    m.def("make_nonideal", &maps::make_nonideal, py::arg("dg1"), py::arg("dg2"));
    m.def("extract_bit", &maps::extract_bit, py::arg("map"), py::arg("x"));

    py::class_<dynamics::BitStream>(m, "BitStream")
        .def(py::init<>())
        .def(py::init<std::vector<int>>(), py::arg("bits"))
        .def("__len__", &dynamics::BitStream::size)
        .def("__getitem__",
             [](const dynamics::BitStream& self, std::size_t i) {
                 if (i >= self.size()) throw py::index_error();
                 return self[i];
             })
        .def("push_back", &dynamics::BitStream::push_back, py::arg("bit"))
        .def("to01", &dynamics::BitStream::to01)
        .def_static("from01", [](const std::string& s) { return dynamics::BitStream::from01(s); },
                    py::arg("s"))
        .def("ones_fraction", &dynamics::BitStream::ones_fraction)
        .def("save", &dynamics::BitStream::save, py::arg("path"))
        .def_static("load", &dynamics::BitStream::load, py::arg("path"))
        .def_property(
            "meta",
            [](const dynamics::BitStream& self) { return json_to_py(self.meta); },
            [](dynamics::BitStream& self, const py::object& obj) {
                py::module_ pyjson = py::module_::import("json");
                self.meta = nlohmann::json::parse(
                    py::cast<std::string>(pyjson.attr("dumps")(obj)));
            });

    py::class_<dynamics::SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("noise_std", &dynamics::SimConfig::noise_std)
        .def_readwrite("seed", &dynamics::SimConfig::seed)
        .def_readwrite("stages", &dynamics::SimConfig::stages)
        .def_readwrite("n_bits", &dynamics::SimConfig::n_bits)
        .def_readwrite("discard", &dynamics::SimConfig::discard)
        .def_readwrite("x0", &dynamics::SimConfig::x0);

    m.def("iterate_orbit", &dynamics::iterate_orbit, py::arg("map"), py::arg("x0"), py::arg("n"),
          py::arg("noise_std") = 0.0, py::arg("seed") = 0);
    m.def(
        "run_pipeline",
        [](const std::vector<maps::PiecewiseAffineMap>& stage_maps,
           const dynamics::SimConfig& cfg) { return dynamics::run_pipeline(stage_maps, cfg); },
        py::arg("stage_maps"), py::arg("config"));
    m.def("warmup_discard", &dynamics::warmup_discard, py::arg("A"), py::arg("pd_over_n"));

    py::class_<variability::DeviceVariation>(m, "DeviceVariation")
        .def(py::init([](double dW, double dL, double dVth_over_Vov, double lam_dVds_term) {
                 return variability::DeviceVariation{dW, dL, dVth_over_Vov, lam_dVds_term};
             }),
             py::arg("dW") = 0.0, py::arg("dL") = 0.0, py::arg("dVth_over_Vov") = 0.0,
             py::arg("lam_dVds_term") = 0.0)
        .def_readwrite("dW", &variability::DeviceVariation::dW)
        .def_readwrite("dL", &variability::DeviceVariation::dL)
        .def_readwrite("dVth_over_Vov", &variability::DeviceVariation::dVth_over_Vov)
        .def_readwrite("lam_dVds_term", &variability::DeviceVariation::lam_dVds_term);
    m.def("mirror_gain_factor", &variability::mirror_gain_factor, py::arg("variation"));

    py::class_<variability::StageDeltas>(m, "StageDeltas")
        .def_readonly("dg1", &variability::StageDeltas::dg1)
        .def_readonly("dg2", &variability::StageDeltas::dg2);
    py::class_<variability::VariationScenario>(m, "VariationScenario")
        .def_readonly("stages", &variability::VariationScenario::stages)
        .def_readonly("sigma_device", &variability::VariationScenario::sigma_device)
        .def_readonly("seed", &variability::VariationScenario::seed)
        .def("to_json", [](const variability::VariationScenario& self) { return json_to_py(self.to_json()); });
    m.def("sample_slope_deltas", &variability::sample_slope_deltas, py::arg("sigma_device"),
          py::arg("stages"), py::arg("seed"));
    m.def("scenario_maps", &variability::scenario_maps, py::arg("scenario"));

    py::class_<analysis::DensityHistogram>(m, "DensityHistogram")
        .def_readonly("lo", &analysis::DensityHistogram::lo)
        .def_readonly("hi", &analysis::DensityHistogram::hi)
        .def_readonly("density", &analysis::DensityHistogram::density)
        .def("integral", &analysis::DensityHistogram::integral)
        .def("integrate", &analysis::DensityHistogram::integrate, py::arg("a"), py::arg("b"))
        .def_static("uniform", &analysis::DensityHistogram::uniform, py::arg("lo"), py::arg("hi"),
                    py::arg("n_bins"));
    py::class_<analysis::FourStepDensity>(m, "FourStepDensity")
        .def_readonly("delta_o", &analysis::FourStepDensity::delta_o)
        .def_readonly("f0", &analysis::FourStepDensity::f0)
        .def_readonly("f1", &analysis::FourStepDensity::f1)
        .def_readonly("f2", &analysis::FourStepDensity::f2)
        .def_readonly("f_u", &analysis::FourStepDensity::f_u)
        .def_readonly("region_edges", &analysis::FourStepDensity::region_edges)
        .def("value", &analysis::FourStepDensity::value, py::arg("x"))
        .def("integral", &analysis::FourStepDensity::integral);
    py::class_<analysis::MarkovModel>(m, "MarkovModel")
        .def_readonly("p", &analysis::MarkovModel::p)
        .def_readonly("q", &analysis::MarkovModel::q)
        .def_readonly("b", &analysis::MarkovModel::b)
        .def_readonly("lambda1", &analysis::MarkovModel::lambda1)
        .def_readonly("c", &analysis::MarkovModel::c);

    m.def("empirical_density",
          [](const std::vector<double>& orbit, int n_bins, double lo, double hi) {
              return analysis::empirical_density(orbit, n_bins, lo, hi);
          },
          py::arg("orbit"), py::arg("n_bins"), py::arg("lo"), py::arg("hi"));
    m.def("four_step_model", &analysis::four_step_model, py::arg("delta_o"));
    m.def("fp_fixed_point", &analysis::fp_fixed_point, py::arg("map"), py::arg("n_bins") = 512,
          py::arg("tol") = 1e-10);
    m.def("make_markov", &analysis::make_markov, py::arg("p"), py::arg("q"));
    m.def("bias_exact", &analysis::bias_exact, py::arg("p"), py::arg("q"));
    m.def("bias_paper_form", &analysis::bias_paper_form, py::arg("p"), py::arg("q"));
    m.def("bias_of", &analysis::bias_of, py::arg("model"));
    m.def("transition_probs_numeric", &analysis::transition_probs_numeric, py::arg("map"),
          py::arg("params"), py::arg("density"));
    m.def("transition_probs_analytic", &analysis::transition_probs_analytic, py::arg("dg1"),
          py::arg("dg2"));
    m.def("markov_from_bits", &analysis::markov_from_bits, py::arg("bits"));
    m.def("effective_markov", &analysis::effective_markov, py::arg("bits"),
          py::arg("max_lag") = 16);
    m.def("simulate_markov_bits", &analysis::simulate_markov_bits, py::arg("p"), py::arg("q"),
          py::arg("n"), py::arg("seed"));
    m.def("autocorrelation", &analysis::autocorrelation, py::arg("bits"), py::arg("max_lag"));
    m.def(
        "bifurcation_diagram",
        [](double m_lo, double m_hi, int n_m, int n_transient, int n_keep, double x0,
           std::uint64_t seed, double noise_std) {
            const auto pts = analysis::bifurcation_diagram(m_lo, m_hi, n_m, n_transient, n_keep,
                                                           x0, seed, noise_std);
            std::vector<std::tuple<double, double, bool>> rows;
            rows.reserve(pts.size());
            for (const auto& p : pts) rows.emplace_back(p.m, p.x, p.stable);
            return rows;
        },
        py::arg("m_lo"), py::arg("m_hi"), py::arg("n_m"), py::arg("n_transient") = 2000,
        py::arg("n_keep") = 100, py::arg("x0") = 1e-9, py::arg("seed") = 0,
        py::arg("noise_std") = 0.0);

    py::class_<postprocess::DebiasConfig>(m, "DebiasConfig")
        .def(py::init([](int l, int stages) {
                 postprocess::DebiasConfig cfg{l, stages};
                 cfg.validate();
                 return cfg;
             }),
             py::arg("l"), py::arg("stages"))
        .def_readonly("l", &postprocess::DebiasConfig::l)
        .def_readonly("stages", &postprocess::DebiasConfig::stages);
    m.def("von_neumann", &postprocess::von_neumann, py::arg("bits"));
    m.def("xor_debias", &postprocess::xor_debias, py::arg("bits"), py::arg("config"));
    m.def("choose_l", &postprocess::choose_l, py::arg("model"), py::arg("epsilon"),
          py::arg("stages"));
    m.def("next_coprime_length", &postprocess::next_coprime_length, py::arg("stages"),
          py::arg("l"));

    py::class_<stats::BatteryConfig>(m, "BatteryConfig")
        .def(py::init<>())
        .def_readwrite("alpha", &stats::BatteryConfig::alpha)
        .def_readwrite("template_pass_threshold", &stats::BatteryConfig::template_pass_threshold);
    py::class_<stats::BiasEstimate>(m, "BiasEstimate")
        .def_readonly("fraction", &stats::BiasEstimate::fraction)
        .def_readonly("percent", &stats::BiasEstimate::percent);
    py::class_<stats::TestReport>(m, "TestReport")
        .def_property_readonly("all_pass", &stats::TestReport::all_pass)
        .def_property_readonly("n_failed", &stats::TestReport::n_failed)
        .def_property_readonly("n_skipped", &stats::TestReport::n_skipped)
        .def_readonly("bias", &stats::TestReport::bias)
        .def("to_dict", [](const stats::TestReport& self) { return json_to_py(self.to_json()); })
        .def("to_table", &stats::TestReport::to_table);
    m.def("run_battery", &stats::run_battery, py::arg("bits"),
          py::arg("config") = stats::BatteryConfig{},
          py::call_guard<py::gil_scoped_release>());
    m.def("bias_estimate", &stats::bias_estimate, py::arg("bits"));
}
