#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hhsv/affine_odes.hpp"
#include "hhsv/config.hpp"
#include "hhsv/mc_harness.hpp"
#include "hhsv/measures.hpp"

namespace py = pybind11;
using namespace hhsv;
using nlohmann::json;

namespace {

// Configs cross the boundary as JSON text; the Python side wraps them in dicts.
ModelBundle parse(const std::string& config) {
    return validate(config.empty() ? default_bundle() : bundle_from_json(json::parse(config)));
}

TimeGrid grid_for(const ModelBundle& b, std::size_t steps) { return TimeGrid(0.0, b.model.horizon, steps); }

Experiment experiment(ExperimentKind kind, const ModelBundle& b, std::size_t n_paths, std::size_t steps,
                      std::uint64_t seed, unsigned workers) {
    Experiment e;
    e.kind = kind;
    e.params = b;
    e.n_paths = n_paths;
    e.master_seed = seed;
    e.grid = grid_for(b, steps);
    e.workers = workers;
    return e;
}

std::string reports(const std::vector<McReport>& rs) {
    json out = json::array();
    for (const auto& r : rs) out.push_back(report_to_json(r));
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_hhsv, m) {
    m.doc() = "Heston variance with compound Hawkes jumps: ODE bounds and Monte Carlo checks";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("default_config", [] { return bundle_to_json(default_bundle()).dump(); });

    m.def("normalize_config", [](const std::string& config) { return bundle_to_json(parse(config)).dump(); },
          py::arg("config"));

    m.def(
        "c_bounds",
        [](const std::string& config) {
            const auto b = parse(config);
            return json{{"c_s", compute_c_s(b)}, {"c_l", compute_c_l(b)}, {"riccati_cap", riccati_cap(b.model)}}
                .dump();
        },
        py::arg("config"));

    m.def(
        "solve_odes",
        [](const std::string& config, double c, std::size_t steps) {
            const auto b = parse(config);
            const auto sol = solve_odes(b, c, grid_for(b, steps));
            return json{{"t", sol.grid.points()}, {"G", sol.g},          {"H", sol.h},
                        {"F", sol.f},             {"bound_m0", sol.bound_m0}, {"lambda_c", sol.context.lambda_c},
                        {"U", sol.context.u},     {"x_p", sol.context.x_p}}
                .dump();
        },
        py::arg("config"), py::arg("c"), py::arg("steps") = 1000);

    m.def(
        "simulate",
        [](const std::string& config, std::size_t n_paths, std::size_t steps, std::uint64_t seed) {
            const auto b = parse(config);
            const auto grid = grid_for(b, steps);
            json out = json::array();
            for (std::size_t i = 0; i < n_paths; ++i) {
                const auto p = simulate_physical_path(b, grid, seed, i);
                std::vector<double> v, log_s;
                for (std::size_t k = 0; k < grid.size(); ++k) {
                    v.push_back(p.variance.value_at_grid(k));
                    log_s.push_back(p.stock.log_prices[k]);
                }
                out.push_back({{"t", grid.points()},
                               {"v", v},
                               {"log_s", log_s},
                               {"event_times", p.marked.event_times},
                               {"marks", p.marked.marks}});
            }
            return out.dump();
        },
        py::arg("config"), py::arg("n_paths"), py::arg("steps") = 100, py::arg("seed") = 42);

    m.def(
        "exp_moment",
        [](const std::string& config, std::vector<double> c_values, std::size_t n_paths, std::size_t steps,
           std::uint64_t seed, unsigned workers) {
            const auto b = parse(config);
            py::gil_scoped_release release;
            return reports(run_exp_moment(c_values, experiment(ExperimentKind::exp_moment, b, n_paths, steps, seed, workers)));
        },
        py::arg("config"), py::arg("c_values"), py::arg("n_paths"), py::arg("steps") = 100,
        py::arg("seed") = 42, py::arg("workers") = 1);

    m.def(
        "martingale",
        [](const std::string& config, std::vector<double> a_values, std::size_t n_paths, std::size_t steps,
           std::uint64_t seed, unsigned workers) {
            const auto b = parse(config);
            py::gil_scoped_release release;
            return reports(run_martingale(a_values, experiment(ExperimentKind::martingale, b, n_paths, steps, seed, workers)));
        },
        py::arg("config"), py::arg("a_values"), py::arg("n_paths"), py::arg("steps") = 100,
        py::arg("seed") = 42, py::arg("workers") = 1);

    m.def(
        "emm",
        [](const std::string& config, double a, std::size_t n_paths, std::size_t steps, std::uint64_t seed,
           unsigned workers) {
            const auto b = parse(config);
            py::gil_scoped_release release;
            return reports(run_emm(a, experiment(ExperimentKind::emm, b, n_paths, steps, seed, workers)));
        },
        py::arg("config"), py::arg("a"), py::arg("n_paths"), py::arg("steps") = 100, py::arg("seed") = 42,
        py::arg("workers") = 1);

    m.def(
        "classify",
        [](double a, double c_l, double rho) { return std::string(to_string(classify(a, c_l, rho))); },
        py::arg("a"), py::arg("c_l"), py::arg("rho"));

    m.def(
        "verify",
        [](const std::string& suite, const std::string& config, std::uint64_t seed, unsigned workers) {
            const auto b = parse(config);
            SuiteOptions o;
            o.workers = workers;
            py::gil_scoped_release release;
            return suite_to_json(run_suite(suite, b, seed, o)).dump(2);
        },
        py::arg("suite") = "quick", py::arg("config") = "", py::arg("seed") = 42, py::arg("workers") = 1);
}
