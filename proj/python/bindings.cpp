#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subgoal/experiment.hpp"
#include "subgoal/io.hpp"

namespace py = pybind11;
using namespace subgoal;

namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

CountGrid to_grid(const Matrix& m) {
    const int rows = static_cast<int>(m.size());
    const int cols = rows ? static_cast<int>(m[0].size()) : 0;
    CountGrid g(rows, cols, 0);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(m[r].size()) != cols) throw std::invalid_argument("ragged matrix");
        for (int c = 0; c < cols; ++c) g(r, c) = m[r][c];
    }
    return g;
}

template <class T>
std::vector<std::vector<T>> to_rows(const Grid<T>& g) {
    std::vector<std::vector<T>> out(g.rows(), std::vector<T>(g.cols()));
    for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c) out[r][c] = g(r, c);
    return out;
}

MaskGrid include_mask(const CountGrid& g, const std::optional<Matrix>& include) {
    if (!include) return MaskGrid(g.rows(), g.cols(), 1);
    const CountGrid inc = to_grid(*include);
    if (!inc.same_shape(g)) throw std::invalid_argument("include mask shape differs from matrix");
    MaskGrid m(g.rows(), g.cols(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) m.values()[i] = inc.values()[i] != 0;
    return m;
}

py::tuple pos(GridPos p) { return py::make_tuple(p.row, p.col); }

py::list cell_list(const std::vector<GridPos>& cells) {
    py::list out;
    for (auto p : cells) out.append(pos(p));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Model-change subgoal discovery in grid worlds";

    py::register_exception<LayoutError>(m, "LayoutError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Layout>(m, "Layout")
        .def_readonly("name", &Layout::name)
        .def_readonly("max_steps", &Layout::max_steps)
        .def_property_readonly("rows", &Layout::rows)
        .def_property_readonly("cols", &Layout::cols)
        .def_property_readonly("goal", [](const Layout& l) { return pos(l.goal); })
        .def_property_readonly("num_actions", &Layout::num_actions)
        .def("is_wall", [](const Layout& l, int r, int c) { return l.is_wall({r, c}); })
        .def("open_mask", [](const Layout& l) { return to_rows(l.open_mask()); })
        .def("__str__", &format_layout);

    m.def("layout_names", &builtin_layout_names);
    m.def("load_layout", &load_layout, py::arg("name_or_path"));
    m.def("parse_layout", [](const std::string& text) { return parse_layout(text); }, py::arg("text"));

    py::class_<GridWorld>(m, "GridWorld")
        .def(py::init<Layout, double, std::uint64_t>(), py::arg("layout"), py::arg("p_fail"), py::arg("seed"))
        .def("reset", [](GridWorld& w) { return pos(w.reset()); })
        .def("step",
             [](GridWorld& w, int action) {
                 const auto t = w.step(static_cast<Action>(action));
                 return py::make_tuple(pos(t.next_state), t.reward, t.done, t.collided);
             },
             py::arg("action"))
        .def_property_readonly("state", [](const GridWorld& w) { return pos(w.state()); })
        .def_property_readonly("steps", &GridWorld::steps)
        .def_property_readonly("done", &GridWorld::done);

    m.def(
        "thompson_policy",
        [](const std::vector<std::pair<double, double>>& iv, bool sufficient) {
            std::vector<BeliefInterval> b;
            for (auto [c, r] : iv) b.push_back({c, r, sufficient});
            return thompson_policy(b);
        },
        py::arg("intervals"), py::arg("sufficient") = true,
        "Probability that each (center, radius) uniform belief holds the maximum.");

    m.def(
        "shaped_utility",
        [](const std::vector<double>& ts_m, const std::vector<double>& ts_main, double beta, double floor) {
            return shaped_utility(ts_m, ts_main, beta, floor);
        },
        py::arg("pi_ts_m"), py::arg("pi_ts_main"), py::arg("beta") = 7.0, py::arg("prob_floor") = 1e-10);

    m.def(
        "optimal_policy",
        [](const std::vector<double>& pi_b, const std::vector<double>& u, double alpha) {
            const auto o = optimal_policy(pi_b, u, alpha);
            return py::make_tuple(o.pi, o.z);
        },
        py::arg("pi_b"), py::arg("u_hat"), py::arg("alpha") = 4.0);

    m.def(
        "free_energy",
        [](const std::vector<double>& pi, const std::vector<double>& pi_b, const std::vector<double>& ts_main,
           const std::vector<double>& ts_m, double alpha, double beta) {
            return free_energy(pi, pi_b, ts_main, ts_m, alpha, beta);
        },
        py::arg("pi"), py::arg("pi_b"), py::arg("pi_ts_main"), py::arg("pi_ts_m"), py::arg("alpha") = 4.0,
        py::arg("beta") = 7.0);

    m.def(
        "otsu_threshold",
        [](const Matrix& values, const std::optional<Matrix>& include) {
            const CountGrid g = to_grid(values);
            const auto r = otsu_threshold(g, include_mask(g, include));
            return py::make_tuple(r.threshold, to_rows(r.mask), r.degenerate);
        },
        py::arg("values"), py::arg("include") = py::none());

    m.def(
        "detect",
        [](const Matrix& values, const std::optional<Matrix>& include) {
            const CountGrid g = to_grid(values);
            return cell_list(detect(g, include_mask(g, include)).cells);
        },
        py::arg("values"), py::arg("include") = py::none(), "Bottleneck cells after Otsu and 3x3 suppression.");

    m.def("default_config", [] { return to_toml(RunConfig{}); });

    m.def(
        "run",
        [](const std::string& config_text, std::optional<int> seeds, std::optional<std::string> out_dir) {
            RunConfig c = parse_config(config_text);
            if (seeds) c.seeds = *seeds;
            if (out_dir) c.out_dir = *out_dir;
            c.validate();
            RunSummary s;
            {
                py::gil_scoped_release release;
                s = run_experiment(c, out_dir.has_value());
            }
            py::list per_seed;
            for (const auto& seed : s.seeds) {
                py::dict d;
                d["seed"] = seed.seed;
                d["returns"] = seed.returns;
                d["model_changes"] = to_rows(seed.model_changes);
                d["visits"] = to_rows(seed.visits);
                d["bottlenecks"] = cell_list(seed.checkpoints.back().model_change.cells);
                d["baseline"] = cell_list(seed.checkpoints.back().baseline.cells);
                per_seed.append(d);
            }
            py::dict out;
            out["seeds"] = per_seed;
            out["summary_json"] = summary_json(s);
            return out;
        },
        py::arg("config_text") = "", py::arg("seeds") = py::none(), py::arg("out_dir") = py::none(),
        "Run the experiment described by TOML text; writes artifacts only when out_dir is given.");
}
