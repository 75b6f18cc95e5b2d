#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ldl/errors.hpp"
#include "ldl/experiments.hpp"
#include "ldl/record.hpp"
#include "ldl/tsp.hpp"
#include "ldl/wreath.hpp"

namespace py = pybind11;
using namespace ldl;

namespace {

using XY = std::pair<std::int64_t, std::int64_t>;

std::vector<Point> to_points(const std::vector<XY>& xs) {
  std::vector<Point> out;
  out.reserve(xs.size());
  for (const auto& [x, y] : xs) out.push_back({x, y});
  return out;
}

std::vector<XY> from_points(const std::vector<Point>& ps) {
  std::vector<XY> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.emplace_back(p.x, p.y);
  return out;
}

py::tuple tsp_tuple(const TspResult& r) { return py::make_tuple(r.length, from_points(r.order)); }

WreathElement element(const XY& pos, const std::map<XY, std::int64_t>& lamps) {
  WreathElement g;
  g.position = {pos.first, pos.second};
  for (const auto& [p, v] : lamps) g.lamps.set({p.first, p.second}, v);
  return g;
}

ExperimentSpec parse_spec(const std::string& text) {
  try {
    return spec_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_ldl, m) {
  m.doc() = "Lamplighter word metric, lattice TSP and drift experiments";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("exact_tsp", [](const std::vector<XY>& pts) { return tsp_tuple(exact_tsp(to_points(pts))); },
        py::arg("points"), "Held-Karp open path; returns (length, order).");
  m.def("strip_heuristic",
        [](const std::vector<XY>& pts) { return tsp_tuple(strip_heuristic(to_points(pts))); },
        py::arg("points"));
  m.def("connected_set_tour",
        [](const std::vector<XY>& pts) {
          return tsp_tuple(connected_set_tour(PointSet(to_points(pts))));
        },
        py::arg("points"));
  m.def("box_tsp",
        [](const std::vector<XY>& pts, const std::vector<XY>& range, std::int64_t c) {
          const auto rep = box_tsp_diluted(PointSet(to_points(pts)), PointSet(to_points(range)), c);
          return py::make_tuple(rep.result.length, from_points(rep.result.order), rep.certificate);
        },
        py::arg("points"), py::arg("range"), py::arg("box_side") = 8);

  m.def("word_length",
        [](const XY& pos, const std::map<XY, std::int64_t>& lamps, std::int64_t lamp_order,
           std::int64_t radius_cap) {
          const WreathGroup g(2, LampGroup::cyclic(lamp_order));
          return word_length_bfs(g, element(pos, lamps), GeneratingSet::standard(g), radius_cap);
        },
        py::arg("position"), py::arg("lamps"), py::arg("lamp_order") = 2,
        py::arg("radius_cap") = 16, "BFS word length over Z^2 wr Z/q, standard generators.");
  m.def("word_length_bounds",
        [](const XY& pos, const std::map<XY, std::int64_t>& lamps) {
          const WreathGroup g(2, LampGroup::cyclic(2));
          const auto b = word_length_bounds(g, element(pos, lamps));
          return py::make_tuple(b.lower, b.upper);
        },
        py::arg("position"), py::arg("lamps"));

  m.def("sample_walk",
        [](std::int64_t n, std::uint64_t seed, int dim) {
          return from_points(sample_walk(StepDistribution::simple(dim), n, seed).positions);
        },
        py::arg("n"), py::arg("seed"), py::arg("dim") = 2);
  m.def("drift_sample",
        [](std::int64_t n, std::uint64_t seed, double switch_prob) {
          const auto d = drift_sample(StepDistribution::simple(2), switch_prob, n, seed);
          py::dict out;
          out["position"] = XY{d.position.x, d.position.y};
          out["support"] = d.support;
          out["tsp"] = d.tsp;
          out["length"] = d.length;
          out["max_norm"] = d.max_norm;
          out["exact"] = d.exact;
          return out;
        },
        py::arg("n"), py::arg("seed"), py::arg("switch_prob") = 0.5);
  m.def("alpha_trial",
        [](double p, std::int64_t side, std::uint64_t seed, const std::string& solver,
           std::int64_t box_side) {
          const auto s = parse_solver(solver);
          if (!s) throw ConfigError("unknown solver " + solver);
          return alpha_trial(p, side, seed, *s, box_side);
        },
        py::arg("p"), py::arg("side"), py::arg("seed"), py::arg("solver") = "box",
        py::arg("box_side") = 8);

  m.def("validate", [](const std::string& spec) { return validate(parse_spec(spec)); },
        py::arg("spec_json"));
  m.def("normalized", [](const std::string& spec) { return canonical_json(parse_spec(spec)); },
        py::arg("spec_json"));
  m.def("spec_hash", [](const std::string& spec) { return spec_hash(parse_spec(spec)); },
        py::arg("spec_json"));
  m.def("run_experiment",
        [](const std::string& spec, unsigned threads) {
          const auto s = parse_spec(spec);
          RunRecord rec;
          {
            py::gil_scoped_release release;
            rec = run_experiment(s, {threads});
          }
          return std::make_pair(record_to_json(rec).dump(), record_csv(rec));
        },
        py::arg("spec_json"), py::arg("threads") = 1, "Returns (record JSON, CSV text).");
}
