#include "hq/barrier.hpp"
#include "hq/config.hpp"
#include "hq/exact_fields.hpp"
#include "hq/report.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hq;

namespace {

py::object json_to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null:
      return py::none();
    case Json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case Json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case Json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case Json::value_t::number_float:
      return py::float_(j.get<double>());
    case Json::value_t::string:
      return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items()) {
        out[py::str(key)] = json_to_py(value);
      }
      return out;
    }
    default:
      return py::none();
  }
}

ConeKind parse_kind(const std::string& kind) {
  if (kind == "gamma") return ConeKind::gamma;
  if (kind == "gamma_tilde") return ConeKind::gamma_tilde;
  throw ConfigError("cone kind must be 'gamma' or 'gamma_tilde'");
}

GraphJet make_jet(const Vec& x, double u, const Vec& du, const Mat& d2u) {
  return GraphJet{x, u, du, d2u};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hessian-quotient curvature equations on graph hypersurfaces: "
            "symmetric-function calculus, graph geometry, and a damped-Newton "
            "Dirichlet solver with eps-continuation.";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<ConeViolation>(m, "ConeViolation");

  // symmetric function calculus
  m.def("sigma", &sigma, py::arg("k"), py::arg("lam"));
  m.def("sigma_partial", &sigma_partial, py::arg("k"), py::arg("lam"),
        py::arg("i"));
  m.def("sigma_partial2", &sigma_partial2, py::arg("k"), py::arg("lam"),
        py::arg("i"), py::arg("j"));
  m.def("eta_map", &eta_map, py::arg("kappa"));
  m.def(
      "in_cone",
      [](const Vec& v, int k, int l, const std::string& kind) {
        const ConeResult r = in_cone(v, {k, l, parse_kind(kind)});
        return py::make_tuple(r.inside, r.margin);
      },
      py::arg("v"), py::arg("k"), py::arg("l") = 0,
      py::arg("kind") = "gamma");
  m.def(
      "quotient_jet",
      [](const Vec& lam, int k, int l, bool want_hess) {
        const QuotientJet j = quotient_jet(lam, k, l, want_hess);
        py::dict out;
        out["value"] = j.value;
        out["grad"] = j.grad;
        if (j.hess) out["hess"] = *j.hess;
        return out;
      },
      py::arg("lam"), py::arg("k"), py::arg("l"), py::arg("want_hess") = false);
  m.def("check_newton_maclaurin", &check_newton_maclaurin, py::arg("lam"),
        py::arg("k"), py::arg("l"), py::arg("r"), py::arg("s"));
  m.def(
      "check_projection_inequality",
      [](const Mat& r, const Vec& p, int k, int l) {
        const ProjectionSlacks s = check_projection_inequality(r, p, k, l);
        return py::make_tuple(s.cone_slack, s.quotient_slack);
      },
      py::arg("r"), py::arg("p"), py::arg("k"), py::arg("l"));

  // graph geometry
  m.def(
      "surface_data",
      [](const Vec& x, double u, const Vec& du, const Mat& d2u) {
        const SurfaceData s = surface_data(make_jet(x, u, du, d2u));
        py::dict out;
        out["omega"] = s.omega;
        out["nu"] = s.nu;
        out["g"] = s.g;
        out["gamma_up"] = s.gamma_up;
        out["gamma_down"] = s.gamma_down;
        out["shape"] = s.shape;
        out["kappa"] = s.kappa;
        out["H"] = s.H;
        out["eta_eigs"] = s.eta_eigs;
        return out;
      },
      py::arg("x"), py::arg("u"), py::arg("du"), py::arg("d2u"));
  m.def(
      "admissible",
      [](const Vec& x, double u, const Vec& du, const Mat& d2u, int k) {
        const ConeResult r = admissible(make_jet(x, u, du, d2u), k);
        return py::make_tuple(r.inside, r.margin);
      },
      py::arg("x"), py::arg("u"), py::arg("du"), py::arg("d2u"), py::arg("k"));

  // operator evaluation
  m.def(
      "g_value",
      [](const Mat& d2u, const Vec& du, int n, int k, int l) {
        return g_value(d2u, du, OperatorSpec{n, k, l});
      },
      py::arg("d2u"), py::arg("du"), py::arg("n"), py::arg("k"), py::arg("l"));
  m.def(
      "residual",
      [](const Vec& x, double u, const Vec& du, const Mat& d2u, int k, int l,
         const std::string& psi, double eps) {
        const int n = static_cast<int>(du.size());
        const OperatorSpec spec{n, k, l};
        const PsiModel model = regularize(make_psi(psi, spec.power()), eps);
        return residual(make_jet(x, u, du, d2u), spec, model);
      },
      py::arg("x"), py::arg("u"), py::arg("du"), py::arg("d2u"), py::arg("k"),
      py::arg("l"), py::arg("psi") = "constant:1", py::arg("eps") = 0.0);
  m.def(
      "linearize",
      [](const Vec& x, double u, const Vec& du, const Mat& d2u, int k, int l,
         const std::string& psi, double eps) {
        const int n = static_cast<int>(du.size());
        const OperatorSpec spec{n, k, l};
        const PsiModel model = regularize(make_psi(psi, spec.power()), eps);
        const LinearizationData lin = linearize(make_jet(x, u, du, d2u), spec, model);
        py::dict out;
        out["Gij"] = lin.Gij;
        out["Gs"] = lin.Gs;
        out["psi_z"] = lin.psi_z;
        out["psi_p"] = lin.psi_p;
        return out;
      },
      py::arg("x"), py::arg("u"), py::arg("du"), py::arg("d2u"), py::arg("k"),
      py::arg("l"), py::arg("psi") = "constant:1", py::arg("eps") = 0.0);

  // solver and harness entry points
  m.def(
      "solve",
      [](int n, int k, int l, const std::string& shape, double size, int m,
         const std::string& psi, const std::vector<double>& eps_schedule,
         double newton_tol, int max_iters, int threads,
         const std::string& subsolution) {
        const OperatorSpec spec{n, k, l};
        const DomainSpec dom{shape == "square" ? Shape::square : Shape::disc,
                             size, n};
        SolverConfig cfg;
        if (!eps_schedule.empty()) cfg.eps_schedule = eps_schedule;
        cfg.newton_tol = newton_tol;
        cfg.max_iters = max_iters;
        cfg.threads = threads;
        const PsiModel model = make_psi(psi, spec.power());

        Field user_sub;
        const Field* sub_ptr = nullptr;
        if (subsolution.rfind("cap:", 0) == 0) {
          const double R = std::stod(subsolution.substr(4));
          auto grid = std::make_shared<const Grid>(build_grid(dom, m));
          user_sub = sample_field(grid, cap_field(R, size).value);
          sub_ptr = &user_sub;
        }
        const SolveReport rep = solve(dom, m, spec, model, cfg, sub_ptr);

        py::dict out = json_to_py(to_json(rep));
        const Grid& g = *rep.final_field.grid;
        const int count = g.num_interior();
        Mat coords(count, n);
        Vec values(count);
        for (int id = 0; id < count; ++id) {
          const int lin = g.interior_node(id);
          coords.row(id) = g.coord(lin).transpose();
          values[id] = rep.final_field.values[lin];
        }
        out["coords"] = coords;
        out["u"] = values;
        return out;
      },
      py::arg("n"), py::arg("k"), py::arg("l"), py::arg("shape") = "disc",
      py::arg("size") = 1.0, py::arg("m") = 17,
      py::arg("psi") = "constant:1",
      py::arg("eps_schedule") = std::vector<double>{},
      py::arg("newton_tol") = 1e-8, py::arg("max_iters") = 50,
      py::arg("threads") = 1, py::arg("subsolution") = "builtin");
  m.def(
      "run_property_suite",
      [](int n, int k, int l, uint64_t seed, int samples, int threads) {
        SuiteConfig sc;
        sc.n = n;
        sc.k = k;
        sc.l = l;
        sc.seed = seed;
        sc.samples = samples;
        sc.threads = threads;
        return json_to_py(to_json(run_property_suite(sc)));
      },
      py::arg("n"), py::arg("k"), py::arg("l"), py::arg("seed") = 42,
      py::arg("samples") = 1000, py::arg("threads") = 1);
  m.def(
      "barrier_check",
      [](int n, int k, int l, double radius) {
        const BarrierParams p = search_barrier_params(n, k, radius);
        return json_to_py(to_json(barrier_check(n, k, l, radius, p)));
      },
      py::arg("n"), py::arg("k"), py::arg("l"), py::arg("radius") = 1.0);
}
