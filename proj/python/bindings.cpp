#include <algorithm>

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adiabus/anneal.hpp"
#include "adiabus/config.hpp"
#include "adiabus/experiment.hpp"

namespace py = pybind11;
using namespace adiabus;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

StateVector state_from(const SectorSpec& spec, py::array_t<cplx, py::array::c_style | py::array::forcecast> amps) {
  StateVector s{spec, std::vector<cplx>(amps.data(), amps.data() + amps.size())};
  return s;
}

}  // namespace

PYBIND11_MODULE(_adiabus, m) {
  m.doc() = "Adiabatic quantum data bus simulator";
  m.attr("__version__") = std::string(version());
  m.attr("MAX_SPINS") = kMaxSpins;

  static py::handle error_type = py::exception<Error>(m, "AdiabusError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("code") = std::string(errc_name(e.code()));
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  py::enum_<Parity>(m, "Parity").value("EVEN", Parity::Even).value("ODD", Parity::Odd);

  py::class_<SectorSpec> sector(m, "SectorSpec");
  py::enum_<SectorSpec::Kind>(sector, "Kind")
      .value("FULL", SectorSpec::Kind::Full)
      .value("MAGNETIZATION", SectorSpec::Kind::Magnetization)
      .value("PARITY", SectorSpec::Kind::Parity);
  sector.def_static("full", &SectorSpec::full, py::arg("n"))
      .def_static("magnetization", &SectorSpec::magnetization, py::arg("n"), py::arg("k"))
      .def_static("parity", &SectorSpec::parity, py::arg("n"), py::arg("parity"))
      .def_readonly("kind", &SectorSpec::kind)
      .def_readonly("n_spins", &SectorSpec::n_spins)
      .def_readonly("label", &SectorSpec::label)
      .def("dimension", &SectorSpec::dimension)
      .def("contains", &SectorSpec::contains, py::arg("state"))
      .def("__repr__", &SectorSpec::describe)
      .def(py::self == py::self);

  m.def(
      "basis_states",
      [](const SectorSpec& s) {
        const SectorBasis b(s);
        return std::vector<BasisState>(b.states().begin(), b.states().end());
      },
      py::arg("sector"), "Basis bitmasks of a sector in ascending order; site 1 is bit 0.");

  py::class_<StateVector>(m, "StateVector")
      .def(py::init(&state_from), py::arg("sector"), py::arg("amplitudes"))
      .def_readonly("sector", &StateVector::spec)
      .def_property_readonly("amplitudes", [](const StateVector& s) { return to_array(s.amplitudes); })
      .def("norm", &StateVector::norm);
  m.def("inner", &inner, py::arg("a"), py::arg("b"));

  py::class_<Coupling>(m, "Coupling")
      .def(py::init([](double jx, double jy, double jz) { return Coupling{jx, jy, jz}; }), py::arg("jx"),
           py::arg("jy"), py::arg("jz"))
      .def_readwrite("jx", &Coupling::jx)
      .def_readwrite("jy", &Coupling::jy)
      .def_readwrite("jz", &Coupling::jz);
  py::class_<ChainCouplings>(m, "ChainCouplings")
      .def(py::init([](Coupling a, Coupling b) { return ChainCouplings{a, b}; }), py::arg("nearest"),
           py::arg("next_nearest"))
      .def_readwrite("nearest", &ChainCouplings::nearest)
      .def_readwrite("next_nearest", &ChainCouplings::next_nearest);
  m.def("heisenberg_couplings", &heisenberg_couplings, py::arg("j1"), py::arg("j2"));
  m.def("xxz_couplings", &xxz_couplings, py::arg("ratio"), py::arg("next_nearest_j2") = 0.0);
  m.def("xyz_couplings", &xyz_couplings, py::arg("delta"));
  m.def("ising_couplings", &ising_couplings, py::arg("j1"), py::arg("j2"));

  py::class_<ChainModel>(m, "ChainModel")
      .def(py::init([](int n, const std::vector<std::tuple<int, int, double, double, double>>& bonds) {
             std::vector<Bond> out;
             for (const auto& [i, j, jx, jy, jz] : bonds) out.push_back({i, j, jx, jy, jz});
             return ChainModel(n, out);
           }),
           py::arg("n"), py::arg("bonds"), "bonds: list of (i, j, jx, jy, jz) with 1-based sites")
      .def_property_readonly("n_spins", &ChainModel::n_spins)
      .def_property_readonly("bonds",
                             [](const ChainModel& c) {
                               std::vector<std::tuple<int, int, double, double, double>> out;
                               for (const auto& b : c.bonds()) out.emplace_back(b.i, b.j, b.jx, b.jy, b.jz);
                               return out;
                             })
      .def("conserves_magnetization", &ChainModel::conserves_magnetization);
  m.def("j1j2_chain", &j1j2_chain, py::arg("n"), py::arg("j1"), py::arg("j2"));
  m.def("xxz_chain", &xxz_chain, py::arg("n"), py::arg("ratio"), py::arg("next_nearest_j2") = 0.0);
  m.def("xyz_chain", &xyz_chain, py::arg("n"), py::arg("delta"));
  m.def("uniform_chain", &uniform_chain, py::arg("n"), py::arg("couplings"));

  py::class_<ProtocolSpec>(m, "ProtocolSpec")
      .def_readonly("n_spins", &ProtocolSpec::n_spins)
      .def_readonly("label", &ProtocolSpec::label)
      .def("evaluate", &ProtocolSpec::evaluate, py::arg("s"))
      .def("__repr__", [](const ProtocolSpec& p) { return "<ProtocolSpec " + p.label + ">"; });
  m.def("constant_protocol", [](const ChainModel& c) { return constant_protocol(c); }, py::arg("model"));
  m.def("join_protocol", py::overload_cast<int, double, double>(&join_protocol), py::arg("n"), py::arg("j1"),
        py::arg("j2"));
  m.def("join_protocol", py::overload_cast<int, const ChainCouplings&>(&join_protocol), py::arg("n"),
        py::arg("couplings"));
  m.def("dynamic_j2_protocol", &dynamic_j2_protocol, py::arg("n"), py::arg("j1"), py::arg("j2_final"));
  m.def("simultaneous_protocol", py::overload_cast<int, double, double>(&simultaneous_protocol), py::arg("n"),
        py::arg("j1"), py::arg("j2"));
  m.def("simultaneous_protocol", py::overload_cast<int, const ChainCouplings&>(&simultaneous_protocol),
        py::arg("n"), py::arg("couplings"));
  m.def("reverse_protocol", &reverse_protocol, py::arg("protocol"));
  m.def("default_sector", &default_sector, py::arg("protocol"));

  py::class_<BlochVector>(m, "BlochVector")
      .def(py::init([](double x, double y, double z) { return BlochVector{x, y, z}; }), py::arg("x"), py::arg("y"),
           py::arg("z"))
      .def_readwrite("x", &BlochVector::x)
      .def_readwrite("y", &BlochVector::y)
      .def_readwrite("z", &BlochVector::z)
      .def("__iter__", [](const BlochVector& b) { return py::iter(py::make_tuple(b.x, b.y, b.z)); });

  m.def(
      "lowest_eigenvalues",
      [](const ChainModel& model, const SectorSpec& sector, std::size_t count) {
        auto b = std::make_shared<const SectorBasis>(sector);
        return to_array(lowest_eigenpairs(build_sector_operator(model, b), count).eigenvalues);
      },
      py::arg("model"), py::arg("sector"), py::arg("count") = 1);
  m.def(
      "hamiltonian_dense",
      [](const ChainModel& model, const SectorSpec& sector) {
        const Eigen::MatrixXd h = build_sector_operator(model, SectorBasis(sector)).to_dense();
        py::array_t<double> out({h.rows(), h.cols()});
        auto v = out.mutable_unchecked<2>();
        for (Eigen::Index i = 0; i < h.rows(); ++i)
          for (Eigen::Index j = 0; j < h.cols(); ++j) v(i, j) = h(i, j);
        return out;
      },
      py::arg("model"), py::arg("sector"));
  m.def("sector_gap", [](const ChainModel& model, const SectorSpec& s) { return sector_gap(model, s); },
        py::arg("model"), py::arg("sector"));
  m.def("prepare_initial_state",
        [](const ProtocolSpec& p, const SectorSpec& s) { return prepare_initial_state(p, s); }, py::arg("protocol"),
        py::arg("sector"));
  m.def("evolve", [](const ProtocolSpec& p, double tau, const StateVector& psi) { return evolve(p, tau, psi); },
        py::arg("protocol"), py::arg("tau"), py::arg("state"), py::call_guard<py::gil_scoped_release>());
  m.def("fidelity", [](const ProtocolSpec& p, double tau, const SectorSpec& s) { return fidelity(p, tau, s); },
        py::arg("protocol"), py::arg("tau"), py::arg("sector"), py::call_guard<py::gil_scoped_release>());

  py::class_<AnnealTimeResult>(m, "AnnealTimeResult")
      .def_property_readonly("reached",
                             [](const AnnealTimeResult& r) { return r.status == AnnealTimeResult::Status::Reached; })
      .def_readonly("tau_star", &AnnealTimeResult::tau_star)
      .def_readonly("fidelity_at_tau_star", &AnnealTimeResult::fidelity_at_tau_star)
      .def_readonly("tau_cap", &AnnealTimeResult::tau_cap)
      .def_readonly("trace", &AnnealTimeResult::trace);
  m.def(
      "find_anneal_time",
      [](const ProtocolSpec& p, const SectorSpec& s, double target, double tau_cap) {
        AnnealSearch search;
        search.target = target;
        search.tau_cap = tau_cap;
        return find_anneal_time(p, s, search);
      },
      py::arg("protocol"), py::arg("sector"), py::arg("target") = 0.9, py::arg("tau_cap") = 1e5,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "gap_scan",
      [](const std::function<ProtocolSpec(double)>& factory, const std::vector<double>& s_grid,
         const std::vector<double>& params) {
        const auto g = gap_scan(factory, s_grid, params);
        py::array_t<double> out({g.s_values.size(), g.parameter_values.size()});
        auto v = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < g.gaps.size(); ++i)
          for (std::size_t j = 0; j < g.gaps[i].size(); ++j) v(i, j) = g.gaps[i][j];
        return out;
      },
      py::arg("factory"), py::arg("s_grid"), py::arg("params"),
      "Sector gaps, shape (len(s_grid), len(params)); NaN where the solver failed.");
  m.def("ground_manifold_tracking",
        [](const ProtocolSpec& p, const std::vector<double>& grid) { return ground_manifold_tracking(p, grid); },
        py::arg("protocol"), py::arg("s_grid"));

  py::class_<TransportResult>(m, "TransportResult")
      .def_readonly("bloch_in", &TransportResult::bloch_in)
      .def_readonly("bloch_out", &TransportResult::bloch_out)
      .def_readonly("qubit_fidelity", &TransportResult::qubit_fidelity)
      .def_readonly("sector_fidelities", &TransportResult::sector_fidelities)
      .def_readonly("input_site", &TransportResult::input_site)
      .def_readonly("output_site", &TransportResult::output_site);
  m.def("transport_qubit",
        [](const ProtocolSpec& p, const BlochVector& b, double tau) { return transport_qubit(p, b, tau); },
        py::arg("protocol"), py::arg("bloch_in"), py::arg("tau"), py::call_guard<py::gil_scoped_release>());
  m.def("mg_dimer_state", &mg_dimer_state, py::arg("n"));

  m.def(
      "run_config",
      [](const std::string& text, int workers) {
        auto cfg = parse_config(text);
        if (workers > 0) cfg.workers = workers;
        py::gil_scoped_release release;
        return compute_experiment(cfg).csv;
      },
      py::arg("config_json"), py::arg("workers") = 0, "Run a JSON experiment config and return the CSV text.");
}
