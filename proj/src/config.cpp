#include "adiabus/config.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace adiabus {

using json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 6> kExperiments{{
    {ExperimentKind::Spectrum, "spectrum"},
    {ExperimentKind::GapScan, "gap-scan"},
    {ExperimentKind::FidelityCurve, "fidelity-curve"},
    {ExperimentKind::AnnealTime, "anneal-time"},
    {ExperimentKind::Transport, "transport"},
    {ExperimentKind::DegeneracyCheck, "degeneracy-check"},
}};
constexpr std::array<std::pair<ModelFamily, std::string_view>, 5> kModels{{
    {ModelFamily::J1J2, "j1j2"},
    {ModelFamily::Xxz, "xxz"},
    {ModelFamily::Xyz, "xyz"},
    {ModelFamily::Ising, "ising"},
    {ModelFamily::Custom, "custom"},
}};
constexpr std::array<std::pair<ProtocolKind, std::string_view>, 5> kProtocols{{
    {ProtocolKind::Join, "join"},
    {ProtocolKind::Unjoin, "unjoin"},
    {ProtocolKind::DynamicJ2, "dynamic-j2"},
    {ProtocolKind::UnjoinDynamic, "unjoin-dynamic"},
    {ProtocolKind::Simultaneous, "simultaneous"},
}};
constexpr std::array<std::pair<SectorRequest::Kind, std::string_view>, 6> kSectors{{
    {SectorRequest::Kind::Default, "default"},
    {SectorRequest::Kind::Floor, "floor"},
    {SectorRequest::Kind::Ceil, "ceil"},
    {SectorRequest::Kind::Even, "even"},
    {SectorRequest::Kind::Odd, "odd"},
    {SectorRequest::Kind::Full, "full"},
}};

template <typename E, std::size_t M>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, M>& table, E value) {
  for (const auto& [v, name] : table)
    if (v == value) return name;
  return "?";
}

template <typename E, std::size_t M>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, M>& table, std::string_view name) {
  for (const auto& [v, n] : table)
    if (n == name) return v;
  return std::nullopt;
}

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw ConfigError(Errc::ValidationError, field, what);
}

std::string sweep_key(ModelFamily m) {
  switch (m) {
    case ModelFamily::Xxz:
      return "ratio";
    case ModelFamily::Xyz:
      return "delta";
    default:
      return "J2";
  }
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(field, "expected a finite number");
  return x;
}

int integer(const json& v, const std::string& field) {
  const double x = number(v, field);
  if (x != std::floor(x) || std::abs(x) > 1e9) invalid(field, "expected an integer");
  return static_cast<int>(x);
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) invalid(field, "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& field) {
  if (!v.is_boolean()) invalid(field, "expected true or false");
  return v.get<bool>();
}

// Drops binary noise from range grids so 0.05 * 3 becomes 0.15.
double round12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

// A grid is a number, an array of numbers, or {start, stop, step} with
// stop included when it lies on the lattice (to 1e-9 of a step).
std::vector<double> grid(const json& v, const std::string& field) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(number(v, field));
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  } else if (v.is_object()) {
    for (const auto& [key, _] : v.items())
      if (key != "start" && key != "stop" && key != "step") invalid(field + "." + key, "unknown grid key");
    if (!v.contains("start") || !v.contains("stop") || !v.contains("step"))
      invalid(field, "range grids need start, stop and step");
    const double start = number(v["start"], field + ".start");
    const double stop = number(v["stop"], field + ".stop");
    const double step = number(v["step"], field + ".step");
    if (step <= 0.0) invalid(field + ".step", "must be positive");
    if (stop < start) invalid(field + ".stop", "must not be below start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) invalid(field, "too many grid points");
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(round12(start + static_cast<double>(i) * step));
    }
  } else {
    invalid(field, "expected a number, an array or {start, stop, step}");
  }
  if (out.empty()) invalid(field, "grid is empty");
  return out;
}

std::vector<int> int_grid(const json& v, const std::string& field) {
  std::vector<int> out;
  for (double x : grid(v, field)) {
    if (x != std::floor(x)) invalid(field, "expected integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

void check_keys(const json& obj, const std::string& prefix, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) invalid(prefix + key, "unknown field");
  }
}

void parse_search(const json& s, AnnealSearch& out) {
  if (!s.is_object()) invalid("search", "expected an object");
  check_keys(s, "search.", {"target", "tau0", "growth", "tau_cap", "bisect_rel_width"});
  if (s.contains("target")) out.target = number(s["target"], "search.target");
  if (s.contains("tau0")) out.tau0 = number(s["tau0"], "search.tau0");
  if (s.contains("growth")) out.growth = number(s["growth"], "search.growth");
  if (s.contains("tau_cap")) out.tau_cap = number(s["tau_cap"], "search.tau_cap");
  if (s.contains("bisect_rel_width")) out.bisect_rel_width = number(s["bisect_rel_width"], "search.bisect_rel_width");
  if (!(out.target > 0.0 && out.target < 1.0)) invalid("search.target", "must lie in (0, 1)");
  if (out.tau0 <= 0.0) invalid("search.tau0", "must be positive");
  if (out.growth <= 1.0) invalid("search.growth", "must exceed 1");
  if (out.tau_cap < out.tau0) invalid("search.tau_cap", "must be at least tau0");
  if (out.bisect_rel_width <= 0.0) invalid("search.bisect_rel_width", "must be positive");
}

void parse_solver(const json& s, SolverSettings& out) {
  if (!s.is_object()) invalid("solver", "expected an object");
  check_keys(s, "solver.",
             {"tol", "dense_threshold", "max_basis", "max_matvecs", "verify_multiplicity", "seed", "steps", "dt",
              "krylov_dim", "step_tol", "global_tol", "max_doublings", "refine"});
  auto count = [&](const char* key, auto& dst) {
    if (!s.contains(key)) return;
    const int v = integer(s[key], std::string("solver.") + key);
    if (v < 0) invalid(std::string("solver.") + key, "must not be negative");
    dst = static_cast<std::remove_reference_t<decltype(dst)>>(v);
  };
  auto positive = [&](const char* key, double& dst) {
    if (!s.contains(key)) return;
    dst = number(s[key], std::string("solver.") + key);
    if (dst <= 0.0) invalid(std::string("solver.") + key, "must be positive");
  };
  positive("tol", out.eig.tol);
  count("dense_threshold", out.eig.dense_threshold);
  count("max_basis", out.eig.max_basis);
  count("max_matvecs", out.eig.max_matvecs);
  if (s.contains("verify_multiplicity"))
    out.eig.verify_multiplicity = boolean(s["verify_multiplicity"], "solver.verify_multiplicity");
  if (s.contains("seed")) {
    if (!s["seed"].is_number_unsigned()) invalid("solver.seed", "expected a non-negative integer");
    out.eig.seed = s["seed"].get<std::uint64_t>();
  }
  count("steps", out.propagator.steps);
  if (s.contains("dt")) {
    out.propagator.dt = number(s["dt"], "solver.dt");
    if (out.propagator.dt < 0.0) invalid("solver.dt", "must not be negative");
  }
  count("krylov_dim", out.propagator.krylov_dim);
  positive("step_tol", out.propagator.step_tol);
  positive("global_tol", out.propagator.global_tol);
  count("max_doublings", out.propagator.max_doublings);
  if (s.contains("refine")) out.propagator.refine = boolean(s["refine"], "solver.refine");
  if (out.eig.max_basis < 4) invalid("solver.max_basis", "must be at least 4");
  if (out.propagator.krylov_dim < 2) invalid("solver.krylov_dim", "must be at least 2");
}

SectorRequest parse_sector(const json& v) {
  SectorRequest r;
  if (v.is_string()) {
    const auto kind = lookup(kSectors, v.get<std::string>());
    if (!kind) invalid("sector", "expected default, floor, ceil, even, odd, full or {\"k\": n}");
    r.kind = *kind;
  } else if (v.is_object()) {
    check_keys(v, "sector.", {"k"});
    if (!v.contains("k")) invalid("sector", "expected {\"k\": n}");
    r.kind = SectorRequest::Kind::Fixed;
    r.k = integer(v["k"], "sector.k");
    if (r.k < 0) invalid("sector.k", "must not be negative");
  } else {
    invalid("sector", "expected a string or {\"k\": n}");
  }
  return r;
}

std::vector<BlochVector> cardinal_directions() {
  return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

bool is_static(ExperimentKind k) { return k == ExperimentKind::Spectrum || k == ExperimentKind::DegeneracyCheck; }

void validate(ExperimentConfig& c) {
  const bool custom = c.model == ModelFamily::Custom;
  if (custom && !is_static(c.experiment))
    invalid("model", "custom bonds are only supported for spectrum and degeneracy-check");
  if ((c.protocol == ProtocolKind::DynamicJ2 || c.protocol == ProtocolKind::UnjoinDynamic) &&
      c.model != ModelFamily::J1J2)
    invalid("protocol", "dynamic J2 protocols need the j1j2 model");
  const int min_n = is_static(c.experiment) ? 2 : 3;
  for (int n : c.n_values)
    if (n < min_n || n > kMaxSpins)
      invalid("N", "values must lie in [" + std::to_string(min_n) + ", " + std::to_string(kMaxSpins) + "]");
  if (c.j1 == 0.0) invalid("J1", "must be nonzero");

  const auto single = [&](const char* field, std::size_t size) {
    if (size != 1) invalid(field, "this experiment takes a single value");
  };
  switch (c.experiment) {
    case ExperimentKind::GapScan:
      single("N", c.n_values.size());
      if (c.s_values.empty()) invalid("s", "grid is empty");
      for (double s : c.s_values)
        if (s < 0.0 || s > 1.0) invalid("s", "values must lie in [0, 1]");
      break;
    case ExperimentKind::FidelityCurve:
    case ExperimentKind::Transport:
      single("N", c.n_values.size());
      single(sweep_key(c.model).c_str(), c.param_values.size());
      if (c.tau_values.empty()) invalid("tau", "grid is empty");
      for (double t : c.tau_values)
        if (t < 0.0) invalid("tau", "values must not be negative");
      break;
    case ExperimentKind::DegeneracyCheck:
      single("N", c.n_values.size());
      if (!custom) single(sweep_key(c.model).c_str(), c.param_values.size());
      break;
    default:
      break;
  }
  if (c.experiment == ExperimentKind::Transport) {
    for (std::size_t i = 0; i < c.bloch_inputs.size(); ++i)
      if (c.bloch_inputs[i].norm() > 1.0 + 1e-9) invalid("bloch[" + std::to_string(i) + "]", "norm exceeds 1");
  }
  if (c.levels < 1) invalid("levels", "must be at least 1");
  if (c.workers < 1) invalid("workers", "must be at least 1");
  if (c.sector.kind == SectorRequest::Kind::Fixed)
    for (int n : c.n_values)
      if (c.sector.k > n) invalid("sector.k", "exceeds N");
  if (custom) {
    if (c.custom_bonds.empty()) invalid("bonds", "custom models need at least one bond");
    try {
      ChainModel(c.n_values.front(), c.custom_bonds);
    } catch (const Error& e) {
      invalid("bonds", e.what());
    }
  }
}

json grid_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

std::string_view to_string(ExperimentKind k) { return name_of(kExperiments, k); }
std::string_view to_string(ModelFamily m) { return name_of(kModels, m); }
std::string_view to_string(ProtocolKind p) { return name_of(kProtocols, p); }
std::optional<ExperimentKind> experiment_from_string(std::string_view s) { return lookup(kExperiments, s); }

std::string ExperimentConfig::param_name() const { return model == ModelFamily::Custom ? "" : sweep_key(model); }

std::string ExperimentConfig::default_csv_name() const {
  return std::string(to_string(experiment)) + ".csv";
}

ExperimentConfig parse_config(std::string_view text_in) {
  json root;
  try {
    root = json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw ConfigError(Errc::ParseError, "", e.what());
  }
  if (!root.is_object()) throw ConfigError(Errc::ParseError, "", "top-level value must be an object");

  ExperimentConfig c;
  for (const auto& [key, _] : root.items()) {
    static const std::set<std::string> known{"experiment", "model", "protocol", "N",      "J1",
                                             "J2",         "ratio", "delta",    "xxz_J2", "bonds",
                                             "tau",        "s",     "bloch",    "sector", "levels",
                                             "search",     "solver", "output",  "workers"};
    if (!known.count(key)) invalid(key, "unknown field");
  }

  if (!root.contains("experiment")) invalid("experiment", "missing");
  const auto kind = experiment_from_string(text(root["experiment"], "experiment"));
  if (!kind) invalid("experiment", "unknown experiment \"" + root["experiment"].get<std::string>() + "\"");
  c.experiment = *kind;

  if (root.contains("model")) {
    const auto m = lookup(kModels, text(root["model"], "model"));
    if (!m) invalid("model", "unknown model \"" + root["model"].get<std::string>() + "\"");
    c.model = *m;
  }
  if (root.contains("protocol")) {
    const auto p = lookup(kProtocols, text(root["protocol"], "protocol"));
    if (!p) invalid("protocol", "unknown protocol \"" + root["protocol"].get<std::string>() + "\"");
    c.protocol = *p;
  }

  if (!root.contains("N")) invalid("N", "missing");
  c.n_values = int_grid(root["N"], "N");

  const std::string axis = sweep_key(c.model);
  for (const char* key : {"J2", "ratio", "delta"})
    if (root.contains(key) && (c.model == ModelFamily::Custom || key != axis))
      invalid(key, "not a sweep axis of model " + std::string(to_string(c.model)));
  if (c.model == ModelFamily::Custom) {
    c.param_values = {0.0};
  } else if (root.contains(axis)) {
    c.param_values = grid(root[axis], axis);
  } else if (c.model == ModelFamily::Xxz || c.model == ModelFamily::Xyz) {
    invalid(axis, "missing");
  } else {
    c.param_values = {0.0};
  }

  if (root.contains("J1")) c.j1 = number(root["J1"], "J1");
  if (root.contains("xxz_J2")) {
    if (c.model != ModelFamily::Xxz) invalid("xxz_J2", "only applies to the xxz model");
    c.xxz_j2 = number(root["xxz_J2"], "xxz_J2");
  }
  if (root.contains("bonds")) {
    if (c.model != ModelFamily::Custom) invalid("bonds", "only applies to the custom model");
    const auto& b = root["bonds"];
    if (!b.is_array()) invalid("bonds", "expected an array");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string f = "bonds[" + std::to_string(i) + "]";
      if (!b[i].is_object()) invalid(f, "expected {i, j, jx, jy, jz}");
      check_keys(b[i], f + ".", {"i", "j", "jx", "jy", "jz", "J"});
      Bond bond{};
      if (!b[i].contains("i") || !b[i].contains("j")) invalid(f, "needs sites i and j");
      bond.i = integer(b[i]["i"], f + ".i");
      bond.j = integer(b[i]["j"], f + ".j");
      if (b[i].contains("J")) {
        if (b[i].contains("jx") || b[i].contains("jy") || b[i].contains("jz"))
          invalid(f + ".J", "give either J or jx/jy/jz");
        bond.jx = bond.jy = bond.jz = number(b[i]["J"], f + ".J");
      } else {
        bond.jx = b[i].contains("jx") ? number(b[i]["jx"], f + ".jx") : 0.0;
        bond.jy = b[i].contains("jy") ? number(b[i]["jy"], f + ".jy") : 0.0;
        bond.jz = b[i].contains("jz") ? number(b[i]["jz"], f + ".jz") : 0.0;
      }
      c.custom_bonds.push_back(bond);
    }
  }
  if (root.contains("tau")) c.tau_values = grid(root["tau"], "tau");
  if (root.contains("s")) c.s_values = grid(root["s"], "s");
  if (root.contains("bloch")) {
    const auto& b = root["bloch"];
    if (!b.is_array() || b.empty()) invalid("bloch", "expected a nonempty array of [x, y, z]");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string f = "bloch[" + std::to_string(i) + "]";
      if (!b[i].is_array() || b[i].size() != 3) invalid(f, "expected [x, y, z]");
      c.bloch_inputs.push_back({number(b[i][0], f), number(b[i][1], f), number(b[i][2], f)});
    }
  } else {
    c.bloch_inputs = cardinal_directions();
  }
  if (root.contains("sector")) c.sector = parse_sector(root["sector"]);
  if (root.contains("levels")) c.levels = integer(root["levels"], "levels");
  if (root.contains("search")) parse_search(root["search"], c.search);
  if (root.contains("solver")) parse_solver(root["solver"], c.solver);
  if (root.contains("output")) {
    const auto& o = root["output"];
    if (!o.is_object()) invalid("output", "expected an object");
    check_keys(o, "output.", {"csv", "manifest", "plot", "plot_template"});
    if (o.contains("csv")) c.csv_name = text(o["csv"], "output.csv");
    if (o.contains("manifest")) c.manifest_name = text(o["manifest"], "output.manifest");
    if (o.contains("plot")) c.plot_name = text(o["plot"], "output.plot");
    if (o.contains("plot_template")) {
      c.plot_template = text(o["plot_template"], "output.plot_template");
      if (c.plot_template != "line" && c.plot_template != "loglog" && c.plot_template != "heatmap")
        invalid("output.plot_template", "expected line, loglog or heatmap");
    }
  }
  if (root.contains("workers")) c.workers = integer(root["workers"], "workers");
  if (c.csv_name.empty()) c.csv_name = c.default_csv_name();

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c, int indent) {
  json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["model"] = std::string(to_string(c.model));
  j["protocol"] = std::string(to_string(c.protocol));
  j["N"] = c.n_values;
  if (c.model != ModelFamily::Custom) j[sweep_key(c.model)] = grid_json(c.param_values);
  j["J1"] = c.j1;
  if (c.model == ModelFamily::Xxz) j["xxz_J2"] = c.xxz_j2;
  if (c.model == ModelFamily::Custom) {
    json bonds = json::array();
    for (const auto& b : c.custom_bonds) bonds.push_back({{"i", b.i}, {"j", b.j}, {"jx", b.jx}, {"jy", b.jy}, {"jz", b.jz}});
    j["bonds"] = bonds;
  }
  if (!c.tau_values.empty()) j["tau"] = grid_json(c.tau_values);
  if (!c.s_values.empty()) j["s"] = grid_json(c.s_values);
  if (c.experiment == ExperimentKind::Transport) {
    json bloch = json::array();
    for (const auto& b : c.bloch_inputs) bloch.push_back({b.x, b.y, b.z});
    j["bloch"] = bloch;
  }
  if (c.sector.kind == SectorRequest::Kind::Fixed)
    j["sector"] = {{"k", c.sector.k}};
  else
    j["sector"] = std::string(name_of(kSectors, c.sector.kind));
  j["levels"] = c.levels;
  j["search"] = {{"target", c.search.target},
                 {"tau0", c.search.tau0},
                 {"growth", c.search.growth},
                 {"tau_cap", c.search.tau_cap},
                 {"bisect_rel_width", c.search.bisect_rel_width}};
  const auto& e = c.solver.eig;
  const auto& p = c.solver.propagator;
  j["solver"] = {{"tol", e.tol},
                 {"dense_threshold", e.dense_threshold},
                 {"max_basis", e.max_basis},
                 {"max_matvecs", e.max_matvecs},
                 {"verify_multiplicity", e.verify_multiplicity},
                 {"seed", e.seed},
                 {"steps", p.steps},
                 {"dt", p.dt},
                 {"krylov_dim", p.krylov_dim},
                 {"step_tol", p.step_tol},
                 {"global_tol", p.global_tol},
                 {"max_doublings", p.max_doublings},
                 {"refine", p.refine}};
  j["output"] = {{"csv", c.csv_name}, {"manifest", c.manifest_name}};
  if (!c.plot_name.empty()) j["output"]["plot"] = c.plot_name;
  if (!c.plot_template.empty()) j["output"]["plot_template"] = c.plot_template;
  j["workers"] = c.workers;
  return j.dump(indent);
}

namespace {

ChainCouplings scaled(ChainCouplings c, double j1) {
  for (Coupling* x : {&c.nearest, &c.next_nearest}) {
    x->jx *= j1;
    x->jy *= j1;
    x->jz *= j1;
  }
  return c;
}

ChainCouplings family_couplings(const ExperimentConfig& c, double param) {
  switch (c.model) {
    case ModelFamily::J1J2:
      return heisenberg_couplings(c.j1, param);
    case ModelFamily::Xxz:
      return scaled(xxz_couplings(param, c.xxz_j2), c.j1);
    case ModelFamily::Xyz:
      return scaled(xyz_couplings(param), c.j1);
    case ModelFamily::Ising:
      return ising_couplings(c.j1, param);
    case ModelFamily::Custom:
      break;
  }
  invalid("model", "custom models have no protocol");
}

}  // namespace

ProtocolSpec build_protocol(const ExperimentConfig& c, int n, double param) {
  switch (c.protocol) {
    case ProtocolKind::Join:
      return join_protocol(n, family_couplings(c, param));
    case ProtocolKind::Unjoin:
      return reverse_protocol(join_protocol(n, family_couplings(c, param)));
    case ProtocolKind::DynamicJ2:
      return dynamic_j2_protocol(n, c.j1, param);
    case ProtocolKind::UnjoinDynamic:
      return reverse_protocol(dynamic_j2_protocol(n, c.j1, param));
    case ProtocolKind::Simultaneous:
      return simultaneous_protocol(n, family_couplings(c, param));
  }
  invalid("protocol", "unknown protocol");
}

ChainModel build_model(const ExperimentConfig& c, int n, double param) {
  if (c.model == ModelFamily::Custom) return ChainModel(n, c.custom_bonds);
  return uniform_chain(n, family_couplings(c, param));
}

SectorSpec resolve_sector(const ExperimentConfig& c, int n, const ProtocolSpec& p) {
  switch (c.sector.kind) {
    case SectorRequest::Kind::Default:
      return default_sector(p);
    case SectorRequest::Kind::Floor:
      return SectorSpec::magnetization(n, n / 2);
    case SectorRequest::Kind::Ceil:
      return SectorSpec::magnetization(n, (n + 1) / 2);
    case SectorRequest::Kind::Even:
      return SectorSpec::parity(n, Parity::Even);
    case SectorRequest::Kind::Odd:
      return SectorSpec::parity(n, Parity::Odd);
    case SectorRequest::Kind::Full:
      return SectorSpec::full(n);
    case SectorRequest::Kind::Fixed:
      return SectorSpec::magnetization(n, c.sector.k);
  }
  return default_sector(p);
}

}  // namespace adiabus
