#include "adiabus/anneal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "adiabus/errors.hpp"
#include "adiabus/parallel.hpp"

namespace adiabus {

namespace {

constexpr double kDegeneracyThreshold = 1e-10;

// Re-expresses a sector state in full-basis coordinates.
StateVector to_full(const StateVector& psi) {
  const SectorBasis basis(psi.spec);
  StateVector out{SectorSpec::full(psi.spec.n_spins), std::vector<cplx>(std::size_t{1} << psi.spec.n_spins)};
  for (std::size_t i = 0; i < basis.dimension(); ++i) out.amplitudes[basis.state(i)] = psi.amplitudes[i];
  return out;
}

// Model on the sites outside `removed`, relabelled 1..M in order.
struct Subchain {
  ChainModel model;
  std::vector<int> sites;  // sites[m] = original site of subchain site m+1
};

Subchain restrict_to(const ChainModel& m, int removed) {
  Subchain out;
  std::vector<int> position(m.n_spins() + 1, 0);
  for (int s = 1; s <= m.n_spins(); ++s) {
    if (s == removed) continue;
    out.sites.push_back(s);
    position[s] = static_cast<int>(out.sites.size());
  }
  std::vector<Bond> bonds;
  for (const auto& b : m.bonds()) {
    if (b.i == removed || b.j == removed) continue;
    bonds.push_back({position[b.i], position[b.j], b.jx, b.jy, b.jz});
  }
  out.model = ChainModel(m.n_spins() - 1, std::move(bonds));
  return out;
}

int single_isolated_site(const ChainModel& m) {
  const auto free = m.isolated_sites();
  if (free.size() > 1)
    throw Error(Errc::Disconnected, std::to_string(free.size()) + " uncoupled sites at the protocol start");
  if (free.empty()) return 0;
  if (!m.connected_without(free))
    throw Error(Errc::Disconnected, "sites other than " + std::to_string(free[0]) + " do not form one chain");
  return free[0];
}

struct SubGround {
  SectorSpec sector;
  double energy = 0.0;
  double gap = 0.0;
  std::vector<double> vector;
};

SubGround sub_ground(const ChainModel& model, const SectorSpec& sector, const EigConfig& cfg) {
  auto basis = std::make_shared<const SectorBasis>(sector);
  const auto op = build_sector_operator(model, basis);
  const std::size_t m = std::min<std::size_t>(2, basis->dimension());
  const auto eig = lowest_eigenpairs(op, m, cfg);
  SubGround g{sector, eig.eigenvalues[0], m > 1 ? eig.eigenvalues[1] - eig.eigenvalues[0] : INFINITY,
              eig.eigenvectors[0]};
  return g;
}

}  // namespace

bool conserves_magnetization(const ProtocolSpec& p) {
  for (const auto& t : p.terms())
    for (const auto& b : t.bonds)
      if (b.jx != b.jy) return false;
  return true;
}

SectorSpec default_sector(const ProtocolSpec& p) {
  const int n = p.n_spins;
  if (conserves_magnetization(p)) return SectorSpec::magnetization(n, n / 2);
  return SectorSpec::parity(n, static_cast<Parity>((n / 2) % 2));
}

GroundSpace ground_space(const ChainModel& model, const SectorSpec& sector, const EigConfig& cfg, double threshold) {
  auto basis = std::make_shared<const SectorBasis>(sector);
  const auto op = build_sector_operator(model, basis);
  std::size_t m = std::min<std::size_t>(4, basis->dimension());
  for (;;) {
    const auto eig = lowest_eigenpairs(op, m, cfg);
    GroundSpace g{eig.eigenvalues[0], {}};
    for (std::size_t i = 0; i < m; ++i)
      if (eig.eigenvalues[i] - eig.eigenvalues[0] <= threshold) g.states.push_back(eig.state(i));
    if (g.states.size() < m || m == basis->dimension()) return g;
    m = std::min(2 * m, basis->dimension());
  }
}

StateVector prepare_initial_state(const ProtocolSpec& p, const SectorSpec& sector, const EigConfig& cfg) {
  sector.validate();
  if (sector.n_spins != p.n_spins)
    throw Error(Errc::DimensionMismatch, "sector and protocol disagree on the number of spins");
  const ChainModel start = p.evaluate(0.0);
  const int free_site = single_isolated_site(start);

  if (free_site == 0) {
    auto g = ground_space(start, sector, cfg, kDegeneracyThreshold);
    if (g.states.size() > 1)
      throw Error(Errc::AmbiguousInitial, "initial ground state is degenerate in " + sector.describe());
    return g.states.front();
  }

  const Subchain sub = restrict_to(start, free_site);
  const int m = sub.model.n_spins();
  std::vector<SubGround> candidates;
  std::vector<int> free_bits;
  for (int up = 0; up <= 1; ++up) {
    SectorSpec s;
    switch (sector.kind) {
      case SectorSpec::Kind::Full:
        s = SectorSpec::full(m);
        break;
      case SectorSpec::Kind::Magnetization:
        if (sector.label - up < 0 || sector.label - up > m) continue;
        s = SectorSpec::magnetization(m, sector.label - up);
        break;
      case SectorSpec::Kind::Parity:
        s = SectorSpec::parity(m, static_cast<Parity>((sector.label + up) % 2));
        break;
    }
    candidates.push_back(sub_ground(sub.model, s, cfg));
    free_bits.push_back(up);
  }
  if (candidates.empty()) throw Error(Errc::InvalidSector, "no product state fits " + sector.describe());
  std::size_t best = 0;
  if (candidates.size() == 2) {
    if (std::abs(candidates[0].energy - candidates[1].energy) <= kDegeneracyThreshold)
      throw Error(Errc::AmbiguousInitial, "free spin orientation is undetermined in " + sector.describe());
    best = candidates[1].energy < candidates[0].energy ? 1 : 0;
  }
  if (candidates[best].gap <= kDegeneracyThreshold)
    throw Error(Errc::AmbiguousInitial, "subchain ground state is degenerate");

  const SectorBasis small(candidates[best].sector);
  const std::vector<cplx> amps(candidates[best].vector.begin(), candidates[best].vector.end());
  const PlacedSpin spin{free_site, free_bits[best] ? SpinState::spin_up() : SpinState::spin_down()};
  return embed(small, amps, sub.sites, std::span<const PlacedSpin>(&spin, 1), SectorBasis(sector));
}

FidelityEvaluator::FidelityEvaluator(ProtocolSpec p, const SectorSpec& sector, SolverSettings settings)
    : protocol_(std::move(p)),
      settings_(settings),
      initial_(prepare_initial_state(protocol_, sector, settings_.eig)),
      final_(ground_space(protocol_.evaluate(1.0), sector, settings_.eig, kDegeneracyThreshold)) {}

double FidelityEvaluator::overlap(const StateVector& psi) const {
  double acc = 0.0;
  for (const auto& g : final_.states) acc += std::norm(inner(g, psi));
  return std::sqrt(acc);
}

double FidelityEvaluator::operator()(double tau) const {
  const StateVector psi = settings_.propagator.refine
                              ? convergence_refine(protocol_, tau, initial_, settings_.propagator)
                              : evolve(protocol_, tau, initial_, settings_.propagator);
  return overlap(psi);
}

double fidelity(const ProtocolSpec& p, double tau, const SectorSpec& sector, const SolverSettings& settings) {
  return FidelityEvaluator(p, sector, settings)(tau);
}

void AnnealSearch::validate() const {
  if (!(target > 0.0 && target < 1.0)) throw Error(Errc::InvalidArgument, "target fidelity must lie in (0, 1)");
  if (!(tau0 > 0.0) || !(growth > 1.0) || !(tau_cap > 0.0) || !(bisect_rel_width > 0.0))
    throw Error(Errc::InvalidArgument, "search needs tau0 > 0, growth > 1, tau_cap > 0, width > 0");
}

AnnealTimeResult find_anneal_time(const FidelityEvaluator& f, const AnnealSearch& search) {
  search.validate();
  AnnealTimeResult r;
  r.tau_cap = search.tau_cap;
  auto probe = [&](double tau) {
    const double value = f(tau);
    r.trace.emplace_back(tau, value);
    return value;
  };

  const double f0 = probe(0.0);
  if (f0 >= search.target) {
    r.status = AnnealTimeResult::Status::Reached;
    r.tau_star = 0.0;
    r.fidelity_at_tau_star = f0;
    return r;
  }
  double lo = 0.0;
  for (int m = 0;; ++m) {
    const double tau = search.tau0 * std::pow(search.growth, m);
    if (tau > search.tau_cap) return r;
    const double value = probe(tau);
    if (value < search.target) {
      lo = tau;
      continue;
    }
    double hi = tau;
    double f_hi = value;
    while (hi - lo > search.bisect_rel_width * hi) {
      const double mid = 0.5 * (lo + hi);
      const double fm = probe(mid);
      if (fm >= search.target) {
        hi = mid;
        f_hi = fm;
      } else {
        lo = mid;
      }
    }
    r.status = AnnealTimeResult::Status::Reached;
    r.tau_star = hi;
    r.fidelity_at_tau_star = f_hi;
    return r;
  }
}

AnnealTimeResult find_anneal_time(const ProtocolSpec& p, const SectorSpec& sector, const AnnealSearch& search,
                                  const SolverSettings& settings) {
  search.validate();
  return find_anneal_time(FidelityEvaluator(p, sector, settings), search);
}

GapGrid gap_scan(const ProtocolFactory& factory, const std::vector<double>& s_grid,
                 const std::vector<double>& parameter_grid, std::optional<SectorSpec> sector, const EigConfig& cfg,
                 int workers) {
  if (s_grid.empty() || parameter_grid.empty()) throw Error(Errc::InvalidArgument, "gap scan grids must be nonempty");
  std::vector<ProtocolSpec> protocols;
  for (double param : parameter_grid) protocols.push_back(factory(param));

  GapGrid grid;
  grid.s_values = s_grid;
  grid.parameter_values = parameter_grid;
  grid.sector = sector.value_or(default_sector(protocols.front()));
  grid.gaps.assign(s_grid.size(), std::vector<double>(parameter_grid.size(), std::nan("")));

  const std::size_t cols = parameter_grid.size();
  parallel_for(s_grid.size() * cols, workers, [&](std::size_t cell) {
    const std::size_t i = cell / cols;
    const std::size_t j = cell % cols;
    const SectorSpec sec = sector.value_or(default_sector(protocols[j]));
    try {
      grid.gaps[i][j] = sector_gap(protocols[j].evaluate(s_grid[i]), sec, cfg);
    } catch (const Error& e) {
      if (e.code() != Errc::NoConvergence) throw;
    }
  });
  return grid;
}

double ground_manifold_tracking(const ProtocolSpec& p, const std::vector<double>& s_grid, const EigConfig& cfg) {
  const int n = p.n_spins;
  if (n % 2 == 0) throw Error(Errc::OddLengthRequired, "ground-manifold tracking needs odd N, got " + std::to_string(n));
  SectorSpec low;
  SectorSpec high;
  if (conserves_magnetization(p)) {
    low = SectorSpec::magnetization(n, n / 2);
    high = SectorSpec::magnetization(n, n / 2 + 1);
  } else {
    low = SectorSpec::parity(n, Parity::Even);
    high = SectorSpec::parity(n, Parity::Odd);
  }
  auto low_basis = std::make_shared<const SectorBasis>(low);
  auto high_basis = std::make_shared<const SectorBasis>(high);
  double split = 0.0;
  for (double s : s_grid) {
    const ChainModel m = p.evaluate(s);
    const double e_low = lowest_eigenpairs(build_sector_operator(m, low_basis), 1, cfg).eigenvalues[0];
    const double e_high = lowest_eigenpairs(build_sector_operator(m, high_basis), 1, cfg).eigenvalues[0];
    split = std::max(split, std::abs(e_low - e_high));
  }
  return split;
}

StateVector spin_flip(const StateVector& psi) {
  const int n = psi.spec.n_spins;
  SectorSpec target = psi.spec;
  if (target.kind == SectorSpec::Kind::Magnetization) target.label = n - target.label;
  if (target.kind == SectorSpec::Kind::Parity) target.label = (n - target.label) % 2;
  const SectorBasis from(psi.spec);
  const SectorBasis to(target);
  const BasisState all = (BasisState{1} << n) - 1;
  StateVector out{target, std::vector<cplx>(to.dimension())};
  for (std::size_t i = 0; i < from.dimension(); ++i)
    out.amplitudes[to.index_of(~from.state(i) & all)] = psi.amplitudes[i];
  return out;
}

namespace {

struct QubitDensity {
  cplx uu, dd, ud;  // <u|rho|u>, <d|rho|d>, <u|rho|d>
};

QubitDensity reduce_to_site(const StateVector& full, int site) {
  QubitDensity rho{};
  const BasisState bit = site_bit(site);
  for (BasisState s = 0; s < full.size(); ++s) {
    if (!(s & bit)) {
      rho.dd += std::norm(full.amplitudes[s]);
      continue;
    }
    rho.uu += std::norm(full.amplitudes[s]);
    rho.ud += full.amplitudes[s] * std::conj(full.amplitudes[s ^ bit]);
  }
  return rho;
}

double qubit_overlap(const QubitDensity& rho, const SpinState& in) {
  const double v = (std::norm(in.up) * rho.uu + std::norm(in.down) * rho.dd).real() +
                   2.0 * (std::conj(in.up) * in.down * rho.ud).real();
  return v;
}

BlochVector bloch_of(const QubitDensity& rho) {
  return {2.0 * rho.ud.real(), -2.0 * rho.ud.imag(), (rho.uu - rho.dd).real()};
}

SectorSpec sector_of(const StateVector& full, bool conserving) {
  const int n = full.spec.n_spins;
  for (BasisState s = 0; s < full.size(); ++s) {
    if (std::abs(full.amplitudes[s]) < 1e-12) continue;
    return conserving ? SectorSpec::magnetization(n, std::popcount(s))
                      : SectorSpec::parity(n, static_cast<Parity>(std::popcount(s) % 2));
  }
  throw Error(Errc::InvalidArgument, "zero state has no sector");
}

}  // namespace

TransportResult transport_qubit(const ProtocolSpec& p, const BlochVector& bloch_in, double tau,
                                const SolverSettings& settings, const TransportOptions& options) {
  const int n = p.n_spins;
  const SpinState qubit = bloch_in.to_spin_state();
  const ChainModel start = p.evaluate(0.0);
  const auto isolated = start.isolated_sites();
  int input = options.input_site.value_or(isolated.size() == 1 ? isolated[0] : 0);
  if (input < 1 || input > n || std::find(isolated.begin(), isolated.end(), input) == isolated.end())
    throw Error(Errc::InputSiteCoupled, "input site " + std::to_string(input) + " is coupled at s = 0");
  if (isolated.size() > 1 || !start.connected_without({input}))
    throw Error(Errc::Disconnected, "the remaining sites do not form one chain at s = 0");

  const Subchain sub = restrict_to(start, input);
  const SubGround ground = sub_ground(sub.model, SectorSpec::full(n - 1), settings.eig);
  const SectorBasis sub_basis(SectorSpec::full(n - 1));
  const SectorBasis full_basis(SectorSpec::full(n));
  const std::vector<cplx> sub_amps(ground.vector.begin(), ground.vector.end());
  auto with_input = [&](const SpinState& s) {
    const PlacedSpin spin{input, s};
    return embed(sub_basis, sub_amps, sub.sites, std::span<const PlacedSpin>(&spin, 1), full_basis);
  };

  StateVector psi0 = with_input(qubit);
  for (auto& a : psi0.amplitudes) a *= options.global_phase;
  const StateVector psi = settings.propagator.refine ? convergence_refine(p, tau, psi0, settings.propagator)
                                                     : evolve(p, tau, psi0, settings.propagator);

  TransportResult r;
  r.bloch_in = bloch_in;
  r.input_site = input;
  const ChainModel finish = p.evaluate(1.0);
  const auto out_free = finish.isolated_sites();
  const bool conserving = conserves_magnetization(p);
  QubitDensity rho{};
  if (out_free.size() == 1) {
    r.output_site = out_free[0];
    rho = reduce_to_site(psi, r.output_site);
  } else {
    // Logical readout on the final ground manifold {G, X G}, with the input
    // encoded as {L, X L} for L = subchain ground (x) up.
    const StateVector up0 = with_input(SpinState::spin_up());
    const StateVector down0 = with_input(SpinState::spin_down());
    const double sign = inner(down0, spin_flip(up0)).real() < 0.0 ? -1.0 : 1.0;
    const SectorSpec up_sector = sector_of(up0, conserving);
    const auto g = ground_space(finish, up_sector, settings.eig, kDegeneracyThreshold);
    const StateVector g_up = to_full(g.states.front());
    const StateVector g_down = spin_flip(g_up);
    const cplx a = inner(g_up, psi);
    const cplx b = sign * inner(g_down, psi);
    rho = {a * std::conj(a), b * std::conj(b), a * std::conj(b)};
  }
  r.qubit_fidelity = qubit_overlap(rho, qubit);
  r.bloch_out = bloch_of(rho);

  if (options.sector_fidelities) {
    for (const auto& spin : {SpinState::spin_up(), SpinState::spin_down()}) {
      double value = std::nan("");
      try {
        const SectorSpec sec = sector_of(with_input(spin), conserving);
        FidelityEvaluator f(p, sec, settings);
        value = f(tau);
      } catch (const Error&) {
      }
      r.sector_fidelities.push_back(value);
    }
  }
  return r;
}

StateVector mg_dimer_state(int n) {
  if (n < 2 || n % 2 != 0) throw Error(Errc::OddLength, "dimer state needs an even N >= 2, got " + std::to_string(n));
  if (n > kMaxSpins) throw Error(Errc::InvalidSize, "N above the configured maximum");
  StateVector out{SectorSpec::full(n), std::vector<cplx>(std::size_t{1} << n)};
  const int pairs = n / 2;
  const double amp = std::pow(0.5, pairs / 2.0);
  // Each singlet (|ud> - |du>)/sqrt2 contributes a minus sign when its first site is down.
  for (BasisState choice = 0; choice < (BasisState{1} << pairs); ++choice) {
    BasisState s = 0;
    for (int k = 0; k < pairs; ++k) {
      const int first = 2 * k + 1;
      s |= (choice >> k & 1) ? site_bit(first + 1) : site_bit(first);
    }
    out.amplitudes[s] = (std::popcount(choice) % 2 ? -amp : amp);
  }
  return out;
}

}  // namespace adiabus
