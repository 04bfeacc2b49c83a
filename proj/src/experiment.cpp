#include "adiabus/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>

#include "adiabus/parallel.hpp"
#include "adiabus/plot.hpp"
#include "json.hpp"

#ifndef ADIABUS_VERSION
#define ADIABUS_VERSION "0.0.0"
#endif

namespace adiabus {

namespace {

// One independent unit of work producing zero or more CSV rows.
struct Task {
  std::string label;
  std::function<std::string(std::string& status)> run;
  std::function<std::string(const std::string& status)> blank;  // rows written when run throws
};

std::string row(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + "\n";
}

std::string fmt(double x) { return format_number(x); }
std::string fmt(int x) { return std::to_string(x); }

std::string point_label(const ExperimentConfig& c, int n, double param) {
  std::string s = "N=" + std::to_string(n);
  if (c.model != ModelFamily::Custom) s += " " + c.param_name() + "=" + fmt(param);
  return s;
}

std::vector<SectorSpec> covering_sectors(const ChainModel& m) {
  std::vector<SectorSpec> out;
  const int n = m.n_spins();
  if (m.conserves_magnetization()) {
    for (int k = 0; k <= n; ++k) out.push_back(SectorSpec::magnetization(n, k));
  } else {
    out = {SectorSpec::parity(n, Parity::Even), SectorSpec::parity(n, Parity::Odd)};
  }
  return out;
}

std::string sector_name(const SectorSpec& s) {
  switch (s.kind) {
    case SectorSpec::Kind::Full:
      return "full";
    case SectorSpec::Kind::Magnetization:
      return "k=" + std::to_string(s.label);
    case SectorSpec::Kind::Parity:
      return s.label == static_cast<int>(Parity::Even) ? "even" : "odd";
  }
  return "?";
}

std::vector<Task> build_tasks(const ExperimentConfig& c, std::string& header) {
  std::vector<Task> tasks;
  const SolverSettings& solver = c.solver;
  switch (c.experiment) {
    case ExperimentKind::AnnealTime:
      header = "N,param,tau_star,fidelity,status\n";
      for (int n : c.n_values) {
        for (double param : c.param_values) {
          Task t;
          t.label = point_label(c, n, param);
          t.run = [&c, n, param, &solver](std::string& status) {
            const auto p = build_protocol(c, n, param);
            const FidelityEvaluator f(p, resolve_sector(c, n, p), solver);
            const auto r = find_anneal_time(f, c.search);
            status = r.status == AnnealTimeResult::Status::Reached ? "Reached" : "NotReached";
            return row({fmt(n), fmt(param), fmt(r.tau_star), fmt(r.fidelity_at_tau_star), status});
          };
          t.blank = [n, param](const std::string& status) { return row({fmt(n), fmt(param), "", "", status}); };
          tasks.push_back(std::move(t));
        }
      }
      break;

    case ExperimentKind::GapScan: {
      header = "s,param,gap\n";
      const int n = c.n_values.front();
      for (double s : c.s_values) {
        for (double param : c.param_values) {
          Task t;
          t.label = "s=" + fmt(s) + " " + point_label(c, n, param);
          t.run = [&c, n, s, param](std::string&) {
            const auto p = build_protocol(c, n, param);
            return row({fmt(s), fmt(param), fmt(sector_gap(p.evaluate(s), resolve_sector(c, n, p), c.solver.eig))});
          };
          t.blank = [s, param](const std::string&) { return row({fmt(s), fmt(param), ""}); };
          tasks.push_back(std::move(t));
        }
      }
      break;
    }

    case ExperimentKind::FidelityCurve: {
      header = "tau,fidelity\n";
      const int n = c.n_values.front();
      const double param = c.param_values.front();
      // Built lazily once so every tau shares the initial state and final space.
      auto evaluator = std::make_shared<std::shared_ptr<const FidelityEvaluator>>();
      auto once = std::make_shared<std::once_flag>();
      for (double tau : c.tau_values) {
        Task t;
        t.label = point_label(c, n, param) + " tau=" + fmt(tau);
        t.run = [&c, n, param, tau, evaluator, once](std::string&) {
          std::call_once(*once, [&] {
            const auto p = build_protocol(c, n, param);
            *evaluator = std::make_shared<const FidelityEvaluator>(p, resolve_sector(c, n, p), c.solver);
          });
          if (!*evaluator) throw Error(Errc::InvalidArgument, "fidelity evaluator unavailable");
          return row({fmt(tau), fmt((**evaluator)(tau))});
        };
        t.blank = [tau](const std::string&) { return row({fmt(tau), ""}); };
        tasks.push_back(std::move(t));
      }
      break;
    }

    case ExperimentKind::Transport: {
      header = "bx_in,by_in,bz_in,tau,bx_out,by_out,bz_out,qubit_fidelity\n";
      const int n = c.n_values.front();
      const double param = c.param_values.front();
      for (const auto& b : c.bloch_inputs) {
        for (double tau : c.tau_values) {
          Task t;
          t.label = point_label(c, n, param) + " bloch=(" + fmt(b.x) + "," + fmt(b.y) + "," + fmt(b.z) +
                    ") tau=" + fmt(tau);
          t.run = [&c, n, param, b, tau](std::string&) {
            TransportOptions opt;
            opt.sector_fidelities = false;
            const auto r = transport_qubit(build_protocol(c, n, param), b, tau, c.solver, opt);
            return row({fmt(b.x), fmt(b.y), fmt(b.z), fmt(tau), fmt(r.bloch_out.x), fmt(r.bloch_out.y),
                        fmt(r.bloch_out.z), fmt(r.qubit_fidelity)});
          };
          t.blank = [b, tau](const std::string&) { return row({fmt(b.x), fmt(b.y), fmt(b.z), fmt(tau), "", "", "", ""}); };
          tasks.push_back(std::move(t));
        }
      }
      break;
    }

    case ExperimentKind::Spectrum:
      header = "N,param,sector,level,energy\n";
      for (int n : c.n_values) {
        for (double param : c.param_values) {
          Task t;
          t.label = point_label(c, n, param);
          t.run = [&c, n, param](std::string&) {
            const auto m = build_model(c, n, param);
            const auto sector = resolve_sector(c, n, constant_protocol(m));
            const auto b = std::make_shared<const SectorBasis>(sector);
            const auto want = std::min<std::size_t>(static_cast<std::size_t>(c.levels), b->dimension());
            const auto eig = lowest_eigenpairs(build_sector_operator(m, b), want, c.solver.eig);
            std::string out;
            for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i)
              out += row({fmt(n), fmt(param), sector_name(sector), std::to_string(i), fmt(eig.eigenvalues[i])});
            return out;
          };
          t.blank = [](const std::string&) { return std::string(); };
          tasks.push_back(std::move(t));
        }
      }
      break;

    case ExperimentKind::DegeneracyCheck: {
      header = "level,energy,pair_split\n";
      const int n = c.n_values.front();
      const double param = c.param_values.front();
      Task t;
      t.label = point_label(c, n, param);
      t.run = [&c, n, param](std::string&) {
        const auto m = build_model(c, n, param);
        const auto levels = static_cast<std::size_t>(c.levels);
        std::vector<double> all;
        for (const auto& s : covering_sectors(m)) {
          const auto b = std::make_shared<const SectorBasis>(s);
          const auto eig = lowest_eigenpairs(build_sector_operator(m, b), std::min(levels, b->dimension()), c.solver.eig);
          all.insert(all.end(), eig.eigenvalues.begin(), eig.eigenvalues.end());
        }
        std::sort(all.begin(), all.end());
        all.resize(std::min(all.size(), levels));
        std::string out;
        for (std::size_t i = 0; i < all.size(); ++i) {
          const std::size_t partner = i ^ 1U;
          const std::string split = partner < all.size() ? fmt(std::abs(all[i] - all[partner])) : "";
          out += row({std::to_string(i), fmt(all[i]), split});
        }
        return out;
      };
      t.blank = [](const std::string&) { return std::string(); };
      tasks.push_back(std::move(t));
      break;
    }
  }
  return tasks;
}

}  // namespace

std::string_view version() { return ADIABUS_VERSION; }

std::string format_number(double x) {
  if (!std::isfinite(x)) return "";
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

ExperimentOutput compute_experiment(const ExperimentConfig& cfg) {
  std::string header;
  const auto tasks = build_tasks(cfg, header);
  std::vector<std::string> rows(tasks.size());
  ExperimentOutput out;
  out.points.resize(tasks.size());

  parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
    auto& rec = out.points[i];
    rec.label = tasks[i].label;
    rec.status = "ok";
    const auto start = std::chrono::steady_clock::now();
    try {
      rows[i] = tasks[i].run(rec.status);
    } catch (const Error& e) {
      rec.status = std::string(errc_name(e.code()));
      rec.message = e.what();
      rows[i] = tasks[i].blank(rec.status);
    } catch (const std::exception& e) {
      rec.status = "Failed";
      rec.message = e.what();
      rows[i] = tasks[i].blank(rec.status);
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  out.csv = header;
  for (const auto& r : rows) out.csv += r;
  return out;
}

std::string manifest_json(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  using json = nlohmann::ordered_json;
  json m;
  m["tool"] = "adiabus";
  m["version"] = std::string(version());
  m["config"] = json::parse(config_to_json(cfg));
  m["csv"] = cfg.csv_name;
  std::size_t failed = 0;
  json points = json::array();
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    const auto& p = out.points[i];
    json entry{{"index", i}, {"point", p.label}, {"status", p.status}, {"wall_seconds", p.wall_seconds}};
    if (!p.message.empty()) entry["message"] = p.message;
    if (p.status != "ok" && p.status != "Reached") ++failed;
    points.push_back(std::move(entry));
  }
  m["points"] = std::move(points);
  m["incomplete_points"] = failed;
  return m.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::IoError, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(Errc::IoError, "failed writing " + path.string());
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  auto out = compute_experiment(cfg);
  const auto csv_path = out_dir / cfg.csv_name;
  write_file(csv_path, out.csv);
  write_file(out_dir / cfg.manifest_name, manifest_json(cfg, out));
  if (!cfg.plot_name.empty()) {
    const auto t = cfg.plot_template.empty() ? default_template(cfg.experiment)
                                             : *plot_template_from_string(cfg.plot_template);
    write_file(out_dir / cfg.plot_name, emit_plot_script(csv_path, t, cfg.param_name()));
  }
  return out;
}

}  // namespace adiabus
