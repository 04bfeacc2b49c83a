#include "adiabus/plot.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace adiabus {

namespace {

constexpr std::string_view kAnnealHeader = "N,param,tau_star,fidelity,status";
constexpr std::string_view kGapHeader = "s,param,gap";
constexpr std::string_view kFidelityHeader = "tau,fidelity";
constexpr std::string_view kDegeneracyHeader = "level,energy,pair_split";

struct Csv {
  std::string header;
  std::vector<std::vector<std::string>> rows;
};

Csv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  Csv csv;
  std::getline(in, csv.header);
  if (!csv.header.empty() && csv.header.back() == '\r') csv.header.pop_back();
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    csv.rows.push_back(std::move(cells));
  }
  return csv;
}

// Distinct non-empty values of one column in first-seen order.
std::string series(const Csv& csv, std::size_t column) {
  std::set<std::string> seen;
  std::string out;
  for (const auto& row : csv.rows) {
    if (column >= row.size() || row[column].empty() || !seen.insert(row[column]).second) continue;
    if (!out.empty()) out += ' ';
    out += row[column];
  }
  return out;
}

[[noreturn]] void mismatch(const std::filesystem::path& path, PlotTemplate t, const std::string& header) {
  throw Error(Errc::SchemaMismatch, path.filename().string() + " has header \"" + header +
                                        "\", which the " + std::string(to_string(t)) + " template cannot plot");
}

std::string quoted(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("''") : std::string(1, c);
  return out + "'";
}

}  // namespace

std::optional<PlotTemplate> plot_template_from_string(std::string_view s) {
  if (s == "line") return PlotTemplate::Line;
  if (s == "loglog") return PlotTemplate::LogLog;
  if (s == "heatmap") return PlotTemplate::HeatMap;
  return std::nullopt;
}

std::string_view to_string(PlotTemplate t) {
  switch (t) {
    case PlotTemplate::Line:
      return "line";
    case PlotTemplate::LogLog:
      return "loglog";
    case PlotTemplate::HeatMap:
      return "heatmap";
  }
  return "?";
}

PlotTemplate default_template(ExperimentKind kind) {
  return kind == ExperimentKind::GapScan ? PlotTemplate::HeatMap : PlotTemplate::Line;
}

std::string emit_plot_script(const std::filesystem::path& csv_path, PlotTemplate t, const std::string& param_label) {
  const Csv csv = read_csv(csv_path);
  const std::string data = quoted(csv_path.filename().string());
  const std::string image = quoted(csv_path.stem().string() + ".png");
  const std::string label = quoted(param_label.empty() ? "param" : param_label);

  std::ostringstream gp;
  gp << "# gnuplot script for " << csv_path.filename().string() << "\n"
     << "set datafile separator ','\n"
     << "set terminal png size 900,600\n"
     << "set output " << image << "\n"
     << "set grid\n";

  switch (t) {
    case PlotTemplate::Line:
      if (csv.header == kAnnealHeader) {
        gp << "set xlabel " << label << "\n"
           << "set ylabel 'annealing time'\n"
           << "set key top left\n"
           << "plot for [n in \"" << series(csv, 0) << "\"] " << data
           << " skip 1 using 2:(strcol(1) eq n ? $3 : NaN) with linespoints title 'N = '.n\n";
      } else if (csv.header == kFidelityHeader) {
        gp << "set xlabel 'tau'\n"
           << "set ylabel 'fidelity'\n"
           << "set yrange [0:1.05]\n"
           << "plot " << data << " skip 1 using 1:2 with linespoints notitle\n";
      } else if (csv.header == kDegeneracyHeader) {
        gp << "set xlabel 'level'\n"
           << "set ylabel 'energy'\n"
           << "plot " << data << " skip 1 using 1:2 with points pt 7 notitle\n";
      } else {
        mismatch(csv_path, t, csv.header);
      }
      break;
    case PlotTemplate::LogLog:
      if (csv.header != kAnnealHeader) mismatch(csv_path, t, csv.header);
      gp << "set logscale xy\n"
         << "set xlabel 'chain length N'\n"
         << "set ylabel 'annealing time'\n"
         << "set key top left\n"
         << "plot for [p in \"" << series(csv, 1) << "\"] " << data
         << " skip 1 using 1:(strcol(2) eq p ? $3 : NaN) with linespoints title " << label << ".' = '.p\n";
      break;
    case PlotTemplate::HeatMap:
      if (csv.header != kGapHeader) mismatch(csv_path, t, csv.header);
      gp << "set logscale cb\n"
         << "set xlabel " << label << "\n"
         << "set ylabel 's'\n"
         << "set cblabel 'gap'\n"
         << "plot " << data << " skip 1 using 2:1:($3 > 0 ? $3 : NaN) with image notitle\n";
      break;
  }
  return gp.str();
}

}  // namespace adiabus
