#include "v2xsim/plot.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "v2xsim/svg.hpp"

namespace v2xsim {

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw std::runtime_error("missing CSV column '" + name + "'");
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

Csv read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  Csv csv;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  csv.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    csv.rows.push_back(split(line));
  }
  return csv;
}

double to_double(const std::string& s) {
  double v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("malformed CSV number '" + s + "'");
  }
  return v;
}

std::string csv_path(const std::string& in_dir, const std::string& name) {
  return (std::filesystem::path(in_dir) / name).string();
}

SvgSeries column_series(const Csv& csv, const std::string& x_col, const std::string& y_col,
                        const std::string& label, const std::string& color,
                        double x_scale = 1.0) {
  SvgSeries s;
  s.label = label;
  s.color = color;
  int xi = csv.column(x_col);
  int yi = csv.column(y_col);
  for (const auto& row : csv.rows) {
    const auto& y = row[static_cast<std::size_t>(yi)];
    if (y.empty()) continue;
    s.points.emplace_back(to_double(row[static_cast<std::size_t>(xi)]) * x_scale,
                          to_double(y));
  }
  return s;
}

std::string fig1(const std::string& in_dir) {
  auto csv = read_csv(csv_path(in_dir, "fig1_conflict_probability.csv"));
  SvgChart chart;
  chart.title = "Conflict probability vs distance";
  chart.x_label = "pair distance (m)";
  chart.y_label = "conflict probability";
  chart.series.push_back(
      column_series(csv, "bin_lo_m", "probability", "per pair-subframe", "#1f77b4"));
  chart.series.push_back(column_series(csv, "bin_lo_m", "probability_window",
                                       "per pair-window", "#ff7f0e"));
  return chart.render();
}

std::string fig3(const std::string& in_dir) {
  auto csv = read_csv(csv_path(in_dir, "fig3_rb_occupancy.csv"));
  int ki = csv.column("occupancy");
  int ci = csv.column("csr_count");
  int wi = csv.column("window_start_ms");
  std::map<double, double> total;
  std::map<double, double> windows_seen;
  for (const auto& row : csv.rows) {
    total[to_double(row[static_cast<std::size_t>(ki)])] +=
        to_double(row[static_cast<std::size_t>(ci)]);
    windows_seen[to_double(row[static_cast<std::size_t>(wi)])] = 1;
  }
  double n_windows = static_cast<double>(windows_seen.size());
  SvgChart chart;
  chart.title = "Resource occupancy distribution";
  chart.x_label = "UEs occupying a CSR";
  chart.y_label = "mean CSRs per 100 ms window";
  SvgSeries s;
  s.label = "mean over windows";
  s.color = "#2ca02c";
  for (const auto& [k, c] : total) s.points.emplace_back(k, c / n_windows);
  chart.series.push_back(std::move(s));
  return chart.render();
}

std::string fig4(const std::string& in_dir) {
  auto csv = read_csv(csv_path(in_dir, "fig4_conflict_distance.csv"));
  SvgChart chart;
  chart.title = "Conflict distance statistics over time";
  chart.x_label = "time (s)";
  chart.y_label = "distance (m)";
  chart.series.push_back(
      column_series(csv, "window_start_ms", "mean_m", "mean", "#1f77b4", 1e-3));
  chart.series.push_back(
      column_series(csv, "window_start_ms", "median_m", "median", "#ff7f0e", 1e-3));
  chart.series.push_back(
      column_series(csv, "window_start_ms", "p5_m", "p5", "#2ca02c", 1e-3));
  chart.series.push_back(
      column_series(csv, "window_start_ms", "p95_m", "p95", "#d62728", 1e-3));
  return chart.render();
}

std::string fig5(const std::string& in_dir) {
  auto csv = read_csv(csv_path(in_dir, "fig5_settling.csv"));
  SvgChart chart;
  chart.title = "Settling of mean conflict distance";
  chart.x_label = "time (s)";
  chart.y_label = "distance (m)";
  chart.series.push_back(
      column_series(csv, "window_start_ms", "mean_m", "windowed mean", "#1f77b4", 1e-3));
  chart.series.push_back(
      column_series(csv, "window_start_ms", "reference_m", "reference", "#333333", 1e-3));
  chart.series.push_back(
      column_series(csv, "window_start_ms", "band_lo_m", "band low", "#aaaaaa", 1e-3));
  chart.series.push_back(
      column_series(csv, "window_start_ms", "band_hi_m", "band high", "#aaaaaa", 1e-3));
  return chart.render();
}

std::string fig6(const std::string& in_dir) {
  auto csv = read_csv(csv_path(in_dir, "fig6_dcc_trace.csv"));
  SvgChart chart;
  chart.title = "DCC traces (fleet means)";
  chart.x_label = "time (s)";
  chart.y_label = "value";
  chart.series.push_back(
      column_series(csv, "t_ms", "mean_rate_hz", "rate (Hz)", "#1f77b4", 1e-3));
  chart.series.push_back(
      column_series(csv, "t_ms", "mean_power_dbm", "power (dBm)", "#ff7f0e", 1e-3));
  auto cbp = column_series(csv, "t_ms", "mean_cbp", "CBP (%)", "#2ca02c", 1e-3);
  for (auto& p : cbp.points) p.second *= 100.0;
  chart.series.push_back(std::move(cbp));
  return chart.render();
}

std::string fig7(const std::string& in_dir) {
  auto csv = read_csv(csv_path(in_dir, "fig7_mac_delay.csv"));
  int si = csv.column("series");
  int ti = csv.column("t_ms");
  int vi = csv.column("value_ms");
  SvgChart chart;
  chart.title = "MAC delay, ITT and PHY inter-transmit time";
  chart.x_label = "time (s)";
  chart.y_label = "milliseconds";
  std::map<std::string, SvgSeries> by_name;
  by_name["delay"] = {"MAC delay", "#1f77b4", {}, true};
  by_name["itt"] = {"ITT", "#ff7f0e", {}, true};
  by_name["itt_phy"] = {"ITT_PHY", "#2ca02c", {}, true};
  for (const auto& row : csv.rows) {
    auto it = by_name.find(row[static_cast<std::size_t>(si)]);
    if (it == by_name.end()) continue;
    it->second.points.emplace_back(to_double(row[static_cast<std::size_t>(ti)]) * 1e-3,
                                   to_double(row[static_cast<std::size_t>(vi)]));
  }
  for (auto& [name, s] : by_name) chart.series.push_back(std::move(s));
  return chart.render();
}

}  // namespace

std::string render_figure(const std::string& in_dir, const std::string& figure) {
  if (figure == "fig1") return fig1(in_dir);
  if (figure == "fig3") return fig3(in_dir);
  if (figure == "fig4") return fig4(in_dir);
  if (figure == "fig5") return fig5(in_dir);
  if (figure == "fig6") return fig6(in_dir);
  if (figure == "fig7") return fig7(in_dir);
  throw std::runtime_error("unknown figure '" + figure +
                           "' (expected fig1|fig3|fig4|fig5|fig6|fig7)");
}

}  // namespace v2xsim
