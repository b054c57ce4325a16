#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "wbansync/harness.hpp"

namespace wbansync {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double parse_num(const std::string& s, const std::filesystem::path& file) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw std::runtime_error(file.string() + ": malformed number '" + s + "'");
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string() + ": " + std::strerror(errno));
  }
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string() + ": " + std::strerror(errno));
  }
  return in;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw std::runtime_error("error while writing " + path.string());
}

std::string key_prefix(const CellReport& c) {
  return std::string(to_string(c.mode)) + ',' + c.modulation + ',' + num(c.snr_db) + ',' +
         num(c.tau);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

// Reads a CSV body after checking its header; each row has `fields` columns.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const char* header, std::size_t fields) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split_csv(line);
    if (row.size() != fields) throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    rows.push_back(std::move(row));
  }
  return rows;
}

json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

double from_json_number(const json& j) {
  if (j.is_string()) return parse_num(j.get<std::string>(), "report.json");
  return j.get<double>();
}

void write_csv(const RunReport& report, const std::filesystem::path& dir) {
  const auto curves_path = dir / "curves.csv";
  const auto summary_path = dir / "summary.csv";
  const auto trials_path = dir / "trials.csv";
  auto curves = open_out(curves_path);
  auto summary = open_out(summary_path);
  auto trials = open_out(trials_path);
  curves << kCurvesHeader << '\n';
  summary << kSummaryHeader << '\n';
  trials << kTrialsHeader << '\n';
  for (const auto& c : report.cells) {
    const auto prefix = key_prefix(c);
    summary << prefix << ',' << num(c.mse) << ',' << num(c.mse_ci_lo) << ',' << num(c.mse_ci_hi)
            << ',' << num(c.crb) << '\n';
    for (const auto& b : c.bias) {
      curves << prefix << ',' << b.symbol_index << ',' << num(b.mean) << ',' << num(b.ci_lo) << ','
             << num(b.ci_hi) << '\n';
    }
    for (std::size_t t = 0; t < c.final_errors.size(); ++t) {
      trials << prefix << ',' << t << ',' << num(c.final_errors[t]) << ','
             << (t < c.clamp_events.size() ? c.clamp_events[t] : 0) << '\n';
    }
  }
  close_checked(curves, curves_path);
  close_checked(summary, summary_path);
  close_checked(trials, trials_path);
}

RunReport read_csv_report(const std::filesystem::path& dir) {
  RunReport report;
  std::map<std::string, std::size_t> index;
  const auto summary_path = dir / "summary.csv";
  for (const auto& row : read_csv(summary_path, kSummaryHeader, 8)) {
    CellReport c;
    c.mode = parse_mode(row[0]);
    c.modulation = row[1];
    c.snr_db = parse_num(row[2], summary_path);
    c.tau = parse_num(row[3], summary_path);
    c.mse = parse_num(row[4], summary_path);
    c.mse_ci_lo = parse_num(row[5], summary_path);
    c.mse_ci_hi = parse_num(row[6], summary_path);
    c.crb = parse_num(row[7], summary_path);
    index[row[0] + ',' + row[1] + ',' + row[2] + ',' + row[3]] = report.cells.size();
    report.cells.push_back(std::move(c));
  }
  auto lookup = [&](const std::vector<std::string>& row, const std::filesystem::path& file) -> CellReport& {
    const auto it = index.find(row[0] + ',' + row[1] + ',' + row[2] + ',' + row[3]);
    if (it == index.end()) throw std::runtime_error(file.string() + ": row for unknown cell");
    return report.cells[it->second];
  };
  const auto curves_path = dir / "curves.csv";
  for (const auto& row : read_csv(curves_path, kCurvesHeader, 8)) {
    lookup(row, curves_path)
        .bias.push_back({static_cast<std::size_t>(parse_num(row[4], curves_path)),
                         parse_num(row[5], curves_path), parse_num(row[6], curves_path),
                         parse_num(row[7], curves_path)});
  }
  const auto trials_path = dir / "trials.csv";
  for (const auto& row : read_csv(trials_path, kTrialsHeader, 7)) {
    auto& c = lookup(row, trials_path);
    c.final_errors.push_back(parse_num(row[5], trials_path));
    c.clamp_events.push_back(static_cast<std::size_t>(parse_num(row[6], trials_path)));
  }
  return report;
}

void write_json(const RunReport& report, const std::filesystem::path& dir) {
  json j;
  j["metadata"] = report.metadata;
  j["cells"] = json::array();
  for (const auto& c : report.cells) {
    json cell{{"mode", to_string(c.mode)},
              {"modulation", c.modulation},
              {"snr_db", number_or_string(c.snr_db)},
              {"tau_over_t", c.tau},
              {"mse", c.mse},
              {"mse_ci_lo", c.mse_ci_lo},
              {"mse_ci_hi", c.mse_ci_hi},
              {"crb", c.crb},
              {"clamp_rate", c.clamp_rate()}};
    json bias = json::array();
    for (const auto& b : c.bias) {
      bias.push_back({{"symbol_index", b.symbol_index},
                      {"bias_mean", b.mean},
                      {"bias_ci_lo", b.ci_lo},
                      {"bias_ci_hi", b.ci_hi}});
    }
    cell["bias"] = std::move(bias);
    cell["final_errors"] = c.final_errors;
    cell["clamp_events"] = c.clamp_events;
    j["cells"].push_back(std::move(cell));
  }
  const auto path = dir / "report.json";
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  close_checked(out, path);
}

RunReport read_json_report(const std::filesystem::path& dir) {
  const auto path = dir / "report.json";
  auto in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  RunReport report;
  report.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
  for (const auto& cell : j.at("cells")) {
    CellReport c;
    c.mode = parse_mode(cell.at("mode").get<std::string>());
    c.modulation = cell.at("modulation").get<std::string>();
    c.snr_db = from_json_number(cell.at("snr_db"));
    c.tau = cell.at("tau_over_t").get<double>();
    c.mse = cell.at("mse").get<double>();
    c.mse_ci_lo = cell.at("mse_ci_lo").get<double>();
    c.mse_ci_hi = cell.at("mse_ci_hi").get<double>();
    c.crb = cell.at("crb").get<double>();
    for (const auto& b : cell.at("bias")) {
      c.bias.push_back({b.at("symbol_index").get<std::size_t>(), b.at("bias_mean").get<double>(),
                        b.at("bias_ci_lo").get<double>(), b.at("bias_ci_hi").get<double>()});
    }
    c.final_errors = cell.at("final_errors").get<std::vector<double>>();
    c.clamp_events = cell.at("clamp_events").get<std::vector<std::size_t>>();
    report.cells.push_back(std::move(c));
  }
  return report;
}

}  // namespace

void emit_report(const RunReport& report, const std::filesystem::path& dir, ReportFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  if (format == ReportFormat::Csv) {
    write_csv(report, dir);
  } else {
    write_json(report, dir);
  }
}

RunReport load_report(const std::filesystem::path& dir, ReportFormat format) {
  return format == ReportFormat::Csv ? read_csv_report(dir) : read_json_report(dir);
}

}  // namespace wbansync
