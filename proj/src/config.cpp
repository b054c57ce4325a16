#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wbansync/harness.hpp"

namespace wbansync {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || std::isnan(out)) {
    throw std::invalid_argument("config key '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  int base = 10;
  std::string_view digits(v);
  if (digits.starts_with("0x") || digits.starts_with("0X")) {
    base = 16;
    digits.remove_prefix(2);
  }
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out, base);
  if (digits.empty() || ec != std::errc{} || p != digits.data() + digits.size()) {
    throw std::invalid_argument("config key '" + key + "': '" + v +
                                "' is not a non-negative integer");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config key '" + key + "': '" + v + "' is not a boolean");
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += f(xs[i]);
  }
  return out;
}

}  // namespace

void apply_config_value(Scenario& s, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "snr_db") {
    s.snr_db.clear();
    for (const auto& x : split_list(v)) s.snr_db.push_back(to_double(key, x));
  } else if (key == "tau") {
    s.tau.clear();
    for (const auto& x : split_list(v)) s.tau.push_back(to_double(key, x));
  } else if (key == "modes" || key == "mode") {
    s.modes.clear();
    for (const auto& x : split_list(v)) s.modes.push_back(parse_mode(x));
  } else if (key == "trials") {
    s.trials = to_uint(key, v);
  } else if (key == "seed") {
    s.master_seed = to_uint(key, v);
  } else if (key == "mu") {
    s.loop.step_size = to_double(key, v);
  } else if (key == "initial_estimate") {
    s.loop.initial_estimate = to_double(key, v);
  } else if (key == "clamp") {
    s.loop.clamp = to_double(key, v);
  } else if (key == "rolloff") {
    s.pulse.rolloff = to_double(key, v);
  } else if (key == "span") {
    s.pulse.span = static_cast<int>(to_uint(key, v));
  } else if (key == "sps") {
    s.pulse.sps = static_cast<int>(to_uint(key, v));
  } else if (key == "layout") {
    s.layout = FrameLayout::parse(v);
  } else if (key == "preamble_degree") {
    s.preamble.degree = static_cast<int>(to_uint(key, v));
  } else if (key == "preamble_taps") {
    s.preamble.taps = static_cast<std::uint32_t>(to_uint(key, v));
  } else if (key == "preamble_seed") {
    s.preamble.seed = static_cast<std::uint32_t>(to_uint(key, v));
  } else if (key == "preamble_extension") {
    s.preamble.extension = parse_bits(v);
  } else if (key == "lowcomplexity_tanh") {
    s.loop.tanh.saturating = to_bool(key, v);
  } else if (key == "tanh_threshold") {
    s.loop.tanh.threshold = to_double(key, v);
  } else if (key == "block_len") {
    s.crb_block_len = to_uint(key, v);
  } else if (key == "bootstrap") {
    s.bootstrap_resamples = to_uint(key, v);
  } else if (key == "threads") {
    s.threads = static_cast<unsigned>(to_uint(key, v));
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

Scenario load_scenario(const std::filesystem::path& path, Scenario base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    }
    try {
      apply_config_value(base, trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

std::map<std::string, std::string> describe(const Scenario& s) {
  std::string ext;
  for (auto b : s.preamble.extension) ext += static_cast<char>('0' + b);
  std::ostringstream taps;
  taps << "0x" << std::hex << s.preamble.taps;
  return {
      {"snr_db", join(s.snr_db, fmt)},
      {"tau", join(s.tau, fmt)},
      {"modes", join(s.modes, [](Mode m) { return std::string(to_string(m)); })},
      {"trials", std::to_string(s.trials)},
      {"seed", std::to_string(s.master_seed)},
      {"mu", fmt(s.loop.step_size)},
      {"initial_estimate", fmt(s.loop.initial_estimate)},
      {"clamp", fmt(s.loop.clamp)},
      {"rolloff", fmt(s.pulse.rolloff)},
      {"span", std::to_string(s.pulse.span)},
      {"sps", std::to_string(s.pulse.sps)},
      {"layout", s.layout.describe()},
      {"preamble_degree", std::to_string(s.preamble.degree)},
      {"preamble_taps", taps.str()},
      {"preamble_seed", std::to_string(s.preamble.seed)},
      {"preamble_extension", ext},
      {"lowcomplexity_tanh", s.loop.tanh.saturating ? "true" : "false"},
      {"tanh_threshold", fmt(s.loop.tanh.threshold)},
      {"block_len", std::to_string(s.crb_block_len)},
      {"bootstrap", std::to_string(s.bootstrap_resamples)},
  };
}

}  // namespace wbansync
