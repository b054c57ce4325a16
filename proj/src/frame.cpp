#include "wbansync/frame.hpp"

#include <bit>
#include <charconv>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wbansync {

std::string_view to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::Preamble: return "preamble";
    case RegionKind::PlcpHeader: return "header";
    case RegionKind::Psdu: return "psdu";
  }
  return "?";
}

std::string_view to_string(Modulation modulation) {
  return modulation == Modulation::Dbpsk ? "dbpsk" : "dqpsk";
}

FrameLayout::FrameLayout(std::vector<Region> regions) : regions_(std::move(regions)) {
  if (regions_.empty()) throw std::invalid_argument("frame layout has no regions");
  starts_.reserve(regions_.size());
  for (const auto& r : regions_) {
    if (r.symbols == 0) {
      throw std::invalid_argument("frame region '" + std::string(to_string(r.kind)) +
                                  "' has zero symbols");
    }
    starts_.push_back(total_);
    total_ += r.symbols;
  }
}

FrameLayout FrameLayout::standard() {
  return FrameLayout({{RegionKind::Preamble, 90, Modulation::Dbpsk},
                      {RegionKind::PlcpHeader, 31, Modulation::Dbpsk},
                      {RegionKind::Psdu, 80, Modulation::Dqpsk}});
}

FrameLayout FrameLayout::block(Modulation payload, std::size_t payload_symbols) {
  return FrameLayout({{RegionKind::Psdu, payload_symbols, payload}});
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Modulation parse_modulation(std::string_view s) {
  const auto l = lower(s);
  if (l == "dbpsk") return Modulation::Dbpsk;
  if (l == "dqpsk") return Modulation::Dqpsk;
  throw std::invalid_argument("unknown modulation '" + std::string(s) + "'");
}

std::size_t parse_count(std::string_view s) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw std::invalid_argument("invalid symbol count '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

}  // namespace

FrameLayout FrameLayout::parse(std::string_view text) {
  const auto t = lower(text);
  if (t == "standard") return standard();
  for (auto [prefix, mod] : {std::pair{"block-dbpsk", Modulation::Dbpsk},
                             std::pair{"block-dqpsk", Modulation::Dqpsk}}) {
    const std::string_view p(prefix);
    if (t.starts_with(p)) {
      const std::string_view rest = std::string_view(t).substr(p.size());
      if (rest.empty()) return block(mod);
      if (rest.front() == ':') return block(mod, parse_count(rest.substr(1)));
    }
  }
  std::vector<Region> regions;
  for (auto item : split(t, ',')) {
    const auto fields = split(item, ':');
    if (fields.size() != 3) {
      throw std::invalid_argument("layout region '" + std::string(item) +
                                  "' must be kind:count:modulation");
    }
    RegionKind kind;
    if (fields[0] == "preamble") kind = RegionKind::Preamble;
    else if (fields[0] == "header") kind = RegionKind::PlcpHeader;
    else if (fields[0] == "psdu") kind = RegionKind::Psdu;
    else throw std::invalid_argument("unknown region kind '" + std::string(fields[0]) + "'");
    regions.push_back({kind, parse_count(fields[1]), parse_modulation(fields[2])});
  }
  return FrameLayout(std::move(regions));
}

std::size_t FrameLayout::symbols_of(RegionKind kind) const {
  std::size_t n = 0;
  for (const auto& r : regions_) n += r.kind == kind ? r.symbols : 0;
  return n;
}

std::size_t FrameLayout::bits_of(RegionKind kind) const {
  std::size_t n = 0;
  for (const auto& r : regions_) n += r.kind == kind ? r.symbols * bits_per_symbol(r.modulation) : 0;
  return n;
}

std::string FrameLayout::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (i) os << ',';
    os << to_string(regions_[i].kind) << ':' << regions_[i].symbols << ':'
       << to_string(regions_[i].modulation);
  }
  return os.str();
}

std::string FrameLayout::payload_label() const {
  bool bpsk = false;
  bool qpsk = false;
  for (const auto& r : regions_) {
    if (r.kind == RegionKind::Preamble) continue;
    (r.modulation == Modulation::Dbpsk ? bpsk : qpsk) = true;
  }
  if (bpsk && qpsk) return "dbpsk+dqpsk";
  if (qpsk) return "dqpsk";
  return "dbpsk";
}

RegionInfo region_of(std::size_t symbol_index, const FrameLayout& layout) {
  const auto regions = layout.regions();
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (symbol_index < layout.region_start(i) + regions[i].symbols) {
      return {regions[i].kind, regions[i].modulation};
    }
  }
  throw std::out_of_range("symbol index " + std::to_string(symbol_index) +
                          " outside frame of " + std::to_string(layout.total_symbols()) +
                          " symbols");
}

Bits generate_m_sequence(int degree, std::uint32_t taps, std::uint32_t seed) {
  if (degree < 2 || degree > 31) {
    throw std::invalid_argument("m-sequence degree must be in [2, 31], got " +
                                std::to_string(degree));
  }
  const std::uint32_t state_mask = (std::uint32_t{1} << degree) - 1;
  if (seed == 0 || (seed & ~state_mask) != 0) {
    throw std::invalid_argument("LFSR seed must be a nonzero " + std::to_string(degree) +
                                "-bit state");
  }
  if ((taps >> degree) != 1 || (taps & 1) == 0) {
    throw std::invalid_argument("feedback mask must have terms x^degree and 1 only at the ends");
  }
  // s_{k+n} = sum_{i<n} c_i s_{k+i}; the register holds s_k .. s_{k+n-1} in bits 0..n-1.
  const std::uint32_t feedback = taps & state_mask;
  const std::size_t period = state_mask;
  Bits out(period);
  std::uint32_t state = seed;
  for (std::size_t k = 0; k < period; ++k) {
    out[k] = static_cast<std::uint8_t>(state & 1);
    const std::uint32_t next = std::popcount(state & feedback) & 1;
    state = (state >> 1) | (next << (degree - 1));
    if (state == seed && k + 1 < period) {
      throw std::invalid_argument("feedback polynomial is not primitive (period " +
                                  std::to_string(k + 1) + " < " + std::to_string(period) + ")");
    }
  }
  return out;
}

Bits PreambleConfig::default_preamble_extension() {
  // Published extension (25 symbols) right-padded with "01" to fill 27.
  return parse_bits("010101010110110110110110101");
}

Bits parse_bits(std::string_view text) {
  Bits bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bit string contains '" + std::string(1, c) + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return bits;
}

FrameBits build_frame_bits(const FrameLayout& layout, const PreambleConfig& preamble,
                           std::uint64_t payload_seed) {
  FrameBits fb;
  const std::size_t want = layout.bits_of(RegionKind::Preamble);
  if (want > 0) {
    fb.preamble_bits = generate_m_sequence(preamble.degree, preamble.taps, preamble.seed);
    const std::size_t expected_ext = want >= fb.preamble_bits.size() ? want - fb.preamble_bits.size() : 0;
    if (fb.preamble_bits.size() + preamble.extension.size() != want) {
      throw std::invalid_argument("preamble extension has " +
                                  std::to_string(preamble.extension.size()) +
                                  " bits, expected " + std::to_string(expected_ext));
    }
    fb.preamble_bits.insert(fb.preamble_bits.end(), preamble.extension.begin(),
                            preamble.extension.end());
  }

  std::mt19937_64 rng(payload_seed);
  std::uint64_t word = 0;
  int left = 0;
  auto draw = [&](std::size_t n) {
    Bits b(n);
    for (auto& bit : b) {
      if (left == 0) {
        word = rng();
        left = 64;
      }
      bit = static_cast<std::uint8_t>(word & 1);
      word >>= 1;
      --left;
    }
    return b;
  };
  fb.header_bits = draw(layout.bits_of(RegionKind::PlcpHeader));
  fb.psdu_bits = draw(layout.bits_of(RegionKind::Psdu));
  return fb;
}

}  // namespace wbansync
