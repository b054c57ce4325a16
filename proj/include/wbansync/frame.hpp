#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wbansync {

using Bits = std::vector<std::uint8_t>;

enum class RegionKind { Preamble, PlcpHeader, Psdu };
enum class Modulation { Dbpsk, Dqpsk };

std::string_view to_string(RegionKind kind);
std::string_view to_string(Modulation modulation);

constexpr std::size_t bits_per_symbol(Modulation m) { return m == Modulation::Dbpsk ? 1 : 2; }

struct Region {
  RegionKind kind;
  std::size_t symbols;
  Modulation modulation;

  bool operator==(const Region&) const = default;
};

struct RegionInfo {
  RegionKind kind;
  Modulation modulation;

  bool operator==(const RegionInfo&) const = default;
};

/// Ordered, contiguous partition of a frame into regions. Symbol indices count
/// differential increments: index k is carried by the transition a_k -> a_{k+1}.
class FrameLayout {
 public:
  /// Throws std::invalid_argument on an empty list or a zero-length region.
  explicit FrameLayout(std::vector<Region> regions);

  /// Preamble 90 DBPSK, PLCP header 31 DBPSK, PSDU 80 DQPSK.
  static FrameLayout standard();

  /// A single payload block with no preamble, as used for the MSE tables.
  static FrameLayout block(Modulation payload, std::size_t payload_symbols = 100);

  /// Parses "standard", "block-dbpsk[:N]", "block-dqpsk[:N]" or an explicit
  /// list such as "preamble:90:dbpsk,header:31:dbpsk,psdu:80:dqpsk".
  static FrameLayout parse(std::string_view text);

  std::span<const Region> regions() const { return regions_; }
  std::size_t total_symbols() const { return total_; }
  std::size_t symbols_of(RegionKind kind) const;
  std::size_t bits_of(RegionKind kind) const;
  /// First symbol index of region `i`.
  std::size_t region_start(std::size_t i) const { return starts_.at(i); }
  std::string describe() const;
  /// Payload modulation label: "dbpsk", "dqpsk" or "dbpsk+dqpsk" for mixed frames.
  std::string payload_label() const;

  bool operator==(const FrameLayout& other) const { return regions_ == other.regions_; }

 private:
  std::vector<Region> regions_;
  std::vector<std::size_t> starts_;
  std::size_t total_ = 0;
};

/// Region containing `symbol_index`; throws std::out_of_range past the end.
RegionInfo region_of(std::size_t symbol_index, const FrameLayout& layout);

/// One period of a Fibonacci LFSR. Bit i of `taps` is the coefficient of x^i in
/// the feedback polynomial (x^6 + x + 1 -> 0x43); bit i of `seed` is the
/// initial register cell s_i. Throws std::invalid_argument for degree < 2 or
/// > 31, a zero seed, a malformed mask, or a non-primitive polynomial.
Bits generate_m_sequence(int degree, std::uint32_t taps, std::uint32_t seed);

struct PreambleConfig {
  int degree = 6;
  std::uint32_t taps = 0x43;  // x^6 + x + 1
  std::uint32_t seed = 0x3f;  // all ones
  Bits extension = default_preamble_extension();

  static Bits default_preamble_extension();
};

struct FrameBits {
  Bits preamble_bits;
  Bits header_bits;
  Bits psdu_bits;

  bool operator==(const FrameBits&) const = default;
};

/// Preamble = m-sequence || extension. Header and PSDU bits are i.i.d.
/// equiprobable, drawn from a 64-bit Mersenne Twister seeded with `payload_seed`.
FrameBits build_frame_bits(const FrameLayout& layout, const PreambleConfig& preamble,
                           std::uint64_t payload_seed);

/// Parses a string of '0'/'1' characters.
Bits parse_bits(std::string_view text);

}  // namespace wbansync
