#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "wbansync/frame.hpp"

namespace wbansync {

using cplx = std::complex<double>;

struct AlphabetEntry {
  std::array<std::uint8_t, 2> bits;  // bits[1] unused for DBPSK
  double phase;                      // phase change in [0, 2pi)
  cplx increment;                    // exp(j * phase), exact on the axes/diagonals
};

/// Bit pattern <-> phase increment tables for pi/2-DBPSK and pi/4-DQPSK.
/// Entries are ordered by increasing phase, which is also the tie-break order
/// of the hard demappers.
class IncrementAlphabet {
 public:
  static const IncrementAlphabet& dbpsk();
  static const IncrementAlphabet& dqpsk();
  static const IncrementAlphabet& of(Modulation m);

  Modulation modulation() const { return modulation_; }
  std::size_t bits_per_symbol() const { return wbansync::bits_per_symbol(modulation_); }
  std::span<const AlphabetEntry> entries() const { return entries_; }

  const AlphabetEntry& for_bits(std::uint8_t b0, std::uint8_t b1 = 0) const;

 private:
  IncrementAlphabet(Modulation m, std::vector<AlphabetEntry> entries)
      : modulation_(m), entries_(std::move(entries)) {}

  Modulation modulation_;
  std::vector<AlphabetEntry> entries_;
};

/// a_0 is the reference symbol exp(j pi/2); a_1 .. a_N carry the N frame
/// increments. increments[k] = a_k conj(a_{k-1}) for k >= 1 and increments[0]
/// is unused (set to 1).
struct SymbolStream {
  std::vector<cplx> symbols;
  std::vector<cplx> increments;
  FrameBits source_bits;

  cplx initial() const { return symbols.front(); }
  /// Number of frame increments N.
  std::size_t frame_symbols() const { return symbols.size() - 1; }
};

inline const cplx kInitialSymbol{0.0, 1.0};

/// Throws std::invalid_argument if bit counts disagree with the layout.
SymbolStream map_stream(const FrameBits& bits, const FrameLayout& layout);

struct HardDecision {
  std::array<std::uint8_t, 2> bits;
  cplx increment;
};

/// d = j * sign(Im z); Im z == 0 resolves to +j.
HardDecision hard_demap_dbpsk(cplx z);

/// Nearest increment in angle; exact ties go to the smallest phase.
HardDecision hard_demap_dqpsk(cplx z);

HardDecision hard_demap(Modulation m, cplx z);

}  // namespace wbansync
