#include "wbansync/diff_mapper.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace wbansync {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

}  // namespace

const IncrementAlphabet& IncrementAlphabet::dbpsk() {
  static const IncrementAlphabet a(Modulation::Dbpsk,
                                   {{{0, 0}, kPi / 2, cplx{0.0, 1.0}},
                                    {{1, 0}, 3 * kPi / 2, cplx{0.0, -1.0}}});
  return a;
}

const IncrementAlphabet& IncrementAlphabet::dqpsk() {
  static const IncrementAlphabet a(Modulation::Dqpsk,
                                   {{{0, 0}, kPi / 4, cplx{kHalfSqrt2, kHalfSqrt2}},
                                    {{0, 1}, 3 * kPi / 4, cplx{-kHalfSqrt2, kHalfSqrt2}},
                                    {{1, 1}, 5 * kPi / 4, cplx{-kHalfSqrt2, -kHalfSqrt2}},
                                    {{1, 0}, 7 * kPi / 4, cplx{kHalfSqrt2, -kHalfSqrt2}}});
  return a;
}

const IncrementAlphabet& IncrementAlphabet::of(Modulation m) {
  return m == Modulation::Dbpsk ? dbpsk() : dqpsk();
}

const AlphabetEntry& IncrementAlphabet::for_bits(std::uint8_t b0, std::uint8_t b1) const {
  if (modulation_ == Modulation::Dbpsk) b1 = 0;
  for (const auto& e : entries_) {
    if (e.bits[0] == b0 && e.bits[1] == b1) return e;
  }
  throw std::invalid_argument("bit pattern outside alphabet");
}

SymbolStream map_stream(const FrameBits& bits, const FrameLayout& layout) {
  auto check = [&](RegionKind kind, const Bits& b) {
    if (b.size() != layout.bits_of(kind)) {
      throw std::invalid_argument(std::string(to_string(kind)) + " carries " +
                                  std::to_string(b.size()) + " bits, layout needs " +
                                  std::to_string(layout.bits_of(kind)));
    }
  };
  check(RegionKind::Preamble, bits.preamble_bits);
  check(RegionKind::PlcpHeader, bits.header_bits);
  check(RegionKind::Psdu, bits.psdu_bits);

  SymbolStream s;
  s.source_bits = bits;
  s.symbols.reserve(layout.total_symbols() + 1);
  s.increments.reserve(layout.total_symbols() + 1);
  s.symbols.push_back(kInitialSymbol);
  s.increments.push_back(cplx{1.0, 0.0});

  std::size_t cursor[3] = {0, 0, 0};
  for (const auto& region : layout.regions()) {
    const Bits& src = region.kind == RegionKind::Preamble     ? bits.preamble_bits
                      : region.kind == RegionKind::PlcpHeader ? bits.header_bits
                                                              : bits.psdu_bits;
    std::size_t& pos = cursor[static_cast<int>(region.kind)];
    const auto& alphabet = IncrementAlphabet::of(region.modulation);
    for (std::size_t i = 0; i < region.symbols; ++i) {
      const std::uint8_t b0 = src[pos++];
      const std::uint8_t b1 = region.modulation == Modulation::Dqpsk ? src[pos++] : 0;
      const cplx d = alphabet.for_bits(b0, b1).increment;
      s.increments.push_back(d);
      s.symbols.push_back(s.symbols.back() * d);
    }
  }
  return s;
}

HardDecision hard_demap_dbpsk(cplx z) {
  return z.imag() >= 0.0 ? HardDecision{{0, 0}, cplx{0.0, 1.0}}
                         : HardDecision{{1, 0}, cplx{0.0, -1.0}};
}

HardDecision hard_demap_dqpsk(cplx z) {
  const auto entries = IncrementAlphabet::dqpsk().entries();
  const AlphabetEntry* best = &entries[0];
  double best_metric = (std::conj(best->increment) * z).real();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const double m = (std::conj(entries[i].increment) * z).real();
    if (m > best_metric) {
      best_metric = m;
      best = &entries[i];
    }
  }
  return {best->bits, best->increment};
}

HardDecision hard_demap(Modulation m, cplx z) {
  return m == Modulation::Dbpsk ? hard_demap_dbpsk(z) : hard_demap_dqpsk(z);
}

}  // namespace wbansync
