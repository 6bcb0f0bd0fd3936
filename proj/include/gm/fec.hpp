#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "gm/core.hpp"
#include "gm/modem.hpp"

namespace gm {

/// Binary linear block code given by a full-rank k x n generator matrix,
/// with exhaustive-codebook maximum-likelihood decoding that charges
/// erasures zero distance against every codeword. Block lengths are capped
/// at 16 so the 2^k codebook enumeration stays exact and cheap.
class LinearCode {
 public:
  /// generator_rows[i] holds row i with coordinate j in bit j (LSB first).
  LinearCode(std::string name, std::size_t k, std::size_t n,
             std::vector<std::uint32_t> generator_rows);

  const std::string& name() const { return name_; }
  std::size_t k() const { return k_; }
  std::size_t n() const { return n_; }
  double rate() const { return static_cast<double>(k_) / static_cast<double>(n_); }

  /// info * G over GF(2). info must have length k.
  BitVector encode(const BitVector& info) const;

  /// Info word of the codeword minimizing the number of known-symbol
  /// mismatches (erasures match everything). Ties resolve to the
  /// lexicographically smallest info word. word must have length n.
  BitVector decode_ml_erasure(const TernaryWord& word) const;

 private:
  std::string name_;
  std::size_t k_;
  std::size_t n_;
  std::vector<std::uint32_t> rows_;
  std::vector<std::uint32_t> codebook_;  // indexed by lexicographic info rank
};

/// The short codes used by the sweeps: rep13, hamm47, hamm48, rm13, rm14.
/// Generators are fixed fixtures (systematic where one exists).
const std::vector<LinearCode>& builtin_codes();

/// Builtin lookup by name; nullptr when unknown.
const LinearCode* find_code(std::string_view name);

}  // namespace gm
