#include "gm/fec.hpp"

#include <bit>
#include <initializer_list>
#include <utility>

namespace gm {

namespace {

// Lexicographic info rank -> packed bits, info bit i in codeword bit i of
// the row space (bit i of the rank is info bit k-1-i, so increasing rank
// enumerates info words in lexicographic order).
std::uint32_t info_bit(std::uint32_t rank, std::size_t k, std::size_t i) {
  return (rank >> (k - 1 - i)) & 1u;
}

// Full row rank over GF(2) by elimination on a copy.
bool full_row_rank(std::vector<std::uint32_t> rows) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < 32 && rank < rows.size(); ++col) {
    const std::uint32_t mask = 1u << col;
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot] & mask)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r] & mask)) rows[r] ^= rows[rank];
    }
    ++rank;
  }
  return rank == rows.size();
}

}  // namespace

LinearCode::LinearCode(std::string name, std::size_t k, std::size_t n,
                       std::vector<std::uint32_t> generator_rows)
    : name_(std::move(name)), k_(k), n_(n), rows_(std::move(generator_rows)) {
  if (k < 1 || k > 16 || n < k || n > 16)
    throw ConfigError("LinearCode: need 1 <= k <= n <= 16");
  if (rows_.size() != k) throw ConfigError("LinearCode: generator must have k rows");
  const std::uint32_t width = (1u << n) - 1u;
  for (auto row : rows_) {
    if (row & ~width) throw ConfigError("LinearCode: generator row wider than n");
  }
  if (!full_row_rank(rows_)) throw ConfigError("LinearCode: generator rows not independent");

  codebook_.resize(std::size_t{1} << k);
  for (std::uint32_t rank = 0; rank < codebook_.size(); ++rank) {
    std::uint32_t cw = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (info_bit(rank, k, i)) cw ^= rows_[i];
    }
    codebook_[rank] = cw;
  }
}

BitVector LinearCode::encode(const BitVector& info) const {
  if (info.size() != k_) throw ConfigError("encode: info length must equal k");
  std::uint32_t cw = 0;
  for (std::size_t i = 0; i < k_; ++i) {
    if (info[i]) cw ^= rows_[i];
  }
  BitVector out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = (cw >> j) & 1u;
  return out;
}

BitVector LinearCode::decode_ml_erasure(const TernaryWord& word) const {
  if (word.size() != n_) throw ConfigError("decode_ml_erasure: word length must equal n");

  std::uint32_t known = 0, received = 0;
  for (std::size_t j = 0; j < n_; ++j) {
    if (word[j] == TernarySymbol::Erasure) continue;
    known |= 1u << j;
    if (word[j] == TernarySymbol::One) received |= 1u << j;
  }

  std::uint32_t best_rank = 0;
  int best_dist = std::popcount((codebook_[0] ^ received) & known);
  for (std::uint32_t rank = 1; rank < codebook_.size(); ++rank) {
    const int dist = std::popcount((codebook_[rank] ^ received) & known);
    if (dist < best_dist) {  // strict: ties keep the lexicographically smallest info
      best_dist = dist;
      best_rank = rank;
    }
  }

  BitVector info(k_);
  for (std::size_t i = 0; i < k_; ++i) info[i] = info_bit(best_rank, k_, i);
  return info;
}

namespace {

std::vector<std::uint32_t> pack_rows(std::initializer_list<const char*> rows) {
  std::vector<std::uint32_t> out;
  for (const char* row : rows) {
    std::uint32_t bits = 0;
    for (std::size_t j = 0; row[j]; ++j) {
      if (row[j] == '1') bits |= 1u << j;
    }
    out.push_back(bits);
  }
  return out;
}

std::vector<LinearCode> make_builtins() {
  std::vector<LinearCode> codes;
  codes.emplace_back("rep13", 1, 3, pack_rows({"111"}));
  // Systematic Hamming, parity columns from the classic [I | P] form.
  codes.emplace_back("hamm47", 4, 7,
                     pack_rows({"1000110", "0100101", "0010011", "0001111"}));
  // hamm47 rows extended with an overall parity bit.
  codes.emplace_back("hamm48", 4, 8,
                     pack_rows({"10001101", "01001011", "00100111", "00011110"}));
  // First-order Reed-Muller generators: all-ones row plus the coordinate
  // evaluation rows over 2^m points.
  codes.emplace_back("rm13", 4, 8,
                     pack_rows({"11111111", "01010101", "00110011", "00001111"}));
  codes.emplace_back("rm14", 5, 16,
                     pack_rows({"1111111111111111", "0101010101010101", "0011001100110011",
                                "0000111100001111", "0000000011111111"}));
  return codes;
}

}  // namespace

const std::vector<LinearCode>& builtin_codes() {
  static const std::vector<LinearCode> codes = make_builtins();
  return codes;
}

const LinearCode* find_code(std::string_view name) {
  for (const auto& code : builtin_codes()) {
    if (code.name() == name) return &code;
  }
  return nullptr;
}

}  // namespace gm
