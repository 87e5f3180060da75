#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qweft {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMat = Eigen::SparseMatrix<cxd>;

// resource-guard refusals, distinguished from input errors for exit codes
struct guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bit conventions, pinned project-wide: qubit 0 is the leftmost (most
// significant) bit of a basis index.  A length-n basis string x has integer
// value sum_i x_i 2^{n-1-i}, and state vectors are indexed by that value.
inline int bit_of(std::uint64_t x, int wire, int n) {
  return static_cast<int>((x >> (n - 1 - wire)) & 1u);
}

inline std::uint64_t with_bit(std::uint64_t x, int wire, int n, int b) {
  const std::uint64_t m = std::uint64_t{1} << (n - 1 - wire);
  return b ? (x | m) : (x & ~m);
}

inline std::uint64_t wire_mask(int wire, int n) {
  return std::uint64_t{1} << (n - 1 - wire);
}

inline int popcount64(std::uint64_t x) { return __builtin_popcountll(x); }

inline std::string bits_to_string(std::uint64_t x, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (bit_of(x, i, n)) s[i] = '1';
  return s;
}

inline std::uint64_t string_to_bits(const std::string& s) {
  std::uint64_t x = 0;
  for (char c : s) {
    x <<= 1;
    if (c == '1')
      x |= 1;
    else if (c != '0')
      throw std::invalid_argument("bitstring must contain only 0/1");
  }
  return x;
}

}  // namespace qweft
