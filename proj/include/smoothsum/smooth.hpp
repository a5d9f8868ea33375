#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "smoothsum/params.hpp"

namespace smoothsum {

/// One sequence member: value == 2^x * p^y exactly.
struct SmoothElement {
  mpz_class value;
  std::uint32_t x = 0;  // exponent of 2
  std::uint32_t y = 0;  // exponent of p
};

/// floor(log2 v) for v >= 1, from the bit length (no floating point).
std::uint64_t floor_log2(const mpz_class& v);

/// ceil(log2 v) for v >= 1.
std::uint64_t ceil_log2(const mpz_class& v);

/// 2^k as an exact integer.
mpz_class pow2(std::uint64_t k);

/// True iff v is 2^j for some j >= 0.
bool is_power_of_two(const mpz_class& v);

/// All sequence elements with value <= bound, strictly increasing.
/// 1 = 2^0 * p^0 is included; empty only for bound < 1.
std::vector<SmoothElement> smooth_upto(const Params& params, const mpz_class& bound);

/// The unique exponent pair (x, y) with n == 2^x * p^y, or nullopt.
std::optional<std::pair<std::uint32_t, std::uint32_t>> membership(const mpz_class& n,
                                                                  const Params& params);

/// Number of sequence values v with 1 <= v <= bound. Pure arithmetic over
/// exponent ranges; no enumeration.
std::uint64_t count_upto(const Params& params, const mpz_class& bound);

/// Number of sequence values v with lo <= v < hi. Requires 1 <= lo <= hi.
std::uint64_t window_count(const Params& params, const mpz_class& lo, const mpz_class& hi);

/// f_0(x) = x, f_k(x) = max(1, floor(log2 f_{k-1}(x))). Requires x >= 1.
mpz_class f_iterate(const mpz_class& x, std::uint64_t k);

/// Product of f_k(x) over k >= 0; the product is cut once f_k(x) == 1 since
/// every further factor is 1.
mpz_class F_value(const mpz_class& x);

/// On-demand generator of the sequence in increasing order, starting at 1.
/// Uses a heap merge over exponent pairs; each element is produced once.
class SmoothSequence {
 public:
  explicit SmoothSequence(Params params);

  /// Element at 0-based index i, generating as needed.
  const SmoothElement& at(std::size_t i);

  std::size_t generated() const { return elems_.size(); }
  const Params& params() const { return params_; }

 private:
  struct Candidate {
    mpz_class value;
    std::uint32_t x;
    std::uint32_t y;
  };
  struct ValueGreater {
    bool operator()(const Candidate& a, const Candidate& b) const { return a.value > b.value; }
  };

  void grow();

  Params params_;
  std::vector<SmoothElement> elems_;
  std::priority_queue<Candidate, std::vector<Candidate>, ValueGreater> heap_;
};

}  // namespace smoothsum
