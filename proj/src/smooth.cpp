#include "smoothsum/smooth.hpp"

#include <limits>
#include <stdexcept>

namespace smoothsum {

std::uint64_t floor_log2(const mpz_class& v) {
  if (v < 1) throw std::invalid_argument("floor_log2 requires v >= 1");
  return mpz_sizeinbase(v.get_mpz_t(), 2) - 1;
}

std::uint64_t ceil_log2(const mpz_class& v) {
  if (v < 1) throw std::invalid_argument("ceil_log2 requires v >= 1");
  if (v == 1) return 0;
  mpz_class w = v - 1;
  return mpz_sizeinbase(w.get_mpz_t(), 2);
}

mpz_class pow2(std::uint64_t k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(k));
  return r;
}

bool is_power_of_two(const mpz_class& v) {
  if (v < 1) return false;
  return mpz_popcount(v.get_mpz_t()) == 1;
}

std::vector<SmoothElement> smooth_upto(const Params& params, const mpz_class& bound) {
  if (bound < 1) throw std::invalid_argument("smooth_upto requires bound >= 1");
  std::vector<SmoothElement> out;
  SmoothSequence seq(params);
  for (std::size_t i = 0;; ++i) {
    const SmoothElement& el = seq.at(i);
    if (el.value > bound) break;
    out.push_back(el);
  }
  return out;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> membership(const mpz_class& n,
                                                                  const Params& params) {
  if (n < 1) throw std::invalid_argument("membership requires n >= 1");
  // Split off the 2-part, then the odd part must be a power of p.
  const auto twos = mpz_scan1(n.get_mpz_t(), 0);
  mpz_class odd = n >> twos;
  std::uint32_t y = 0;
  while (odd > 1) {
    if (!mpz_divisible_p(odd.get_mpz_t(), params.p.get_mpz_t())) return std::nullopt;
    mpz_divexact(odd.get_mpz_t(), odd.get_mpz_t(), params.p.get_mpz_t());
    ++y;
  }
  return std::make_pair(static_cast<std::uint32_t>(twos), y);
}

std::uint64_t count_upto(const Params& params, const mpz_class& bound) {
  if (bound < 1) return 0;
  std::uint64_t total = 0;
  mpz_class py = 1;
  while (py <= bound) {
    mpz_class q = bound / py;
    total += floor_log2(q) + 1;  // x ranges over 0..floor(log2(bound / p^y))
    py *= params.p;
  }
  return total;
}

std::uint64_t window_count(const Params& params, const mpz_class& lo, const mpz_class& hi) {
  if (lo < 1) throw std::invalid_argument("window_count requires lo >= 1");
  if (lo > hi) throw std::invalid_argument("window_count requires lo <= hi");
  return count_upto(params, hi - 1) - count_upto(params, lo - 1);
}

mpz_class f_iterate(const mpz_class& x, std::uint64_t k) {
  if (x < 1) throw std::invalid_argument("f_iterate requires x >= 1");
  mpz_class v = x;
  for (std::uint64_t i = 0; i < k; ++i) {
    std::uint64_t lg = floor_log2(v);
    v = lg < 1 ? 1 : mpz_class(static_cast<unsigned long>(lg));
  }
  return v;
}

mpz_class F_value(const mpz_class& x) {
  if (x < 1) throw std::invalid_argument("F_value requires x >= 1");
  mpz_class prod = x;
  mpz_class v = x;
  while (v > 1) {
    std::uint64_t lg = floor_log2(v);
    v = lg < 1 ? 1 : mpz_class(static_cast<unsigned long>(lg));
    prod *= v;
  }
  return prod;
}

SmoothSequence::SmoothSequence(Params params) : params_(std::move(params)) {
  heap_.push(Candidate{mpz_class(1), 0, 0});
}

void SmoothSequence::grow() {
  Candidate top = heap_.top();
  heap_.pop();
  // Each pair (x, y) enters the heap exactly once: via (x-1, y) when x > 0,
  // otherwise via (0, y-1).
  if (top.x == std::numeric_limits<std::uint32_t>::max() ||
      top.y == std::numeric_limits<std::uint32_t>::max())
    throw std::overflow_error("smooth exponent overflow");
  heap_.push(Candidate{top.value * 2, top.x + 1, top.y});
  if (top.x == 0) heap_.push(Candidate{top.value * params_.p, 0, top.y + 1});
  elems_.push_back(SmoothElement{std::move(top.value), top.x, top.y});
}

const SmoothElement& SmoothSequence::at(std::size_t i) {
  while (elems_.size() <= i) grow();
  return elems_[i];
}

}  // namespace smoothsum
