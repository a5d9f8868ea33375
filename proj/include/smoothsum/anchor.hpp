#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "smoothsum/params.hpp"

namespace smoothsum {

/// Finite multiset S of sequence elements (each >= 2) whose sub-multiset sums
/// cover the |S|+1 consecutive integers [M0, M0+|S|]. One canonical
/// representation is recorded per target.
struct AnchorSet {
  std::vector<mpz_class> elements;  // ascending multiset
  mpz_class m0;
  std::vector<std::vector<mpz_class>> coverage;  // coverage[t - m0], ascending multisets

  std::size_t size() const { return elements.size(); }
  const mpz_class& max_element() const { return elements.back(); }

  /// Recorded representation of target, for m0 <= target <= m0 + |S|.
  const std::vector<mpz_class>& representation(const mpz_class& target) const;
};

/// Canonical sub-multiset of `elements` summing to `target`, or nullopt.
/// Deterministic: first solution of a largest-element-first backtracking
/// search (duplicate values collapse to one branch). Ascending on return.
std::optional<std::vector<mpz_class>> subset_sum_rep(std::vector<mpz_class> elements,
                                                     const mpz_class& target);

/// True iff every integer in [m0, m0 + |elements|] is a sub-multiset sum.
/// "Distinct" honors multiplicity: a duplicated element may be used twice.
bool verify_coverage(const std::vector<mpz_class>& elements, const mpz_class& m0);

/// Validates the anchor requirements (elements >= 2 and in the sequence, at
/// least one odd element, 1 <= M0 <= p, full coverage) and builds the
/// coverage table. Throws std::invalid_argument on violation.
AnchorSet make_anchor(std::vector<mpz_class> elements, mpz_class m0, const Params& params);

/// S = {p} u {2, 4, ..., 2^ceil(log2 p)} with M0 = p. Even targets are covered
/// by plain binary expansion, odd targets as p plus the expansion of t - p.
AnchorSet default_anchor(const Params& params);

/// {2, p-1, p} with M0 = p-1 when p-1 is a power of two (a true multiset for
/// p = 3), else {2, p, p+1} with M0 = p when p+1 is a power of two, else
/// nullopt. The p-1 form is preferred: it yields 2p instead of 2(p+1).
std::optional<AnchorSet> special_anchor(const Params& params);

/// Interval ladder derived from an anchor: M_1 = M0+|S|, M_2 = |S|,
/// M_k = floor(log2 M_{k-1}) while M_{k-1} > 1; u_1 = 1, u_2 = max S,
/// u_k = 2^{M_k}; P_k = u_1...u_k; C_p = P_K.
struct AnchorChain {
  AnchorSet anchor;
  std::vector<mpz_class> m;     // M_1..M_K
  std::vector<mpz_class> u;     // u_1..u_K
  std::vector<mpz_class> prod;  // P_1..P_K
  mpz_class c_p;                // == prod.back()
  // Rewrite multiset {2, 4, ..., 2^{M_{k+1}}} for interval k, k = 2..K-1.
  std::vector<std::vector<mpz_class>> even_sets;

  std::size_t depth() const { return m.size(); }  // K
};

AnchorChain derive_chain(const AnchorSet& anchor, const Params& params);

/// Exact F(4p)/2, the generally admissible ratio constant.
mpz_class general_bound(const Params& params);

/// Generalized ladder of multisets S'_1..S'_T: S'_1 anchors the first
/// interval, S'_k (even powers of two, contained in S'_{k-1}) rewrites
/// interval k, and the last set is a singleton.
struct MultisetChain {
  std::vector<std::vector<mpz_class>> sets;  // each ascending
  mpz_class m0;
  mpz_class c;  // product of per-set maxima; filled once checked admissible
};

struct ChainCheck {
  bool admissible = false;
  std::string diagnostic;  // first violated condition when inadmissible
  mpz_class c;             // product of maxima when admissible
};

/// Checks every admissibility condition in a fixed order and reports the
/// first violation. On success fills c = product of the per-set maxima.
ChainCheck chain_admissible(const MultisetChain& chain, const Params& params);

/// The multiset chain equivalent to a derived anchor chain:
/// S'_1 = S, S'_k = {2, ..., 2^{M_{k+1}}} for 2 <= k <= K-1.
MultisetChain induced_chain(const AnchorChain& chain);

/// Budgeted heuristic search for an admissible chain with small C. Greedy
/// over duplicate patterns on the first set and covering multisets for the
/// later ones; deterministic for fixed (budget, seed); never returns a chain
/// worse than the one induced from the default (or special) anchor.
MultisetChain chain_search(const Params& params, std::uint64_t budget,
                           std::uint64_t seed = 0x736d6f6f7468ULL);

}  // namespace smoothsum
