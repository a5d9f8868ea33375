#include "smoothsum/anchor.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "smoothsum/smooth.hpp"

namespace smoothsum {

namespace {

// Include-first DFS over elements sorted descending. `suffix[i]` is the sum of
// elements[i..]. Skipping an element also skips its remaining equal copies, so
// equal-value branches are explored once.
struct RepSearch {
  const std::vector<mpz_class>& elems;
  const std::vector<mpz_class>& suffix;
  std::vector<mpz_class> picked;

  bool run(std::size_t i, const mpz_class& remaining) {
    if (remaining == 0) return true;
    if (i == elems.size() || suffix[i] < remaining) return false;
    if (elems[i] <= remaining) {
      picked.push_back(elems[i]);
      if (run(i + 1, mpz_class(remaining - elems[i]))) return true;
      picked.pop_back();
    }
    std::size_t j = i + 1;
    while (j < elems.size() && elems[j] == elems[i]) ++j;
    return run(j, remaining);
  }
};

std::map<mpz_class, long> multiset_counts(const std::vector<mpz_class>& v) {
  std::map<mpz_class, long> counts;
  for (const auto& e : v) ++counts[e];
  return counts;
}

std::string multiset_to_string(const std::vector<mpz_class>& v) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << "}";
  return os.str();
}

}  // namespace

std::optional<std::vector<mpz_class>> subset_sum_rep(std::vector<mpz_class> elements,
                                                     const mpz_class& target) {
  if (target < 0) return std::nullopt;
  std::sort(elements.begin(), elements.end(), std::greater<mpz_class>());
  std::vector<mpz_class> suffix(elements.size() + 1, mpz_class(0));
  for (std::size_t i = elements.size(); i-- > 0;) suffix[i] = suffix[i + 1] + elements[i];
  RepSearch search{elements, suffix, {}};
  if (!search.run(0, target)) return std::nullopt;
  std::sort(search.picked.begin(), search.picked.end());
  return std::move(search.picked);
}

bool verify_coverage(const std::vector<mpz_class>& elements, const mpz_class& m0) {
  if (elements.empty() || m0 < 1) return false;
  for (const auto& e : elements)
    if (e < 2) return false;
  const mpz_class last = m0 + static_cast<unsigned long>(elements.size());
  for (mpz_class t = m0; t <= last; ++t)
    if (!subset_sum_rep(elements, t)) return false;
  return true;
}

const std::vector<mpz_class>& AnchorSet::representation(const mpz_class& target) const {
  mpz_class off = target - m0;
  if (off < 0 || off > static_cast<unsigned long>(elements.size()))
    throw std::out_of_range("anchor representation target outside [M0, M0+|S|]");
  return coverage[off.get_ui()];
}

AnchorSet make_anchor(std::vector<mpz_class> elements, mpz_class m0, const Params& params) {
  if (elements.empty()) throw std::invalid_argument("anchor set must be nonempty");
  std::sort(elements.begin(), elements.end());
  bool has_odd = false;
  for (const auto& e : elements) {
    if (e < 2) throw std::invalid_argument("anchor elements must be >= 2");
    if (!membership(e, params))
      throw std::invalid_argument("anchor element " + e.get_str() + " is not of the form 2^x*p^y");
    if (mpz_odd_p(e.get_mpz_t())) has_odd = true;
  }
  if (!has_odd) throw std::invalid_argument("anchor set needs at least one odd element");
  if (m0 < 1) throw std::invalid_argument("M0 must be positive");
  if (m0 > params.p) throw std::invalid_argument("M0 must not exceed p");
  if (m0 > elements.back()) throw std::invalid_argument("M0 must not exceed max S");
  // All even powers of two <= |S| must be present; the interval-2 coefficient
  // bound of the derived chain leans on this.
  const auto counts = multiset_counts(elements);
  for (mpz_class q = 2; q <= static_cast<unsigned long>(elements.size()); q *= 2)
    if (!counts.count(q))
      throw std::invalid_argument("anchor set is missing the even power of two " + q.get_str());

  AnchorSet anchor{std::move(elements), std::move(m0), {}};
  const mpz_class last = anchor.m0 + static_cast<unsigned long>(anchor.elements.size());
  for (mpz_class t = anchor.m0; t <= last; ++t) {
    auto rep = subset_sum_rep(anchor.elements, t);
    if (!rep)
      throw std::invalid_argument("anchor does not cover target " + t.get_str());
    anchor.coverage.push_back(std::move(*rep));
  }
  return anchor;
}

AnchorSet default_anchor(const Params& params) {
  std::vector<mpz_class> elements{params.p};
  const std::uint64_t c = ceil_log2(params.p);
  for (std::uint64_t j = 1; j <= c; ++j) elements.push_back(pow2(j));
  return make_anchor(std::move(elements), params.p, params);
}

std::optional<AnchorSet> special_anchor(const Params& params) {
  if (is_power_of_two(params.p - 1))
    return make_anchor({mpz_class(2), params.p - 1, params.p}, params.p - 1, params);
  if (is_power_of_two(params.p + 1))
    return make_anchor({mpz_class(2), params.p, params.p + 1}, params.p, params);
  return std::nullopt;
}

AnchorChain derive_chain(const AnchorSet& anchor, const Params& params) {
  if (anchor.coverage.size() != anchor.size() + 1)
    throw std::invalid_argument("anchor has no coverage table; build it with make_anchor");

  AnchorChain chain;
  chain.anchor = anchor;
  chain.m.push_back(anchor.m0 + static_cast<unsigned long>(anchor.size()));
  chain.m.push_back(mpz_class(static_cast<unsigned long>(anchor.size())));
  while (chain.m.back() > 1)
    chain.m.push_back(mpz_class(static_cast<unsigned long>(floor_log2(chain.m.back()))));

  chain.u.push_back(mpz_class(1));
  chain.u.push_back(anchor.max_element());
  for (std::size_t k = 2; k < chain.m.size(); ++k)
    chain.u.push_back(pow2(chain.m[k].get_ui()));

  mpz_class running = 1;
  for (const auto& uk : chain.u) {
    running *= uk;
    chain.prod.push_back(running);
    if (!membership(running, params)) throw internal_error("P_k fell outside the sequence");
  }
  chain.c_p = chain.prod.back();

  // Interval k (2 <= k <= K-1) rewrites its even coefficient part with the
  // powers {2, ..., 2^{M_{k+1}}}.
  for (std::size_t k = 1; k + 1 < chain.m.size(); ++k) {
    std::vector<mpz_class> powers;
    for (std::uint64_t j = 1; j <= chain.m[k + 1].get_ui(); ++j) powers.push_back(pow2(j));
    chain.even_sets.push_back(std::move(powers));
  }
  return chain;
}

mpz_class general_bound(const Params& params) {
  mpz_class f = F_value(4 * params.p);
  if (!mpz_even_p(f.get_mpz_t())) throw internal_error("F(4p) must be even");
  return f / 2;
}

ChainCheck chain_admissible(const MultisetChain& chain, const Params& params) {
  ChainCheck result;
  auto fail = [&result](std::string why) {
    result.diagnostic = std::move(why);
    return result;
  };

  if (chain.sets.empty()) return fail("chain has no sets");
  const auto& first = chain.sets.front();
  if (first.empty()) return fail("first set is empty");
  bool has_odd = false;
  for (const auto& e : first) {
    if (e < 2) return fail("first set contains " + e.get_str() + " which is below 2");
    if (!membership(e, params))
      return fail("first set element " + e.get_str() + " is not of the form 2^x*p^y");
    if (mpz_odd_p(e.get_mpz_t())) has_odd = true;
  }
  if (!has_odd) return fail("first set has no odd element");
  if (chain.m0 < 1) return fail("M0 must be positive");
  if (chain.m0 > params.p) return fail("M0 exceeds p");
  const mpz_class first_max = *std::max_element(first.begin(), first.end());
  if (chain.m0 > first_max) return fail("M0 exceeds max of the first set");
  const mpz_class cover_last = chain.m0 + static_cast<unsigned long>(first.size());
  for (mpz_class t = chain.m0; t <= cover_last; ++t)
    if (!subset_sum_rep(first, t))
      return fail("first set does not cover target " + t.get_str());

  for (std::size_t k = 1; k < chain.sets.size(); ++k) {
    const auto& cur = chain.sets[k];
    const auto& prev = chain.sets[k - 1];
    const std::string label = "set " + std::to_string(k + 1);
    if (cur.empty()) return fail(label + " is empty");
    for (const auto& e : cur)
      if (e < 2 || !is_power_of_two(e))
        return fail(label + " element " + e.get_str() + " is not an even power of two");
    auto prev_counts = multiset_counts(prev);
    for (const auto& [value, count] : multiset_counts(cur)) {
      auto it = prev_counts.find(value);
      if (it == prev_counts.end() || it->second < count)
        return fail(label + " is not a sub-multiset of set " + std::to_string(k));
    }
    for (unsigned long e = 2; e <= prev.size(); e += 2)
      if (!subset_sum_rep(cur, mpz_class(e)))
        return fail(label + " does not cover the even value " + std::to_string(e) +
                    " (required up to |set " + std::to_string(k) + "| = " +
                    std::to_string(prev.size()) + ")");
  }

  if (chain.sets.back().size() != 1) return fail("last set is not a singleton");

  result.admissible = true;
  result.c = 1;
  for (const auto& s : chain.sets) result.c *= *std::max_element(s.begin(), s.end());
  return result;
}

MultisetChain induced_chain(const AnchorChain& chain) {
  MultisetChain out;
  out.sets.push_back(chain.anchor.elements);
  for (const auto& s : chain.even_sets) out.sets.push_back(s);
  out.m0 = chain.anchor.m0;
  out.c = chain.c_p;
  return out;
}

namespace {

// Candidate continuation sets for one level of the tail search: multisets of
// even powers taken from `avail` that cover every even value up to `need`.
// Two fill orders per admissible maximum power: extra copies smallest-first
// (small later maxima) and largest-first (small cardinality).
std::vector<std::vector<mpz_class>> tail_candidates(const std::map<mpz_class, long>& avail,
                                                    unsigned long need) {
  std::vector<std::vector<mpz_class>> out;
  const unsigned long need_even = need - (need % 2);
  if (need_even < 2) return out;

  std::vector<mpz_class> powers;
  for (const auto& [value, count] : avail)
    if (is_power_of_two(value) && value >= 2) powers.push_back(value);

  for (const auto& top : powers) {
    for (int order = 0; order < 2; ++order) {
      // Base: one copy of each power up to `top`; consecutive powers keep the
      // reach condition (next element <= sum so far + 2) automatically.
      std::vector<mpz_class> cand;
      mpz_class sum = 0;
      bool reachable = true;
      for (const auto& q : powers) {
        if (q > top) break;
        if (q > sum + 2) {
          reachable = false;
          break;
        }
        cand.push_back(q);
        sum += q;
      }
      if (!reachable || cand.empty() || cand.back() != top) continue;
      if (sum < need_even) {
        // Add available duplicates until the target reach is met.
        std::vector<mpz_class> extras;
        for (const auto& q : powers) {
          if (q > top) break;
          long used = static_cast<long>(std::count(cand.begin(), cand.end(), q));
          for (long i = used; i < avail.at(q); ++i) extras.push_back(q);
        }
        if (order == 1) std::reverse(extras.begin(), extras.end());
        for (const auto& q : extras) {
          if (sum >= need_even) break;
          cand.push_back(q);
          sum += q;
        }
        if (sum < need_even) continue;
        std::sort(cand.begin(), cand.end());
      }
      if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
    }
  }
  return out;
}

struct TailResult {
  mpz_class product;  // product of maxima over the chosen continuation sets
  std::vector<std::vector<mpz_class>> sets;
};

// Minimal product of maxima for the sets after `prev`, or nullopt if no
// admissible continuation was found within budget.
std::optional<TailResult> best_tail(const std::vector<mpz_class>& prev, std::uint64_t& budget) {
  if (prev.size() == 1) return TailResult{mpz_class(1), {}};
  if (budget == 0) return std::nullopt;
  --budget;

  auto avail = multiset_counts(prev);
  std::optional<TailResult> best;
  for (auto& cand : tail_candidates(avail, static_cast<unsigned long>(prev.size()))) {
    auto rest = best_tail(cand, budget);
    if (!rest) continue;
    TailResult full{cand.back() * rest->product, {}};
    full.sets.push_back(std::move(cand));
    for (auto& s : rest->sets) full.sets.push_back(std::move(s));
    if (!best || full.product < best->product) best = std::move(full);
  }
  return best;
}

// First-interval candidate: {p} plus powers 2..2^h with selected duplicates.
std::optional<MultisetChain> assemble_chain(const Params& params, std::vector<mpz_class> first,
                                            const mpz_class& m0, std::uint64_t& budget) {
  std::sort(first.begin(), first.end());
  MultisetChain chain;
  chain.m0 = m0;
  chain.sets.push_back(std::move(first));
  auto tail = best_tail(chain.sets.front(), budget);
  if (!tail) return std::nullopt;
  for (auto& s : tail->sets) chain.sets.push_back(std::move(s));
  auto check = chain_admissible(chain, params);
  if (!check.admissible) return std::nullopt;
  chain.c = check.c;
  return chain;
}

bool chain_less(const MultisetChain& a, const MultisetChain& b) {
  if (a.c != b.c) return a.c < b.c;
  std::ostringstream sa, sb;
  for (const auto& s : a.sets) sa << multiset_to_string(s) << ";";
  for (const auto& s : b.sets) sb << multiset_to_string(s) << ";";
  return sa.str() < sb.str();
}

}  // namespace

MultisetChain chain_search(const Params& params, std::uint64_t budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("chain_search requires budget >= 1");

  // Fallback: the chain induced from the anchor decompose() would pick.
  auto special = special_anchor(params);
  MultisetChain best =
      induced_chain(derive_chain(special ? *special : default_anchor(params), params));
  if (special) {
    MultisetChain alt = induced_chain(derive_chain(default_anchor(params), params));
    if (chain_less(alt, best)) best = alt;
  }

  const std::uint64_t c = ceil_log2(params.p);
  auto consider = [&](std::vector<mpz_class> first, const mpz_class& m0) {
    if (budget == 0) return;
    --budget;
    auto cand = assemble_chain(params, std::move(first), m0, budget);
    if (cand && chain_less(*cand, best)) best = std::move(*cand);
  };

  // Fixed duplicate patterns over {p} + powers 2..2^h. Doubling small powers
  // and the top power widens the set, letting later sets shrink.
  const std::vector<std::vector<std::uint64_t>> patterns = {
      {}, {1}, {1, 3}, {1, 3, 0}, {1, 2}, {1, 2, 0}, {0}, {1, 0}, {1, 1}, {1, 3, 3}};
  for (std::uint64_t h : {c, c > 1 ? c - 1 : c}) {
    if (h < 1) continue;
    std::vector<mpz_class> base{params.p};
    for (std::uint64_t j = 1; j <= h; ++j) base.push_back(pow2(j));
    for (const auto& pattern : patterns) {
      std::vector<mpz_class> first = base;
      for (std::uint64_t j : pattern) first.push_back(pow2(j == 0 ? h : j));
      consider(std::move(first), params.p);
    }
  }

  // Seeded random duplicate patterns round out the fixed family.
  std::mt19937_64 rng(seed);
  std::uint64_t samples = std::min<std::uint64_t>(budget, 64);
  for (std::uint64_t s = 0; s < samples && budget > 0; ++s) {
    std::uint64_t h = (rng() % 2 == 0 || c <= 1) ? c : c - 1;
    std::vector<mpz_class> first{params.p};
    for (std::uint64_t j = 1; j <= h; ++j) {
      first.push_back(pow2(j));
      if (rng() % 3 == 0) first.push_back(pow2(j));
    }
    consider(std::move(first), params.p);
  }

  return best;
}

}  // namespace smoothsum
