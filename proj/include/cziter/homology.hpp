#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iteration.hpp"

namespace cziter {

// rational Betti numbers of the filling pair, degrees 0..2n
struct BettiTable {
  int pair_dim = 0;  // 2n
  std::map<int, Int> values;

  BettiTable(int dim, std::map<int, Int> vals)
      : pair_dim(dim), values(std::move(vals)) {
    if (pair_dim < 2 || pair_dim % 2 != 0)
      throw input_error("Betti table needs even dimension >= 2");
    for (const auto& [deg, b] : values) {
      if (deg < 0 || deg > pair_dim)
        throw input_error("Betti degree outside [0, 2n]");
      if (b < 0) throw input_error("Betti numbers are nonnegative");
    }
  }

  Int at(int i) const {
    auto it = values.find(i);
    return it == values.end() ? Int(0) : it->second;
  }
  int n() const { return pair_dim / 2; }
};

// graded rank function with finitely many exceptional degrees and an
// eventually periodic tail; direction -1 points the tail at -infinity
class RankFunction {
 public:
  RankFunction() : tail_start_(0), period_(2), tail_{Int(0), Int(0)} {}

  RankFunction(std::map<Int, Int> exceptional, Int tail_start,
               std::vector<Int> tail, int direction = 1)
      : exceptional_(std::move(exceptional)),
        tail_start_(std::move(tail_start)),
        period_(static_cast<int>(tail.size())),
        tail_(std::move(tail)),
        direction_(direction) {
    if (period_ < 1) throw input_error("rank tail needs at least one entry");
    if (direction_ != 1 && direction_ != -1)
      throw input_error("rank tail direction must be +1 or -1");
    for (const Int& r : tail_)
      if (r < 0) throw input_error("ranks are nonnegative");
    for (const auto& [deg, r] : exceptional_) {
      if (r < 0) throw input_error("ranks are nonnegative");
      bool inside_tail =
          direction_ == 1 ? deg >= tail_start_ : deg <= tail_start_;
      if (inside_tail)
        throw invariant_error("exceptional degrees must precede the tail");
    }
  }

  Int rank(const Int& degree) const {
    bool in_tail =
        direction_ == 1 ? degree >= tail_start_ : degree <= tail_start_;
    if (in_tail) {
      Int off = direction_ == 1 ? degree - tail_start_ : tail_start_ - degree;
      return tail_[static_cast<size_t>(off % period_)];
    }
    auto it = exceptional_.find(degree);
    return it == exceptional_.end() ? Int(0) : it->second;
  }

  const std::map<Int, Int>& exceptional() const { return exceptional_; }
  const Int& tail_start() const { return tail_start_; }
  int period() const { return period_; }
  const std::vector<Int>& tail() const { return tail_; }
  int direction() const { return direction_; }

  bool is_zero() const {
    for (const auto& [d, r] : exceptional_)
      if (r != 0) return false;
    for (const Int& r : tail_)
      if (r != 0) return false;
    return true;
  }

 private:
  std::map<Int, Int> exceptional_;
  Int tail_start_;
  int period_;
  std::vector<Int> tail_;
  int direction_ = 1;
};

struct BettiValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// consequences of displaceability: H1(W0, Sigma) = 0 and the splitting
// bound b_{*+1}(W0, Sigma) <= b_*(Sigma)
inline BettiValidationReport validate_displaceable_betti(
    const BettiTable& betti, const std::map<int, Int>& sigma_betti) {
  BettiValidationReport rep;
  if (betti.at(1) != 0)
    rep.violations.push_back("b_1(W0, Sigma) must vanish");
  auto sigma_at = [&](int i) {
    auto it = sigma_betti.find(i);
    return it == sigma_betti.end() ? Int(0) : it->second;
  };
  for (int i = 0; i <= betti.pair_dim; ++i) {
    if (betti.at(i + 1) > sigma_at(i))
      rep.violations.push_back("b_" + std::to_string(i + 1) +
                               "(W0, Sigma) exceeds b_" + std::to_string(i) +
                               "(Sigma)");
  }
  return rep;
}

// rank(*) = sum_{m >= 0} b_{* + n - 1 - 2m}: finitely many low degrees,
// then a 2-periodic tail made of the even/odd Betti sums
inline RankFunction sh_ranks_displaceable(const BettiTable& betti, int n) {
  if (betti.pair_dim != 2 * n)
    throw dimension_error("Betti table dimension must equal 2n");
  std::map<Int, Int> exceptional;
  for (int d = 1 - n; d <= n; ++d) {
    Int r = 0;
    for (int i = d + n - 1; i >= 0; i -= 2) r += betti.at(i);
    if (r != 0) exceptional[d] = r;
  }
  Int even_sum = 0, odd_sum = 0;
  for (const auto& [i, b] : betti.values) (i % 2 == 0 ? even_sum : odd_sum) += b;
  // tail starts at n+1; degree n+1 picks indices congruent to 2n (mod 2)
  std::vector<Int> tail{even_sum, odd_sum};
  return RankFunction(std::move(exceptional), Int(n + 1), std::move(tail));
}

// rank(*) = sum_{N >= 1} b_{* - (2Nc - n + 1)}(Q): one band per cover,
// repeating with period |2c|
inline RankFunction sh_ranks_prequantization(const std::map<int, Int>& betti_q,
                                             int c, int n) {
  if (n < 2) throw input_error("prequantization setting needs n >= 2");
  if ((c < 0 ? -c : c) <= n - 1)
    throw input_error("prequantization formula needs |c| > n - 1");
  auto bq = [&](int i) {
    auto it = betti_q.find(i);
    return it == betti_q.end() ? Int(0) : it->second;
  };
  for (const auto& [deg, b] : betti_q) {
    if (deg < 0 || deg > 2 * n - 2)
      throw input_error("base Betti support must lie in [0, 2n-2]");
    if (b < 0) throw input_error("Betti numbers are nonnegative");
  }
  if (bq(0) != 1 || bq(2 * n - 2) != 1)
    throw input_error("closed base needs b_0 = b_{2n-2} = 1");

  const int period = 2 * (c > 0 ? c : -c);
  std::vector<Int> tail(static_cast<size_t>(period), Int(0));
  if (c > 0) {
    // tail[l] covers degree (2c - n + 1) + l
    for (int l = 0; l < period; ++l) tail[l] = bq(l);
    return RankFunction({}, Int(2 * c - n + 1), std::move(tail), 1);
  }
  // c < 0: highest supported degree is 2c + n - 1, bands descend
  for (int l = 0; l < period; ++l) tail[l] = bq(2 * n - 2 - l);
  return RankFunction({}, Int(2 * c + n - 1), std::move(tail), -1);
}

// degree carrying rank 2 for the N-th eligible cover
inline Int brieskorn_f(const Int& N, const Int& a0, int n) {
  return 2 * floor_div(2 * N, a0) + 2 * N * (n - 2) + n + 1;
}

// N-th positive integer m with 2m + 1 not divisible by a0: one value per
// block of a0 consecutive integers is skipped, namely m = (a0-1)/2 mod a0
inline Int brieskorn_g(const Int& N, const Int& a0) {
  if (N < 1) throw input_error("brieskorn_g needs N >= 1");
  Int per_block = a0 - 1;
  Int block = (N - 1) / per_block;
  Int offset = (N - 1) % per_block;  // 0-based within the block
  Int skip_pos = (a0 - 1) / 2;       // position 1..a0 inside the block
  Int t = offset + 1 < skip_pos ? offset + 1 : offset + 2;
  return block * a0 + t;
}

inline Int brieskorn_h(const Int& N, const Int& a0, int n) {
  return (brieskorn_f(brieskorn_g(N, a0), a0, n) - (n - 1)) / 2 + N;
}

inline Int brieskorn_beta(const Int& a0, int n) {
  return a0 * a0 * n - a0 * a0 + a0 * n + 2;
}

inline RankFunction sh_ranks_brieskorn(const Int& a0, int n,
                                       bool override_checks = false) {
  if (n < 2) throw input_error("Brieskorn setting needs n >= 2");
  if (a0 < 1 || a0 % 2 == 0)
    throw input_error("Brieskorn parameter a0 must be a positive odd integer");
  // a0 = 1 is the standard sphere in every dimension; the homotopy-sphere
  // conditions only constrain the genuinely twisted links
  if (!override_checks && a0 != 1) {
    Int m8 = a0 % 8;
    if (m8 != 1 && m8 != 7)
      throw input_error("Brieskorn sphere needs a0 = +-1 mod 8");
    if (n % 2 == 0)
      throw input_error("Brieskorn sphere setting needs odd n");
  }
  if (a0 == 1) {
    // ball: rank 1 at n - 1 + 2k for k >= 1
    std::vector<Int> tail{Int(1), Int(0)};
    return RankFunction({}, Int(n + 1), std::move(tail));
  }

  // rank 2 exactly at f(N) for eligible N; pattern is periodic with
  // period 2 a0 (n-2) + 4 starting at f(1) = 3(n-1)
  const Int period_i = 2 * a0 * (n - 2) + 4;
  const int period = period_i.convert_to<int>();
  const Int tail_start = 3 * (n - 1);

  std::map<Int, Int> exceptional;
  for (Int d = n - 1; d < tail_start; d += 2) exceptional[d] = 1;

  std::vector<Int> tail(static_cast<size_t>(period), Int(0));
  for (int l = 0; l < period; ++l)
    if ((tail_start + l) % 2 == 0) tail[l] = 1;
  for (Int m = 1; m <= a0; ++m) {
    if ((2 * m + 1) % a0 == 0) continue;
    Int d = brieskorn_f(m, a0, n);
    Int off = d - tail_start;
    if (off >= 0 && off < period) tail[off.convert_to<size_t>()] = 2;
  }
  return RankFunction(std::move(exceptional), tail_start, std::move(tail));
}

// E1 page of the equivariant spectral sequence: good orbits only, row 0
struct E1Page {
  std::map<Int, Int> column_ranks;

  Int rank(const Int& i, int j) const {
    if (j != 0) return 0;
    auto it = column_ranks.find(i);
    return it == column_ranks.end() ? Int(0) : it->second;
  }
};

inline E1Page e1_page(const std::vector<std::pair<Int, bool>>& orbits) {
  E1Page page;
  for (const auto& [mu, good] : orbits)
    if (good) page.column_ranks[mu] += 1;
  return page;
}

// mean Euler characteristic of a rank function: the exceptional part is
// finite and drops out of the Cesaro limit
inline Rat chi_m_from_ranks(const RankFunction& rf) {
  if (rf.period() % 2 != 0)
    throw computation_error(
        "mean Euler characteristic undefined for odd-period tails");
  Rat acc = 0;
  for (int l = 0; l < rf.period(); ++l) {
    Int degree = rf.tail_start() + Int(rf.direction()) * l;
    Rat term(rf.tail()[static_cast<size_t>(l)]);
    acc += degree % 2 == 0 ? term : -term;
  }
  return acc / rf.period();
}

inline Rat chi_m_displaceable(const BettiTable& betti, int n) {
  Rat acc = 0;
  for (int i = 1; i <= betti.pair_dim; ++i) {
    Rat term(betti.at(i));
    acc += (i + n - 1) % 2 == 0 ? term : -term;
  }
  return acc / 2;
}

struct Orbit {
  std::string label;
  IterationProfile profile;

  // covers of even order are bad exactly when r is odd
  bool bad_even_covers() const { return profile.r() % 2 != 0; }
};

struct OrbitSystem {
  std::vector<Orbit> orbits;
  int ambient_n = 2;

  OrbitSystem(std::vector<Orbit> orbs, int n)
      : orbits(std::move(orbs)), ambient_n(n) {
    for (const Orbit& o : orbits)
      if (o.profile.ambient_n() != ambient_n)
        throw invariant_error("all orbit profiles must share ambient_n");
  }
};

// resonance sum: good simple orbits weigh 1/Delta, orbits with bad even
// covers weigh 1/(2 Delta), each signed by the parity of the base index
inline SurdSum chi_m_orbits(const OrbitSystem& system) {
  SurdSum acc{Rat(0)};
  for (const Orbit& o : system.orbits) {
    SurdSum delta = mean_index_exact(o.profile);
    if (delta.sign() <= 0)
      throw input_error("resonance identity needs positive mean indices");
    SurdSum weight = delta.inverse();
    if (o.bad_even_covers()) weight = weight * SurdSum(Rat(1, 2));
    bool odd_mu = o.profile.base_index() % 2 != 0;
    acc = odd_mu ? acc - weight : acc + weight;
  }
  return acc;
}

struct ResonanceReport {
  double orbit_side = 0;
  double rank_side = 0;      // exact tail average
  double windowed = 0;       // finite-window enumeration at N_window
  double abs_diff = 0;       // |orbit_side - windowed|, exact comparison
  double tolerance = 0;      // C / N_window
  bool pass = false;
};

inline ResonanceReport resonance_check(const OrbitSystem& system,
                                       const RankFunction& rf, int n_window) {
  if (n_window < 1) throw input_error("resonance window must be positive");
  SurdSum lhs = chi_m_orbits(system);

  Rat windowed = 0;
  for (Int l = -n_window; l <= n_window; ++l) {
    Rat term(rf.rank(l));
    windowed += l % 2 == 0 ? term : -term;
  }
  windowed /= n_window;

  // conservative window-boundary constant: 2n per orbit over its Delta
  SurdSum c_const{Rat(0)};
  for (const Orbit& o : system.orbits) {
    SurdSum delta = mean_index_exact(o.profile);
    c_const = c_const + SurdSum(Rat(2 * system.ambient_n)) * delta.inverse();
  }
  SurdSum diff = lhs - SurdSum(windowed);
  SurdSum abs_diff = diff.sign() >= 0 ? diff : SurdSum(Rat(0)) - diff;
  SurdSum tol = c_const * SurdSum(Rat(1, n_window));

  ResonanceReport rep;
  rep.orbit_side = static_cast<double>(lhs.to_real<Real256>());
  rep.rank_side = static_cast<double>(to_real<Real256>(chi_m_from_ranks(rf)));
  rep.windowed = static_cast<double>(to_real<Real256>(windowed));
  rep.abs_diff = static_cast<double>(abs_diff.to_real<Real256>());
  rep.tolerance = static_cast<double>(tol.to_real<Real256>());
  rep.pass = (abs_diff - tol).sign() <= 0;
  return rep;
}

}  // namespace cziter
