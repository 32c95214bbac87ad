#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skelrot/circlemap.hpp"
#include "skelrot/skeleton.hpp"

namespace skelrot {

// Arc-length distance on R/Z.
Rational circle_distance(const Rational& a, const Rational& b);

// Homeomorphisms f_n converging uniformly to a degree-one map f.
struct ApproxSequence {
  std::string name;
  PiecewiseCircleMap f;
  std::function<PiecewiseCircleMap(std::int64_t)> member;  // n >= 1
  std::function<Rational(std::int64_t)> distance;          // d(f_n, f), exact
  std::int64_t size = 0;
};

// f = p; f_n squeezes I affinely by 1/n instead of collapsing it, so
// d(f_n, f) = halfwidth/n and f_1 is the identity.
ApproxSequence build_collapse_family(const DenjoyModel& m, std::int64_t size = std::int64_t{1} << 40);

// f_n = f = rotation by t.
ApproxSequence rotation_family(const Rational& t, std::int64_t size);

// Re-indexed family g_j = f_{indices[j-1]}.
ApproxSequence subsequence(const ApproxSequence& seq, const std::vector<std::int64_t>& indices);

enum class ChainKind { forward, inverse };

// f_{1,n} (forward) or f_{n,1}^{-1} (inverse), built from scratch.
PiecewiseCircleMap compose_chain(const ApproxSequence& seq, ChainKind kind, std::int64_t n);

// Incrementally built chains f_{1,n}, f_{n,1}^{-1} and f^n.
class Chains {
 public:
  explicit Chains(const ApproxSequence& seq);

  const ApproxSequence& sequence() const { return seq_; }
  const PiecewiseCircleMap& forward(std::int64_t n);
  const PiecewiseCircleMap& inverse(std::int64_t n);
  const PiecewiseCircleMap& power(std::int64_t n);

  PiecewiseCircleMap fhat(std::int64_t n);   // f_{1,n+1} o f_{n,1}^{-1}
  PiecewiseCircleMap ghat(std::int64_t n);   // f_{1,n} o f_{n+1,1}^{-1}
  PiecewiseCircleMap h_stage(std::int64_t n);  // f^n o f_{n,1}^{-1}

 private:
  void check(std::int64_t n) const;
  ApproxSequence seq_;
  std::vector<PiecewiseCircleMap> forward_, inverse_, power_;
};

// Certified upper bound for sup{d(g(x), g(y)) : d(x,y) < delta} of a
// nondecreasing degree-one map.  The window g(x+delta) - g(x) is evaluated
// at the 2^-bits grid points next to each place where x or x+delta meets a
// breakpoint, plus the slack 2 * Lip(g) * 2^-bits.  Empty sup (delta = 0) is 0.
struct ModulusBound {
  Rational grid_max;
  Rational bound;
};
ModulusBound modulus(const PiecewiseCircleMap& g, const Rational& delta, int bits);

enum class Branch { chain, chain_after_f };  // f_{1,n-1} or f_{1,n-1} o f
const char* branch_name(Branch b);

struct ModulusEntry {
  long n = 0;
  std::int64_t index = 0;  // index in the original family
  Rational alpha, beta, gamma, epsilon, prefix_sum;
  Branch alpha_branch = Branch::chain;
  Branch beta_branch = Branch::chain;
};

// Moduli of stage n (needs members n and n+1).
ModulusEntry moduli(Chains& chains, long n, int bits);
std::vector<ModulusEntry> build_ledger(Chains& chains, long stages, int bits,
                                       const std::vector<std::int64_t>& original_indices = {});

struct ThinResult {
  std::vector<std::int64_t> indices;  // stages + 1 increasing family indices
  std::vector<ModulusEntry> ledger;   // one entry per stage, on the re-indexed family
};

// Greedy choice of the smallest next index whose moduli keep
// epsilon_k <= target(k); half of each target is kept free for beta_k, which
// depends on the following pick.  Throws ValidationError naming the stage at
// which the family runs out.
ThinResult thin_subsequence(const ApproxSequence& seq, const std::function<Rational(long)>& target, long stages,
                            int bits);

struct ChainCheck {
  std::string chain;  // fhat, ghat, h
  Rational max_ratio;  // max d / epsilon over all checked points
  long violations = 0;
  long first_violation_stage = 0;
  Rational first_violation_x;
};

struct CauchyReport {
  long stages = 0;
  long grid_points = 0;
  Rational corruption{1};
  std::vector<ChainCheck> chains;
  bool ok() const;
};

// Checks d(X_n, X_{n-1}) <= corruption * epsilon_n at every grid point for
// X in {fhat, ghat, h} and every stage of the ledger.
CauchyReport cauchy_verify(Chains& chains, const std::vector<ModulusEntry>& ledger, int grid_bits,
                           const Rational& corruption = Rational(1));

struct IdentityReport {
  long stages = 0;
  long grid_points = 0;
  long fhat_ghat_failures = 0;
  long ghat_fhat_failures = 0;
  long conjugacy_failures = 0;
  bool ok() const { return fhat_ghat_failures == 0 && ghat_fhat_failures == 0 && conjugacy_failures == 0; }
};

// fhat_n o ghat_n = ghat_n o fhat_n = id and h_{n+1} o fhat_n = f o h_n,
// exactly, at every grid point for n = 1..stages.
IdentityReport verify_identities(Chains& chains, long stages, int grid_bits);

std::string ledger_to_csv(const std::vector<ModulusEntry>& ledger);

enum class Transport { identity, semiconjugacy };

struct Fact1Report {
  long orbits = 0;
  long horizon = 0;
  Rational bound;           // 2 B_r / horizon
  Rational max_difference;  // Euclidean, over all orbits
  long violations = 0;
  long periodic_checked = 0;
  long periodic_mismatches = 0;
  bool ok() const { return violations == 0 && periodic_mismatches == 0; }
};

// Raw rotation averages versus averages after transport by r, on double
// orbits from `starts`; with the semiconjugacy, also the exact transported
// average over one period of each Markov periodic orbit with m,n <= markov_limit.
Fact1Report fact1_rotation_check(const DenjoyModel& m, Transport r, const std::vector<SkeletonPoint>& starts,
                                 long horizon, long markov_limit = 0);

}  // namespace skelrot
