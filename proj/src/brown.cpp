#include "skelrot/brown.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <tuple>

#include "skelrot/errors.hpp"

namespace skelrot {

namespace {

Rational frac(const Rational& x) { return x - floor_z(x); }

Rational ratio(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational dyadic(int bits) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  return ratio(Integer(1), den);
}

Rational euclid_norm_bound_sq(const Rational& dx, const Rational& dy) { return dx * dx + dy * dy; }

}  // namespace

Rational circle_distance(const Rational& a, const Rational& b) {
  Rational d = frac(a - b);
  Rational e = 1 - d;
  return std::min(d, e);
}

ApproxSequence build_collapse_family(const DenjoyModel& m, std::int64_t size) {
  if (size < 2) throw ValidationError("collapse family needs at least two members");
  ApproxSequence s;
  s.name = "collapse";
  s.f = m.p;
  s.size = size;
  Rational w = m.halfwidth;
  Rational span = 1 - 2 * w;
  s.member = [w, span, size](std::int64_t n) -> PiecewiseCircleMap {
    if (n < 1 || n > size) throw ValidationError("family index " + std::to_string(n) + " out of range");
    if (n == 1) return PiecewiseCircleMap::identity();
    Rational inv = ratio(Integer(1), Integer(std::to_string(n)));
    Rational slope = (1 - 2 * w * inv) / span;
    return PiecewiseCircleMap({Rational(0), w, 1 - w},
                              {Piece{0, inv, 0}, Piece{0, slope, w * inv - w * slope}, Piece{0, inv, 1 - inv}});
  };
  s.distance = [w](std::int64_t n) -> Rational { return w / Rational(Integer(std::to_string(n))); };
  return s;
}

ApproxSequence rotation_family(const Rational& t, std::int64_t size) {
  if (size < 2) throw ValidationError("rotation family needs at least two members");
  ApproxSequence s;
  s.name = "rotation";
  s.f = PiecewiseCircleMap::rotation(t);
  s.size = size;
  PiecewiseCircleMap r = s.f;
  s.member = [r](std::int64_t) { return r; };
  s.distance = [](std::int64_t) { return Rational(0); };
  return s;
}

ApproxSequence subsequence(const ApproxSequence& seq, const std::vector<std::int64_t>& indices) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1 || indices[i] > seq.size || (i > 0 && indices[i] <= indices[i - 1])) {
      throw ValidationError("subsequence indices must increase within 1.." + std::to_string(seq.size));
    }
  }
  ApproxSequence s;
  s.name = seq.name + "/thinned";
  s.f = seq.f;
  s.size = static_cast<std::int64_t>(indices.size());
  auto member = seq.member;
  auto distance = seq.distance;
  s.member = [member, indices](std::int64_t j) { return member(indices.at(static_cast<std::size_t>(j - 1))); };
  s.distance = [distance, indices](std::int64_t j) { return distance(indices.at(static_cast<std::size_t>(j - 1))); };
  return s;
}

PiecewiseCircleMap compose_chain(const ApproxSequence& seq, ChainKind kind, std::int64_t n) {
  PiecewiseCircleMap out = PiecewiseCircleMap::identity();
  for (std::int64_t k = 1; k <= n; ++k) {
    PiecewiseCircleMap fk = seq.member(k);
    if (kind == ChainKind::forward) out = compose(out, fk);
    else out = compose(inverse(fk), out);
  }
  return out;
}

Chains::Chains(const ApproxSequence& seq) : seq_(seq) {
  forward_.push_back(PiecewiseCircleMap::identity());
  inverse_.push_back(PiecewiseCircleMap::identity());
  power_.push_back(PiecewiseCircleMap::identity());
}

void Chains::check(std::int64_t n) const {
  if (n < 0 || n > seq_.size) {
    throw ValidationError("stage " + std::to_string(n) + " needs more members than the family has (" +
                          std::to_string(seq_.size) + ")");
  }
}

const PiecewiseCircleMap& Chains::forward(std::int64_t n) {
  check(n);
  while (static_cast<std::int64_t>(forward_.size()) <= n) {
    forward_.push_back(compose(forward_.back(), seq_.member(static_cast<std::int64_t>(forward_.size()))));
  }
  return forward_[static_cast<std::size_t>(n)];
}

const PiecewiseCircleMap& Chains::inverse(std::int64_t n) {
  check(n);
  while (static_cast<std::int64_t>(inverse_.size()) <= n) {
    PiecewiseCircleMap fk = seq_.member(static_cast<std::int64_t>(inverse_.size()));
    inverse_.push_back(compose(skelrot::inverse(fk), inverse_.back()));
  }
  return inverse_[static_cast<std::size_t>(n)];
}

const PiecewiseCircleMap& Chains::power(std::int64_t n) {
  if (n < 0) throw ValidationError("negative power");
  while (static_cast<std::int64_t>(power_.size()) <= n) power_.push_back(compose(seq_.f, power_.back()));
  return power_[static_cast<std::size_t>(n)];
}

PiecewiseCircleMap Chains::fhat(std::int64_t n) { return compose(forward(n + 1), inverse(n)); }
PiecewiseCircleMap Chains::ghat(std::int64_t n) { return compose(forward(n), inverse(n + 1)); }
PiecewiseCircleMap Chains::h_stage(std::int64_t n) { return compose(power(n), inverse(n)); }

ModulusBound modulus(const PiecewiseCircleMap& g, const Rational& delta, int bits) {
  if (delta < 0) throw ValidationError("modulus radius must be nonnegative");
  if (bits < 1) throw ValidationError("grid needs at least one bit");
  if (delta == 0) return {Rational(0), Rational(0)};
  Rational half(1, 2);
  if (delta >= half) return {half, half};
  Rational gap = dyadic(bits);
  Integer cells;
  mpz_ui_pow_ui(cells.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  Rational best = 0;
  auto probe = [&](const Rational& c) {
    Integer k = floor_z(frac(c) * cells);
    for (int j = 0; j < 2; ++j) {
      Rational x = ratio(k + j, cells);
      Rational window = g.lift(x + delta) - g.lift(x);
      if (window > best) best = window;
    }
  };
  for (const auto& b : g.breakpoints()) {
    probe(b);
    probe(b - delta);
  }
  Rational bound = best + 2 * g.max_slope() * gap;
  return {std::min(best, half), std::min(bound, half)};
}

const char* branch_name(Branch b) { return b == Branch::chain ? "chain" : "chain_after_f"; }

namespace {

struct StageMaps {
  PiecewiseCircleMap chain;    // f_{1,n-1}
  PiecewiseCircleMap chain_f;  // f_{1,n-1} o f
  PiecewiseCircleMap power;    // f^{n-1}
};

StageMaps stage_maps(Chains& c, long n) {
  const PiecewiseCircleMap& a = c.forward(n - 1);
  return {a, compose(a, c.sequence().f), c.power(n - 1)};
}

std::pair<Rational, Branch> two_branch(const StageMaps& s, const Rational& delta, int bits) {
  Rational a = modulus(s.chain, delta, bits).bound;
  Rational b = modulus(s.chain_f, delta, bits).bound;
  if (b > a) return {b, Branch::chain_after_f};
  return {a, Branch::chain};
}

ModulusEntry entry_from(const StageMaps& s, long n, const Rational& d_n, const Rational& d_next, int bits) {
  ModulusEntry e;
  e.n = n;
  e.index = n;
  std::tie(e.alpha, e.alpha_branch) = two_branch(s, d_n, bits);
  std::tie(e.beta, e.beta_branch) = two_branch(s, d_next, bits);
  e.gamma = modulus(s.power, d_n, bits).bound;
  e.epsilon = 3 * (e.alpha + e.beta + e.gamma);
  return e;
}

}  // namespace

ModulusEntry moduli(Chains& chains, long n, int bits) {
  if (n < 1) throw ValidationError("stages start at 1");
  const ApproxSequence& seq = chains.sequence();
  if (n + 1 > seq.size) {
    throw ValidationError("stage " + std::to_string(n) + " needs member " + std::to_string(n + 1) +
                          " but the family has " + std::to_string(seq.size));
  }
  return entry_from(stage_maps(chains, n), n, seq.distance(n), seq.distance(n + 1), bits);
}

std::vector<ModulusEntry> build_ledger(Chains& chains, long stages, int bits,
                                       const std::vector<std::int64_t>& original_indices) {
  std::vector<ModulusEntry> out;
  Rational sum = 0;
  for (long n = 1; n <= stages; ++n) {
    ModulusEntry e = moduli(chains, n, bits);
    if (!original_indices.empty()) e.index = original_indices.at(static_cast<std::size_t>(n - 1));
    sum += e.epsilon;
    e.prefix_sum = sum;
    out.push_back(std::move(e));
  }
  return out;
}

ThinResult thin_subsequence(const ApproxSequence& seq, const std::function<Rational(long)>& target, long stages,
                            int bits) {
  if (stages < 1) throw ValidationError("thinning needs at least one stage");
  ThinResult r;
  // Maps of the stage being finished; empty before the first pick.
  std::optional<StageMaps> prev;
  Rational prev_alpha, prev_gamma;
  Branch prev_branch = Branch::chain;
  PiecewiseCircleMap chain = PiecewiseCircleMap::identity();
  PiecewiseCircleMap power = PiecewiseCircleMap::identity();
  Rational sum = 0;

  for (long j = 1; j <= stages + 1; ++j) {
    StageMaps s{chain, compose(chain, seq.f), power};
    Rational t_prev = j > 1 ? target(j - 1) : Rational(0);
    Rational t_cur = j <= stages ? target(j) : Rational(0);
    auto ok = [&](std::int64_t k) {
      Rational d = seq.distance(k);
      if (j > 1) {
        Rational beta = two_branch(*prev, d, bits).first;
        if (3 * (prev_alpha + beta + prev_gamma) > t_prev) return false;
      }
      if (j <= stages) {
        Rational a = two_branch(s, d, bits).first;
        Rational g = modulus(s.power, d, bits).bound;
        if (6 * (a + g) > t_cur) return false;
      }
      return true;
    };
    std::int64_t lo = r.indices.empty() ? 1 : r.indices.back() + 1;
    std::int64_t hi = seq.size;
    if (lo > hi || !ok(hi)) {
      throw ValidationError("thinning stuck at stage " + std::to_string(j > stages ? stages : j) +
                            ": no family index up to " + std::to_string(seq.size) + " meets the target");
    }
    while (lo < hi) {
      std::int64_t mid = lo + (hi - lo) / 2;
      if (ok(mid)) hi = mid;
      else lo = mid + 1;
    }
    std::int64_t k = lo;
    Rational d = seq.distance(k);
    if (j > 1) {
      ModulusEntry e;
      e.n = j - 1;
      e.index = r.indices.back();
      e.alpha = prev_alpha;
      e.alpha_branch = prev_branch;
      std::tie(e.beta, e.beta_branch) = two_branch(*prev, d, bits);
      e.gamma = prev_gamma;
      e.epsilon = 3 * (e.alpha + e.beta + e.gamma);
      sum += e.epsilon;
      e.prefix_sum = sum;
      r.ledger.push_back(std::move(e));
    }
    r.indices.push_back(k);
    if (j <= stages) {
      std::tie(prev_alpha, prev_branch) = two_branch(s, d, bits);
      prev_gamma = modulus(s.power, d, bits).bound;
      prev = std::move(s);
      PiecewiseCircleMap fk = seq.member(k);
      chain = compose(chain, fk);
      power = compose(seq.f, power);
    }
  }
  return r;
}

bool CauchyReport::ok() const {
  for (const auto& c : chains) {
    if (c.violations > 0) return false;
  }
  return true;
}

CauchyReport cauchy_verify(Chains& chains, const std::vector<ModulusEntry>& ledger, int grid_bits,
                           const Rational& corruption) {
  if (grid_bits < 1 || grid_bits > 24) throw ValidationError("verification grid must have 1..24 bits");
  if (corruption < 0) throw ValidationError("corruption factor must be nonnegative");
  CauchyReport r;
  r.stages = static_cast<long>(ledger.size());
  r.grid_points = 1L << grid_bits;
  r.corruption = corruption;
  r.chains = {{"fhat", 0, 0, 0, 0}, {"ghat", 0, 0, 0, 0}, {"h", 0, 0, 0, 0}};
  if (ledger.empty()) return r;

  Integer cells(r.grid_points);
  PiecewiseCircleMap prev[3] = {chains.fhat(0), chains.ghat(0), chains.h_stage(0)};
  for (const auto& e : ledger) {
    long n = e.n;
    PiecewiseCircleMap cur[3] = {chains.fhat(n), chains.ghat(n), chains.h_stage(n)};
    Rational eps = e.epsilon * corruption;
    for (int c = 0; c < 3; ++c) {
      ChainCheck& cc = r.chains[static_cast<std::size_t>(c)];
      for (long k = 0; k < r.grid_points; ++k) {
        Rational x = ratio(Integer(k), cells);
        Rational d = circle_distance(cur[c].lift(x), prev[c].lift(x));
        if (d == 0) continue;
        if (eps == 0 || d > eps) {
          if (cc.violations++ == 0) {
            cc.first_violation_stage = n;
            cc.first_violation_x = x;
          }
        }
        if (e.epsilon > 0) cc.max_ratio = std::max(cc.max_ratio, Rational(d / e.epsilon));
      }
      prev[c] = std::move(cur[c]);
    }
  }
  return r;
}

IdentityReport verify_identities(Chains& chains, long stages, int grid_bits) {
  if (grid_bits < 1 || grid_bits > 24) throw ValidationError("verification grid must have 1..24 bits");
  IdentityReport r;
  r.stages = stages;
  r.grid_points = 1L << grid_bits;
  Integer cells(r.grid_points);
  const PiecewiseCircleMap& f = chains.sequence().f;
  for (long n = 1; n <= stages; ++n) {
    PiecewiseCircleMap fh = chains.fhat(n);
    PiecewiseCircleMap gh = chains.ghat(n);
    PiecewiseCircleMap hn = chains.h_stage(n);
    PiecewiseCircleMap hn1 = chains.h_stage(n + 1);
    for (long k = 0; k < r.grid_points; ++k) {
      Rational x = ratio(Integer(k), cells);
      if (fh.lift(gh.lift(x)) != x) ++r.fhat_ghat_failures;
      if (gh.lift(fh.lift(x)) != x) ++r.ghat_fhat_failures;
      if (hn1.lift(fh.lift(x)) != f.lift(hn.lift(x))) ++r.conjugacy_failures;
    }
  }
  return r;
}

std::string ledger_to_csv(const std::vector<ModulusEntry>& ledger) {
  std::ostringstream os;
  os << "n,index,alpha,beta,gamma,epsilon,prefix_sum,alpha_branch,beta_branch\n";
  for (const auto& e : ledger) {
    os << e.n << ',' << e.index << ',' << to_decimal(e.alpha) << ',' << to_decimal(e.beta) << ','
       << to_decimal(e.gamma) << ',' << to_decimal(e.epsilon) << ',' << to_decimal(e.prefix_sum) << ','
       << branch_name(e.alpha_branch) << ',' << branch_name(e.beta_branch) << '\n';
  }
  return os.str();
}

Fact1Report fact1_rotation_check(const DenjoyModel& m, Transport r, const std::vector<SkeletonPoint>& starts,
                                 long horizon, long markov_limit) {
  if (horizon < 1) throw ValidationError("horizon must be positive");
  Fact1Report rep;
  rep.orbits = static_cast<long>(starts.size());
  rep.horizon = horizon;
  Rational B = r == Transport::identity ? Rational(0) : m.semiconj_sup;
  rep.bound = 2 * B / horizon;
  Rational bound_sq = rep.bound * rep.bound;

  auto transported = [&](const LiftedPoint<Rational>& pt) -> std::array<Rational, 2> {
    if (r == Transport::semiconjugacy) return h_position(m, pt, false);
    Rational cx(static_cast<long>(pt.cell_x)), cy(static_cast<long>(pt.cell_y));
    if (pt.axis == Axis::h) return {cx + pt.coord, cy};
    return {cx, cy + pt.coord};
  };
  auto exact = [](const LiftedPoint<double>& p) {
    return LiftedPoint<Rational>{p.axis, p.cell_x, p.cell_y, from_double(p.coord)};
  };

  Rational n(horizon);
  Rational worst_sq = 0;
  for (const auto& s : starts) {
    LiftedSkeletonPoint x0 = lift_point(s);
    LiftedPoint<double> pt{x0.axis, x0.cell_x, x0.cell_y, x0.coord.get_d()};
    LiftedPoint<Rational> e0 = exact(pt);
    for (long t = 0; t < horizon; ++t) pt = full_step(m, pt);
    LiftedPoint<Rational> e1 = exact(pt);
    PlanarRational raw0 = position(e0);
    PlanarRational raw1 = position(e1);
    auto h0 = transported(e0);
    auto h1 = transported(e1);
    Rational dx = ((h1[0] - h0[0]) - (raw1.x - raw0.x)) / n;
    Rational dy = ((h1[1] - h0[1]) - (raw1.y - raw0.y)) / n;
    Rational d2 = euclid_norm_bound_sq(dx, dy);
    worst_sq = std::max(worst_sq, d2);
    if (d2 > bound_sq) ++rep.violations;
  }
  rep.max_difference = from_double(std::sqrt(worst_sq.get_d()));

  if (r == Transport::semiconjugacy) {
    for (long a = 1; a <= markov_limit; ++a) {
      for (long b = 1; b <= markov_limit; ++b) {
        if (!is_admissible(m.param, a, b)) continue;
        ++rep.periodic_checked;
        if (rotation_vector_exact(m, a, b) != rho_vec(m.param, a, b)) ++rep.periodic_mismatches;
      }
    }
  }
  return rep;
}

}  // namespace skelrot
