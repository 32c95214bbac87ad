#include "skelrot/circlemap.hpp"

#include <cmath>
#include <string>

#include "skelrot/errors.hpp"

namespace skelrot {

bool arcs_intersect(const Arc& a, const Arc& b) {
  std::int64_t t0 = floor_int(Rational(a.lo - b.hi));
  std::int64_t t1 = floor_int(Rational(a.hi - b.lo)) + 1;
  for (std::int64_t t = t0; t <= t1; ++t) {
    Rational tt(static_cast<long>(t));
    if (std::max(a.lo, Rational(b.lo + tt)) <= std::min(a.hi, Rational(b.hi + tt))) return true;
  }
  return false;
}

bool arc_contains(const Arc& a, const Rational& x) {
  Rational y = x - floor_z(Rational(x - a.lo));  // y in [a.lo, a.lo + 1)
  return y <= a.hi;
}

// ---------------------------------------------------------------------------
// PiecewiseCircleMap

PiecewiseCircleMap::PiecewiseCircleMap(std::vector<Rational> breakpoints, std::vector<Piece> pieces)
    : bp_(std::move(breakpoints)), pc_(std::move(pieces)) {
  validate();
  cache();
}

void PiecewiseCircleMap::validate() const {
  if (bp_.empty() || bp_.size() != pc_.size()) throw ValidationError("breakpoint/piece count mismatch");
  if (bp_[0] != 0) throw ValidationError("first breakpoint must be 0");
  for (std::size_t i = 0; i < bp_.size(); ++i) {
    Rational end = interval_end(i);
    if (!(bp_[i] < end)) throw ValidationError("breakpoints must increase strictly within [0,1)");
    const Piece& pc = pc_[i];
    if (pc.slope_at(bp_[i]) < 0 || pc.slope_at(end) < 0) {
      throw ValidationError("lift decreases on piece " + std::to_string(i));
    }
    Rational next = i + 1 < bp_.size() ? pc_[i + 1].at(end) : pc_[0].at(Rational(0)) + 1;
    if (pc.at(end) != next) {
      throw ValidationError("lift discontinuous at breakpoint " + to_string(end));
    }
  }
}

void PiecewiseCircleMap::cache() {
  bp_d_.clear();
  pc_d_.clear();
  for (std::size_t i = 0; i < bp_.size(); ++i) {
    bp_d_.push_back(bp_[i].get_d());
    pc_d_.push_back({pc_[i].a2.get_d(), pc_[i].a1.get_d(), pc_[i].a0.get_d()});
  }
}

PiecewiseCircleMap PiecewiseCircleMap::from_lifted(const Rational& origin,
                                                   std::vector<std::pair<Rational, Piece>> pieces) {
  if (origin > 0 || origin <= -1) throw ValidationError("origin must lie in (-1, 0]");
  std::vector<std::pair<Rational, Piece>> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Rational& s = pieces[i].first;
    Rational e = i + 1 < pieces.size() ? pieces[i + 1].first : origin + 1;
    const Piece& pc = pieces[i].second;
    if (s >= 0) {
      out.push_back(std::move(pieces[i]));
      continue;
    }
    // Part left of 0 moves to [s+1, min(e,0)+1) as lift(x) = lift(x-1) + 1.
    Piece shifted{pc.a2, pc.a1 - 2 * pc.a2, pc.a2 - pc.a1 + pc.a0 + 1};
    out.emplace_back(s + 1, shifted);
    if (e > 0) out.emplace_back(Rational(0), pc);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Rational> bp;
  std::vector<Piece> pc;
  bp.reserve(out.size());
  pc.reserve(out.size());
  for (auto& [s, p] : out) {
    if (!pc.empty() && pc.back() == p) continue;
    bp.push_back(std::move(s));
    pc.push_back(std::move(p));
  }
  return PiecewiseCircleMap(std::move(bp), std::move(pc));
}

PiecewiseCircleMap PiecewiseCircleMap::rotation(const Rational& t) {
  return PiecewiseCircleMap({Rational(0)}, {Piece{0, 1, t}});
}

Rational PiecewiseCircleMap::apply(const Rational& x) const {
  Rational y = lift(Rational(x - floor_z(x)));
  return y - floor_z(y);
}

std::vector<Arc> PiecewiseCircleMap::plateaus() const {
  std::vector<Arc> out;
  for (std::size_t i = 0; i < pc_.size(); ++i) {
    if (!pc_[i].constant()) continue;
    Rational end = interval_end(i);
    if (!out.empty() && out.back().hi == bp_[i]) out.back().hi = end;
    else out.push_back({bp_[i], end});
  }
  if (out.size() > 1 && out.front().lo == 0 && out.back().hi == 1) {
    out.front().lo = out.back().lo - 1;
    out.pop_back();
  }
  return out;
}

bool PiecewiseCircleMap::strictly_increasing() const {
  for (std::size_t i = 0; i < pc_.size(); ++i) {
    if (pc_[i].slope_at(bp_[i]) <= 0 && pc_[i].slope_at(interval_end(i)) <= 0) return false;
    if (pc_[i].constant()) return false;
  }
  return true;
}

bool PiecewiseCircleMap::all_affine() const {
  return std::all_of(pc_.begin(), pc_.end(), [](const Piece& p) { return p.affine(); });
}

Rational PiecewiseCircleMap::max_slope() const {
  Rational best = 0;
  for (std::size_t i = 0; i < pc_.size(); ++i) {
    best = std::max({best, pc_[i].slope_at(bp_[i]), pc_[i].slope_at(interval_end(i))});
  }
  return best;
}

PiecewiseCircleMap compose(const PiecewiseCircleMap& outer, const PiecewiseCircleMap& inner) {
  if (!outer.all_affine() || !inner.all_affine()) {
    throw ValidationError("composition requires affine pieces");
  }
  const auto& obp = outer.breakpoints();
  const auto& opc = outer.pieces();
  std::vector<Rational> bp;
  std::vector<Piece> pc;
  auto emit = [&](const Rational& start, const Piece& p) {
    if (!pc.empty() && pc.back() == p) return;
    bp.push_back(start);
    pc.push_back(p);
  };
  auto piece_through = [&](const Rational& s, const Rational& c, const Rational& y) {
    std::int64_t t = floor_int(y);
    Rational tt(static_cast<long>(t));
    const Piece& o = opc[outer.locate(Rational(y - tt))];
    return Piece{0, o.a1 * s, o.a1 * (c - tt) + o.a0 + tt};
  };

  for (std::size_t i = 0; i < inner.size(); ++i) {
    const Piece& in = inner.pieces()[i];
    const Rational& s = in.a1;
    const Rational& c = in.a0;
    Rational x0 = inner.breakpoints()[i];
    Rational x1 = inner.interval_end(i);
    if (s == 0) {
      emit(x0, piece_through(s, c, c));
      continue;
    }
    Rational v0 = s * x0 + c;
    Rational v1 = s * x1 + c;
    std::vector<Rational> cuts{x0};
    for (std::int64_t t = floor_int(v0); t <= floor_int(v1); ++t) {
      Rational tt(static_cast<long>(t));
      auto lo = std::upper_bound(obp.begin(), obp.end(), Rational(v0 - tt));
      auto hi = std::lower_bound(obp.begin(), obp.end(), Rational(v1 - tt));
      for (auto it = lo; it < hi; ++it) cuts.push_back((*it + tt - c) / s);
    }
    cuts.push_back(x1);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      Rational mid = (cuts[j] + cuts[j + 1]) / 2;
      emit(cuts[j], piece_through(s, c, Rational(s * mid + c)));
    }
  }
  return PiecewiseCircleMap(std::move(bp), std::move(pc));
}

PiecewiseCircleMap inverse(const PiecewiseCircleMap& f) {
  if (!f.all_affine() || !f.strictly_increasing()) {
    throw ValidationError("inverse requires a strictly increasing affine map");
  }
  std::vector<std::pair<Rational, Piece>> parts;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Piece& pc = f.pieces()[i];
    Rational v0 = pc.at(f.breakpoints()[i]);
    Rational v1 = pc.at(f.interval_end(i));
    for (long t = -floor_int(v1 - Rational(1, 1 << 30)) - 1; t <= -floor_int(v0) + 1; ++t) {
      Rational tt(t);
      Rational lo = std::max(Rational(v0 + tt), Rational(0));
      Rational hi = std::min(Rational(v1 + tt), Rational(1));
      if (!(lo < hi)) continue;
      // y = f(x) + t  =>  x + t = (y - t - c)/s + t
      Piece inv{0, 1 / pc.a1, (-tt - pc.a0) / pc.a1 + tt};
      parts.emplace_back(lo, inv);
    }
  }
  std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Rational> bp;
  std::vector<Piece> pc;
  for (auto& [s, p] : parts) {
    if (!pc.empty() && pc.back() == p) continue;
    bp.push_back(s);
    pc.push_back(p);
  }
  return PiecewiseCircleMap(std::move(bp), std::move(pc));
}

bool equal_maps(const PiecewiseCircleMap& a, const PiecewiseCircleMap& b) {
  return a.breakpoints() == b.breakpoints() && a.pieces() == b.pieces();
}

Fold::Fold(Rational t, Rational w) : tau(std::move(t)), halfwidth(std::move(w)) {
  coef = tau / (halfwidth * halfwidth);
}

// ---------------------------------------------------------------------------
// Denjoy model

long GapTable::label_of(long k) const {
  long n = static_cast<long>((static_cast<__int128>(k) * p_inverse) % q);
  if (2 * n > q) n -= q;
  return n;
}

long GapTable::position_of(long label) const {
  long k = static_cast<long>((static_cast<__int128>(label) * p) % q);
  return k < 0 ? k + q : k;
}

namespace {

long modular_inverse(long a, long m) {
  Integer r;
  Integer az = a, mz = m;
  if (mpz_invert(r.get_mpz_t(), az.get_mpz_t(), mz.get_mpz_t()) == 0) {
    throw ValidationError("rotation numerator not invertible");
  }
  return r.get_si();
}

GapTable build_gaps(const IrrationalParam& param, const DenjoyConfig& cfg) {
  GapTable g;
  g.p = param.convergent_num.get_si();
  g.q = param.convergent_den.get_si();
  g.p_inverse = modular_inverse(g.p, g.q);
  const Rational& L = cfg.gap_mass;
  const Rational& l0 = cfg.wandering_length;
  g.complement_length = (1 - L) / g.q;

  double total = 0;
  for (long k = 1; k < g.q; ++k) {
    double n = static_cast<double>(g.label_of(k));
    total += 1.0 / (n * n + 4.0);
  }
  double c = Rational(L - l0).get_d() / total;
  g.length.resize(g.q);
  g.length[0] = l0;
  Rational sum = l0;
  for (long k = 1; k < g.q; ++k) {
    double n = static_cast<double>(g.label_of(k));
    g.length[k] = round_dyadic(c / (n * n + 4.0), cfg.dyadic_bits);
    if (g.length[k] <= 0) throw ValidationError("gap length underflow; raise dyadic precision");
    sum += g.length[k];
  }
  // Rounding residue goes to the two gaps adjacent in label to the wandering one.
  Rational residue = (L - sum) / 2;
  for (long label : {1L, -1L}) {
    Rational& len = g.length[g.position_of(label)];
    len += residue;
    if (len <= 0) throw ValidationError("gap mass too small for the rounding residue");
  }

  g.start.resize(g.q);
  g.start[0] = -l0 / 2;
  for (long k = 1; k < g.q; ++k) g.start[k] = g.start[k - 1] + g.length[k - 1] + g.complement_length;
  for (long k = 0; k < g.q; ++k) {
    g.start_d.push_back(g.start[k].get_d());
    g.length_d.push_back(g.length[k].get_d());
  }
  return g;
}

}  // namespace

DenjoyModel build_denjoy(const IrrationalParam& param, const DenjoyConfig& cfg) {
  const Rational& L = cfg.gap_mass;
  if (L <= 0 || L >= 1) throw ValidationError("gap mass must lie in (0,1)");
  if (cfg.wandering_length <= 0 || cfg.wandering_length >= L) {
    throw ValidationError("wandering gap length must lie in (0, gap mass)");
  }
  if (cfg.i_halfwidth_fraction <= 0 || cfg.i_halfwidth_fraction >= 1) {
    throw ValidationError("I half-width fraction must lie in (0,1)");
  }
  if (cfg.gap_budget < 1) throw ValidationError("gap budget must be positive");
  if (!param.convergent_den.fits_slong_p() || param.convergent_den.get_si() > cfg.max_period) {
    throw ValidationError("convergent denominator exceeds the supported period " +
                          std::to_string(cfg.max_period));
  }
  long q = param.convergent_den.get_si();
  long K = cfg.gap_budget;
  if (2 * K + 1 > q) {
    // Labels K and K - q name the same orbit point.
    throw ValidationError("gap labels " + std::to_string(K) + " and " + std::to_string(K - q) +
                          " collide: gap budget too large for the period " + std::to_string(q));
  }
  if (K > param.max_safe_index) {
    throw CertificationError("gap budget " + std::to_string(K) + " exceeds certified index range");
  }

  DenjoyModel m;
  m.param = param;
  m.config = cfg;
  m.table = build_gaps(param, cfg);
  const GapTable& g = m.table;
  m.wandering_halfwidth = cfg.wandering_length / 2;
  m.halfwidth = cfg.i_halfwidth_fraction * m.wandering_halfwidth;
  m.cantor_measure_scale = 1 / (1 - L);

  // Gap k goes affinely onto gap k+p, complement arcs are translated.
  std::vector<std::pair<Rational, Piece>> dpieces;
  std::vector<std::pair<Rational, Piece>> hpieces;
  for (long k = 0; k < q; ++k) {
    long kk = (k + g.p) % q;
    Rational target = g.start[kk] + (k + g.p >= q ? 1 : 0);
    Rational slope = g.length[kk] / g.length[k];
    dpieces.push_back({g.start[k], Piece{0, slope, target - slope * g.start[k]}});
    Rational e = g.start[k] + g.length[k];
    Rational te = target + g.length[kk];
    dpieces.push_back({e, Piece{0, 1, te - e}});

    Rational angle(k, q);
    angle.canonicalize();
    hpieces.push_back({g.start[k], Piece{0, 0, angle}});
    hpieces.push_back({e, Piece{0, m.cantor_measure_scale, angle - m.cantor_measure_scale * e}});
  }
  m.denjoy = PiecewiseCircleMap::from_lifted(g.start[0], dpieces);
  m.h = PiecewiseCircleMap::from_lifted(g.start[0], std::move(hpieces));

  // Plateau modification on gap 0.
  const Rational& w0 = m.wandering_halfwidth;
  const Rational& w = m.halfwidth;
  Rational a1 = dpieces[0].second.at(-w0);
  Rational b1 = dpieces[0].second.at(w0);
  m.tau = (a1 + b1) / 2;
  m.wandering_image = {a1, b1};
  std::vector<std::pair<Rational, Piece>> ppieces;
  Rational ls = (m.tau - a1) / (w0 - w);
  Rational rs = (b1 - m.tau) / (w0 - w);
  ppieces.push_back({-w0, Piece{0, ls, a1 + ls * w0}});
  ppieces.push_back({-w, Piece{0, 0, m.tau}});
  ppieces.push_back({w, Piece{0, rs, m.tau - rs * w}});
  for (std::size_t i = 1; i < dpieces.size(); ++i) ppieces.push_back(dpieces[i]);
  m.phi = PiecewiseCircleMap::from_lifted(-w0, std::move(ppieces));

  Rational span = 1 - 2 * w;
  m.p = PiecewiseCircleMap({Rational(0), w, 1 - w},
                           {Piece{0, 0, 0}, Piece{0, 1 / span, -w / span}, Piece{0, 0, 1}});

  // psi(y) = phi(w + span*y) on [0,1).
  std::vector<Rational> sbp;
  std::vector<Piece> spc;
  const auto& fbp = m.phi.breakpoints();
  for (std::size_t i = 0; i < fbp.size(); ++i) {
    Rational lo = std::max(fbp[i], w);
    Rational hi = std::min(m.phi.interval_end(i), Rational(1 - w));
    if (!(lo < hi)) continue;
    const Piece& pc = m.phi.pieces()[i];
    sbp.push_back((lo - w) / span);
    spc.push_back(Piece{0, pc.a1 * span, pc.a1 * w + pc.a0});
  }
  m.psi = PiecewiseCircleMap(std::move(sbp), std::move(spc));
  m.fold = Fold(m.tau, w);

  for (long n = -K; n <= K; ++n) m.gap_index[n] = g.gap(g.position_of(n));
  m.gap_index[0] = m.wandering_arc();

  Rational B = 0;
  for (long k = 0; k < q; ++k) {
    Rational angle(k, q);
    angle.canonicalize();
    B = std::max({B, Rational(abs(angle - g.start[k])), Rational(abs(angle - g.start[k] - g.length[k]))});
  }
  m.semiconj_sup = B;
  m.halfwidth_d = w.get_d();
  m.tau_d = m.tau.get_d();

  if (m.phi.plateaus().size() != 1 || m.p.plateaus().size() != 1 || !m.psi.plateaus().empty()) {
    throw ConsistencyError("unexpected plateau structure");
  }
  return m;
}

Rational semiconj_h(const DenjoyModel& model, const Rational& x) {
  if (x < 0 || x >= 1) throw ValidationError("circle coordinate must lie in [0,1)");
  Rational y = semiconj_lift(model, x, true);
  return y - floor_z(y);
}

RationalInterval rotation_number_estimate(const PiecewiseCircleMap& map, const Rational& x0,
                                          long n_iters) {
  if (n_iters < 1) throw ValidationError("iteration count must be positive");
  Rational x = x0;
  for (long i = 0; i < n_iters; ++i) x = map.lift(x);
  Rational avg = (x - x0) / n_iters;
  Rational r(1, n_iters);
  return {avg - r, avg + r};
}

std::optional<long> first_return(const PiecewiseCircleMap& map, const Arc& arc, long horizon) {
  Arc img = arc;
  for (long k = 1; k <= horizon; ++k) {
    img = {map.lift(img.lo), map.lift(img.hi)};
    if (img.length() >= 1 || arcs_intersect(img, arc)) return k;
  }
  return std::nullopt;
}

bool wandering_check(const DenjoyModel& model, long horizon) {
  if (horizon < 0 || horizon > model.gap_budget() - 1) {
    throw ValidationError("wandering horizon must lie in 0..K-1");
  }
  return !first_return(model.phi, model.wandering_arc(), horizon).has_value();
}

}  // namespace skelrot
