#include "skelrot/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "skelrot/errors.hpp"

namespace skelrot {

bool HullPolygon::has_vertex(const PlanarRational& p) const {
  return std::find(vertices.begin(), vertices.end(), p) != vertices.end();
}

HullPolygon convex_hull(const std::vector<PlanarRational>& points) {
  std::vector<TaggedPoint> tagged;
  tagged.reserve(points.size());
  for (const auto& p : points) tagged.push_back({p, std::nullopt});
  return convex_hull(std::move(tagged));
}

HullPolygon convex_hull(std::vector<TaggedPoint> pts) {
  if (pts.empty()) throw ValidationError("convex hull of an empty point set");
  std::sort(pts.begin(), pts.end(), [](const TaggedPoint& a, const TaggedPoint& b) {
    if (a.point != b.point) return a.point < b.point;
    return a.tag < b.tag;  // nullopt first
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const TaggedPoint& a, const TaggedPoint& b) { return a.point == b.point; }),
            pts.end());

  std::vector<const TaggedPoint*> chain;
  if (pts.size() == 1) {
    chain.push_back(&pts[0]);
  } else {
    chain.reserve(2 * pts.size());
    auto turn = [&](const TaggedPoint& p) {
      return cross(chain[chain.size() - 2]->point, chain.back()->point, p.point);
    };
    for (const auto& p : pts) {
      while (chain.size() >= 2 && turn(p) <= 0) chain.pop_back();
      chain.push_back(&p);
    }
    std::size_t lower = chain.size() + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
      while (chain.size() >= lower && turn(pts[i]) <= 0) chain.pop_back();
      chain.push_back(&pts[i]);
    }
    chain.pop_back();
  }

  HullPolygon hull;
  for (const TaggedPoint* p : chain) {
    hull.vertices.push_back(p->point);
    hull.generator_tags.push_back(p->tag);
  }
  return hull;
}

std::vector<TaggedPoint> omega_generators(const IrrationalParam& param, long N) {
  if (N < 1 || N >= param.max_safe_index) {
    throw CertificationError("truncation " + std::to_string(N) + " outside certified range");
  }
  std::vector<long> adm = admissible_indices(param, N);
  std::vector<TaggedPoint> out;
  out.reserve(adm.size() * adm.size());
  for (long m : adm) {
    for (long n : adm) out.push_back({rho_vec(param, m, n), std::make_pair(m, n)});
  }
  return out;
}

HullPolygon omega_set(const IrrationalParam& param, long N, bool closure) {
  std::vector<TaggedPoint> pts = omega_generators(param, N);
  if (pts.empty()) throw ValidationError("no admissible generators up to " + std::to_string(N));
  if (closure) {
    pts.push_back({{Rational(0), param.value()}, std::nullopt});
    pts.push_back({{param.value(), Rational(0)}, std::nullopt});
  }
  return convex_hull(std::move(pts));
}

HullPolygon lambda_set(const IrrationalParam& param, long N, bool closure) {
  std::vector<TaggedPoint> pts = omega_generators(param, N);
  pts.push_back({{Rational(0), Rational(0)}, std::nullopt});
  if (closure) {
    pts.push_back({{Rational(0), param.value()}, std::nullopt});
    pts.push_back({{param.value(), Rational(0)}, std::nullopt});
  }
  return convex_hull(std::move(pts));
}

Rational gamma_slope(const IrrationalParam& param, long m, long n) {
  if (!is_admissible(param, m, n)) {
    throw ValidationError("(" + std::to_string(m) + "," + std::to_string(n) + ") is not admissible");
  }
  Rational rho = param.value();
  Rational am = alpha(param, m).value;
  Rational an = alpha(param, n).value;
  return Rational(-1) + (am + an - rho) / (m * rho + am);
}

AccumulationReport accumulation_report(const IrrationalParam& param, long N, const Rational& radius) {
  Rational rho = param.value();
  if (radius <= 0 || 2 * radius >= rho) throw ValidationError("radius must lie in (0, rho/2)");
  HullPolygon hull = lambda_set(param, N);
  Rational r2 = radius * radius;
  PlanarRational top{Rational(0), rho};
  PlanarRational right{rho, Rational(0)};
  PlanarRational origin{Rational(0), Rational(0)};
  AccumulationReport rep;
  for (const auto& v : hull.vertices) {
    if (v == origin) continue;
    PlanarRational a = v - top;
    PlanarRational b = v - right;
    if (dot(a, a) < r2) {
      ++rep.near_0rho;
    } else if (dot(b, b) < r2) {
      ++rep.near_rho0;
    } else {
      rep.elsewhere.push_back(v);
    }
  }
  return rep;
}

namespace {

Rational segment_squared_distance(const PlanarRational& p, const PlanarRational& a,
                                  const PlanarRational& b) {
  PlanarRational ab = b - a;
  PlanarRational ap = p - a;
  Rational len2 = dot(ab, ab);
  if (len2 == 0) return dot(ap, ap);
  Rational t = dot(ap, ab) / len2;
  if (t < 0) t = 0;
  if (t > 1) t = 1;
  PlanarRational d{ap.x - t * ab.x, ap.y - t * ab.y};
  return dot(d, d);
}

}  // namespace

bool contains(const HullPolygon& body, const PlanarRational& p) {
  const auto& v = body.vertices;
  if (v.size() == 1) return v[0] == p;
  if (v.size() == 2) return segment_squared_distance(p, v[0], v[1]) == 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cross(v[i], v[(i + 1) % v.size()], p) < 0) return false;
  }
  return true;
}

bool contains(const HullPolygon& outer, const HullPolygon& inner) {
  return std::all_of(inner.vertices.begin(), inner.vertices.end(),
                     [&](const PlanarRational& p) { return contains(outer, p); });
}

Rational squared_distance(const PlanarRational& p, const HullPolygon& body) {
  if (contains(body, p)) return 0;
  const auto& v = body.vertices;
  if (v.size() == 1) {
    PlanarRational d = p - v[0];
    return dot(d, d);
  }
  Rational best = segment_squared_distance(p, v[0], v[1]);
  for (std::size_t i = 1; i < v.size(); ++i) {
    best = std::min(best, segment_squared_distance(p, v[i], v[(i + 1) % v.size()]));
  }
  return best;
}

Rational sqrt_upper(const Rational& x) {
  if (auto r = exact_sqrt(x)) return *r;
  return sqrt_bounds(x, 42).hi;
}

Rational hausdorff(const HullPolygon& a, const HullPolygon& b) {
  if (a.degenerate() != b.degenerate()) {
    throw ValidationError("Hausdorff distance between a degenerate and a nondegenerate hull");
  }
  Rational worst = 0;
  for (const auto& v : a.vertices) worst = std::max(worst, squared_distance(v, b));
  for (const auto& v : b.vertices) worst = std::max(worst, squared_distance(v, a));
  return sqrt_upper(worst);
}

std::string hull_to_csv(const HullPolygon& hull) {
  std::ostringstream os;
  os << "m,n,x_num,x_den,y_num,y_den,x,y\n";
  for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
    const auto& v = hull.vertices[i];
    const auto& tag = hull.generator_tags[i];
    if (tag) os << tag->first << ',' << tag->second;
    else os << ',';
    os << ',' << v.x.get_num() << ',' << v.x.get_den() << ',' << v.y.get_num() << ','
       << v.y.get_den() << ',' << to_decimal(v.x) << ',' << to_decimal(v.y) << '\n';
  }
  return os.str();
}

namespace {

std::string svg_xy(const PlanarRational& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f", p.x.get_d(), 1.0 - p.y.get_d());
  return buf;
}

std::string svg_attr_xy(const PlanarRational& p) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "cx=\"%.6f\" cy=\"%.6f\"", p.x.get_d(), 1.0 - p.y.get_d());
  return buf;
}

}  // namespace

std::string hull_to_svg(const HullPolygon& hull, const SvgMarkers& markers) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
        "viewBox=\"-0.05 -0.05 1.1 1.1\">\n";
  os << "<rect class=\"frame\" x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"none\" "
        "stroke=\"#999\" stroke-width=\"0.002\"/>\n";
  os << "<polygon class=\"hull\" fill=\"#c6dbef\" stroke=\"#08519c\" stroke-width=\"0.003\" points=\"";
  for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
    if (i) os << ' ';
    os << svg_xy(hull.vertices[i]);
  }
  os << "\"/>\n";
  for (const auto& g : markers.generators) {
    os << "<circle class=\"generator\" " << svg_attr_xy(g) << " r=\"0.003\" fill=\"#08306b\"/>\n";
  }
  for (const auto& a : markers.accumulation) {
    os << "<circle class=\"accumulation\" " << svg_attr_xy(a)
       << " r=\"0.012\" fill=\"none\" stroke=\"#cb181d\" stroke-width=\"0.004\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace skelrot
