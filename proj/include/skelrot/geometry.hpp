#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skelrot/numeric.hpp"
#include "skelrot/planar.hpp"

namespace skelrot {

using GeneratorTag = std::optional<std::pair<long, long>>;

struct TaggedPoint {
  PlanarRational point;
  GeneratorTag tag;
};

// Counter-clockwise strictly convex vertex list starting at the
// lexicographic minimum.  Fewer than three vertices means the input was a
// point or collinear.
struct HullPolygon {
  std::vector<PlanarRational> vertices;
  std::vector<GeneratorTag> generator_tags;

  bool degenerate() const { return vertices.size() < 3; }
  bool has_vertex(const PlanarRational& p) const;
};

HullPolygon convex_hull(const std::vector<PlanarRational>& points);
// Duplicate points keep the smallest tag.
HullPolygon convex_hull(std::vector<TaggedPoint> points);

// Admissible rho_{m,n} with m,n <= N, tagged with (m,n).
std::vector<TaggedPoint> omega_generators(const IrrationalParam& param, long N);
HullPolygon omega_set(const IrrationalParam& param, long N, bool closure = false);
HullPolygon lambda_set(const IrrationalParam& param, long N, bool closure = false);

// -1 + (alpha_m + alpha_n - rho)/(m*rho + alpha_m) with rho -> p/q.
Rational gamma_slope(const IrrationalParam& param, long m, long n);

struct AccumulationReport {
  long near_0rho = 0;
  long near_rho0 = 0;
  std::vector<PlanarRational> elsewhere;
};

AccumulationReport accumulation_report(const IrrationalParam& param, long N, const Rational& radius);

// Closed-body membership, exact.
bool contains(const HullPolygon& body, const PlanarRational& p);
bool contains(const HullPolygon& outer, const HullPolygon& inner);
Rational squared_distance(const PlanarRational& p, const HullPolygon& body);

// Upper bound on sqrt(x): exact when x is a rational square, otherwise within
// 2^-40 of the true root.
Rational sqrt_upper(const Rational& x);

Rational hausdorff(const HullPolygon& a, const HullPolygon& b);

std::string hull_to_csv(const HullPolygon& hull);

struct SvgMarkers {
  std::vector<PlanarRational> generators;
  std::vector<PlanarRational> accumulation;
};
std::string hull_to_svg(const HullPolygon& hull, const SvgMarkers& markers);

}  // namespace skelrot
