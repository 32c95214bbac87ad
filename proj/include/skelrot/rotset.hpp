#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skelrot/geometry.hpp"
#include "skelrot/skeleton.hpp"

namespace skelrot {

// Certified rotation vectors: rho_{m,n} for admissible m,n <= N, each from
// a Markov periodic orbit, followed by (p/q, 0) and (0, p/q) from exact
// free orbits.
std::vector<PlanarRational> certified_cloud(const DenjoyModel& m, long N);

// Checks that a free orbit on `axis` moves H by exactly p/q along that axis
// at every step of `steps`, and returns the axis vector.
PlanarRational free_orbit_certificate(const DenjoyModel& m, Axis axis, long steps);

// A start on `axis` whose orbit stays off I^(h) u I^(v): theta is a Cantor
// coordinate, mapped back through h (and through p for the horizontal axis).
SkeletonPoint free_start(const DenjoyModel& m, Axis axis, const Rational& theta);

enum class Precision { exact, double_precision };

struct SampleSpec {
  long count = 200;
  std::uint64_t seed = 1;
  bool include_markov = true;  // Markov fixed points for m,n <= N come first
  long markov_limit = 8;
};

std::vector<SkeletonPoint> sample_starts(const DenjoyModel& m, const SampleSpec& spec);

struct RotationSample {
  LiftedSkeletonPoint start;
  long steps = 0;
  PlanarRational avg_displacement;
  OrbitClassification classification;
};

// One sample per start.  Exact orbits are limited to the gap window K-1;
// double orbits may run past it and are classified without window checks.
std::vector<RotationSample> empirical_cloud(const DenjoyModel& m, const std::vector<SkeletonPoint>& starts,
                                            long horizon, Precision precision = Precision::double_precision);

RotationSample sample_orbit(const DenjoyModel& m, const SkeletonPoint& start, long horizon,
                            Precision precision = Precision::double_precision);

struct ContainmentViolation {
  std::size_t index = 0;
  PlanarRational avg;
  Rational squared_distance;
  double ratio = 0;  // distance / slack
};

struct ComparisonReport {
  long N = 0;
  long horizon = 0;
  HullPolygon analytic;   // omega_set(N) with its two accumulation points
  HullPolygon observed;   // hull of empirical averages and certified vectors
  Rational hausdorff_bound;
  Rational slack;         // 2B/horizon
  double max_ratio = 0;   // worst distance / slack over all samples
  std::vector<ContainmentViolation> containment_violations;
};

ComparisonReport compare_to_analytic(const DenjoyModel& m, long N, const std::vector<RotationSample>& samples,
                                     long horizon);
ComparisonReport compare_to_analytic(const DenjoyModel& m, long N, const std::vector<RotationSample>& samples,
                                     long horizon, const std::vector<PlanarRational>& certified);

std::string cloud_to_csv(const std::vector<RotationSample>& samples);

}  // namespace skelrot
