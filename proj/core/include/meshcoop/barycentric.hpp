#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "meshcoop/allocation.hpp"

namespace meshcoop {

using Simplex3 = std::array<double, 3>;

// λ_m = (x_m − v({m})) / (v(M) − Σ_j v({j})): position of an allocation in
// the imputation triangle of a three-player game.
struct BarycentricPoint {
  std::string label;
  Simplex3 lambda{};
};

struct BarycentricPlot {
  std::array<double, 3> singleton_values{};
  double surplus = 0.0;             // v(M) − Σ v({m})
  std::vector<Simplex3> core;       // convex polygon, empty when the core is empty
  std::vector<BarycentricPoint> points;
};

// Throws DomainError unless M = 3, and for a non-positive surplus.
BarycentricPoint to_barycentric(const CharacteristicFunction& cf, const Allocation& x, std::string label);

// Imputation triangle clipped by λ_k <= (v(M) − v(M∖{k}) − v({k})) / surplus.
BarycentricPlot barycentric_plot(const CharacteristicFunction& cf, const std::vector<BarycentricPoint>& points);

// Whether λ lies in the (closed) core polygon, within tol.
bool core_contains(const BarycentricPlot& plot, const Simplex3& lambda, double tol = 1e-9);

// 800×700 SVG: triangle with vertices SP1 (bottom left), SP2 (bottom right),
// SP3 (top); the complement of the core shaded at 25% opacity; one labeled
// marker per point. Byte-identical for identical input.
std::string render_barycentric_svg(const BarycentricPlot& plot);

void render_barycentric(const CharacteristicFunction& cf, const std::vector<Allocation>& allocations,
                        const std::filesystem::path& path);

}  // namespace meshcoop
