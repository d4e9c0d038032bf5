#include "meshcoop/barycentric.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "meshcoop/error.hpp"

namespace meshcoop {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 700.0;

struct Point2 {
  double x;
  double y;
};

// SP1 bottom left, SP2 bottom right, SP3 top.
constexpr std::array<Point2, 3> kVertices{{{100.0, 620.0}, {700.0, 620.0}, {400.0, 620.0 - 519.6152422706632}}};

Point2 to_canvas(const Simplex3& l) {
  Point2 p{0.0, 0.0};
  for (std::size_t k = 0; k < 3; ++k) {
    p.x += l[k] * kVertices[k].x;
    p.y += l[k] * kVertices[k].y;
  }
  return p;
}

// Area in (λ1, λ2) coordinates; the full triangle has area 1/2.
double simplex_area(const std::vector<Simplex3>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Simplex3& a = poly[i];
    const Simplex3& b = poly[(i + 1) % poly.size()];
    twice += a[0] * b[1] - b[0] * a[1];
  }
  return std::abs(twice) / 2.0;
}

void require_three(const CharacteristicFunction& cf) {
  if (cf.providers() != 3) {
    throw DomainError("barycentric plot supports exactly 3 providers, got " + std::to_string(cf.providers()));
  }
  cf.require_complete();
}

double surplus_of(const CharacteristicFunction& cf) {
  double s = cf(cf.grand());
  for (ProviderId m = 1; m <= 3; ++m) s -= cf(Coalition::singleton(m));
  if (!(s > 1e-9 * std::max(1.0, std::abs(cf(cf.grand()))))) {
    throw DomainError("barycentric plot: degenerate imputation simplex (v(M) <= sum of singleton values)");
  }
  return s;
}

// Keeps the part of `poly` where lambda[k] <= bound.
std::vector<Simplex3> clip(const std::vector<Simplex3>& poly, std::size_t k, double bound) {
  std::vector<Simplex3> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Simplex3& a = poly[i];
    const Simplex3& b = poly[(i + 1) % n];
    const double fa = a[k] - bound;
    const double fb = b[k] - bound;
    if (fa <= 0) out.push_back(a);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      const double t = fa / (fa - fb);
      Simplex3 c{};
      for (std::size_t j = 0; j < 3; ++j) c[j] = a[j] + t * (b[j] - a[j]);
      out.push_back(c);
    }
  }
  return out;
}

std::string fmt_point(Point2 p) { return fmt::format("{:.3f},{:.3f}", p.x, p.y); }

std::string polygon_path(const std::vector<Simplex3>& poly) {
  std::string d;
  for (std::size_t i = 0; i < poly.size(); ++i) d += (i ? " L " : "M ") + fmt_point(to_canvas(poly[i]));
  return d + " Z";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

BarycentricPoint to_barycentric(const CharacteristicFunction& cf, const Allocation& x, std::string label) {
  require_three(cf);
  if (x.payoffs.size() != 3) throw DomainError("barycentric point needs a 3-provider allocation");
  const double s = surplus_of(cf);
  BarycentricPoint p;
  p.label = std::move(label);
  for (ProviderId m = 1; m <= 3; ++m) {
    p.lambda[static_cast<std::size_t>(m - 1)] = (x[m] - cf(Coalition::singleton(m))) / s;
  }
  return p;
}

BarycentricPlot barycentric_plot(const CharacteristicFunction& cf, const std::vector<BarycentricPoint>& points) {
  require_three(cf);
  BarycentricPlot plot;
  plot.surplus = surplus_of(cf);
  for (ProviderId m = 1; m <= 3; ++m) plot.singleton_values[static_cast<std::size_t>(m - 1)] = cf(Coalition::singleton(m));
  std::vector<Simplex3> poly{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  const double vm = cf(cf.grand());
  for (ProviderId k = 1; k <= 3 && !poly.empty(); ++k) {
    const auto at = static_cast<std::size_t>(k - 1);
    const double bound = (vm - cf(cf.grand().without(k)) - plot.singleton_values[at]) / plot.surplus;
    poly = clip(poly, at, bound);
  }
  plot.core = std::move(poly);
  plot.points = points;
  return plot;
}

bool core_contains(const BarycentricPlot& plot, const Simplex3& lambda, double tol) {
  if (plot.core.size() < 3) {
    // Degenerate core (point or segment): distance to the closest point.
    if (plot.core.empty()) return false;
    const Simplex3& a = plot.core.front();
    const Simplex3& b = plot.core.back();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      num += (lambda[j] - a[j]) * (b[j] - a[j]);
      den += (b[j] - a[j]) * (b[j] - a[j]);
    }
    const double t = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
    double d = 0.0;
    for (std::size_t j = 0; j < 3; ++j) d = std::max(d, std::abs(a[j] + t * (b[j] - a[j]) - lambda[j]));
    return d <= tol;
  }
  // Convex polygon in canvas coordinates: a consistent sign of all edge cross products.
  const Point2 p = to_canvas(lambda);
  const double scale = 600.0;
  int sign = 0;
  for (std::size_t i = 0; i < plot.core.size(); ++i) {
    const Point2 a = to_canvas(plot.core[i]);
    const Point2 b = to_canvas(plot.core[(i + 1) % plot.core.size()]);
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len == 0.0) continue;
    const double cross = ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / len;
    if (std::abs(cross) <= tol * scale) continue;
    const int s = cross > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return true;
}

std::string render_barycentric_svg(const BarycentricPlot& plot) {
  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} {1:.0f}\">\n",
      kWidth, kHeight);
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "  <text x=\"400\" y=\"40\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
         "Core of the three-provider game (shaded: unstable imputations)</text>\n";
  const std::vector<Simplex3> triangle{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  // Nothing is shaded when the core is the whole triangle.
  if (plot.core.size() < 3 || simplex_area(plot.core) < 0.5 * (1.0 - 1e-12)) {
    std::string shaded = polygon_path(triangle);
    if (plot.core.size() >= 3) shaded += " " + polygon_path(plot.core);
    svg += "  <path id=\"unstable\" d=\"" + shaded +
           "\" fill=\"#555555\" fill-opacity=\"0.25\" fill-rule=\"evenodd\" stroke=\"none\"/>\n";
  }
  if (plot.core.size() >= 2) {
    svg += "  <path id=\"core\" d=\"" + polygon_path(plot.core) + "\" fill=\"none\" stroke=\"#2060c0\" stroke-width=\"1.5\"/>\n";
  }
  svg += "  <path id=\"imputations\" d=\"" + polygon_path(triangle) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  const std::array<const char*, 3> names{"SP1", "SP2", "SP3"};
  const std::array<Point2, 3> offsets{{{-30.0, 25.0}, {30.0, 25.0}, {0.0, -12.0}}};
  for (std::size_t k = 0; k < 3; ++k) {
    svg += fmt::format(
        "  <text x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
        kVertices[k].x + offsets[k].x, kVertices[k].y + offsets[k].y, names[k]);
  }
  const std::array<const char*, 4> colors{"#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  for (std::size_t i = 0; i < plot.points.size(); ++i) {
    const auto& pt = plot.points[i];
    const Point2 c = to_canvas(pt.lambda);
    const char* color = colors[i % colors.size()];
    svg += fmt::format("  <circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"5\" fill=\"{}\" stroke=\"black\"/>\n", c.x, c.y, color);
    svg += fmt::format(
        "  <text x=\"{:.3f}\" y=\"{:.3f}\" font-family=\"sans-serif\" font-size=\"13\" fill=\"{}\">{}</text>\n",
        c.x + 8.0, c.y - 8.0 - 14.0 * static_cast<double>(i % 2), color, escape(pt.label));
    svg += fmt::format(
        "  <text x=\"40\" y=\"{:.0f}\" font-family=\"monospace\" font-size=\"12\">{} : lambda = ({:.4f}, {:.4f}, {:.4f})</text>\n",
        660.0 + 16.0 * static_cast<double>(i), escape(pt.label), pt.lambda[0], pt.lambda[1], pt.lambda[2]);
  }
  svg += "</svg>\n";
  return svg;
}

void render_barycentric(const CharacteristicFunction& cf, const std::vector<Allocation>& allocations,
                        const std::filesystem::path& path) {
  std::vector<BarycentricPoint> points;
  for (const auto& a : allocations) {
    points.push_back(to_barycentric(cf, a, a.method == AllocationMethod::dual_payoff ? "dual payoff" : "Shapley value"));
  }
  const std::string svg = render_barycentric_svg(barycentric_plot(cf, points));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << svg;
}

}  // namespace meshcoop
