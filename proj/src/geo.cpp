#include "mptn/geo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace mptn {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Metro:
      return "metro";
    case Mode::Bus:
      return "bus";
    case Mode::Ferry:
      return "ferry";
    case Mode::Railway:
      return "railway";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "metro") return Mode::Metro;
  if (lower == "bus") return Mode::Bus;
  if (lower == "ferry") return Mode::Ferry;
  if (lower == "railway" || lower == "rail") return Mode::Railway;
  return std::nullopt;
}

double haversine(LatLon a, LatLon b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

std::array<double, 3> to_cartesian(LatLon p) {
  const double phi = p.lat * kDegToRad;
  const double lambda = p.lon * kDegToRad;
  return {kEarthRadiusM * std::cos(phi) * std::cos(lambda),
          kEarthRadiusM * std::cos(phi) * std::sin(lambda), kEarthRadiusM * std::sin(phi)};
}

double chord_for_arc(double arc_m) {
  const double theta = std::min(arc_m / kEarthRadiusM, std::numbers::pi);
  return 2.0 * kEarthRadiusM * std::sin(theta / 2.0);
}

bool valid_coordinates(LatLon p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

}  // namespace mptn
