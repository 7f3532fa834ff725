#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace mptn {

inline constexpr double kEarthRadiusM = 6'371'000.0;

enum class Mode { Metro, Bus, Ferry, Railway };

inline constexpr std::array<Mode, 4> kAllModes = {Mode::Metro, Mode::Bus, Mode::Ferry,
                                                  Mode::Railway};

std::string_view to_string(Mode mode);
/// Case-insensitive; accepts "rail" as an alias for Railway.
std::optional<Mode> parse_mode(std::string_view text);

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

/// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine(LatLon a, LatLon b);

/// Unit-sphere Cartesian position scaled by the Earth radius.
std::array<double, 3> to_cartesian(LatLon p);

/// Straight-line chord length matching a great-circle distance.
double chord_for_arc(double arc_m);

bool valid_coordinates(LatLon p);

}  // namespace mptn
