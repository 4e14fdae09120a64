#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mallnav/layers.hpp"
#include "mallnav/route.hpp"

namespace mallnav {

enum class DistanceUnit { feet, steps };
enum class Frame { egocentric, allocentric };
enum class Vision { blind, low_vision };

std::string_view to_string(DistanceUnit u);
std::string_view to_string(Frame f);
std::string_view to_string(Vision v);
DistanceUnit parse_distance_unit(std::string_view text);
Frame parse_frame(std::string_view text);
Vision parse_vision(std::string_view text);

struct NarrationConfig {
  DistanceUnit distance_unit = DistanceUnit::feet;
  double step_length_feet = 2.5;
  Frame frame = Frame::egocentric;
  Vision vision = Vision::blind;
  double pixels_per_foot = 1.0;
  double pass_radius = 25.0;  // pixels
  double tag_radius = 40.0;   // pixels

  void validate() const;
  double to_feet(double pixels) const { return pixels / pixels_per_foot; }
};

enum class UtteranceKind { where_am_i, poi, destination, extended };

std::string_view to_string(UtteranceKind k);

/// One fact object per sentence; tests read the facts instead of the prose.
struct Utterance {
  UtteranceKind kind = UtteranceKind::where_am_i;
  std::vector<std::string> sentences;
  std::vector<nlohmann::json> facts;

  void add(std::string sentence, nlohmann::json fact);
  /// One sentence per line.
  std::string text() const;
  nlohmann::json to_json() const;
};

/// Throws invalid_argument unless steps >= 1 and walked_feet > 0.
double calibrate_steps(double walked_feet, int steps);

struct FormattedDistance {
  std::string text;
  long count = 0;  // rounded feet or steps
  DistanceUnit unit = DistanceUnit::feet;
  double feet = 0.0;

  nlohmann::json to_json() const;
};

FormattedDistance format_distance(double feet, const NarrationConfig& cfg);

enum class DirectionTerm {
  straight_ahead,
  diagonally_right,
  right,
  behind_right,
  behind,
  behind_left,
  left,
  diagonally_left,
};

std::string_view to_string(DirectionTerm t);
DirectionTerm mirror(DirectionTerm t);

/// Eight half-open 45-degree sectors, the first being [-22.5, 22.5).
DirectionTerm quantize_direction(double relative_bearing);

/// Eight-way compass word with sectors centered on North.
std::string compass_word(double heading);

Utterance describe_position(const FusedMap& map, const WalkGraph& g, const Pose& pose, const NarrationConfig& cfg);
Utterance describe_poi(const FusedMap& map, const Pose& pose, std::size_t k, const NarrationConfig& cfg);
/// Throws invalid_argument for an empty route. With `start_heading`, the first
/// instruction is relative to it.
Utterance describe_route(const FusedMap& map, const WalkGraph& g, const Route& route, const NarrationConfig& cfg,
                         std::optional<double> start_heading = std::nullopt);
Utterance extended_info(const FusedMap& map, const Pose& pose, const NarrationConfig& cfg);

}  // namespace mallnav
