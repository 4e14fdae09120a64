#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mallnav/evalmetrics.hpp"
#include "mallnav/extract.hpp"
#include "mallnav/layers.hpp"
#include "mallnav/narrate.hpp"
#include "mallnav/register.hpp"
#include "mallnav/route.hpp"

namespace mallnav {

struct PipelineConfig {
  std::string map_image;
  std::string directory_image;
  std::string sidecar;
  std::string output_dir = "out";
  GeoAnchor anchor;
  ExtractConfig extract;
  CpdParams cpd;
  CostWeights weights;
  NarrationConfig narration;
  int grid_step = 4;
  std::vector<ColorSpec> seed_colors;
  /// Coarse similarity alignment before the configured registration. The coarse pass treats
  /// the directory as the data set, so directory-only stores fall to the outlier term.
  bool coarse_prealign = true;

  /// Checks parameters and that every input file exists.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Relative paths in the document resolve against `base_dir`. Missing keys keep defaults.
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::string& path);

struct Features {
  RasterImage map;
  int directory_width = 0;
  int directory_height = 0;
  LabeledRegions labels;
  BinaryMask roads;
  std::vector<StoreRegion> parking;
  BinaryMask walkways;
  std::vector<Polygon> walkway_polygons;
  std::vector<StoreRegion> stores_map;
  std::vector<StoreRegion> stores_directory;

  nlohmann::json to_json() const;
};

struct Registration {
  /// Directory -> map affine applied before `result.transform`, when enabled.
  std::optional<AffineTransform> prealign;
  /// Directory stores the coarse pass left to the outlier term; excluded from the fine pass.
  std::vector<int> unmatched_directory_ids;
  std::vector<double> prealign_trace;
  RegistrationResult result;
  /// Directory stores in base-map pixels, directory ids kept.
  std::vector<StoreRegion> warped;

  Point2 apply(Point2 directory_point) const;
  nlohmann::json summary() const;
};

Features extract_features(const PipelineConfig& cfg);
Registration register_directory(const PipelineConfig& cfg, const Features& features);
FusedMap fuse(const PipelineConfig& cfg, const Features& features, const Registration& reg,
              const NameSidecar& names);
FusedMap run_pipeline(const PipelineConfig& cfg);

/// Warped directory footprints blended at 50% over the base map.
RasterImage render_overlay(const RasterImage& base, std::span<const StoreRegion> warped);

/// Masks of the base-map store footprints and of the registered directory footprints.
std::pair<BinaryMask, BinaryMask> store_masks(const FusedMap& map);

// Command adapters. Each writes its artifacts under cfg.output_dir and returns a summary.
nlohmann::json cmd_extract(const PipelineConfig& cfg);
nlohmann::json cmd_register(const PipelineConfig& cfg);
/// Returns the path of the written fused map.
std::string cmd_fuse(const PipelineConfig& cfg);

struct RouteAnswer {
  Route route;
  Utterance utterance;
};

/// Stores are given by id or by exact name.
RouteAnswer cmd_route(const FusedMap& map, const std::string& from, const std::string& to, const CostWeights& w,
                      const NarrationConfig& cfg, int grid_step = 4);

enum class DescribeKind { where, poi, info };
DescribeKind parse_describe_kind(std::string_view text);

Utterance cmd_describe(const FusedMap& map, const Pose& pose, DescribeKind kind, std::size_t k,
                       const NarrationConfig& cfg, int grid_step = 4);

OverlapReport cmd_eval(const FusedMap& map);
OverlapReport cmd_eval_masks(const std::string& map_mask_png, const std::string& registered_mask_png);
/// Parking detection in the fused map against a fixture truth file.
PrecisionRecall cmd_eval_parking(const FusedMap& map, const std::string& truth_path, double match_dist = 10.0);

/// Narration settings with the ground scale taken from the map.
NarrationConfig narration_for(const FusedMap& map, NarrationConfig cfg);

const Store& resolve_store(const FusedMap& map, const std::string& id_or_name);

/// Line-oriented walk-through session: each command line yields one response block.
class WalkSession {
 public:
  WalkSession(FusedMap map, Pose start, NarrationConfig cfg, CostWeights weights, int grid_step = 4);

  /// Commands: step <feet>, turn <degrees>, face <degrees>, where, poi [k], dest <store>,
  /// info, tag <text>, pose, help. Errors are reported in the response, not thrown.
  std::string execute(const std::string& line);

  const Pose& pose() const { return pose_; }
  const FusedMap& map() const { return map_; }

 private:
  FusedMap map_;
  WalkGraph graph_;
  Pose pose_;
  NarrationConfig cfg_;
  CostWeights weights_;
};

/// Reads commands until "quit" or end of input, writing a prompt before each.
void run_walk(WalkSession& session, std::istream& in, std::ostream& out);

}  // namespace mallnav
