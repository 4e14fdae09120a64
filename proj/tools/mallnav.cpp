// Command-line front end: every subcommand is a thin adapter over the pipeline library.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mallnav/error.hpp"
#include "mallnav/fixture.hpp"
#include "mallnav/pipeline.hpp"

namespace {

using namespace mallnav;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitPipeline = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::out_of_bounds:
    case ErrorKind::parse:
    case ErrorKind::io:
      return kExitInput;
    case ErrorKind::degenerate_input:
    case ErrorKind::no_route:
      return kExitPipeline;
  }
  return kExitPipeline;
}

struct NarrationFlags {
  std::string unit = "feet";
  double step_length = 2.5;
  std::string frame = "egocentric";
  std::string vision = "blind";

  void add(CLI::App* app) {
    app->add_option("--unit", unit, "Distance unit: feet or steps")->check(CLI::IsMember({"feet", "steps"}));
    app->add_option("--step-length", step_length, "Step length in feet")->check(CLI::PositiveNumber);
    app->add_option("--frame", frame, "egocentric or allocentric")->check(CLI::IsMember({"egocentric", "allocentric"}));
    app->add_option("--vision", vision, "blind or low_vision")->check(CLI::IsMember({"blind", "low_vision"}));
  }
  NarrationConfig config() const {
    NarrationConfig c;
    c.distance_unit = parse_distance_unit(unit);
    c.step_length_feet = step_length;
    c.frame = parse_frame(frame);
    c.vision = parse_vision(vision);
    return c;
  }
};

struct WeightFlags {
  CostWeights w;

  void add(CLI::App* app) {
    app->add_option("--walkway-weight", w.walkway, "Walkway cost multiplier");
    app->add_option("--crossing-weight", w.crossing, "Street crossing cost multiplier");
    app->add_option("--parking-weight", w.parking, "Parking lot cost multiplier");
    app->add_option("--unsafe-weight", w.unsafe_street_crossing, "Extra multiplier for unsafe crossings");
  }
};

void print_utterance(const Utterance& u, bool as_json) {
  if (as_json) {
    std::cout << u.to_json().dump(2) << "\n";
  } else {
    std::cout << u.text();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuse street maps with store directories and narrate accessible walking routes"};
  app.require_subcommand(1);

  // fixture
  FixtureParams fp;
  std::string fixture_out = "fixture";
  auto* fixture = app.add_subcommand("fixture", "Generate a synthetic map, directory and ground truth");
  fixture->add_option("--seed", fp.seed, "Random seed");
  fixture->add_option("--stores", fp.n_stores, "Number of labeled stores");
  fixture->add_option("--noise", fp.noise, "Per-channel pixel noise amplitude");
  fixture->add_option("--jitter", fp.jitter, "Directory jitter amplitude in pixels");
  fixture->add_option("--clutter", fp.clutter, "Directory-only kiosks");
  fixture->add_option("--out", fixture_out, "Output directory");

  // pipeline stages
  std::string config_path, out_override, mode_override;
  int grid_override = 0;
  const auto add_pipeline = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Pipeline configuration JSON")->required();
    sub->add_option("--out", out_override, "Output directory (overrides the config)");
    sub->add_option("--mode", mode_override, "Registration mode")->check(CLI::IsMember({"rigid", "affine", "nonrigid"}));
    sub->add_option("--grid-step", grid_override, "Walk graph grid step in pixels")->check(CLI::PositiveNumber);
    return sub;
  };
  auto* extract = add_pipeline("extract", "Detect roads, parking, walkways and stores");
  auto* reg = add_pipeline("register", "Register directory stores onto the map");
  auto* fuse_cmd = add_pipeline("fuse", "Run the full pipeline and write the fused map");

  // queries over a fused map
  std::string map_path, from, to, kind = "where", truth_path, mask_a, mask_b;
  double x = 0.0, y = 0.0, heading = 0.0;
  std::size_t k = 3;
  int grid_step = 4;
  bool as_json = false;
  NarrationFlags nflags;
  WeightFlags wflags;

  auto* route = app.add_subcommand("route", "Plan a walking route between two stores");
  route->add_option("--map", map_path, "Fused map JSON")->required();
  route->add_option("--from", from, "Origin store id or name")->required();
  route->add_option("--to", to, "Destination store id or name")->required();
  route->add_option("--grid-step", grid_step, "Walk graph grid step in pixels")->check(CLI::PositiveNumber);
  route->add_flag("--json", as_json, "Emit JSON");
  nflags.add(route);
  wflags.add(route);

  auto* describe = app.add_subcommand("describe", "Describe the surroundings of a pose");
  describe->add_option("--map", map_path, "Fused map JSON")->required();
  describe->add_option("--x", x, "Pose x in base pixels")->required();
  describe->add_option("--y", y, "Pose y in base pixels")->required();
  describe->add_option("--heading", heading, "Degrees clockwise from North");
  describe->add_option("--kind", kind, "where, poi or info")->check(CLI::IsMember({"where", "poi", "info"}));
  describe->add_option("--k", k, "Number of points of interest")->check(CLI::PositiveNumber);
  describe->add_option("--grid-step", grid_step, "Walk graph grid step in pixels")->check(CLI::PositiveNumber);
  describe->add_flag("--json", as_json, "Emit JSON");
  nflags.add(describe);

  auto* eval = app.add_subcommand("eval", "Overlap and detection metrics");
  eval->add_option("--map", map_path, "Fused map JSON");
  eval->add_option("--truth", truth_path, "Fixture truth JSON for parking precision/recall");
  eval->add_option("--mask-a", mask_a, "Base-map store mask PNG");
  eval->add_option("--mask-b", mask_b, "Registered store mask PNG");
  eval->add_flag("--json", as_json, "Emit JSON");

  auto* walk = app.add_subcommand("walk", "Interactive walk-through on a fused map");
  walk->add_option("--map", map_path, "Fused map JSON")->required();
  walk->add_option("--x", x, "Start x in base pixels")->required();
  walk->add_option("--y", y, "Start y in base pixels")->required();
  walk->add_option("--heading", heading, "Degrees clockwise from North");
  walk->add_option("--grid-step", grid_step, "Walk graph grid step in pixels")->check(CLI::PositiveNumber);
  nflags.add(walk);
  wflags.add(walk);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const auto load_config = [&] {
      PipelineConfig cfg = load_pipeline_config(config_path);
      if (!out_override.empty()) cfg.output_dir = out_override;
      if (!mode_override.empty()) cfg.cpd.mode = parse_cpd_mode(mode_override);
      if (grid_override > 0) cfg.grid_step = grid_override;
      return cfg;
    };

    if (fixture->parsed()) {
      write_fixture(generate_fixture(fp), fixture_out);
      std::cout << "wrote fixture to " << fixture_out << "\n";
    } else if (extract->parsed()) {
      const json f = cmd_extract(load_config());
      std::cout << f["stores_map"].size() << " map stores, " << f["stores_directory"].size() << " directory stores, "
                << f["parking"].size() << " parking lots\n";
    } else if (reg->parsed()) {
      const json r = cmd_register(load_config());
      std::cout << "registration " << (r["converged"].get<bool>() ? "converged" : "stopped") << " after "
                << r["iterations"] << " iterations, sigma2 " << r["sigma2"] << "\n";
    } else if (fuse_cmd->parsed()) {
      std::cout << "wrote " << cmd_fuse(load_config()) << "\n";
    } else if (route->parsed()) {
      const FusedMap map = load_fused_map(map_path);
      const RouteAnswer ans = cmd_route(map, from, to, wflags.w, narration_for(map, nflags.config()), grid_step);
      if (as_json) {
        std::cout << json{{"route", route_to_json(ans.route)}, {"utterance", ans.utterance.to_json()}}.dump(2) << "\n";
      } else {
        std::cout << ans.utterance.text();
      }
    } else if (describe->parsed()) {
      const FusedMap map = load_fused_map(map_path);
      print_utterance(cmd_describe(map, {{x, y}, heading}, parse_describe_kind(kind), k,
                                   narration_for(map, nflags.config()), grid_step),
                      as_json);
    } else if (eval->parsed()) {
      json out;
      if (!mask_a.empty() || !mask_b.empty()) {
        if (mask_a.empty() || mask_b.empty()) throw Error(ErrorKind::invalid_argument, "--mask-a and --mask-b go together");
        out["overlap"] = cmd_eval_masks(mask_a, mask_b).to_json();
      } else if (!map_path.empty()) {
        const FusedMap map = load_fused_map(map_path);
        out["overlap"] = cmd_eval(map).to_json();
        if (!truth_path.empty()) out["parking"] = cmd_eval_parking(map, truth_path).to_json();
      } else {
        throw Error(ErrorKind::invalid_argument, "eval needs --map or --mask-a/--mask-b");
      }
      if (as_json) {
        std::cout << out.dump(2) << "\n";
      } else {
        const json& o = out["overlap"];
        std::printf("overlap %.2f%% (%lld of %lld map store pixels)\n", o["overlap_percent"].get<double>(),
                    o["intersection_pixels"].get<long long>(), o["map_store_pixels"].get<long long>());
        if (out.contains("parking")) {
          std::printf("parking precision %.4f recall %.4f\n", out["parking"]["precision"].get<double>(),
                      out["parking"]["recall"].get<double>());
        }
      }
    } else if (walk->parsed()) {
      WalkSession session(load_fused_map(map_path), {{x, y}, heading}, nflags.config(), wflags.w, grid_step);
      run_walk(session, std::cin, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return 0;
}
