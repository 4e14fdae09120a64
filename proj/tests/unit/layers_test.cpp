#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mallnav/error.hpp"
#include "mallnav/layers.hpp"

namespace mallnav {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const GeoAnchor kAnchor = GeoAnchor::north_up({-111.95, 33.30}, 1e-5);

BaseLayer base_layer() {
  BaseLayer b;
  b.image_path = "map.png";
  b.width = 200;
  b.height = 100;
  b.anchor = kAnchor;
  return b;
}

StoreRegion store_region(int id, double x0, double y0, double w, double h) {
  StoreRegion s;
  s.id = id;
  s.footprint = Polygon{{{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}}};
  s.centroid = {x0 + w / 2, y0 + h / 2};
  s.area = std::int64_t(w * h);
  s.source = StoreSource::directory;
  return s;
}

FusedMap sample_map() {
  const std::vector<StoreRegion> dir{store_region(1, 10, 10, 30, 20), store_region(2, 60.1, 10.7, 30, 20),
                                     store_region(3, 110, 10, 1.0 / 3.0, 20)};
  NameSidecar names;
  names.stores = {{1, "Cactus Music"}, {2, "Quail \"Q\" Bakery"}};
  Annotation stop{AnnotationKind::bus_stop, {{5.5, 50.25}}, "Route 72 stop", SafetyClass::safe};
  Annotation street{AnnotationKind::street, {{0, 60}, {200, 60}, {200, 70}, {0, 70}}, "Camelback Road",
                    SafetyClass::unsafe};
  Annotation crossing{AnnotationKind::crossing, {{50, 55}, {50, 75}}, std::nullopt, SafetyClass::caution};
  names.annotations = {stop, street, crossing};
  Annotation lot{AnnotationKind::parking, {{10, 80}, {60, 80}, {60, 98}, {10, 98}}, "Parking lot 1",
                 SafetyClass::safe};
  Provenance prov;
  prov.registration = {{"iterations", 12}, {"sigma2", 1.0e-7}};
  prov.config = {{"grid_step", 4}};
  prov.pixels_per_foot = 0.1234567890123;
  FusedMap m = build_fused_map(base_layer(), {}, dir, names, {lot}, prov);
  UserTag tag{{30.0, 40.0}, "Bench under the tree", "sam", Timestamp{std::chrono::seconds{1700000000}}};
  return add_user_tag(m, tag);
}

TEST(GeoAnchor, Examples) {
  const GeoPoint g = kAnchor.pixel_to_geo({0, 0});
  EXPECT_DOUBLE_EQ(g.lon, -111.95);
  EXPECT_DOUBLE_EQ(g.lat, 33.30);
  EXPECT_NEAR(kAnchor.pixel_to_geo({100, 0}).lon, -111.949, 1e-12);
  EXPECT_LT(kAnchor.pixel_to_geo({0, 10}).lat, 33.30);
}

TEST(GeoAnchor, RoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-500.0, 3000.0);
  const GeoAnchor skewed(GeoAnchor::Matrix{{{2e-6, 3e-7, -111.9}, {-4e-7, -2.5e-6, 33.4}}});
  for (const GeoAnchor& a : {kAnchor, skewed}) {
    for (int i = 0; i < 1000; ++i) {
      const Point2 p{u(rng), u(rng)};
      const Point2 q = a.geo_to_pixel(a.pixel_to_geo(p));
      ASSERT_NEAR(q.x, p.x, 1e-6);
      ASSERT_NEAR(q.y, p.y, 1e-6);
    }
  }
}

TEST(GeoAnchor, SingularRejected) {
  EXPECT_THROW(GeoAnchor(GeoAnchor::Matrix{{{1, 2, 0}, {2, 4, 0}}}), Error);
}

TEST(GeoAnchor, GroundScale) {
  // 1e-5 degrees of latitude is about 1.11 m, or 3.65 ft.
  const double ppf = kAnchor.pixels_per_foot();
  EXPECT_GT(ppf, 0.2);
  EXPECT_LT(ppf, 0.4);
}

TEST(Rfc3339, RoundTrip) {
  const Timestamp t{std::chrono::seconds{1700000000}};
  EXPECT_EQ(format_rfc3339(t), "2023-11-14T22:13:20Z");
  EXPECT_EQ(parse_rfc3339("2023-11-14T22:13:20Z"), t);
  EXPECT_EQ(parse_rfc3339("2023-11-14T22:13:20+00:00"), t);
  EXPECT_THROW(parse_rfc3339("2023-11-14 22:13"), Error);
}

TEST(BuildFusedMap, EmptyInputs) {
  const FusedMap m = build_fused_map(base_layer(), {}, {}, NameSidecar{}, {});
  EXPECT_TRUE(m.directory.empty());
  EXPECT_TRUE(m.annotations.empty());
  EXPECT_TRUE(m.tags.empty());
  EXPECT_EQ(m.provenance.dropped_stores, 0);
}

TEST(BuildFusedMap, NamesFromSidecarAndDefaults) {
  const FusedMap m = sample_map();
  ASSERT_EQ(m.directory.size(), 3u);
  EXPECT_EQ(m.directory[0].name, "Cactus Music");
  EXPECT_EQ(m.directory[2].name, "Store 3");
  EXPECT_EQ(m.find_store("Cactus Music")->id, 1);
  EXPECT_EQ(m.find_store(2)->name, "Quail \"Q\" Bakery");
  EXPECT_EQ(m.find_store(99), nullptr);
  EXPECT_EQ(m.annotations.size(), 4u);
}

TEST(BuildFusedMap, DropsStoresOutsideBounds) {
  const std::vector<StoreRegion> dir{store_region(1, 10, 10, 30, 20), store_region(2, 500, 10, 30, 20)};
  const FusedMap m = build_fused_map(base_layer(), {}, dir, NameSidecar{}, {});
  EXPECT_EQ(m.directory.size(), 1u);
  EXPECT_EQ(m.provenance.dropped_stores, 1);
}

TEST(BuildFusedMap, DuplicateSidecarIds) {
  NameSidecar names;
  names.stores = {{1, "A"}, {1, "B"}};
  try {
    build_fused_map(base_layer(), {}, {}, names, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
  }
  const json doc = json::parse(R"({"stores": [{"id": 4, "name": "A"}, {"id": 4, "name": "B"}]})");
  EXPECT_THROW(parse_sidecar(doc), Error);
}

TEST(UserTags, AppendOrderAndBounds) {
  FusedMap m = build_fused_map(base_layer(), {}, {}, NameSidecar{}, {});
  const FusedMap one = add_user_tag(m, {{1, 1}, "first", "a", {}});
  EXPECT_EQ(one.tags.size(), 1u);
  EXPECT_TRUE(m.tags.empty());
  for (int i = 0; i < 50; ++i) m = add_user_tag(m, {{double(i), 5.0}, "tag " + std::to_string(i), "a", {}});
  ASSERT_EQ(m.tags.size(), 50u);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(m.tags[std::size_t(i)].text, "tag " + std::to_string(i));
  try {
    add_user_tag(m, {{-1.0, 5.0}, "outside", "a", {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::out_of_bounds);
  }
}

TEST(Persistence, RoundTripAndCanonicalBytes) {
  const FusedMap empty = build_fused_map(base_layer(), {}, {}, NameSidecar{}, {});
  EXPECT_EQ(deserialize_fused_map(serialize_fused_map(empty)), empty);

  const FusedMap m = sample_map();
  const std::string text = serialize_fused_map(m);
  EXPECT_EQ(text, serialize_fused_map(m));
  EXPECT_EQ(text.back(), '\n');
  const FusedMap back = deserialize_fused_map(text);
  EXPECT_EQ(back, m);
  EXPECT_EQ(serialize_fused_map(back), text);
  EXPECT_EQ(json::parse(text)["format_version"], 1);

  const fs::path dir = fs::temp_directory_path() / "mallnav_layers_test";
  fs::create_directories(dir);
  const std::string path = (dir / "map.json").string();
  save_fused_map(m, path);
  EXPECT_EQ(load_fused_map(path), m);
  save_fused_map(m, (dir / "again.json").string());
  std::ifstream a(path), b(dir / "again.json");
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(a), {}), std::string(std::istreambuf_iterator<char>(b), {}));
  fs::remove_all(dir);
}

TEST(Persistence, TagsDoNotTouchOtherTiers) {
  const FusedMap m = sample_map();
  const FusedMap more = add_user_tag(m, {{100, 50}, "Loose paving", "kim", {}});
  EXPECT_EQ(base_to_json(m.base).dump(), base_to_json(more.base).dump());
  EXPECT_EQ(directory_to_json(m.directory).dump(), directory_to_json(more.directory).dump());
  EXPECT_EQ(annotations_to_json(m.annotations).dump(), annotations_to_json(more.annotations).dump());
  const json a = json::parse(serialize_fused_map(m)), b = json::parse(serialize_fused_map(more));
  for (const char* tier : {"base", "directory", "annotations", "provenance"}) EXPECT_EQ(a[tier].dump(), b[tier].dump());
  EXPECT_NE(a["tags"], b["tags"]);
}

std::string parse_error(const std::string& text) {
  try {
    deserialize_fused_map(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    return e.what();
  }
  ADD_FAILURE() << "no error";
  return {};
}

TEST(Persistence, ErrorsNameTierAndIndex) {
  const std::string text = serialize_fused_map(sample_map());
  EXPECT_FALSE(parse_error(text.substr(0, text.size() / 2)).empty());

  json doc = json::parse(text);
  doc["directory"][1].erase("footprint");
  EXPECT_NE(parse_error(doc.dump()).find("directory[1]"), std::string::npos);

  doc = json::parse(text);
  doc["annotations"][2]["kind"] = "swamp";
  EXPECT_NE(parse_error(doc.dump()).find("annotations[2]"), std::string::npos);

  doc = json::parse(text);
  doc["tags"][0]["created_at"] = "yesterday";
  EXPECT_NE(parse_error(doc.dump()).find("tags[0]"), std::string::npos);

  doc = json::parse(text);
  doc["format_version"] = 2;
  EXPECT_FALSE(parse_error(doc.dump()).empty());
}

TEST(Annotations, ArityRules) {
  EXPECT_THROW((Annotation{AnnotationKind::bus_stop, {{0, 0}, {1, 1}}, {}, SafetyClass::safe}.validate()), Error);
  EXPECT_THROW((Annotation{AnnotationKind::crossing, {{0, 0}}, {}, SafetyClass::safe}.validate()), Error);
  EXPECT_THROW((Annotation{AnnotationKind::street, {{0, 0}, {1, 0}}, {}, SafetyClass::safe}.validate()), Error);
  const Annotation c{AnnotationKind::crossing, {{0, 0}, {4, 2}}, {}, SafetyClass::safe};
  EXPECT_EQ(c.anchor_point(), (Point2{2, 1}));
}

}  // namespace
}  // namespace mallnav
