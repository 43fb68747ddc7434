#include <cstdio>
#include <string>

#include <doctest.h>

#include "holab/error.hpp"
#include "holab/fixtures.hpp"
#include "holab/report.hpp"
#include "holab/rng.hpp"

using namespace holab;

namespace {

// Unique temp path per tag; removed by the caller.
std::string temp_path(const char* tag) {
  return std::string("/tmp/holab_report_") + tag + ".json";
}

}  // namespace

TEST_CASE("group and matrix json roundtrips") {
  const Group k = Group::su(2, 0.125);
  const Group arena = k.arena(3);
  const Group back = group_from_json(group_to_json(arena));
  CHECK(back.family == arena.family);
  CHECK(back.n == arena.n);
  CHECK(back.power == arena.power);
  CHECK(back.metric_scale == arena.metric_scale);

  Philox rng(77, 0);
  const Mat m = arena.random_element(rng, 0.5);
  const Mat m2 = mat_from_json(mat_to_json(m));
  CHECK(m2.rows() == m.rows());
  CHECK(m2.cols() == m.cols());
  CHECK((m2 - m).norm() == 0.0);

  CHECK_THROWS_AS(group_from_json(Json::object()), Error);
  CHECK_THROWS_AS(mat_from_json(Json::array()), Error);
  Json ragged = Json::array();
  ragged.push_back(Json::array({Json::array({1.0, 0.0})}));
  ragged.push_back(Json::array());
  CHECK_THROWS_AS(mat_from_json(ragged), Error);
}

TEST_CASE("mesh json roundtrips preserve samples and seams") {
  const Group k = Group::su(2);
  Philox rng(77, 1);

  SUBCASE("path") {
    PathMesh u = PathMesh::geodesic(k, k.identity(), k.random_element(rng, 0.6), 8);
    u.seams = {4};
    const PathMesh v = path_from_json(path_to_json(u));
    CHECK(v.seams == u.seams);
    REQUIRE(v.samples.size() == u.samples.size());
    for (std::size_t i = 0; i < u.samples.size(); ++i) {
      CHECK((v.samples[i] - u.samples[i]).norm() == 0.0);
    }
    v.validate();
  }

  SUBCASE("homotopy with square and cube") {
    const MapData f = fixtures::genus_map(k);
    const StringCD1 s0 = fixtures::genus1_string(f, 8, 8, 0.0);
    const StringCD1 s1 = fixtures::genus1_string(f, 8, 8, 0.4);
    const HomotopyCD11 fam = fixtures::interp_family(s0, s1, 8);
    const HomotopyCD11 back = homotopy_from_json(homotopy_to_json(fam));
    CHECK(back.h.n1 == fam.h.n1);
    CHECK(back.h.n2 == fam.h.n2);
    CHECK(back.H.n1 == fam.H.n1);
    CHECK(back.H.n2 == fam.H.n2);
    CHECK(back.H.n3 == fam.H.n3);
    REQUIRE(back.H.samples.size() == fam.H.samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < fam.H.samples.size(); ++i) {
      worst = std::max(worst, (back.H.samples[i] - fam.H.samples[i]).norm());
    }
    CHECK(worst == 0.0);
    back.validate_family(f);
  }

  SUBCASE("kind tags are checked") {
    const PathMesh u = PathMesh::constant(k, k.identity(), 4);
    Json j = path_to_json(u);
    j["kind"] = "square";
    CHECK_THROWS_AS(path_from_json(j), Error);
  }
}

TEST_CASE("report dumps are deterministic and csv mirrors the leaves") {
  Json report;
  report["command"] = "demo";
  report["value"] = 0.1 + 0.2;
  report["snap"]["ok"] = true;
  report["snap"]["defect"] = 3.0e-11;
  report["list"] = Json::array({1, 2});

  const std::string a = dump_report(report);
  const std::string b = dump_report(report);
  CHECK(a == b);
  CHECK(a.back() == '\n');
  // Round-trip through text must reproduce the same bytes.
  CHECK(dump_report(parse_json(a, "report")) == a);

  const std::string csv = csv_from_json(report);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header == "command,value,snap.ok,snap.defect,list.0,list.1");
  const std::string row = csv.substr(csv.find('\n') + 1);
  CHECK(row.find("0.30000000000000004") != std::string::npos);
  CHECK(row.find("3e-11") != std::string::npos);
  CHECK(row.find("\"demo\"") != std::string::npos);
}

TEST_CASE("file io errors carry the io kind and parse errors the position") {
  const std::string missing = "/tmp/holab_report_definitely_absent.json";
  try {
    read_text_file(missing);
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }

  const std::string path = temp_path("rt");
  write_text_file(path, "{\"a\": [1, }");
  try {
    read_json_file(path);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
  }
  write_text_file(path, "{\"a\": 1}\n");
  const Json j = read_json_file(path);
  CHECK(j["a"] == 1);
  std::remove(path.c_str());
}
