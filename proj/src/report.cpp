#include "holab/report.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace holab {

namespace {

// Pull a field with a parse error that names the enclosing object.
const Json& field(const Json& j, const char* key, const std::string& what) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorKind::parse,
                fmt::format("{}: missing field \"{}\"", what, key));
  }
  return *it;
}

// Mesh files are dispatched on their "kind" tag, so a mismatch is a parse
// error rather than a silent reinterpretation.
void require_kind(const Json& j, const char* expected,
                  const std::string& what) {
  const Json& kind = field(j, "kind", what);
  if (!kind.is_string() || kind.get<std::string>() != expected) {
    throw Error(ErrorKind::parse,
                fmt::format("{}: expected kind \"{}\", found {}", what,
                            expected, kind.dump()));
  }
}

std::vector<int> seam_list(const Json& j, const std::string& what) {
  if (!j.is_array()) {
    throw Error(ErrorKind::parse, what + ": seams must be an array");
  }
  std::vector<int> out;
  out.reserve(j.size());
  for (const Json& v : j) {
    if (!v.is_number_integer()) {
      throw Error(ErrorKind::parse, what + ": seam indices must be integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

Json samples_to_json(const std::vector<Mat>& samples) {
  Json out = Json::array();
  for (const Mat& m : samples) {
    out.push_back(mat_to_json(m));
  }
  return out;
}

std::vector<Mat> samples_from_json(const Json& j, const Group& g,
                                   const std::string& what) {
  if (!j.is_array()) {
    throw Error(ErrorKind::parse, what + ": samples must be an array");
  }
  std::vector<Mat> out;
  out.reserve(j.size());
  for (const Json& v : j) {
    Mat m = mat_from_json(v);
    if (m.rows() != g.matrix_size()) {
      throw Error(ErrorKind::parse,
                  fmt::format("{}: sample is {}x{} but the group needs {}",
                              what, m.rows(), m.cols(), g.matrix_size()));
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

Json group_to_json(const Group& g) {
  Json j;
  j["family"] = to_string(g.family);
  j["n"] = g.n;
  j["metric_scale"] = g.metric_scale;
  j["power"] = g.power;
  return j;
}

Group group_from_json(const Json& j) {
  const std::string what = "group";
  Group g;
  g.family = family_from_string(
      field(j, "family", what).get<std::string>());
  g.n = field(j, "n", what).get<int>();
  g.metric_scale = field(j, "metric_scale", what).get<double>();
  g.power = j.value("power", 1);
  if (g.n < 1 || g.power < 1) {
    throw Error(ErrorKind::parse, "group: n and power must be positive");
  }
  return g;
}

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorKind::parse, "matrix: expected a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::parse, "matrix: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
          !cell[1].is_number()) {
        throw Error(ErrorKind::parse,
                    "matrix: each entry must be a [re, im] pair");
      }
      m(r, c) = Cplx(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

Json path_to_json(const PathMesh& u) {
  Json j;
  j["kind"] = "path";
  j["group"] = group_to_json(u.group);
  j["seams"] = u.seams;
  j["samples"] = samples_to_json(u.samples);
  return j;
}

PathMesh path_from_json(const Json& j) {
  const std::string what = "path mesh";
  require_kind(j, "path", what);
  PathMesh u;
  u.group = group_from_json(field(j, "group", what));
  u.seams = seam_list(field(j, "seams", what), what);
  u.samples = samples_from_json(field(j, "samples", what), u.group, what);
  if (u.samples.size() < 2) {
    throw Error(ErrorKind::parse, what + ": needs at least two samples");
  }
  return u;
}

Json square_to_json(const SquareMesh& s) {
  Json j;
  j["kind"] = "square";
  j["group"] = group_to_json(s.group);
  j["n1"] = s.n1;
  j["n2"] = s.n2;
  j["seams"] = Json::array({s.seams[0], s.seams[1]});
  j["samples"] = samples_to_json(s.samples);
  return j;
}

SquareMesh square_from_json(const Json& j) {
  const std::string what = "square mesh";
  require_kind(j, "square", what);
  SquareMesh s;
  s.group = group_from_json(field(j, "group", what));
  s.n1 = field(j, "n1", what).get<int>();
  s.n2 = field(j, "n2", what).get<int>();
  const Json& seams = field(j, "seams", what);
  if (!seams.is_array() || seams.size() != 2) {
    throw Error(ErrorKind::parse, what + ": seams must hold two axis lists");
  }
  s.seams = {seam_list(seams[0], what), seam_list(seams[1], what)};
  s.samples = samples_from_json(field(j, "samples", what), s.group, what);
  if (s.n1 < 1 || s.n2 < 1 ||
      s.samples.size() !=
          static_cast<std::size_t>((s.n1 + 1) * (s.n2 + 1))) {
    throw Error(ErrorKind::parse,
                fmt::format("{}: {} samples do not fill {}x{}", what,
                            s.samples.size(), s.n1 + 1, s.n2 + 1));
  }
  return s;
}

Json cube_to_json(const CubeMesh& c) {
  Json j;
  j["kind"] = "cube";
  j["group"] = group_to_json(c.group);
  j["n1"] = c.n1;
  j["n2"] = c.n2;
  j["n3"] = c.n3;
  j["seams"] = Json::array({c.seams[0], c.seams[1], c.seams[2]});
  j["samples"] = samples_to_json(c.samples);
  return j;
}

CubeMesh cube_from_json(const Json& j) {
  const std::string what = "cube mesh";
  require_kind(j, "cube", what);
  CubeMesh c;
  c.group = group_from_json(field(j, "group", what));
  c.n1 = field(j, "n1", what).get<int>();
  c.n2 = field(j, "n2", what).get<int>();
  c.n3 = field(j, "n3", what).get<int>();
  const Json& seams = field(j, "seams", what);
  if (!seams.is_array() || seams.size() != 3) {
    throw Error(ErrorKind::parse, what + ": seams must hold three axis lists");
  }
  c.seams = {seam_list(seams[0], what), seam_list(seams[1], what),
             seam_list(seams[2], what)};
  c.samples = samples_from_json(field(j, "samples", what), c.group, what);
  const auto expect = static_cast<std::size_t>(c.n1 + 1) *
                      static_cast<std::size_t>(c.n2 + 1) *
                      static_cast<std::size_t>(c.n3 + 1);
  if (c.n1 < 1 || c.n2 < 1 || c.n3 < 1 || c.samples.size() != expect) {
    throw Error(ErrorKind::parse,
                fmt::format("{}: {} samples do not fill {}x{}x{}", what,
                            c.samples.size(), c.n1 + 1, c.n2 + 1, c.n3 + 1));
  }
  return c;
}

Json homotopy_to_json(const HomotopyCD11& fam) {
  Json j;
  j["kind"] = "homotopy";
  j["h"] = square_to_json(fam.h);
  j["H"] = cube_to_json(fam.H);
  return j;
}

HomotopyCD11 homotopy_from_json(const Json& j) {
  const std::string what = "homotopy";
  require_kind(j, "homotopy", what);
  HomotopyCD11 fam;
  fam.h = square_from_json(field(j, "h", what));
  fam.H = cube_from_json(field(j, "H", what));
  return fam;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

std::string csv_from_json(const Json& report) {
  const Json flat = report.flatten();
  std::string header;
  std::string values;
  bool first = true;
  for (const auto& [pointer, leaf] : flat.items()) {
    if (!leaf.is_primitive() || leaf.is_null()) {
      continue;
    }
    std::string key = pointer;
    if (!key.empty() && key.front() == '/') {
      key.erase(key.begin());
    }
    for (char& ch : key) {
      if (ch == '/') {
        ch = '.';
      }
    }
    if (!first) {
      header += ',';
      values += ',';
    }
    header += key;
    values += leaf.dump();
    first = false;
  }
  return header + "\n" + values + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw Error(ErrorKind::io, "read failed on " + path);
  }
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  }
  out << text;
  out.flush();
  if (!out.good()) {
    throw Error(ErrorKind::io, "write failed on " + path);
  }
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, fmt::format("{}: {}", what, e.what()));
  }
}

Json read_json_file(const std::string& path) {
  return parse_json(read_text_file(path), path);
}

}  // namespace holab
