#pragma once

#include <string>

#include <json.hpp>

#include "holab/mesh.hpp"

namespace holab {

// Reports and mesh files use insertion-ordered keys so that a fixed
// computation serializes to fixed bytes.
using Json = nlohmann::ordered_json;

Json group_to_json(const Group& g);
Group group_from_json(const Json& j);

// Row-major matrix of [re, im] pairs.
Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j);

Json path_to_json(const PathMesh& u);
PathMesh path_from_json(const Json& j);

Json square_to_json(const SquareMesh& s);
SquareMesh square_from_json(const Json& j);

Json cube_to_json(const CubeMesh& c);
CubeMesh cube_from_json(const Json& j);

Json homotopy_to_json(const HomotopyCD11& fam);
HomotopyCD11 homotopy_from_json(const Json& j);

// 2-space indent plus a trailing newline.
std::string dump_report(const Json& report);

// Header line and one value line over the scalar leaves of the flattened
// report, keys joined with dots; cells serialize exactly as in the JSON
// dump.
std::string csv_from_json(const Json& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Parse errors carry `what` and the parser position.
Json parse_json(const std::string& text, const std::string& what);
Json read_json_file(const std::string& path);

}  // namespace holab
