#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "obtuse_walks/classicality.hpp"
#include "obtuse_walks/obtuse.hpp"
#include "obtuse_walks/tensor3.hpp"
#include "obtuse_walks/walk.hpp"

namespace obtuse_walks::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "obtuse-walks/v1";

// Every reader throws MalformedInputError on missing fields, wrong shapes, or
// a top-level "schema" other than kSchema. A missing "schema" is accepted so
// that nested documents (matrices inside a block unitary) parse the same way.

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json system_to_json(const ObtuseSystem& x);
ObtuseSystem system_from_json(const Json& j);

Json tensor_to_json(const ThreeTensor& t);
ThreeTensor tensor_from_json(const Json& j);

Json block_unitary_to_json(const BlockUnitary& u);
BlockUnitary block_unitary_from_json(const Json& j);

Json form_to_json(const ClassicalForm& f);
/// Rebuilds B and the tensor from the stored W's and system.
ClassicalForm form_from_json(const Json& j);

Json distribution_to_json(const WalkDistribution& d);

/// Adds "schema" as the first key of a top-level document.
Json with_schema(Json body);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j, int indent);

/// Lowercase hex SHA-256 of the file's bytes.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace obtuse_walks::io
