#include "obtuse_walks/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>
#include <vector>

#include "obtuse_walks/errors.hpp"

namespace obtuse_walks::io {

namespace {

void check_schema(const Json& j) {
  if (!j.is_object()) {
    throw MalformedInputError("expected a JSON object");
  }
  if (auto it = j.find("schema"); it != j.end()) {
    if (!it->is_string() || it->get<std::string>() != kSchema) {
      throw MalformedInputError("unsupported schema (expected obtuse-walks/v1)");
    }
  }
}

const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw MalformedInputError(std::string("missing field \"") + name + "\"");
  }
  return *it;
}

// nlohmann reports type errors with its own exception types; fold them into ours.
template <class T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInputError(std::string("bad value for ") + what + ": " + e.what());
  }
}

std::vector<double> doubles(const Json& j, const char* what) {
  if (!j.is_array()) {
    throw MalformedInputError(std::string(what) + " must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) {
      throw MalformedInputError(std::string(what) + " must be an array of numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

Json with_schema(Json body) {
  Json out = Json::object();
  out["schema"] = kSchema;
  for (auto it = body.begin(); it != body.end(); ++it) {
    if (it.key() != "schema") out[it.key()] = it.value();
  }
  return out;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  Json j = Json::object();
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
  check_schema(j);
  const auto rows = get_as<long long>(field(j, "rows"), "rows");
  const auto cols = get_as<long long>(field(j, "cols"), "cols");
  if (rows < 1 || cols < 1) {
    throw MalformedInputError("matrix dimensions must be positive");
  }
  const auto re = doubles(field(j, "re"), "re");
  std::vector<double> im;
  if (j.contains("im")) {
    im = doubles(j["im"], "im");
  } else {
    im.assign(re.size(), 0.0);
  }
  const auto count = static_cast<std::size_t>(rows * cols);
  if (re.size() != count || im.size() != count) {
    throw MalformedInputError("matrix entry count does not match rows*cols");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(r * cols + c);
      m(r, c) = Complex(re[k], im[k]);
    }
  }
  if (!m.allFinite()) {
    throw MalformedInputError("matrix has non-finite entries");
  }
  return m;
}

Json system_to_json(const ObtuseSystem& x) {
  Json values = Json::array();
  for (Eigen::Index l = 0; l < x.values.cols(); ++l) {
    Json v = Json::array();
    for (Eigen::Index i = 0; i < x.values.rows(); ++i) v.push_back(x.values(i, l));
    values.push_back(std::move(v));
  }
  Json p = Json::array();
  for (Eigen::Index l = 0; l < x.probabilities.size(); ++l) p.push_back(x.probabilities(l));
  Json j = Json::object();
  j["dim"] = x.dim;
  j["values"] = std::move(values);
  j["probabilities"] = std::move(p);
  return j;
}

ObtuseSystem system_from_json(const Json& j) {
  check_schema(j);
  ObtuseSystem x;
  x.dim = get_as<int>(field(j, "dim"), "dim");
  if (x.dim < 1) {
    throw MalformedInputError("dim must be positive");
  }
  const auto& values = field(j, "values");
  if (!values.is_array() || values.size() != static_cast<std::size_t>(x.dim) + 1) {
    throw MalformedInputError("values must hold N+1 vectors");
  }
  x.values.resize(x.dim, x.dim + 1);
  for (int l = 0; l <= x.dim; ++l) {
    const auto v = doubles(values[static_cast<std::size_t>(l)], "values[l]");
    if (v.size() != static_cast<std::size_t>(x.dim)) {
      throw MalformedInputError("every value vector needs N coordinates");
    }
    for (int i = 0; i < x.dim; ++i) x.values(i, l) = v[static_cast<std::size_t>(i)];
  }
  const auto p = doubles(field(j, "probabilities"), "probabilities");
  if (p.size() != static_cast<std::size_t>(x.dim) + 1) {
    throw MalformedInputError("probabilities must hold N+1 numbers");
  }
  x.probabilities = Eigen::Map<const RealVector>(p.data(), static_cast<Eigen::Index>(p.size()));
  x.check_structure();
  return x;
}

Json tensor_to_json(const ThreeTensor& t) {
  Json j = Json::object();
  j["dim"] = t.dim();
  j["coeffs"] = t.coeffs();
  return j;
}

ThreeTensor tensor_from_json(const Json& j) {
  check_schema(j);
  const int dim = get_as<int>(field(j, "dim"), "dim");
  return ThreeTensor(dim, doubles(field(j, "coeffs"), "coeffs"));
}

Json block_unitary_to_json(const BlockUnitary& u) {
  Json blocks = Json::array();
  for (Eigen::Index i = 0; i < u.site_dim(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < u.site_dim(); ++j) row.push_back(matrix_to_json(u.block(i, j)));
    blocks.push_back(std::move(row));
  }
  Json j = Json::object();
  j["system_dim"] = u.system_dim();
  j["site_dim"] = u.site_dim();
  j["blocks"] = std::move(blocks);
  return j;
}

BlockUnitary block_unitary_from_json(const Json& j) {
  check_schema(j);
  const auto d = get_as<long long>(field(j, "system_dim"), "system_dim");
  const auto s = get_as<long long>(field(j, "site_dim"), "site_dim");
  if (d < 1 || s < 2) {
    throw MalformedInputError("block unitary needs system_dim >= 1 and site_dim >= 2");
  }
  const auto& blocks = field(j, "blocks");
  if (!blocks.is_array() || blocks.size() != static_cast<std::size_t>(s)) {
    throw MalformedInputError("blocks must be a site_dim x site_dim grid");
  }
  BlockUnitary u(d, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    const auto& row = blocks[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(s)) {
      throw MalformedInputError("blocks must be a site_dim x site_dim grid");
    }
    for (Eigen::Index jj = 0; jj < s; ++jj) {
      u.block(i, jj) = matrix_from_json(row[static_cast<std::size_t>(jj)]);
    }
  }
  u.check_structure();
  return u;
}

Json form_to_json(const ClassicalForm& f) {
  Json w = Json::array();
  for (const auto& m : f.w) w.push_back(matrix_to_json(m));
  Json b = Json::array();
  for (const auto& m : f.b) b.push_back(matrix_to_json(m));
  Json j = Json::object();
  j["system"] = system_to_json(f.system);
  j["W"] = std::move(w);
  j["B"] = std::move(b);
  return j;
}

ClassicalForm form_from_json(const Json& j) {
  check_schema(j);
  const ObtuseSystem system = system_from_json(field(j, "system"));
  const auto& w_json = field(j, "W");
  if (!w_json.is_array() || w_json.empty()) {
    throw MalformedInputError("W must be a non-empty array of matrices");
  }
  std::vector<ComplexMatrix> w;
  for (const auto& m : w_json) w.push_back(matrix_from_json(m));
  return make_classical_form(w, system);
}

Json distribution_to_json(const WalkDistribution& d) {
  Json atoms = Json::array();
  for (const auto& [m, p] : d.atoms) {
    Json a = Json::object();
    a["probability"] = p;
    a["matrix"] = matrix_to_json(m);
    atoms.push_back(std::move(a));
  }
  Json j = Json::object();
  j["horizon"] = d.horizon;
  j["total_probability"] = d.total_probability();
  j["atoms"] = std::move(atoms);
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw MalformedInputError("cannot open " + path.string());
  }
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j, int indent) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << j.dump(indent) << '\n';
}

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MalformedInputError("cannot open " + path.string());
  }
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int k = 0; k < len; ++k) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  }
  return hex.str();
}

}  // namespace obtuse_walks::io
