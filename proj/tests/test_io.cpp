#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "obtuse_walks/errors.hpp"
#include "obtuse_walks/io.hpp"
#include "test_support.hpp"

namespace obtuse_walks::io {
namespace {

TEST(Io, MatrixRoundTrip) {
  std::mt19937_64 rng(1);
  const ComplexMatrix m = random_unitary(3, rng);
  EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
}

TEST(Io, MatrixWithoutImaginaryPartIsReal) {
  const Json j = Json::parse(R"({"rows": 2, "cols": 2, "re": [1, 2, 3, 4]})");
  const ComplexMatrix m = matrix_from_json(j);
  EXPECT_EQ(m(0, 1), Complex(2.0, 0.0));  // row-major
  EXPECT_EQ(m(1, 0), Complex(3.0, 0.0));
}

TEST(Io, MalformedMatrices) {
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2, "re": [1, 2, 3]})")),
               MalformedInputError);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows": 1, "re": [1]})")), MalformedInputError);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows": "a", "cols": 1, "re": [1]})")),
               MalformedInputError);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows": 1, "cols": 1, "re": ["x"]})")),
               MalformedInputError);
  EXPECT_THROW(matrix_from_json(Json::parse("[1, 2]")), MalformedInputError);
}

TEST(Io, SystemRoundTripAndSchema) {
  const auto x = testing::example_n2();
  const Json j = with_schema(system_to_json(x));
  EXPECT_EQ(j.begin().key(), "schema");
  const auto y = system_from_json(j);
  EXPECT_EQ(y.values, x.values);
  EXPECT_EQ(y.probabilities, x.probabilities);

  Json wrong = j;
  wrong["schema"] = "obtuse-walks/v0";
  EXPECT_THROW(system_from_json(wrong), MalformedInputError);
}

TEST(Io, SystemShapeErrors) {
  Json j = system_to_json(testing::example_n2());
  j["values"].erase(2);
  EXPECT_THROW(system_from_json(j), MalformedInputError);

  Json k = system_to_json(testing::example_n2());
  k["probabilities"] = Json::array({0.5, 0.5});
  EXPECT_THROW(system_from_json(k), MalformedInputError);

  Json m = system_to_json(testing::example_n2());
  m.erase("dim");
  EXPECT_THROW(system_from_json(m), MalformedInputError);
}

TEST(Io, TensorRoundTrip) {
  const auto t = compute_tensor(testing::example_n2());
  const auto back = tensor_from_json(tensor_to_json(t));
  EXPECT_EQ(back.coeffs(), t.coeffs());
  Json bad = tensor_to_json(t);
  bad["coeffs"].erase(0);
  EXPECT_THROW(tensor_from_json(bad), MalformedInputError);
}

TEST(Io, BlockUnitaryAndFormRoundTrip) {
  std::mt19937_64 rng(2);
  const auto x = testing::example_n2();
  const auto w = testing::random_unitaries(3, 2, rng);
  const auto u = build_u(w, x);
  const auto back = block_unitary_from_json(block_unitary_to_json(u));
  EXPECT_EQ(back.to_dense(), u.to_dense());

  const auto form = make_classical_form(w, x);
  const auto f = form_from_json(form_to_json(form));
  for (int l = 0; l < 3; ++l) EXPECT_EQ(f.w[l], w[l]);
  for (int i = 0; i < 3; ++i) EXPECT_LE((f.b[i] - form.b[i]).norm(), 1e-15);

  Json bad = block_unitary_to_json(u);
  bad["blocks"][1].erase(0);
  EXPECT_THROW(block_unitary_from_json(bad), MalformedInputError);
}

TEST(Io, FilesAndDigest) {
  const auto dir = std::filesystem::temp_directory_path() / "obtuse_walks_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "abc.txt";
  {
    std::ofstream out(path, std::ios::binary);
    out << "abc";
  }
  EXPECT_EQ(file_sha256(path), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  const auto json_path = dir / "x.json";
  write_json_file(json_path, with_schema(system_to_json(testing::example_n2())), 2);
  EXPECT_EQ(system_from_json(read_json_file(json_path)).dim, 2);

  {
    std::ofstream out(dir / "broken.json");
    out << "{\"dim\": ";
  }
  EXPECT_THROW(read_json_file(dir / "broken.json"), MalformedInputError);
  EXPECT_THROW(read_json_file(dir / "missing.json"), MalformedInputError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace obtuse_walks::io
