#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "entpca/errors.hpp"
#include "entpca/model_io.hpp"
#include "entpca/pca.hpp"
#include "oracles.hpp"

using entpca::Dataset;
using entpca::DenseMatrix;

namespace {

std::string serialize(const entpca::PcaModel& model) {
  std::ostringstream out(std::ios::binary);
  entpca::save_model(model, out);
  return out.str();
}

entpca::PcaModel deserialize(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return entpca::load_model(in);
}

std::string persistence_field(const std::string& bytes) {
  try {
    deserialize(bytes);
  } catch (const entpca::PersistenceError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST(ModelIo, RoundTripDiagonal) {
  const auto model = entpca::fit(Dataset(DenseMatrix::from_rows({{2, 0}, {0, 1}})), 1);
  const auto back = deserialize(serialize(model));
  EXPECT_TRUE(back == model);
  EXPECT_EQ(back.z(), model.z());
  EXPECT_EQ(back.delta(), model.delta());
}

TEST(ModelIo, LayoutSize) {
  const auto model = entpca::fit(Dataset(oracle::gaussian_matrix(6, 10, 1)), 3);
  // header 8 + 4 + 4 + 3*8, then v1, w1, norms, z, delta.
  const std::size_t want = 40 + 8 * (6 * 3 + 3 * 10 + 10 + 10 + 1);
  EXPECT_EQ(serialize(model).size(), want);
  const auto centered = entpca::fit(Dataset(oracle::gaussian_matrix(6, 10, 1)), 3, true);
  EXPECT_EQ(serialize(centered).size(), want + 8 * 6);
}

TEST(ModelIo, EmptyInput) {
  EXPECT_THROW(deserialize(""), entpca::PersistenceError);
  EXPECT_EQ(persistence_field(""), "magic");
}

TEST(ModelIo, EveryTruncationIsRejected) {
  const auto bytes = serialize(entpca::fit(Dataset(oracle::gaussian_matrix(4, 5, 2)), 2, true));
  for (std::size_t len = 0; len < bytes.size(); ++len) {
    EXPECT_THROW(deserialize(bytes.substr(0, len)), entpca::PersistenceError) << "length " << len;
  }
  EXPECT_EQ(persistence_field(bytes.substr(0, 10)), "format_version");
  EXPECT_EQ(persistence_field(bytes.substr(0, bytes.size() - 1)), "delta");
}

TEST(ModelIo, VersionMismatchAndBadMagic) {
  auto bytes = serialize(entpca::fit(Dataset(DenseMatrix::from_rows({{2, 0}, {0, 1}})), 1));
  auto wrong_version = bytes;
  wrong_version[8] = 2;
  EXPECT_EQ(persistence_field(wrong_version), "format_version");
  auto wrong_magic = bytes;
  wrong_magic[0] = 'X';
  EXPECT_EQ(persistence_field(wrong_magic), "magic");
  auto wrong_flags = bytes;
  wrong_flags[12] = 4;
  EXPECT_EQ(persistence_field(wrong_flags), "flags");
}

TEST(ModelIo, CorruptedValuesAreRejected) {
  auto bytes = serialize(entpca::fit(Dataset(DenseMatrix::from_rows({{2, 0}, {0, 1}})), 1));
  // Overwrite delta (last 8 bytes) with a NaN.
  const std::string nan_bits("\x00\x00\x00\x00\x00\x00\xf8\x7f", 8);
  bytes.replace(bytes.size() - 8, 8, nan_bits);
  EXPECT_THROW(deserialize(bytes), entpca::PersistenceError);
}

TEST(ModelIo, RoundTripReverifiesInvariants) {
  const Dataset data(oracle::gaussian_matrix(6, 10, 11));
  const auto model = entpca::fit(data, 3);
  const auto back = deserialize(serialize(model));
  EXPECT_TRUE(back == model);
  EXPECT_EQ(serialize(back), serialize(model));
  const Eigen::MatrixXd v1 = oracle::to_eigen(back.v1());
  EXPECT_LE((v1.transpose() * v1 - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-10);
  EXPECT_LE((v1.transpose() * oracle::to_eigen(data.matrix()) - oracle::to_eigen(back.w1())).norm(),
            1e-10);
  for (std::size_t i = 0; i < back.n(); ++i) {
    EXPECT_GE(back.z()[i], 0.0);
    EXPECT_REL(oracle::sq_norm(back.w1_column(i)) + back.z()[i], back.col_sq_norms()[i], 1e-9);
  }
  EXPECT_EQ(back.sqrt_z(), model.sqrt_z());
}

TEST(ModelIo, CenteredRoundTripThroughFile) {
  const auto model = entpca::fit(Dataset(oracle::gaussian_matrix(5, 8, 6, 2.0)), 2, true);
  const auto path = std::filesystem::temp_directory_path() / "entpca_model_io_test.bin";
  entpca::save_model(model, path);
  const auto back = entpca::load_model(path);
  std::filesystem::remove(path);
  EXPECT_TRUE(back == model);
  EXPECT_EQ(back.preprocessing(), entpca::Preprocessing::centered);
  EXPECT_EQ(back.mean(), model.mean());
  EXPECT_THROW(entpca::load_model(std::filesystem::path("/nonexistent/entpca.bin")),
               entpca::PersistenceError);
}
