#include "entpca/model_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "entpca/errors.hpp"

namespace entpca {

namespace {

constexpr std::array<char, 8> kMagic = {'E', 'N', 'T', 'P', 'C', 'A', '\0', '\0'};
constexpr std::uint32_t kFlagCentered = 1u << 0;
constexpr std::uint32_t kFlagHasMean = 1u << 1;
// Guards against absurd allocations from corrupted headers.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 36;

template <typename U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

void put_f64s(std::ostream& out, std::span<const double> vs) {
  for (double v : vs) put_f64(out, v);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename U>
  U get_le(const char* field) {
    std::array<unsigned char, sizeof(U)> bytes{};
    in_.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (in_.gcount() != static_cast<std::streamsize>(bytes.size())) {
      throw PersistenceError(field, "truncated payload");
    }
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
    return value;
  }

  double get_f64(const char* field) { return std::bit_cast<double>(get_le<std::uint64_t>(field)); }

  std::vector<double> get_f64s(const char* field, std::uint64_t count) {
    if (count > kMaxElements) throw PersistenceError(field, "implausible element count");
    // Grow as bytes arrive so a corrupt count cannot force a huge allocation.
    std::vector<double> out;
    out.reserve(std::min<std::uint64_t>(count, 1u << 16));
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(get_f64(field));
    return out;
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_model(const PcaModel& model, std::ostream& sink) {
  sink.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(sink, kModelFormatVersion);
  std::uint32_t flags = 0;
  if (model.preprocessing() == Preprocessing::centered) flags |= kFlagCentered;
  if (!model.mean().empty()) flags |= kFlagHasMean;
  put_le<std::uint32_t>(sink, flags);
  put_le<std::uint64_t>(sink, model.m());
  put_le<std::uint64_t>(sink, model.n());
  put_le<std::uint64_t>(sink, model.k());
  if (!model.mean().empty()) put_f64s(sink, model.mean());
  put_f64s(sink, model.v1().values());
  put_f64s(sink, model.w1().values());
  put_f64s(sink, model.col_sq_norms());
  put_f64s(sink, model.z());
  put_f64(sink, model.delta());
  if (!sink) throw PersistenceError("stream", "write failed");
}

PcaModel load_model(std::istream& source) {
  std::array<char, 8> magic{};
  source.read(magic.data(), magic.size());
  if (source.gcount() == 0) throw PersistenceError("magic", "empty input");
  if (source.gcount() != static_cast<std::streamsize>(magic.size())) {
    throw PersistenceError("magic", "truncated payload");
  }
  if (magic != kMagic) throw PersistenceError("magic", "not an entpca model file");

  Reader in(source);
  const auto version = in.get_le<std::uint32_t>("format_version");
  if (version != kModelFormatVersion) {
    throw PersistenceError("format_version", "unsupported version " + std::to_string(version) +
                                                 ", expected " +
                                                 std::to_string(kModelFormatVersion));
  }
  const auto flags = in.get_le<std::uint32_t>("flags");
  if ((flags & ~(kFlagCentered | kFlagHasMean)) != 0) {
    throw PersistenceError("flags", "unknown flag bits");
  }
  const auto m = in.get_le<std::uint64_t>("m");
  const auto n = in.get_le<std::uint64_t>("n");
  const auto k = in.get_le<std::uint64_t>("k");
  if (m == 0 || n == 0 || k == 0 || k >= m) {
    throw PersistenceError("k", "inconsistent dimensions m=" + std::to_string(m) +
                                    " n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  if (m > kMaxElements / k || n > kMaxElements / k) {
    throw PersistenceError("n", "implausible dimensions");
  }

  const auto preprocessing =
      (flags & kFlagCentered) ? Preprocessing::centered : Preprocessing::none;
  std::vector<double> mean;
  if (flags & kFlagHasMean) mean = in.get_f64s("mean", m);
  auto v1 = in.get_f64s("v1", m * k);
  auto w1 = in.get_f64s("w1", k * n);
  auto col_sq_norms = in.get_f64s("col_sq_norms", n);
  auto z = in.get_f64s("z", n);
  const double delta = in.get_f64("delta");

  try {
    return PcaModel(PcaModel::Parts{
        .v1 = DenseMatrix(m, k, std::move(v1)),
        .w1 = DenseMatrix(k, n, std::move(w1)),
        .col_sq_norms = std::move(col_sq_norms),
        .z = std::move(z),
        .delta = delta,
        .preprocessing = preprocessing,
        .mean = std::move(mean),
    });
  } catch (const ContractViolation& e) {
    throw PersistenceError("model", e.what());
  }
}

void save_model(const PcaModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PersistenceError("path", "cannot open " + path.string() + " for writing");
  save_model(model, out);
}

PcaModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersistenceError("path", "cannot open " + path.string());
  return load_model(in);
}

}  // namespace entpca
