#include <doctest.h>

#include <cstring>
#include <filesystem>

#include "hycal/error.hpp"
#include "hycal/io.hpp"
#include "hycal/synthetic.hpp"

using namespace hycal;

namespace {

Dataset tiny_dataset() {
  SyntheticDomainSpec a;
  a.domain_id = 0;
  a.name = "alpha";
  a.n_classes = 2;
  a.dim = 3;
  a.train_per_class = 3;
  a.test_per_class = 2;
  SyntheticDomainSpec b = a;
  b.domain_id = 4;
  b.name = "beta";
  b.first_class_id = 7;
  return generate_dataset({a, b});
}

void put_u32(std::vector<std::uint8_t>& bytes, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

}  // namespace

TEST_CASE("dataset round trip keeps ids, names and float32 values") {
  const auto data = tiny_dataset();
  const auto back = io::decode_dataset(io::encode_dataset(data));
  CHECK(back.registry.size() == 4);
  CHECK(back.registry.at(7).name == data.registry.at(7).name);
  CHECK(back.registry.at(7).domain_id == 4);
  REQUIRE(back.samples.size() == data.samples.size());
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    CHECK(back.samples[i].class_id == data.samples[i].class_id);
    CHECK(back.samples[i].split == data.samples[i].split);
    CHECK(back.samples[i].domain_id == data.samples[i].domain_id);
    const Eigen::VectorXd want = data.samples[i].embedding.values().cast<float>().cast<double>();
    CHECK(back.samples[i].embedding.values() == want);
  }
}

TEST_CASE("header layout is little-endian") {
  const auto bytes = io::encode_dataset(tiny_dataset());
  CHECK(std::memcmp(bytes.data(), "HYEB", 4) == 0);
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == 0);
  CHECK(bytes[6] == 3);  // dim
  CHECK(bytes[10] == 4);  // classes
}

TEST_CASE("malformed dataset files") {
  const auto good = io::encode_dataset(tiny_dataset());
  auto bad = good;
  bad[0] = 'X';
  CHECK_THROWS_AS(io::decode_dataset(bad), FormatError);
  bad = good;
  bad[4] = 9;
  CHECK_THROWS_AS(io::decode_dataset(bad), FormatError);

  bad = good;
  bad.resize(good.size() - 5);
  try {
    io::decode_dataset(bad);
    FAIL("expected truncation");
  } catch (const TruncatedError& e) {
    CHECK(e.offset() <= bad.size());
    CHECK(e.offset() > 14);
  }

  bad = good;
  bad.push_back(0);
  CHECK_THROWS_AS(io::decode_dataset(bad), FormatError);

  // First sample record starts right after the sample count; point it at an
  // undeclared class.
  const std::size_t class_bytes = 4 * (4 + 2 + 2 + 3 * 4) + 2 * std::strlen("alpha/class-0") +
                                 2 * std::strlen("beta/class-0");
  const std::size_t first_sample = 14 + class_bytes + 8;
  bad = good;
  put_u32(bad, first_sample, 99);
  CHECK_THROWS_AS(io::decode_dataset(bad), IntegrityError);

  bad = good;
  put_u32(bad, first_sample + 5, 0x7fc00000u);  // NaN payload
  CHECK_THROWS_AS(io::decode_dataset(bad), IntegrityError);

  bad = good;
  bad[first_sample + 4] = 2;
  CHECK_THROWS_AS(io::decode_dataset(bad), FormatError);
}

TEST_CASE("snapshot round trip is exact") {
  PrototypeStore store;
  for (ClassId id : {5u, 1u, 3u}) {
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 6);
    store.insert(learn_prototype(x, id, RegularizationConfig{0.1, 1.0}));
  }
  const auto back = io::decode_snapshot(io::encode_snapshot(store));
  CHECK(back.learned_order() == store.learned_order());
  for (ClassId id : store.learned_order()) {
    CHECK(back.at(id).mu == store.at(id).mu);
    CHECK(back.at(id).precision == store.at(id).precision);
    CHECK(back.at(id).sample_count == store.at(id).sample_count);
  }
  auto bytes = io::encode_snapshot(store);
  bytes.pop_back();
  CHECK_THROWS_AS(io::decode_snapshot(bytes), TruncatedError);
}

TEST_CASE("file helpers") {
  const std::filesystem::path dir = HYCAL_TEST_TMP;
  std::filesystem::create_directories(dir);
  const auto path = dir / "tiny.hyeb";
  io::write_dataset(path, tiny_dataset());
  CHECK(io::read_dataset(path).samples.size() == tiny_dataset().samples.size());
  CHECK_THROWS_AS(io::read_dataset(dir / "missing.hyeb"), IoError);
}
