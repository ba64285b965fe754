#include "hycal/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hycal/error.hpp"

namespace hycal::io {
namespace {

class ByteWriter {
 public:
  void raw(const char* data, std::size_t n) { bytes_.insert(bytes_.end(), data, data + n); }

  template <typename UInt>
  void uint(UInt v) {
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
      bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
  }

  void f32(double v) { uint(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ == bytes_.size(); }

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) throw TruncatedError(std::string("unexpected end of file reading ") + what, pos_);
  }

  std::string raw(std::size_t n, const char* what) {
    need(n, what);
    std::string out(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return out;
  }

  template <typename UInt>
  UInt uint(const char* what) {
    need(sizeof(UInt), what);
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
      v |= static_cast<UInt>(static_cast<UInt>(bytes_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(UInt);
    return v;
  }

  double f32(const char* what) { return std::bit_cast<float>(uint<std::uint32_t>(what)); }
  double f64(const char* what) { return std::bit_cast<double>(uint<std::uint64_t>(what)); }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

void expect_magic(ByteReader& in, const char (&magic)[4], const char* kind) {
  const std::size_t at = in.offset();
  const std::string got = in.raw(4, "magic");
  if (std::memcmp(got.data(), magic, 4) != 0) {
    throw FormatError(std::string("not a ") + kind + " file: bad magic at byte offset " +
                      std::to_string(at));
  }
}

EmbeddingVector read_f32_vector(ByteReader& in, std::uint32_t dim, const char* what) {
  const std::size_t at = in.offset();
  in.need(static_cast<std::size_t>(dim) * 4, what);
  Eigen::VectorXd v(dim);
  for (std::uint32_t i = 0; i < dim; ++i) v(i) = in.f32(what);
  if (!v.allFinite()) {
    throw IntegrityError(std::string("non-finite value in ") + what + " at byte offset " +
                         std::to_string(at));
  }
  return EmbeddingVector(std::move(v));
}

}  // namespace

std::vector<std::uint8_t> encode_dataset(const Dataset& dataset) {
  const auto& registry = dataset.registry;
  if (registry.empty()) throw IntegrityError("dataset has no classes");
  const auto dim = static_cast<std::uint32_t>(registry.dim());

  ByteWriter out;
  out.raw(kDatasetMagic, 4);
  out.uint<std::uint16_t>(kDatasetVersion);
  out.uint<std::uint32_t>(dim);
  out.uint<std::uint32_t>(static_cast<std::uint32_t>(registry.size()));
  for (const auto& [id, entry] : registry.entries()) {
    if (entry.name.size() > 0xFFFF) {
      throw FormatError("class name of class " + std::to_string(id) + " exceeds 65535 bytes");
    }
    out.uint<std::uint32_t>(id);
    out.uint<std::uint16_t>(entry.domain_id);
    out.uint<std::uint16_t>(static_cast<std::uint16_t>(entry.name.size()));
    out.raw(entry.name.data(), entry.name.size());
    for (double v : entry.text_embedding.values()) out.f32(v);
  }
  out.uint<std::uint64_t>(dataset.samples.size());
  for (const auto& s : dataset.samples) {
    if (!registry.contains(s.class_id)) {
      throw IntegrityError("sample references unknown class " + std::to_string(s.class_id));
    }
    if (s.embedding.dim() != registry.dim()) {
      throw DimensionError("sample of class " + std::to_string(s.class_id) + " has dim " +
                           std::to_string(s.embedding.dim()));
    }
    out.uint<std::uint32_t>(s.class_id);
    out.uint<std::uint8_t>(static_cast<std::uint8_t>(s.split));
    for (double v : s.embedding.values()) out.f32(v);
  }
  return out.take();
}

Dataset decode_dataset(const std::vector<std::uint8_t>& bytes) {
  ByteReader in(bytes);
  expect_magic(in, kDatasetMagic, "HYEB dataset");
  const auto version = in.uint<std::uint16_t>("version");
  if (version != kDatasetVersion) {
    throw FormatError("unsupported dataset version " + std::to_string(version));
  }
  const auto dim = in.uint<std::uint32_t>("dimension");
  if (dim == 0) throw FormatError("dataset declares dimension 0");
  const auto n_classes = in.uint<std::uint32_t>("class-table length");

  Dataset data;
  for (std::uint32_t c = 0; c < n_classes; ++c) {
    const std::size_t at = in.offset();
    const auto id = in.uint<std::uint32_t>("class id");
    const auto domain = in.uint<std::uint16_t>("domain id");
    const auto name_len = in.uint<std::uint16_t>("class name length");
    std::string name = in.raw(name_len, "class name");
    EmbeddingVector text = read_f32_vector(in, dim, "text embedding");
    if (data.registry.contains(id)) {
      throw IntegrityError("class id " + std::to_string(id) + " repeated at byte offset " +
                           std::to_string(at));
    }
    data.registry.add(id, ClassEntry{domain, std::move(name), std::move(text)});
  }

  const auto n_samples = in.uint<std::uint64_t>("sample count");
  // Each record occupies 5 + 4*dim bytes; never reserve past what the file holds.
  const std::size_t record = 5 + 4 * static_cast<std::size_t>(dim);
  data.samples.reserve(static_cast<std::size_t>(
      std::min<std::uint64_t>(n_samples, (bytes.size() - in.offset()) / record)));
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const std::size_t at = in.offset();
    const auto id = in.uint<std::uint32_t>("sample class id");
    const auto split = in.uint<std::uint8_t>("sample split");
    if (split > 1) {
      throw FormatError("invalid split value " + std::to_string(split) + " at byte offset " +
                        std::to_string(at + 4));
    }
    EmbeddingVector v = read_f32_vector(in, dim, "sample embedding");
    if (!data.registry.contains(id)) {
      throw IntegrityError("sample at byte offset " + std::to_string(at) +
                           " references unknown class " + std::to_string(id));
    }
    data.samples.push_back(
        {std::move(v), id, data.registry.at(id).domain_id, static_cast<Split>(split)});
  }
  if (!in.at_end()) {
    throw FormatError(std::to_string(bytes.size() - in.offset()) +
                      " trailing bytes after the declared samples at byte offset " +
                      std::to_string(in.offset()));
  }
  return data;
}

std::vector<std::uint8_t> encode_snapshot(const PrototypeStore& store) {
  const auto dim = static_cast<std::uint32_t>(store.dim());
  ByteWriter out;
  out.raw(kSnapshotMagic, 4);
  out.uint<std::uint16_t>(kSnapshotVersion);
  out.uint<std::uint32_t>(dim);
  out.uint<std::uint32_t>(static_cast<std::uint32_t>(store.size()));
  for (ClassId id : store.learned_order()) {
    const auto& proto = store.at(id);
    out.uint<std::uint32_t>(id);
    out.uint<std::uint32_t>(static_cast<std::uint32_t>(proto.sample_count));
    for (double v : proto.mu) out.f64(v);
    for (Index r = 0; r < proto.precision.rows(); ++r) {
      for (Index c = r; c < proto.precision.cols(); ++c) out.f64(proto.precision(r, c));
    }
  }
  return out.take();
}

PrototypeStore decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  ByteReader in(bytes);
  expect_magic(in, kSnapshotMagic, "HYPS snapshot");
  const auto version = in.uint<std::uint16_t>("version");
  if (version != kSnapshotVersion) {
    throw FormatError("unsupported snapshot version " + std::to_string(version));
  }
  const auto dim = in.uint<std::uint32_t>("dimension");
  const auto count = in.uint<std::uint32_t>("prototype count");
  if (dim == 0 && count > 0) throw FormatError("snapshot declares dimension 0");

  PrototypeStore store;
  for (std::uint32_t p = 0; p < count; ++p) {
    const std::size_t at = in.offset();
    ClassPrototype proto;
    proto.class_id = in.uint<std::uint32_t>("class id");
    const auto k = in.uint<std::uint32_t>("sample count");
    if (k < 1 || k > static_cast<std::uint32_t>(INT32_MAX)) {
      throw IntegrityError("prototype at byte offset " + std::to_string(at) +
                           " has invalid sample count");
    }
    proto.sample_count = static_cast<int>(k);
    proto.mu.resize(dim);
    for (std::uint32_t i = 0; i < dim; ++i) proto.mu(i) = in.f64("mean");
    proto.precision.resize(dim, dim);
    for (std::uint32_t r = 0; r < dim; ++r) {
      for (std::uint32_t c = r; c < dim; ++c) {
        proto.precision(r, c) = in.f64("precision");
        proto.precision(c, r) = proto.precision(r, c);
      }
    }
    if (!proto.mu.allFinite() || !proto.precision.allFinite()) {
      throw IntegrityError("prototype at byte offset " + std::to_string(at) +
                           " holds non-finite values");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(proto.precision);
    if (llt.info() != Eigen::Success) {
      throw IntegrityError("precision of class " + std::to_string(proto.class_id) +
                           " is not positive definite");
    }
    if (store.contains(proto.class_id)) {
      throw IntegrityError("class " + std::to_string(proto.class_id) + " repeated in snapshot");
    }
    store.insert(std::move(proto));
  }
  if (!in.at_end()) {
    throw FormatError("trailing bytes after the declared prototypes at byte offset " +
                      std::to_string(in.offset()));
  }
  return store;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                  std::istreambuf_iterator<char>());
  if (file.bad()) throw IoError("error reading '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError("error writing '" + path.string() + "'");
}

Dataset read_dataset(const std::filesystem::path& path) { return decode_dataset(read_file(path)); }

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  write_file(path, encode_dataset(dataset));
}

PrototypeStore read_snapshot(const std::filesystem::path& path) {
  return decode_snapshot(read_file(path));
}

void write_snapshot(const std::filesystem::path& path, const PrototypeStore& store) {
  write_file(path, encode_snapshot(store));
}

}  // namespace hycal::io
