#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hycal/prototype.hpp"
#include "hycal/types.hpp"

namespace hycal::io {

// Dataset file, all integers and floats little-endian:
//   "HYEB" | u16 version | u32 dim | u32 n_classes
//   n_classes x { u32 class_id | u16 domain_id | u16 name_len | name bytes | dim x f32 text }
//   u64 n_samples
//   n_samples x { u32 class_id | u8 split (0 train, 1 test) | dim x f32 embedding }
inline constexpr char kDatasetMagic[4] = {'H', 'Y', 'E', 'B'};
inline constexpr std::uint16_t kDatasetVersion = 1;

// Prototype snapshot:
//   "HYPS" | u16 version | u32 dim | u32 n_prototypes
//   n_prototypes x { u32 class_id | u32 sample_count | dim x f64 mean |
//                    dim*(dim+1)/2 x f64 precision upper triangle, row-major }
// Records appear in learning order.
inline constexpr char kSnapshotMagic[4] = {'H', 'Y', 'P', 'S'};
inline constexpr std::uint16_t kSnapshotVersion = 1;

std::vector<std::uint8_t> encode_dataset(const Dataset& dataset);
Dataset decode_dataset(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> encode_snapshot(const PrototypeStore& store);
PrototypeStore decode_snapshot(const std::vector<std::uint8_t>& bytes);

Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);

PrototypeStore read_snapshot(const std::filesystem::path& path);
void write_snapshot(const std::filesystem::path& path, const PrototypeStore& store);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace hycal::io
