#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sparsalloc/netmodel.hpp"

namespace sparsalloc {

class Mask;

// Little-endian container shared by networks, calibration sets and masks:
//
//   "SPAL"  u32 version(=1)
//   net:   u8 activation, u32 L, L x (u32 rows, u32 cols), f64 payload
//   mask:  "MASK",        u32 L, L x (u32 rows, u32 cols), u8 payload
//
// Payloads are row-major per layer. A calibration set is a net with L = 1
// whose single matrix is X_1.
inline constexpr std::uint32_t kNetFileVersion = 1;

std::vector<std::uint8_t> encode_net(const LayerNet& net);
LayerNet decode_net(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> encode_masks(const std::vector<Mask>& masks);
std::vector<Mask> decode_masks(const std::vector<std::uint8_t>& bytes);

void save_net(const LayerNet& net, const std::filesystem::path& path);
LayerNet load_net(const std::filesystem::path& path);

void save_calibration(const CalibrationSet& calib, const std::filesystem::path& path);
CalibrationSet load_calibration(const std::filesystem::path& path);

void save_masks(const std::vector<Mask>& masks, const std::filesystem::path& path);
std::vector<Mask> load_masks(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const void* data, std::size_t size);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

// FNV-1a 64-bit over the bytes, rendered as 16 lower-case hex digits.
std::string content_digest(const std::vector<std::uint8_t>& bytes);

}  // namespace sparsalloc
