#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "histeps/dataset.hpp"

namespace histeps {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;  // 2051
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;  // 2049

/// Raw contents of an IDX image/label pair.
struct IdxImages {
  std::size_t count = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols
};

IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

void write_idx_images(const std::filesystem::path& path, const IdxImages& images);
void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels);

/// Loads an image/label pair, scaling pixels to [0, 1]. Features are
/// [n x rows*cols]; class_count is max(label) + 1, at least `min_classes`.
/// `limit` > 0 keeps only the first `limit` samples.
/// Throws FormatError on bad magic or truncation and ConsistencyError when the
/// two files disagree on the sample count.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path, std::size_t limit = 0,
                 std::size_t min_classes = 0);

}  // namespace histeps
