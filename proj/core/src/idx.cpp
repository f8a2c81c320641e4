#include "histeps/idx.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <string>

#include "histeps/error.hpp"

namespace histeps {

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open IDX file " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
  if (bytes.size() < offset + 4) throw FormatError("truncated IDX header in " + path.string());
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                              static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), b.size());
}

}  // namespace

IdxImages read_idx_images(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::uint32_t magic = read_be32(bytes, 0, path);
  if (magic != kIdxImagesMagic) {
    throw FormatError("bad IDX image magic " + std::to_string(magic) + " in " + path.string());
  }
  IdxImages img;
  img.count = read_be32(bytes, 4, path);
  img.rows = read_be32(bytes, 8, path);
  img.cols = read_be32(bytes, 12, path);
  const std::size_t payload = img.count * img.rows * img.cols;
  if (bytes.size() != 16 + payload) {
    throw FormatError("IDX image payload of " + path.string() + " has " +
                      std::to_string(bytes.size() - 16) + " bytes, header says " +
                      std::to_string(payload));
  }
  img.pixels.assign(bytes.begin() + 16, bytes.end());
  return img;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::uint32_t magic = read_be32(bytes, 0, path);
  if (magic != kIdxLabelsMagic) {
    throw FormatError("bad IDX label magic " + std::to_string(magic) + " in " + path.string());
  }
  const std::size_t count = read_be32(bytes, 4, path);
  if (bytes.size() != 8 + count) {
    throw FormatError("IDX label payload of " + path.string() + " does not match header count");
  }
  return {bytes.begin() + 8, bytes.end()};
}

void write_idx_images(const std::filesystem::path& path, const IdxImages& images) {
  if (images.pixels.size() != images.count * images.rows * images.cols) {
    throw ContractError("write_idx_images: pixel buffer does not match extents");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  write_be32(out, kIdxImagesMagic);
  write_be32(out, static_cast<std::uint32_t>(images.count));
  write_be32(out, static_cast<std::uint32_t>(images.rows));
  write_be32(out, static_cast<std::uint32_t>(images.cols));
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
}

void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  write_be32(out, kIdxLabelsMagic);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
}

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path, std::size_t limit,
                 std::size_t min_classes) {
  const IdxImages img = read_idx_images(images_path);
  const auto labels = read_idx_labels(labels_path);
  if (img.count != labels.size()) {
    throw ConsistencyError("IDX image count " + std::to_string(img.count) +
                           " differs from label count " + std::to_string(labels.size()));
  }
  if (img.count == 0) throw FormatError("IDX files hold no samples");
  const std::size_t n = limit > 0 ? std::min(limit, img.count) : img.count;
  const std::size_t d = img.rows * img.cols;

  Dataset out;
  out.features = Tensor({n, d});
  double* dst = out.features.data();
  for (std::size_t i = 0; i < n * d; ++i) dst[i] = static_cast<double>(img.pixels[i]) / 255.0;
  out.labels.reserve(n);
  std::uint8_t max_label = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out.labels.push_back(labels[i]);
    max_label = std::max(max_label, labels[i]);
  }
  out.class_count = std::max<std::size_t>(std::size_t{max_label} + 1, min_classes);
  return out;
}

}  // namespace histeps
