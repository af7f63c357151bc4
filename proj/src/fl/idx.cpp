#include "uavfl/fl/idx.hpp"

#include <array>
#include <fstream>
#include <vector>

namespace uavfl::fl {
namespace {

using Kind = IdxError::Kind;

std::ifstream open(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IdxError(Kind::kOpen, "cannot open " + p.string());
  return in;
}

std::uint32_t read_be32(std::ifstream& in, const std::filesystem::path& p) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw IdxError(Kind::kTruncated, "truncated header in " + p.string());
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

std::vector<unsigned char> read_body(std::ifstream& in, std::size_t n, const std::filesystem::path& p) {
  std::vector<unsigned char> buf(n);
  if (n > 0 && !in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n))) {
    throw IdxError(Kind::kTruncated, "truncated data in " + p.string());
  }
  return buf;
}

}  // namespace

Samples load_idx(const std::filesystem::path& images, const std::filesystem::path& labels, std::size_t limit) {
  auto img = open(images);
  auto lab = open(labels);
  const auto img_magic = read_be32(img, images);
  if (img_magic != kIdxImagesMagic) throw IdxError(Kind::kMagicMismatch, "bad image magic in " + images.string());
  const auto lab_magic = read_be32(lab, labels);
  if (lab_magic != kIdxLabelsMagic) throw IdxError(Kind::kMagicMismatch, "bad label magic in " + labels.string());

  const std::size_t n_img = read_be32(img, images);
  const std::size_t rows = read_be32(img, images);
  const std::size_t cols = read_be32(img, images);
  const std::size_t n_lab = read_be32(lab, labels);
  if (n_img != n_lab) {
    throw IdxError(Kind::kCountMismatch,
                   "image count " + std::to_string(n_img) + " != label count " + std::to_string(n_lab));
  }
  const std::size_t n = limit > 0 ? std::min(limit, n_img) : n_img;
  const std::size_t px = rows * cols;
  const auto pixels = read_body(img, n * px, images);
  const auto ys = read_body(lab, n, labels);

  Samples s;
  s.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(px));
  s.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < px; ++j) {
      s.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pixels[i * px + j] / 255.0;
    }
    if (ys[i] > 9) throw IdxError(Kind::kBadLabel, "label " + std::to_string(ys[i]) + " out of range");
    s.y[i] = ys[i];
  }
  return s;
}

Dataset load_idx_dataset(const std::filesystem::path& train_images, const std::filesystem::path& train_labels,
                         const std::filesystem::path& test_images, const std::filesystem::path& test_labels,
                         std::size_t train_limit, std::size_t test_limit) {
  Dataset ds;
  ds.n_classes = 10;
  ds.source = DataSource::kIdx;
  ds.train = load_idx(train_images, train_labels, train_limit);
  ds.test = load_idx(test_images, test_labels, test_limit);
  ds.validate();
  return ds;
}

}  // namespace uavfl::fl
