#include "uavfl/fl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "uavfl/common/seed.hpp"

namespace uavfl::fl {
namespace {

void check_samples(const Samples& s, int n_classes, const char* what) {
  if (static_cast<std::size_t>(s.X.rows()) != s.y.size()) {
    throw std::invalid_argument(std::string(what) + ": row count differs from label count");
  }
  for (int label : s.y) {
    if (label < 0 || label >= n_classes) throw std::invalid_argument(std::string(what) + ": label out of range");
  }
  if (!s.X.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite features");
}

Samples draw(std::mt19937_64& rng, int n_classes, int d_in, std::size_t per_class, double scale) {
  Samples s;
  const std::size_t n = per_class * static_cast<std::size_t>(n_classes);
  s.X.resize(static_cast<Eigen::Index>(n), d_in);
  s.y.resize(n);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::size_t row = 0;
  for (int c = 0; c < n_classes; ++c) {
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      for (int k = 0; k < d_in; ++k) s.X(static_cast<Eigen::Index>(row), k) = noise(rng);
      s.X(static_cast<Eigen::Index>(row), c) += scale;
      s.y[row] = c;
    }
  }
  return s;
}

}  // namespace

Samples Samples::subset(std::span<const std::size_t> rows) const {
  Samples out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= size()) throw std::out_of_range("Samples::subset: row index");
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
    out.y.push_back(y[rows[i]]);
  }
  return out;
}

void Dataset::validate() const {
  if (n_classes < 2) throw std::invalid_argument("dataset: need at least 2 classes");
  check_samples(train, n_classes, "train split");
  check_samples(test, n_classes, "test split");
  if (train.X.cols() != test.X.cols()) throw std::invalid_argument("dataset: train/test feature widths differ");
}

Dataset generate_synthetic(std::uint64_t seed, int n_classes, int d_in, std::size_t n_per_class,
                           std::size_t test_per_class, double separation) {
  if (n_classes < 2) throw std::invalid_argument("generate_synthetic: n_classes must be >= 2");
  if (d_in < n_classes) throw std::invalid_argument("generate_synthetic: d_in must be >= n_classes");
  if (n_per_class == 0) throw std::invalid_argument("generate_synthetic: empty dataset (n_per_class = 0)");
  if (!(separation > 0.0)) throw std::invalid_argument("generate_synthetic: separation must be > 0");
  const double scale = separation / std::sqrt(2.0);
  std::mt19937_64 train_rng(sub_seed(seed, "synthetic.train"));
  std::mt19937_64 test_rng(sub_seed(seed, "synthetic.test"));
  Dataset ds;
  ds.n_classes = n_classes;
  ds.source = DataSource::kSynthetic;
  ds.train = draw(train_rng, n_classes, d_in, n_per_class, scale);
  ds.test = draw(test_rng, n_classes, d_in, test_per_class, scale);
  return ds;
}

std::vector<Samples> shard_iid(const Samples& s, std::size_t n_shards, std::uint64_t seed) {
  if (n_shards == 0) throw std::invalid_argument("shard_iid: n_shards must be > 0");
  const std::size_t per = s.size() / n_shards;
  if (per == 0) throw std::invalid_argument("shard_iid: fewer samples than shards");
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(sub_seed(seed, "shard"));
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<Samples> shards;
  shards.reserve(n_shards);
  for (std::size_t k = 0; k < n_shards; ++k) {
    shards.push_back(s.subset(std::span<const std::size_t>(idx).subspan(k * per, per)));
  }
  return shards;
}

}  // namespace uavfl::fl
