#include "uavfl/fl/softmax_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace uavfl::fl {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;

/// Row-wise softmax, shifted by the row maximum.
MatrixXd softmax_rows(const MatrixXd& z) {
  MatrixXd p = z.colwise() - z.rowwise().maxCoeff();
  p = p.array().exp();
  p.array().colwise() /= p.rowwise().sum().array();
  return p;
}

void check_shape(const SoftmaxModel& m, const Samples& s) {
  if (s.X.cols() != m.d_in) throw std::invalid_argument("feature width does not match model");
  if (static_cast<Index>(m.dim()) != static_cast<Index>(m.d_in + 1) * m.n_classes) {
    throw std::invalid_argument("model weight length inconsistent with shape");
  }
}

}  // namespace

SoftmaxModel SoftmaxModel::zeros(int d_in, int n_classes) {
  if (d_in <= 0 || n_classes < 2) throw std::invalid_argument("SoftmaxModel: bad shape");
  return {d_in, n_classes, Eigen::VectorXd::Zero(static_cast<Index>(d_in + 1) * n_classes)};
}

MatrixXd SoftmaxModel::logits(const MatrixXd& X) const {
  Eigen::Map<const MatrixXd> W(w.data(), n_classes, d_in);
  Eigen::Map<const Eigen::VectorXd> b(w.data() + static_cast<Index>(n_classes) * d_in, n_classes);
  MatrixXd z = X * W.transpose();
  z.rowwise() += b.transpose();
  return z;
}

std::vector<int> SoftmaxModel::predict(const MatrixXd& X) const {
  const MatrixXd z = logits(X);
  std::vector<int> out(static_cast<std::size_t>(z.rows()));
  for (Index i = 0; i < z.rows(); ++i) {
    Index arg = 0;
    z.row(i).maxCoeff(&arg);
    out[static_cast<std::size_t>(i)] = static_cast<int>(arg);
  }
  return out;
}

double loss(const SoftmaxModel& m, const Samples& s) {
  check_shape(m, s);
  if (s.size() == 0) throw std::invalid_argument("loss: empty sample set");
  const MatrixXd z = m.logits(s.X);
  double total = 0.0;
  for (Index i = 0; i < z.rows(); ++i) {
    const double mx = z.row(i).maxCoeff();
    const double lse = mx + std::log((z.row(i).array() - mx).exp().sum());
    total += lse - z(i, s.y[static_cast<std::size_t>(i)]);
  }
  return total / static_cast<double>(s.size());
}

Eigen::VectorXd gradient(const SoftmaxModel& m, const Samples& s) {
  check_shape(m, s);
  if (s.size() == 0) throw std::invalid_argument("gradient: empty sample set");
  MatrixXd G = softmax_rows(m.logits(s.X));
  for (std::size_t i = 0; i < s.size(); ++i) G(static_cast<Index>(i), s.y[i]) -= 1.0;
  G /= static_cast<double>(s.size());
  Eigen::VectorXd g(m.w.size());
  Eigen::Map<MatrixXd>(g.data(), m.n_classes, m.d_in) = G.transpose() * s.X;
  g.tail(m.n_classes) = G.colwise().sum().transpose();
  return g;
}

double accuracy(const SoftmaxModel& m, const Samples& s) {
  check_shape(m, s);
  if (s.size() == 0) return 0.0;
  const auto pred = m.predict(s.X);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < s.size(); ++i) hit += pred[i] == s.y[i];
  return static_cast<double>(hit) / static_cast<double>(s.size());
}

void TrainOptions::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be > 0");
  if (local_epochs < 0) throw std::invalid_argument("local_epochs must be >= 0");
}

Eigen::VectorXd local_train(const SoftmaxModel& model, const Samples& shard, const TrainOptions& opt,
                            std::uint64_t seed) {
  opt.validate();
  if (shard.size() == 0) throw std::invalid_argument("local_train: empty shard");
  check_shape(model, shard);
  SoftmaxModel cur = model;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(shard.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int e = 0; e < opt.local_epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += opt.batch_size) {
      const std::size_t len = std::min(opt.batch_size, order.size() - start);
      const Samples batch = shard.subset(std::span<const std::size_t>(order).subspan(start, len));
      cur.w -= opt.learning_rate * gradient(cur, batch);
    }
  }
  return cur.w - model.w;
}

}  // namespace uavfl::fl
