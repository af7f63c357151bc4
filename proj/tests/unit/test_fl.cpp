#include "doctest.h"

#include <stdexcept>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "uavfl/common/seed.hpp"
#include "uavfl/fl/attack.hpp"
#include "uavfl/fl/dataset.hpp"
#include "uavfl/fl/experiment.hpp"
#include "uavfl/fl/idx.hpp"
#include "uavfl/fl/round.hpp"
#include "uavfl/fl/softmax_model.hpp"
#include "uavfl/zkfed/policy.hpp"
#include "uavfl/zkfed/quantize.hpp"

using namespace uavfl;
using namespace uavfl::fl;
namespace fs = std::filesystem;

namespace {

Samples make_samples(std::vector<int> y, int d_in = 4) {
  Samples s;
  s.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(y.size()), d_in);
  s.y = std::move(y);
  return s;
}

std::vector<FlClient> make_clients(const Dataset& ds, std::size_t n, std::uint64_t seed) {
  auto shards = shard_iid(ds.train, n, seed);
  std::vector<FlClient> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({static_cast<std::uint32_t>(i), std::move(shards[i])});
  return out;
}

void put_be32(std::ofstream& o, std::uint32_t v) {
  const char b[4] = {char(v >> 24), char(v >> 16), char(v >> 8), char(v)};
  o.write(b, 4);
}

struct IdxFixture {
  fs::path dir = fs::temp_directory_path() / ("uavfl_idx_" + std::to_string(::getpid()));
  fs::path images = dir / "img.idx", labels = dir / "lab.idx";
  IdxFixture(std::uint32_t n_img = 10, std::uint32_t n_lab = 10, std::size_t pixel_bytes = 10 * 784, int bad_label = -1) {
    fs::create_directories(dir);
    std::ofstream im(images, std::ios::binary);
    put_be32(im, kIdxImagesMagic);
    put_be32(im, n_img);
    put_be32(im, 28);
    put_be32(im, 28);
    for (std::size_t i = 0; i < pixel_bytes; ++i) im.put(static_cast<char>(i % 256));
    std::ofstream lb(labels, std::ios::binary);
    put_be32(lb, kIdxLabelsMagic);
    put_be32(lb, n_lab);
    for (std::uint32_t i = 0; i < n_lab; ++i) lb.put(static_cast<char>(static_cast<int>(i) == bad_label ? 11 : i % 10));
  }
  ~IdxFixture() { fs::remove_all(dir); }
};

IdxError::Kind idx_error_kind(const fs::path& a, const fs::path& b) {
  try {
    load_idx(a, b);
  } catch (const IdxError& e) {
    return e.kind();
  }
  FAIL("expected IdxError");
  return IdxError::Kind::kOpen;
}

}  // namespace

TEST_CASE("synthetic data") {
  const auto a = generate_synthetic(5, 10, 20, 30, 10);
  const auto b = generate_synthetic(5, 10, 20, 30, 10);
  CHECK(a.train.X == b.train.X);
  CHECK(a.train.y == b.train.y);
  CHECK(a.test.X == b.test.X);
  CHECK(a.train.size() == 300);
  CHECK(a.test.size() == 100);
  CHECK_NOTHROW(a.validate());
  CHECK_THROWS_AS(generate_synthetic(5, 10, 20, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(5, 10, 5, 10, 10), std::invalid_argument);

  const auto shards = shard_iid(a.train, 7, 3);
  CHECK(shards.size() == 7);
  for (const auto& s : shards) CHECK(s.size() == 300 / 7);
}

TEST_CASE("three well-separated classes train to high accuracy") {
  const auto ds = generate_synthetic(9, 3, 3, 200, 100);
  auto m = SoftmaxModel::zeros(3, 3);
  TrainOptions opt;
  opt.local_epochs = 30;
  m.w += local_train(m, ds.train, opt, 1);
  CHECK(accuracy(m, ds.test) >= 0.95);
}

TEST_CASE("gradient matches central differences") {
  const auto ds = generate_synthetic(2, 4, 6, 10, 1);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd(0.0, 0.5);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = SoftmaxModel::zeros(6, 4);
    for (Eigen::Index i = 0; i < m.w.size(); ++i) m.w[i] = nd(rng);
    const Eigen::VectorXd g = gradient(m, ds.train);
    for (Eigen::Index i = 0; i < m.w.size(); ++i) {
      const double h = 1e-5;
      auto p = m, q = m;
      p.w[i] += h;
      q.w[i] -= h;
      const double fd = (loss(p, ds.train) - loss(q, ds.train)) / (2 * h);
      CHECK(std::abs(g[i] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("local training") {
  const auto ds = generate_synthetic(3, 4, 8, 25, 5);
  const auto m = SoftmaxModel::zeros(8, 4);
  TrainOptions opt;
  opt.local_epochs = 0;
  CHECK(local_train(m, ds.train, opt, 1).isZero());

  opt.local_epochs = 2;
  CHECK(local_train(m, ds.train, opt, 1) == local_train(m, ds.train, opt, 1));
  CHECK(local_train(m, ds.train, opt, 1) != local_train(m, ds.train, opt, 2));
  CHECK_THROWS_AS(local_train(m, ds.train.subset(std::vector<std::size_t>{}), opt, 1), std::invalid_argument);

  // Full-batch steps with a small rate never increase the loss.
  opt.local_epochs = 1;
  opt.batch_size = ds.train.size();
  opt.learning_rate = 0.05;
  auto cur = m;
  double prev = loss(cur, ds.train);
  for (int e = 0; e < 20; ++e) {
    cur.w += local_train(cur, ds.train, opt, 1);
    const double l = loss(cur, ds.train);
    CHECK(l <= prev);
    prev = l;
  }
}

TEST_CASE("label flipping") {
  AttackConfig atk;
  const auto none = make_samples({0, 1, 3, 7});
  CHECK(flip_labels(none, atk).y == none.y);
  CHECK(flip_labels(make_samples({2, 2, 2}), atk).y == std::vector<int>{7, 7, 7});
  const auto mixed = make_samples({2, 0, 2, 7, 9, 2, 1});
  const auto out = flip_labels(mixed, atk);
  int changed = 0;
  for (std::size_t i = 0; i < mixed.size(); ++i) changed += out.y[i] != mixed.y[i];
  CHECK(changed == 3);
  CHECK(out.X == mixed.X);

  AttackConfig same;
  same.target_label = same.source_label;
  CHECK_THROWS_AS(same.validate(10, 5), std::invalid_argument);
  CHECK(!atk.active(30));
  atk.enabled = true;
  CHECK(!atk.active(19));
  CHECK(atk.active(20));
}

TEST_CASE("attack success rate") {
  AttackConfig atk;
  const auto ds = generate_synthetic(6, 10, 20, 1, 200);
  // Always-target model: bias only.
  auto m = SoftmaxModel::zeros(20, 10);
  m.w[200 + atk.target_label] = 100.0;
  CHECK(attack_success_rate(m, ds.test, atk) == 1.0);
  auto good = SoftmaxModel::zeros(20, 10);
  good.w[200 + atk.source_label] = 100.0;
  CHECK(attack_success_rate(good, ds.test, atk) == 0.0);
  CHECK_THROWS_AS(attack_success_rate(m, make_samples({0, 1}, 20), atk), std::invalid_argument);

  // Random weights are exchangeable across classes, so the expected rate is 1/10.
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd(0.0, 1.0);
  const int draws = 400;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    auto r = SoftmaxModel::zeros(20, 10);
    for (Eigen::Index j = 0; j < r.w.size(); ++j) r.w[j] = nd(rng);
    const double a = attack_success_rate(r, ds.test, atk);
    sum += a;
    sq += a * a;
  }
  const double mean = sum / draws, sd = std::sqrt(sq / draws - mean * mean);
  CHECK(std::abs(mean - 0.1) <= 4.0 * sd / std::sqrt(double(draws)));
}

TEST_CASE("idx loader") {
  {
    IdxFixture f;
    const auto s = load_idx(f.images, f.labels);
    CHECK(s.size() == 10);
    CHECK(s.X.cols() == 784);
    CHECK(s.X(0, 1) == doctest::Approx(1.0 / 255));
    CHECK(s.X.maxCoeff() <= 1.0);
    CHECK(s.y[3] == 3);
    CHECK(load_idx(f.images, f.labels, 5).size() == 5);
    CHECK(idx_error_kind(f.labels, f.images) == IdxError::Kind::kMagicMismatch);
    CHECK(idx_error_kind(f.dir / "missing", f.labels) == IdxError::Kind::kOpen);
  }
  {
    IdxFixture f(10, 9, 10 * 784);
    CHECK(idx_error_kind(f.images, f.labels) == IdxError::Kind::kCountMismatch);
  }
  {
    IdxFixture f(10, 10, 9 * 784);
    CHECK(idx_error_kind(f.images, f.labels) == IdxError::Kind::kTruncated);
  }
  {
    IdxFixture f(10, 10, 10 * 784, 4);
    CHECK(idx_error_kind(f.images, f.labels) == IdxError::Kind::kBadLabel);
  }
}

TEST_CASE("unprotected aggregation is the mean of client deltas") {
  const auto ds = generate_synthetic(1, 10, 20, 20, 10);
  const auto clients = make_clients(ds, 4, 2);
  const auto g = SoftmaxModel::zeros(20, 10);
  RoundOptions opt;
  opt.seed = 77;
  const auto res = run_round(clients, g, ds.test, 3, AttackConfig{}, nullptr, opt);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(g.w.size());
  const auto rs = sub_seed(77, "local_train", 3);
  for (const auto& c : clients) mean += local_train(g, c.shard, opt.train, sub_seed(rs, "client", c.id));
  mean /= 4.0;
  CHECK((res.global.w - g.w - mean).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(res.record.rejected_ids.empty());
  CHECK(res.record.payload_bytes == 5 * g.dim() * 4);
}

TEST_CASE("protected and unprotected rounds agree within quantization error") {
  const auto ds = generate_synthetic(1, 10, 20, 20, 10);
  const auto clients = make_clients(ds, 5, 2);
  ZkContext zk{zkfed::setup(5, 5), {}};
  RoundOptions opt;
  opt.seed = 8;
  opt.timing = false;
  auto g = SoftmaxModel::zeros(20, 10);
  g.w.setConstant(0.01);
  const auto plain = run_round(clients, g, ds.test, 0, AttackConfig{}, nullptr, opt);
  const auto zkr = run_round(clients, g, ds.test, 0, AttackConfig{}, &zk, opt);
  CHECK(zkr.record.rejected_ids.empty());
  CHECK(zkr.record.verify_failures.empty());
  CHECK(zkr.record.proof_gen_ms == 0.0);
  CHECK((plain.global.w - zkr.global.w).cwiseAbs().maxCoeff() <= std::ldexp(1.0, -17) + 1e-15);
  CHECK(zkr.record.overhead_bytes > 0);
  CHECK(zkr.record.payload_bytes > plain.record.payload_bytes);
}

TEST_CASE("default label-flip delta exceeds a bound calibrated on clean rounds") {
  const auto ds = generate_synthetic(1, 10, 20, 200, 100);
  const auto clients = make_clients(ds, 5, 3);
  RoundOptions opt;
  opt.seed = 21;
  auto g = SoftmaxModel::zeros(20, 10);
  std::vector<double> honest;
  for (int e = 0; e < 20; ++e) {
    const auto rs = sub_seed(opt.seed, "local_train", static_cast<std::uint64_t>(e));
    for (const auto& c : clients) {
      const Eigen::VectorXd d = local_train(g, c.shard, opt.train, sub_seed(rs, "client", c.id));
      honest.push_back(zkfed::dequantized_norm(zkfed::quantize({d.data(), std::size_t(d.size())}).values));
    }
    g = run_round(clients, g, ds.test, e, AttackConfig{}, nullptr, opt).global;
  }
  const double bound = zkfed::calibrated_bound(honest, 3.0);
  AttackConfig atk;
  atk.enabled = true;
  const Eigen::VectorXd bad =
      atk.boost * local_train(g, flip_labels(clients[0].shard, atk), opt.train, 1);
  const auto q = zkfed::quantize({bad.data(), std::size_t(bad.size())});
  CHECK(!zkfed::check_policy(q.values, bound).pass);

  ZkContext zk{zkfed::setup(5, 5), {}};
  const auto prot = run_round(clients, g, ds.test, 20, atk, &zk, opt);
  CHECK(prot.record.rejected_ids == std::vector<std::uint32_t>{0});
  const auto open = run_round(clients, g, ds.test, 20, atk, nullptr, opt);
  CHECK(open.record.rejected_ids.empty());
}

TEST_CASE("experiment determinism and empty run") {
  ExperimentConfig cfg;
  cfg.epochs = 0;
  CHECK(run_experiment(cfg).empty());
  cfg.epochs = 2;
  cfg.timing = false;
  cfg.data.train_per_class = 20;
  cfg.data.test_per_class = 10;
  const auto a = run_experiment(cfg), b = run_experiment(cfg);
  REQUIRE(a.size() == 4);
  CHECK(a[0].protected_run);
  CHECK(!a[3].protected_run);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].accuracy == b[i].accuracy);
    CHECK(a[i].loss == b[i].loss);
    CHECK(a[i].payload_bytes == b[i].payload_bytes);
  }
  cfg.epochs = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
