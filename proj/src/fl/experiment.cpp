#include "uavfl/fl/experiment.hpp"

#include <stdexcept>

#include "uavfl/common/seed.hpp"
#include "uavfl/fl/idx.hpp"
#include "uavfl/zkfed/quantize.hpp"

namespace uavfl::fl {

void ExperimentConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (n_clients == 0 || n_clients > zkfed::kMaxClients) throw std::invalid_argument("n_clients out of range");
  if (data.source == DataSource::kSynthetic) {
    if (data.n_classes < 2) throw std::invalid_argument("n_classes must be >= 2");
    if (data.d_in < data.n_classes) throw std::invalid_argument("d_in must be >= n_classes");
    if (data.train_per_class == 0 || data.test_per_class == 0) throw std::invalid_argument("per-class counts must be > 0");
    if (!(data.separation > 0.0)) throw std::invalid_argument("separation must be > 0");
  }
  train.validate();
  attack.validate(data.source == DataSource::kIdx ? 10 : data.n_classes, n_clients);
  policy.validate();
}

Dataset load_dataset(const DataConfig& cfg, std::uint64_t seed) {
  if (cfg.source == DataSource::kIdx) {
    return load_idx_dataset(cfg.train_images, cfg.train_labels, cfg.test_images, cfg.test_labels, cfg.idx_train_limit,
                            cfg.idx_test_limit);
  }
  return generate_synthetic(sub_seed(seed, "data"), cfg.n_classes, cfg.d_in, cfg.train_per_class,
                            cfg.test_per_class, cfg.separation);
}

std::vector<RoundRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<RoundRecord> records;
  if (cfg.epochs == 0) return records;

  const Dataset ds = load_dataset(cfg.data, cfg.seed);
  const auto shards = shard_iid(ds.train, cfg.n_clients, sub_seed(cfg.seed, "shards"));
  std::vector<FlClient> clients;
  for (std::size_t i = 0; i < shards.size(); ++i) clients.push_back({static_cast<std::uint32_t>(i), shards[i]});

  RoundOptions ro;
  ro.train = cfg.train;
  ro.timing = cfg.timing;
  ro.seed = sub_seed(cfg.seed, "rounds");

  ZkContext zk{zkfed::setup(sub_seed(cfg.seed, "zkfed"), cfg.n_clients), cfg.policy};
  for (const bool prot : {true, false}) {
    if (prot ? !cfg.run_protected : !cfg.run_unprotected) continue;
    SoftmaxModel global = SoftmaxModel::zeros(ds.d_in(), ds.n_classes);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      auto r = run_round(clients, global, ds.test, epoch, cfg.attack, prot ? &zk : nullptr, ro);
      global = std::move(r.global);
      records.push_back(std::move(r.record));
    }
  }
  return records;
}

}  // namespace uavfl::fl
