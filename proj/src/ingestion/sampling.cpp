#include "stylescope/ingestion/sampling.hpp"

#include <algorithm>
#include <map>

#include "stylescope/core/error.hpp"
#include "stylescope/core/random.hpp"

namespace stylescope {

namespace {

std::uint64_t bin_salt(const BinKey& key) {
  const std::string tag = (key.city ? "c:" + *key.city : std::string("-")) + "|" + std::to_string(key.week_index);
  return stable_hash(tag);
}

}  // namespace

std::vector<std::size_t> balanced_subsample(std::span<const BinKey> bins, std::size_t cap, std::uint64_t seed) {
  if (cap == 0) throw UsageError("balanced_subsample: cap must be >= 1");
  using GroupKey = std::pair<std::optional<std::string>, std::int64_t>;
  std::map<GroupKey, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < bins.size(); ++i) groups[{bins[i].city, bins[i].week_index}].push_back(i);

  std::vector<std::size_t> out;
  for (auto& [key, members] : groups) {
    if (members.size() <= cap) {
      out.insert(out.end(), members.begin(), members.end());
      continue;
    }
    Rng rng(mix_seed(seed, bin_salt(bins[members.front()])));
    // partial Fisher-Yates: the first `cap` slots become the sample
    for (std::size_t i = 0; i < cap; ++i) {
      const std::size_t j = i + rng.uniform_index(members.size() - i);
      std::swap(members[i], members[j]);
    }
    out.insert(out.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(cap));
  }
  std::sort(out.begin(), out.end());
  return out;
}

StratifiedSampler::StratifiedSampler(std::span<const LabeledExample> pool, std::vector<std::string> classes)
    : classes_(std::move(classes)) {
  if (pool.empty()) throw ValidationError("stratified sampler: empty pool");
  attribute_ = pool.front().attribute;
  std::map<std::string, std::vector<LabeledExample>> grouped;
  for (const auto& e : pool) {
    if (e.attribute != attribute_) {
      throw ValidationError("stratified sampler: pool mixes attributes '" + attribute_ + "' and '" + e.attribute + "'");
    }
    grouped[e.class_label].push_back(e);
  }
  if (classes_.empty()) {
    for (const auto& [label, examples] : grouped) classes_.push_back(label);
  }
  for (const auto& label : classes_) {
    const auto it = grouped.find(label);
    if (it == grouped.end()) throw ValidationError("stratified sampler: empty class '" + label + "'");
    by_class_.push_back(it->second);
  }
}

std::vector<LabeledExample> StratifiedSampler::draw(std::size_t batch, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<LabeledExample> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    const auto& members = by_class_[rng.uniform_index(by_class_.size())];
    out.push_back(members[rng.uniform_index(members.size())]);
  }
  return out;
}

}  // namespace stylescope
