#include "subic/types.hpp"

#include <map>

#include "subic/errors.hpp"

namespace subic {

Partition Partition::from_labels(const std::vector<int>& raw) {
  if (raw.empty()) throw DataError("partition: no labels");
  // canonicalize: clusters numbered 0..k-1 in order of first appearance
  std::map<int, int> remap;
  Partition out;
  out.labels.reserve(raw.size());
  for (int v : raw) {
    auto [it, inserted] = remap.emplace(v, static_cast<int>(remap.size()));
    out.labels.push_back(it->second);
  }
  out.k = static_cast<int>(remap.size());
  return out;
}

}  // namespace subic
