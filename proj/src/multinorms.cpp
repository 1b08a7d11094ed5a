#include "cosob/multinorms.hpp"

#include <algorithm>
#include <bit>
#include <json.hpp>

namespace cosob {

namespace {

// Restricted-growth enumeration: element i joins an existing block or opens a new one.
void grow(const std::vector<int>& elems, std::size_t i, Partition& cur, std::vector<Partition>& out) {
  if (i == elems.size()) {
    out.push_back(cur);
    return;
  }
  for (std::size_t b = 0; b < cur.size(); ++b) {
    cur[b].push_back(elems[i]);
    grow(elems, i + 1, cur, out);
    cur[b].pop_back();
  }
  cur.push_back({elems[i]});
  grow(elems, i + 1, cur, out);
  cur.pop_back();
}

}  // namespace

std::vector<Partition> partitions_of_subset(std::uint32_t mask) {
  std::vector<int> elems;
  for (int i = 0; i < 32; ++i)
    if (mask & (1u << i)) elems.push_back(i + 1);
  if (elems.empty()) throw ConfigError("partitions of the empty set are not used");
  std::vector<Partition> out;
  Partition cur;
  grow(elems, 0, cur, out);
  // blocks are built in order of least element and stay sorted internally
  std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::vector<Partition> enumerate_partitions(int k) {
  if (k < 1 || k > kMaxTupleOrder) throw ConfigError("enumerate_partitions: k must be in 1..5");
  return partitions_of_subset((1u << k) - 1);
}

std::vector<std::uint32_t> subset_order(int k) {
  if (k < 1 || k > kMaxTupleOrder) throw ConfigError("subset_order: k must be in 1..5");
  std::vector<std::pair<std::vector<int>, std::uint32_t>> subsets;
  for (std::uint32_t s = 1; s < (1u << k); ++s) {
    std::vector<int> elems;
    for (int i = 0; i < k; ++i)
      if (s & (1u << i)) elems.push_back(i + 1);
    subsets.emplace_back(std::move(elems), s);
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::vector<std::uint32_t> out;
  for (const auto& s : subsets) out.push_back(s.second);
  return out;
}

std::uint32_t block_mask(const std::vector<int>& block) {
  std::uint32_t m = 0;
  for (int e : block) m |= 1u << (e - 1);
  return m;
}

long long bell_number(int n) {
  // Bell triangle
  std::vector<long long> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<long long> next{row.back()};
    for (long long v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

namespace {

void append_row_major(nlohmann::json& arr, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
}

}  // namespace

std::string serialize_flat(const KTupleMorphism& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : f.components) append_row_major(arr, c.map);
  return arr.dump();
}

std::string serialize_flat(const DoubleMorphism& f) { return serialize_flat(to_ktuple(f)); }

}  // namespace cosob
