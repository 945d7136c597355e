#include <cmath>

#include "binary_io.hpp"
#include "pfs/policy.hpp"

namespace pfs {

namespace {

PolicyFileHeader read_header(detail::ByteReader& r) {
  PolicyFileHeader h;
  r.expect_magic("SPT1");
  h.domain_id = r.get_string();
  h.action_count = r.get<std::uint32_t>();
  h.state_count = r.get<std::uint64_t>();
  h.seed = r.get<std::uint64_t>();
  h.target_acc = r.get<double>();
  h.measured_acc = r.get<double>();
  if (h.action_count < 2) r.fail("action count must be at least 2");
  return h;
}

}  // namespace

void save_policy_table(const SyntheticPolicyTable& table, const std::string& path) {
  detail::ByteWriter w;
  w.put_bytes("SPT1");
  w.put_string(table.domain_id());
  w.put<std::uint32_t>(static_cast<std::uint32_t>(table.action_count()));
  w.put<std::uint64_t>(table.size());
  w.put<std::uint64_t>(table.seed());
  w.put<double>(table.target_acc());
  w.put<double>(table.measured_acc());
  for (float v : table.rows()) w.put<float>(v);
  detail::write_file(path, w.bytes());
}

PolicyFileHeader read_policy_header(const std::string& path) {
  auto bytes = detail::read_file(path);
  detail::ByteReader r(bytes, path);
  return read_header(r);
}

SyntheticPolicyTable load_policy_table(const std::string& path,
                                       std::shared_ptr<const StateIndex> index) {
  auto bytes = detail::read_file(path);
  detail::ByteReader r(bytes, path);
  PolicyFileHeader h = read_header(r);
  if (h.state_count != index->size())
    r.fail("state count " + std::to_string(h.state_count) + " does not match the " +
           std::to_string(index->size()) + " enumerated states of " + h.domain_id);
  const std::size_t width = h.action_count;
  if (r.remaining() != h.state_count * width * sizeof(float))
    r.fail("row payload has " + std::to_string(r.remaining()) + " bytes, expected " +
           std::to_string(h.state_count * width * sizeof(float)));
  std::vector<float> rows(h.state_count * width);
  for (std::size_t i = 0; i < h.state_count; ++i) {
    double sum = 0.0;
    for (std::size_t a = 0; a < width; ++a) {
      float v = r.get<float>();
      if (!std::isfinite(v) || v < 0.0f) r.fail("row " + std::to_string(i) + " has an invalid score");
      rows[i * width + a] = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      r.fail("row " + std::to_string(i) + " sums to " + std::to_string(sum));
  }
  return SyntheticPolicyTable(h.domain_id, static_cast<int>(h.action_count), std::move(index),
                              std::move(rows), h.seed, h.target_acc, h.measured_acc);
}

}  // namespace pfs
