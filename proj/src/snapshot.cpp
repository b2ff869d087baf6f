#include "normsol/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace normsol {

namespace {

// Explicit little-endian encoding so the format is platform-pinned.
void put_u32(std::ostream& os, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<char*>(b), 4);
}
void put_u64(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<char*>(b), 8);
}
void put_f64(std::ostream& os, double x) {
  uint64_t v;
  std::memcpy(&v, &x, 8);
  put_u64(os, v);
}
uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= uint32_t(b[i]) << (8 * i);
  return v;
}
uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
  return v;
}
double get_f64(std::istream& is) {
  uint64_t v = get_u64(is);
  double x;
  std::memcpy(&x, &v, 8);
  return x;
}

}  // namespace

void write_snapshot(const std::string& path, const Field& u, double p) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("write_snapshot: cannot open " + path);
  os.write("MBF1", 4);
  const Grid& g = *u.grid;
  put_u32(os, uint32_t(g.dim()));
  put_f64(os, p);
  put_u32(os, uint32_t(g.domain.kind));
  double params[4] = {0, 0, 0, 0};
  switch (g.domain.kind) {
    case DomainKind::Interval:
      params[0] = g.domain.a;
      params[1] = g.domain.b;
      break;
    case DomainKind::Rectangle:
      params[0] = g.domain.w0;
      params[1] = g.domain.w1;
      break;
    case DomainKind::Disk:
      params[0] = g.domain.radius;
      break;
  }
  for (double q : params) put_f64(os, q);
  put_u32(os, uint32_t(g.resolution));
  put_u64(os, uint64_t(u.values.size()));
  for (Eigen::Index i = 0; i < u.values.size(); ++i) put_f64(os, u.values[i]);
  if (!os) throw numerical_error("write_snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw config_error("read_snapshot: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "MBF1", 4) != 0)
    throw config_error("read_snapshot: bad magic in " + path);
  get_u32(is);  // dimension, implied by the domain kind
  const double p = get_f64(is);
  const uint32_t kind = get_u32(is);
  double params[4];
  for (double& q : params) q = get_f64(is);
  const uint32_t n = get_u32(is);
  const uint64_t count = get_u64(is);

  DomainSpec dom;
  switch (DomainKind(kind)) {
    case DomainKind::Interval:
      dom = DomainSpec::interval(params[0], params[1]);
      break;
    case DomainKind::Rectangle:
      dom = DomainSpec::rectangle(params[0], params[1]);
      break;
    case DomainKind::Disk:
      dom = DomainSpec::disk(params[0]);
      break;
    default:
      throw config_error("read_snapshot: unknown domain kind");
  }
  GridPtr g = build_grid(dom, int(n));
  if (uint64_t(g->size()) != count)
    throw config_error("read_snapshot: node count mismatch");
  Vec v(count);
  for (uint64_t i = 0; i < count; ++i) v[i] = get_f64(is);
  if (!is) throw config_error("read_snapshot: truncated file " + path);
  return Snapshot{Field(g, std::move(v)), p};
}

}  // namespace normsol
