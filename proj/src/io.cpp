#include "flagwave/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace flagwave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed endian hosts are not supported");

template <typename T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

fs::path with_suffix(const fs::path& base, const char* ext) {
  return fs::path(base.string() + ext);
}

}  // namespace

json lattice_json(const LatticeSpec& lattice) {
  return json{{"n", lattice.n}, {"m", lattice.m}, {"N", lattice.N}, {"L", lattice.L}};
}

LatticeSpec lattice_from_json(const json& j) {
  return make_lattice(j.at("n").get<int>(), j.at("m").get<int>(), j.at("N").get<int>(),
                      j.at("L").get<double>());
}

void write_grid_function(const fs::path& base, const GridFunction& f, const json& extra) {
  if (base.has_parent_path()) fs::create_directories(base.parent_path());
  std::ofstream out(with_suffix(base, ".f64"), std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + base.string() + ".f64");
  for (double v : f.values()) {
    double le = to_le(v);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
  json side = lattice_json(f.lattice());
  side["order"] = "row-major";
  side["dtype"] = "f64le";
  for (auto it = extra.begin(); it != extra.end(); ++it) side[it.key()] = it.value();
  write_json(with_suffix(base, ".json"), side);
}

GridFunction read_grid_function(const fs::path& base) {
  std::ifstream side(with_suffix(base, ".json"));
  if (!side) throw std::runtime_error("cannot read " + base.string() + ".json");
  json j = json::parse(side);
  if (j.value("dtype", "") != "f64le" || j.value("order", "") != "row-major")
    throw std::runtime_error("unsupported grid function layout in " + base.string());
  LatticeSpec lat = lattice_from_json(j);
  std::ifstream in(with_suffix(base, ".f64"), std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + base.string() + ".f64");
  RealVector v(lat.size());
  for (auto& x : v) {
    double le;
    if (!in.read(reinterpret_cast<char*>(&le), sizeof le))
      throw std::runtime_error("truncated grid function " + base.string());
    x = to_le(le);
  }
  return GridFunction(lat, std::move(v));
}

void write_mask(const fs::path& path, const LatticeSpec& lattice,
                std::span<const std::uint8_t> mask) {
  if (mask.size() != lattice.size()) throw std::invalid_argument("mask: shape mismatch");
  std::vector<std::uint32_t> runs;
  std::uint8_t cur = 0;
  std::uint32_t len = 0;
  for (std::uint8_t v : mask) {
    std::uint8_t b = v ? 1 : 0;
    if (b != cur) {
      runs.push_back(len);
      cur = b;
      len = 0;
    }
    ++len;
  }
  runs.push_back(len);
  json h = lattice_json(lattice);
  h["encoding"] = "rle-u32le";
  h["first_value"] = 0;
  h["runs"] = runs.size();
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::string head = h.dump();
  out << head << '\n';
  for (std::uint32_t r : runs) {
    std::uint32_t le = to_le(r);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
}

std::vector<std::uint8_t> read_mask(const fs::path& path, LatticeSpec* lattice) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string head;
  std::getline(in, head);
  json h = json::parse(head);
  LatticeSpec lat = lattice_from_json(h);
  if (lattice) *lattice = lat;
  std::size_t count = h.at("runs").get<std::size_t>();
  std::vector<std::uint8_t> mask;
  mask.reserve(lat.size());
  std::uint8_t cur = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t le;
    if (!in.read(reinterpret_cast<char*>(&le), sizeof le))
      throw std::runtime_error("truncated mask " + path.string());
    mask.insert(mask.end(), to_le(le), cur);
    cur ^= 1;
  }
  if (mask.size() != lat.size()) throw std::runtime_error("mask size mismatch " + path.string());
  return mask;
}

void write_json(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace flagwave
