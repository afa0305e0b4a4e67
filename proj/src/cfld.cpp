#include "mvlab/cfld.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace mvlab {
namespace {

using nlohmann::json;

static_assert(sizeof(double) == 8, "float64 payload requires 8-byte double");

void byteswap_doubles(double* v, std::size_t count) {
  auto* b = reinterpret_cast<unsigned char*>(v);
  for (std::size_t i = 0; i < count; ++i, b += 8) {
    for (int j = 0; j < 4; ++j) std::swap(b[j], b[7 - j]);
  }
}

constexpr bool kNativeLittle = std::endian::native == std::endian::little;

struct FileCloser {
  std::FILE* f;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

}  // namespace

std::string cfld_manifest(const ConnectionField& C) {
  json j;
  j["n"] = C.grid.n;
  std::vector<int> shape(C.grid.shape.begin(), C.grid.shape.begin() + C.grid.n);
  j["shape"] = shape;
  j["structure_kind"] = kind_name(C.kind);
  j["background_coeffs"] = C.background.coeffs;
  j["payload_bytes"] = static_cast<std::uint64_t>(C.potential.data.size()) * 8;
  return j.dump();
}

void write_cfld(const std::string& path, const ConnectionField& C) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cfld: cannot open for writing: " + path);
  FileCloser closer{f};
  std::string head = cfld_manifest(C) + "\n";
  if (std::fwrite(head.data(), 1, head.size(), f) != head.size()) {
    throw std::runtime_error("cfld: short write: " + path);
  }
  const std::vector<double>& d = C.potential.data;
  if (kNativeLittle) {
    if (std::fwrite(d.data(), 8, d.size(), f) != d.size()) {
      throw std::runtime_error("cfld: short write: " + path);
    }
  } else {
    std::vector<double> tmp = d;
    byteswap_doubles(tmp.data(), tmp.size());
    if (std::fwrite(tmp.data(), 8, tmp.size(), f) != tmp.size()) {
      throw std::runtime_error("cfld: short write: " + path);
    }
  }
}

ConnectionField read_cfld(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cfld: cannot open: " + path);
  FileCloser closer{f};

  std::string head;
  for (;;) {
    int c = std::fgetc(f);
    if (c == EOF) throw std::runtime_error("cfld: missing manifest line: " + path);
    if (c == '\n') break;
    head.push_back(static_cast<char>(c));
    if (head.size() > (1u << 20)) {
      throw std::runtime_error("cfld: manifest line too long: " + path);
    }
  }

  json j;
  try {
    j = json::parse(head);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("cfld: bad manifest: ") + e.what());
  }
  const int n = j.at("n").get<int>();
  const std::vector<int> shape = j.at("shape").get<std::vector<int>>();
  const StructureKind kind = parse_kind(j.at("structure_kind").get<std::string>());
  const std::vector<double> bg = j.at("background_coeffs").get<std::vector<double>>();
  const std::uint64_t bytes = j.at("payload_bytes").get<std::uint64_t>();

  if (static_cast<int>(shape.size()) != n) {
    throw std::runtime_error("cfld: shape length does not match n");
  }
  TorusGrid grid(n, shape);
  KForm F0(n, 2);
  if (bg.size() != F0.coeffs.size()) {
    throw std::runtime_error("cfld: background_coeffs has wrong length");
  }
  F0.coeffs = bg;
  ConnectionField C(grid, kind, F0);
  if (bytes != C.potential.data.size() * 8) {
    throw std::runtime_error("cfld: payload_bytes does not match shape");
  }
  if (std::fread(C.potential.data.data(), 8, C.potential.data.size(), f) !=
      C.potential.data.size()) {
    throw std::runtime_error("cfld: truncated payload: " + path);
  }
  if (!kNativeLittle) {
    byteswap_doubles(C.potential.data.data(), C.potential.data.size());
  }
  if (std::fgetc(f) != EOF) {
    throw std::runtime_error("cfld: trailing bytes after payload: " + path);
  }
  return C;
}

}  // namespace mvlab
