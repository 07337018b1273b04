// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/snapshot_io.hpp"

#include "smor/core/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace smor::io {
namespace {

static_assert(sizeof(double) == 8);

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : path_(path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    require(out_.good(), ErrorKind::Io, "cannot open for writing: " + path.string());
  }
  void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u64(std::uint64_t v) {
    v = to_little(v);
    bytes(&v, 8);
  }
  void f64s(const double* p, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
      bytes(p, n * 8);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        double v = to_little(p[i]);
        bytes(&v, 8);
      }
    }
  }
  void u64s(const std::uint64_t* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) u64(p[i]);
  }
  void finish() {
    out_.flush();
    require(out_.good(), ErrorKind::Io, "write failed: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path) {
    in_.open(path, std::ios::binary);
    require(in_.good(), ErrorKind::Io, "cannot open for reading: " + path.string());
  }
  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    require(static_cast<std::size_t>(in_.gcount()) == n, ErrorKind::Format,
            "truncated file: " + path_.string());
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    bytes(&v, 8);
    return to_little(v);
  }
  void f64s(double* p, std::size_t n) {
    bytes(p, n * 8);
    if constexpr (std::endian::native == std::endian::big) {
      for (std::size_t i = 0; i < n; ++i) p[i] = to_little(p[i]);
    }
  }
  void u64s(std::uint64_t* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) p[i] = u64();
  }
  std::uint64_t tell() { return static_cast<std::uint64_t>(in_.tellg()); }
  void seek(std::uint64_t pos) { in_.seekg(static_cast<std::streamoff>(pos)); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
};

void write_header(Writer& w, std::uint64_t a, std::uint64_t b, std::uint64_t kind) {
  w.bytes(kMagic, 4);
  w.u8(kVersion);
  w.u64(a);
  w.u64(b);
  w.u64(kind);
}

void read_header(Reader& r, std::uint64_t& a, std::uint64_t& b, std::uint64_t expected_kind) {
  char magic[4];
  r.bytes(magic, 4);
  require(std::memcmp(magic, kMagic, 4) == 0, ErrorKind::Format, "bad magic in " + r.path().string());
  const auto version = r.u8();
  require(version == kVersion, ErrorKind::Format,
          "unsupported version " + std::to_string(version) + " in " + r.path().string());
  a = r.u64();
  b = r.u64();
  const auto kind = r.u64();
  require(kind == expected_kind, ErrorKind::Format,
          "unexpected file kind " + std::to_string(kind) + " in " + r.path().string());
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  Writer w(path);
  write_header(w, static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols()), kSnapshotKind);
  w.f64s(m.data(), static_cast<std::size_t>(m.size()));
  w.finish();
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  Reader r(path);
  std::uint64_t rows = 0, cols = 0;
  read_header(r, rows, cols, kSnapshotKind);
  require(rows < (1ull << 32) && cols < (1ull << 32), ErrorKind::Format, "implausible shape in " + path.string());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  r.f64s(m.data(), static_cast<std::size_t>(m.size()));
  return m;
}

void Container::insert(Entry e) {
  require(!index_.contains(e.name), ErrorKind::InvalidInput, "duplicate container entry '" + e.name + "'");
  index_.emplace(e.name, entries_.size());
  entries_.push_back(std::move(e));
}

void Container::put(const std::string& name, const Eigen::MatrixXd& m) {
  Entry e;
  e.name = name;
  e.dtype = DType::F64;
  e.rows = static_cast<std::uint64_t>(m.rows());
  e.cols = static_cast<std::uint64_t>(m.cols());
  e.f64.assign(m.data(), m.data() + m.size());
  insert(std::move(e));
}

void Container::put_scalar(const std::string& name, double v) {
  put(name, Eigen::MatrixXd::Constant(1, 1, v));
}

void Container::put_indices(const std::string& name, const std::vector<std::uint64_t>& idx) {
  Entry e;
  e.name = name;
  e.dtype = DType::U64;
  e.rows = idx.size();
  e.cols = 1;
  e.u64 = idx;
  insert(std::move(e));
}

bool Container::contains(const std::string& name) const { return index_.count(name) != 0; }

const Container::Entry& Container::get(const std::string& name, DType dtype) const {
  auto it = index_.find(name);
  require(it != index_.end(), ErrorKind::Format, "missing container entry '" + name + "'");
  const Entry& e = entries_[it->second];
  require(e.dtype == dtype, ErrorKind::Format, "container entry '" + name + "' has the wrong type");
  return e;
}

Eigen::MatrixXd Container::matrix(const std::string& name) const {
  const Entry& e = get(name, DType::F64);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(e.rows), static_cast<Eigen::Index>(e.cols));
  if (m.size() > 0) std::memcpy(m.data(), e.f64.data(), e.f64.size() * sizeof(double));
  return m;
}

Eigen::VectorXd Container::vector(const std::string& name) const {
  const Entry& e = get(name, DType::F64);
  Eigen::VectorXd v(static_cast<Eigen::Index>(e.f64.size()));
  if (v.size() > 0) std::memcpy(v.data(), e.f64.data(), e.f64.size() * sizeof(double));
  return v;
}

double Container::scalar(const std::string& name) const {
  const Entry& e = get(name, DType::F64);
  require(e.f64.size() == 1, ErrorKind::Format, "container entry '" + name + "' is not a scalar");
  return e.f64[0];
}

std::vector<std::uint64_t> Container::indices(const std::string& name) const {
  return get(name, DType::U64).u64;
}

void Container::save(const std::filesystem::path& path) const {
  Writer w(path);
  write_header(w, entries_.size(), 0, kContainerKind);
  std::uint64_t offset = 0;
  for (const Entry& e : entries_) {
    w.u64(e.name.size());
    w.bytes(e.name.data(), e.name.size());
    w.u8(static_cast<std::uint8_t>(e.dtype));
    w.u64(e.rows);
    w.u64(e.cols);
    w.u64(offset);
    offset += 8 * e.rows * e.cols;
  }
  for (const Entry& e : entries_) {
    if (e.dtype == DType::F64)
      w.f64s(e.f64.data(), e.f64.size());
    else
      w.u64s(e.u64.data(), e.u64.size());
  }
  w.finish();
}

Container Container::load(const std::filesystem::path& path) {
  Reader r(path);
  std::uint64_t count = 0, zero = 0;
  read_header(r, count, zero, kContainerKind);
  require(count < (1u << 24), ErrorKind::Format, "implausible entry count in " + path.string());
  struct Toc {
    Entry e;
    std::uint64_t offset;
  };
  std::vector<Toc> toc;
  toc.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Toc t;
    const auto len = r.u64();
    require(len < 4096, ErrorKind::Format, "implausible entry name length in " + path.string());
    t.e.name.resize(len);
    r.bytes(t.e.name.data(), len);
    const auto dtype = r.u8();
    require(dtype <= 1, ErrorKind::Format, "unknown dtype in " + path.string());
    t.e.dtype = static_cast<DType>(dtype);
    t.e.rows = r.u64();
    t.e.cols = r.u64();
    t.offset = r.u64();
    toc.push_back(std::move(t));
  }
  const std::uint64_t payload = r.tell();
  Container c;
  for (Toc& t : toc) {
    r.seek(payload + t.offset);
    const std::size_t n = t.e.rows * t.e.cols;
    if (t.e.dtype == DType::F64) {
      t.e.f64.resize(n);
      r.f64s(t.e.f64.data(), n);
    } else {
      t.e.u64.resize(n);
      r.u64s(t.e.u64.data(), n);
    }
    c.insert(std::move(t.e));
  }
  return c;
}

}  // namespace smor::io
