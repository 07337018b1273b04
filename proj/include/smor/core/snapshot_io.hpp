// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Binary matrix files.
//
// Snapshot file:  "SMOR" 0x01 | u64 rows | u64 cols | u64 reserved (=0) |
//                 rows*cols f64, column-major.
// Container file: "SMOR" 0x01 | u64 entry count | u64 0 | u64 1 |
//                 table of contents | payload.
//   Each TOC entry: u64 name length, name bytes, u8 dtype (0 = f64, 1 = u64),
//   u64 rows, u64 cols, u64 byte offset into the payload.
// All integers and floats are little-endian.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace smor::io {

inline constexpr char kMagic[4] = {'S', 'M', 'O', 'R'};
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::uint64_t kSnapshotKind = 0;
inline constexpr std::uint64_t kContainerKind = 1;

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

/// Named collection of f64 matrices and u64 index lists, stored in a single
/// SMOR container file. Entry order is insertion order.
class Container {
 public:
  enum class DType : std::uint8_t { F64 = 0, U64 = 1 };

  void put(const std::string& name, const Eigen::MatrixXd& m);
  void put_scalar(const std::string& name, double v);
  void put_indices(const std::string& name, const std::vector<std::uint64_t>& idx);

  bool contains(const std::string& name) const;
  Eigen::MatrixXd matrix(const std::string& name) const;
  Eigen::VectorXd vector(const std::string& name) const;
  double scalar(const std::string& name) const;
  std::vector<std::uint64_t> indices(const std::string& name) const;
  std::size_t size() const { return entries_.size(); }

  void save(const std::filesystem::path& path) const;
  static Container load(const std::filesystem::path& path);

 private:
  struct Entry {
    std::string name;
    DType dtype = DType::F64;
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    std::vector<double> f64;
    std::vector<std::uint64_t> u64;
  };
  const Entry& get(const std::string& name, DType dtype) const;
  void insert(Entry e);

  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace smor::io
