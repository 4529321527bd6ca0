// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/operator_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "zigzag/table.hpp"

namespace zigzag::io {

namespace {

static_assert(std::endian::native == std::endian::little, "dump format assumes a little-endian host");

constexpr std::array<char, 8> magic{'Z', 'Z', 'O', 'P', 'D', 'U', 'M', 'P'};

class HashingWriter {
 public:
  explicit HashingWriter(const std::filesystem::path& p) : out_(p, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot write " + p.string());
  }
  void bytes(const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) h_ = (h_ ^ b[i]) * 0x100000001b3ull;
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  template <class T>
  void put(const T& v) {
    bytes(&v, sizeof v);
  }
  void finish() {
    const auto h = h_;
    out_.write(reinterpret_cast<const char*>(&h), sizeof h);
    out_.close();
    if (!out_) throw std::runtime_error("operator dump write failed");
  }

 private:
  std::ofstream out_;
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

class HashingReader {
 public:
  explicit HashingReader(const std::filesystem::path& p) : in_(p, std::ios::binary) {
    if (!in_) throw std::runtime_error("cannot read " + p.string());
  }
  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (!in_) throw std::runtime_error("truncated operator dump");
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) h_ = (h_ ^ b[i]) * 0x100000001b3ull;
  }
  template <class T>
  T get() {
    T v;
    bytes(&v, sizeof v);
    return v;
  }
  void verify() {
    std::uint64_t stored = 0;
    in_.read(reinterpret_cast<char*>(&stored), sizeof stored);
    if (!in_ || stored != h_) throw std::runtime_error("operator dump checksum mismatch");
  }

 private:
  std::ifstream in_;
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

}  // namespace

void write_operator(const std::filesystem::path& path, const SparseOperator& op, const ModelParams& p) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  HashingWriter w(path);
  w.bytes(magic.data(), magic.size());
  w.put(operator_dump_version);
  w.put(static_cast<std::int32_t>(p.L));
  w.put(static_cast<std::int32_t>(p.N));
  w.put(static_cast<std::int32_t>(p.boundary == Boundary::Periodic ? 1 : 0));
  w.put(p.g);
  w.put(p.eta);
  w.put(p.J);
  const std::uint64_t dim = op.dim(), nnz = op.nnz_offdiag();
  w.put(dim);
  w.put(nnz);
  w.bytes(op.diagonal().data(), dim * sizeof(double));
  w.bytes(op.row_ptr().data(), (dim + 1) * sizeof(std::uint64_t));
  w.bytes(op.columns().data(), nnz * sizeof(StateIndex));
  // values are expanded from the palette so the file does not depend on it
  std::vector<cplx> chunk;
  chunk.reserve(4096);
  for (std::uint64_t e = 0; e < nnz; ++e) {
    chunk.push_back(op.value(e));
    if (chunk.size() == 4096 || e + 1 == nnz) {
      w.bytes(chunk.data(), chunk.size() * sizeof(cplx));
      chunk.clear();
    }
  }
  w.finish();
}

LoadedOperator read_operator(const std::filesystem::path& path) {
  HashingReader r(path);
  std::array<char, 8> m{};
  r.bytes(m.data(), m.size());
  if (m != magic) throw std::runtime_error("not an operator dump: " + path.string());
  if (const auto v = r.get<std::uint32_t>(); v != operator_dump_version)
    throw std::runtime_error("unsupported operator dump version " + std::to_string(v));
  LoadedOperator out;
  out.params.L = r.get<std::int32_t>();
  out.params.N = r.get<std::int32_t>();
  out.params.boundary = r.get<std::int32_t>() ? Boundary::Periodic : Boundary::Open;
  out.params.g = r.get<double>();
  out.params.eta = r.get<double>();
  out.params.J = r.get<double>();
  const auto dim = r.get<std::uint64_t>();
  const auto nnz = r.get<std::uint64_t>();
  if (dim > (std::uint64_t{1} << 32) || nnz > (std::uint64_t{1} << 40)) throw std::runtime_error("corrupt dump size");
  std::vector<double> diag(dim);
  std::vector<std::uint64_t> row_ptr(dim + 1);
  std::vector<StateIndex> col(nnz);
  std::vector<cplx> val(nnz);
  r.bytes(diag.data(), dim * sizeof(double));
  r.bytes(row_ptr.data(), (dim + 1) * sizeof(std::uint64_t));
  r.bytes(col.data(), nnz * sizeof(StateIndex));
  r.bytes(val.data(), nnz * sizeof(cplx));
  r.verify();
  if (row_ptr.front() != 0 || row_ptr.back() != nnz) throw std::runtime_error("corrupt row pointers");
  out.op = SparseOperator::from_raw(std::move(diag), std::move(row_ptr), std::move(col), std::move(val));
  return out;
}

std::string operator_file_name(const ModelParams& p) {
  return "op_L" + std::to_string(p.L) + "_N" + std::to_string(p.N) + "_" + std::string(to_string(p.boundary)) +
         "_g" + format_double(p.g) + "_eta" + format_double(p.eta) + "_J" + format_double(p.J) + ".zzop";
}

}  // namespace zigzag::io
