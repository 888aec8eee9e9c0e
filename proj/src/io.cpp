// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/io.hpp"

#include <bit>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <ctime>

#include "smolu/types.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary dumps assume a little-endian host");

namespace smolu {

constexpr std::uint32_t kFormatVersion = 1;

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_num(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& tool,
                     const std::vector<std::string>& columns)
    : out_(path), width_(columns.size()) {
  if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
  out_ << "# " << tool << " generated " << timestamp_utc() << '\n';
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
    if (!quote) {
      out_ << cells[i];
      continue;
    }
    out_ << '"';
    for (char c : cells[i]) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  out_ << '\n';
  out_.flush();
}

std::filesystem::path resolve_output_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("SMOLU_OUTPUT_ROOT"); root && *root)
      p = std::filesystem::path(root) / p;
  }
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory '" + p.string() + "': " + ec.message());
  return p;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

namespace {

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw ConfigError("truncated binary dump");
  return v;
}

void expect_magic(std::ifstream& in, const char* magic) {
  char m[4];
  in.read(m, 4);
  if (!in || std::memcmp(m, magic, 4) != 0)
    throw ConfigError(std::string("not a ") + magic + " file");
  if (get<std::uint32_t>(in) != kFormatVersion)
    throw ConfigError("unsupported dump version");
}

}  // namespace

void write_smnp(const std::filesystem::path& path, int d,
                const std::vector<double>& positions) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out.write("SMNP", 4);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  put<std::uint64_t>(out, positions.size() / d);
  out.write(reinterpret_cast<const char*>(positions.data()),
            static_cast<std::streamsize>(positions.size() * sizeof(double)));
}

std::vector<double> read_smnp(const std::filesystem::path& path, int& d) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  expect_magic(in, "SMNP");
  d = static_cast<int>(get<std::uint32_t>(in));
  const auto count = get<std::uint64_t>(in);
  std::vector<double> pos(count * d);
  in.read(reinterpret_cast<char*>(pos.data()),
          static_cast<std::streamsize>(pos.size() * sizeof(double)));
  if (!in) throw ConfigError("truncated SMNP file");
  return pos;
}

void write_smnf(const std::filesystem::path& path, const FieldState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out.write("SMNF", 4);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(state.geometry.d));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(state.geometry.n));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(state.M));
  put<double>(out, state.t);
  for (const auto& comp : state.u)
    out.write(reinterpret_cast<const char*>(comp.data()),
              static_cast<std::streamsize>(comp.size() * sizeof(double)));
}

FieldState read_smnf(const std::filesystem::path& path, double L) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  expect_magic(in, "SMNF");
  GridGeometry g;
  g.d = static_cast<int>(get<std::uint32_t>(in));
  g.n = static_cast<int>(get<std::uint32_t>(in));
  g.L = L;
  const int M = static_cast<int>(get<std::uint32_t>(in));
  FieldState s(g, M);
  s.t = get<double>(in);
  for (auto& comp : s.u) {
    in.read(reinterpret_cast<char*>(comp.data()),
            static_cast<std::streamsize>(comp.size() * sizeof(double)));
    if (!in) throw ConfigError("truncated SMNF file");
  }
  return s;
}

}  // namespace smolu
