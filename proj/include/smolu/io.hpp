// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "smolu/grid.hpp"

namespace smolu {

/// ISO-8601 UTC time, second resolution.
std::string timestamp_utc();

/// Shortest round-trip decimal form.
std::string csv_num(double x);

/// CSV file whose first line is `# <tool> generated <timestamp>`; the rest is
/// deterministic given the inputs.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& tool,
            const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t width_;
};

/// Resolves a run directory: relative paths live under $SMOLU_OUTPUT_ROOT
/// when it is set. The directory is created.
std::filesystem::path resolve_output_dir(const std::string& dir);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Position dump: "SMNP", u32 version, u32 d, u64 count, then count*d f64.
void write_smnp(const std::filesystem::path& path, int d,
                const std::vector<double>& positions);
std::vector<double> read_smnp(const std::filesystem::path& path, int& d);

/// Field dump: "SMNF", u32 version, u32 d, u32 n_cells, u32 M, f64 t, then
/// M * n_cells^d f64.
void write_smnf(const std::filesystem::path& path, const FieldState& state);
FieldState read_smnf(const std::filesystem::path& path, double L);

}  // namespace smolu
