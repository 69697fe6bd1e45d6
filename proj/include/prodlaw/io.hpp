#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "prodlaw/potential.hpp"
#include "prodlaw/specfun.hpp"
#include "prodlaw/spectra.hpp"
#include "prodlaw/types.hpp"

namespace prodlaw {

/// Shortest decimal form that parses back to the same double (%.17g).
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws Error when absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
/// Plain comma-separated output; fields must not contain commas or quotes.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

// Binary matrix container: "PLAWMAT1", uint64 n, uint64 count, uint32 dtype
// (1 = complex128), uint32 reserved, then count n x n matrices row-major as
// little-endian (re, im) pairs.
void write_matrices_binary(const std::filesystem::path& path, std::span<const Matrix> mats);
std::vector<Matrix> read_matrices_binary(const std::filesystem::path& path);

/// row, col, re, im
void write_matrix_csv(const std::filesystem::path& path, const Matrix& a);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// re, im, modulus
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s);
Spectrum read_spectrum_csv(const std::filesystem::path& path);

/// trial, count
void write_counts_csv(const std::filesystem::path& path, std::span<const int> counts);
std::vector<int> read_counts_csv(const std::filesystem::path& path);

/// re, im, U_n, U_inf, gap
void write_potential_csv(const std::filesystem::path& path, const PotentialField& field);

/// re, im, weight, integrand_log_magnitude
void write_nodes_csv(const std::filesystem::path& path, std::span<const QuadratureNode> nodes);

/// Writes text, creating parent directories; throws Error on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace prodlaw
