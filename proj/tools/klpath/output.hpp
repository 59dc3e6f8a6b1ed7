#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace klpath::cli {

/// x with 12 significant digits, fixed notation for moderate magnitudes.
std::string sig12(double x);
std::string sig12(const std::complex<double>& z);

/// Shortest decimal that reads back to the same double.
std::string exact_decimal(double x);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& file);

std::string read_file(const std::filesystem::path& file);
void write_file(const std::filesystem::path& file, const std::string& contents);

/// A CSV file split into its header fields and data rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Parses a numeric CSV with one header line; every row must have as many
/// fields as the header. Throws InvalidArgument on malformed or empty input.
CsvTable read_csv(const std::filesystem::path& file);

}  // namespace klpath::cli
