#include "klpath/output.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "klpath/error.hpp"

namespace klpath::cli {

std::string sig12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  const int exponent = std::atoi(std::strchr(buf, 'e') + 1);
  if (exponent >= -5 && exponent < 15) std::snprintf(buf, sizeof buf, "%.*f", 11 - exponent, x);
  return buf;
}

std::string sig12(const std::complex<double>& z) { return sig12(z.real()) + " " + sig12(z.imag()); }

std::string exact_decimal(double x) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& file) { return sha256_hex(read_file(file)); }

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& file, const std::string& contents) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + file.string());
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& file) {
  std::istringstream in(read_file(file));
  CsvTable table;
  std::string line;
  while (std::getline(in, line) && line.empty()) {
  }
  if (line.empty()) throw InvalidArgument(file.string() + " is empty");
  if (line.back() == '\r') line.pop_back();
  table.header = split(line);
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size()) {
      throw InvalidArgument(file.string() + ":" + std::to_string(number) + ": expected " +
                            std::to_string(table.header.size()) + " fields");
    }
    std::vector<double> row;
    for (const std::string& f : fields) {
      double v = 0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw InvalidArgument(file.string() + ":" + std::to_string(number) + ": '" + f + "' is not a number");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw InvalidArgument(file.string() + " has no data rows");
  return table;
}

}  // namespace klpath::cli
