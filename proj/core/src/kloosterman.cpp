#include "klpath/kloosterman.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "klpath/error.hpp"
#include "klpath/parallel.hpp"

namespace klpath {
namespace {

// Pairwise summation of a stream of block totals with O(log n) state: a
// binary counter whose slots hold sums of 2^level consecutive blocks.
class PairwiseAccumulator {
 public:
  void push(std::complex<double> v) {
    unsigned level = 0;
    while (size_ > 0 && levels_[size_ - 1] == level) {
      v = values_[size_ - 1] + v;
      --size_;
      ++level;
    }
    values_[size_] = v;
    levels_[size_] = level;
    ++size_;
  }

  std::complex<double> total() const {
    std::complex<double> sum{};
    for (std::size_t i = size_; i > 0; --i) sum = values_[i - 1] + sum;
    return sum;
  }

 private:
  std::array<std::complex<double>, 64> values_{};
  std::array<unsigned, 64> levels_{};
  std::size_t size_ = 0;
};

}  // namespace

ModulusTables::ModulusTables(const PrimePowerModulus& m) : modulus(m), inverse(inverse_table(m)), roots(m) {}

KloostermanKernel::KloostermanKernel(const UnitResidue& b)
    : KloostermanKernel(b, std::make_shared<const ModulusTables>(b.modulus())) {}

KloostermanKernel::KloostermanKernel(const UnitResidue& b, std::shared_ptr<const ModulusTables> tables)
    : tables_(std::move(tables)), b_(b) {
  if (!(tables_->modulus == b.modulus())) throw InvalidArgument("kernel tables built for a different modulus");
  const std::uint64_t q = modulus().q();
  b_inverse_.assign(q, 0);
  for (std::uint64_t x = 1; x < q; ++x) {
    if (modulus().is_unit(x)) b_inverse_[x] = mul_mod(b.value(), tables_->inverse[x], q);
  }
}

template <class Sink>
std::complex<double> KloostermanKernel::accumulate(std::uint64_t a, Sink&& sink) const {
  const std::uint64_t q = modulus().q();
  const std::uint64_t p = modulus().p();
  if (a == 0 || a >= q || a % p == 0) throw InvalidArgument("a = " + std::to_string(a) + " is not a unit in [1, q)");
  const std::uint64_t* bx = b_inverse_.data();
  const RootTable& roots = tables_->roots;

  PairwiseAccumulator blocks;
  std::complex<double> carry{};
  std::complex<double> local{};
  std::size_t in_block = 0;
  std::size_t i = 0;
  std::uint64_t ax = 0;
  std::uint64_t residue = 0;  // x mod p
  for (std::uint64_t x = 1; x < q; ++x) {
    ax += a;
    if (ax >= q) ax -= q;
    if (++residue == p) {
      residue = 0;
      continue;
    }
    std::uint64_t idx = ax + bx[x];
    if (idx >= q) idx -= q;
    local += roots[idx];
    sink(i++, carry + local);
    if (++in_block == kBlockSize) {
      carry += local;
      blocks.push(local);
      local = {};
      in_block = 0;
    }
  }
  if (in_block != 0) blocks.push(local);
  return blocks.total();
}

std::complex<double> KloostermanKernel::complete_sum(std::uint64_t a) const {
  return accumulate(a, [](std::size_t, const std::complex<double>&) {});
}

void KloostermanKernel::prefix_sums(std::uint64_t a, std::span<std::complex<double>> out) const {
  if (out.size() != modulus().phi()) throw InvalidArgument("prefix buffer must hold phi(q) entries");
  const double scale = 1.0 / modulus().sqrt_q();
  std::complex<double>* dst = out.data();
  accumulate(a, [dst, scale](std::size_t i, const std::complex<double>& v) { dst[i] = v * scale; });
}

namespace {

void require_same_modulus(const UnitResidue& a, const UnitResidue& b) {
  if (!(a.modulus() == b.modulus())) throw InvalidArgument("a and b belong to different moduli");
}

}  // namespace

std::complex<double> full_sum_complex(const UnitResidue& a, const UnitResidue& b) {
  require_same_modulus(a, b);
  const KloostermanKernel kernel(b);
  return kernel.complete_sum(a.value()) / a.modulus().sqrt_q();
}

double full_sum(const UnitResidue& a, const UnitResidue& b) {
  require_same_modulus(a, b);
  const KloostermanKernel kernel(b);
  const std::complex<double> s = kernel.complete_sum(a.value());
  const double tolerance = 1e-9 * std::sqrt(static_cast<double>(a.modulus().phi()));
  if (std::abs(s.imag()) > tolerance) {
    throw std::logic_error("Kloosterman sum has imaginary part " + std::to_string(s.imag()) +
                           " above the rounding tolerance");
  }
  return s.real() / a.modulus().sqrt_q();
}

PartialSumSeries partial_sums(const UnitResidue& a, const UnitResidue& b) {
  require_same_modulus(a, b);
  const KloostermanKernel kernel(b);
  PartialSumSeries series{a, b, std::vector<std::complex<double>>(a.modulus().phi())};
  kernel.prefix_sums(a.value(), series.values);
  return series;
}

PrefixTable bulk_partial_sums(const UnitResidue& b, std::span<const std::uint64_t> prefix_indices, unsigned threads) {
  const PrimePowerModulus& m = b.modulus();
  std::vector<std::size_t> positions;
  positions.reserve(prefix_indices.size());
  for (std::uint64_t j : prefix_indices) {
    if (j == 0 || j >= m.q() || !m.is_unit(j)) {
      throw InvalidArgument("prefix index " + std::to_string(j) + " is not an element of J");
    }
    positions.push_back(unit_rank(j, m.p()) - 1);
  }

  PrefixTable table{m, b.value(), {}, {prefix_indices.begin(), prefix_indices.end()}, {}};
  table.a_values.reserve(m.phi());
  for (std::uint64_t x = 1; x < m.q(); ++x) {
    if (m.is_unit(x)) table.a_values.push_back(x);
  }
  const std::size_t cols = positions.size();
  table.values.resize(table.a_values.size() * cols);

  const KloostermanKernel kernel(b);
  constexpr std::size_t kRowsPerChunk = 64;
  parallel_chunks(chunk_count(table.a_values.size(), kRowsPerChunk), threads, [&](std::size_t chunk) {
    std::vector<std::complex<double>> buffer(m.phi());
    const std::size_t first = chunk * kRowsPerChunk;
    const std::size_t last = std::min(first + kRowsPerChunk, table.a_values.size());
    for (std::size_t row = first; row < last; ++row) {
      kernel.prefix_sums(table.a_values[row], buffer);
      for (std::size_t c = 0; c < cols; ++c) table.values[row * cols + c] = buffer[positions[c]];
    }
  });
  return table;
}

}  // namespace klpath
