#include "mml/arith.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "mml/common.hpp"

namespace mml {

namespace {
constexpr std::array<char, 8> kMobiusMagic{'M', 'M', 'L', 'M', 'O', 'B', 'I', '1'};
constexpr std::size_t kMaxSieveLimit = std::numeric_limits<std::uint32_t>::max() - 1;
}  // namespace

MobiusTable::MobiusTable(std::size_t limit, std::vector<std::int8_t> values)
    : limit_(limit), values_(std::move(values)) {
  if (values_.size() != limit_ + 1) throw SizingError("MobiusTable: value count does not match limit");
}

MobiusTable mobius_sieve(std::size_t limit) {
  if (limit == 0) throw SizingError("mobius_sieve: limit must be at least 1");
  if (limit > kMaxSieveLimit) throw SizingError("mobius_sieve: limit overflows the 32-bit index type");

  std::vector<std::int8_t> mu(limit + 1, 0);
  std::vector<std::uint8_t> composite(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  mu[1] = 1;
  for (std::size_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      mu[i] = -1;
    }
    for (const std::uint32_t p : primes) {
      const std::uint64_t ip = static_cast<std::uint64_t>(i) * p;
      if (ip > limit) break;
      composite[ip] = 1;
      if (i % p == 0) {
        mu[ip] = 0;
        break;
      }
      mu[ip] = static_cast<std::int8_t>(-mu[i]);
    }
  }
  return MobiusTable(limit, std::move(mu));
}

void save_mobius_cache(const std::filesystem::path& file, const MobiusTable& table) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("save_mobius_cache: cannot open " + file.string());
  out.write(kMobiusMagic.data(), kMobiusMagic.size());
  std::uint64_t limit = table.limit();
  std::array<unsigned char, 8> le{};
  for (std::size_t i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>((limit >> (8 * i)) & 0xffu);
  out.write(reinterpret_cast<const char*>(le.data()), le.size());
  out.write(reinterpret_cast<const char*>(table.values().data() + 1), static_cast<std::streamsize>(table.limit()));
  if (!out) throw Error("save_mobius_cache: write failed for " + file.string());
}

std::optional<MobiusTable> load_mobius_cache(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<char, 8> magic{};
  std::array<unsigned char, 8> le{};
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(le.data()), le.size());
  if (!in || magic != kMobiusMagic) return std::nullopt;
  std::uint64_t limit = 0;
  for (std::size_t i = 0; i < 8; ++i) limit |= static_cast<std::uint64_t>(le[i]) << (8 * i);
  if (limit == 0 || limit > kMaxSieveLimit) return std::nullopt;
  std::vector<std::int8_t> values(limit + 1, 0);
  in.read(reinterpret_cast<char*>(values.data() + 1), static_cast<std::streamsize>(limit));
  if (!in) return std::nullopt;
  for (std::size_t n = 1; n <= limit; ++n) {
    if (values[n] < -1 || values[n] > 1) return std::nullopt;
  }
  return MobiusTable(limit, std::move(values));
}

MobiusTable mobius_table_cached(std::size_t limit, const std::filesystem::path& cache_dir) {
  if (cache_dir.empty()) return mobius_sieve(limit);
  const auto file = cache_dir / "mobius.bin";
  if (auto cached = load_mobius_cache(file); cached && cached->limit() >= limit) return std::move(*cached);
  auto table = mobius_sieve(limit);
  std::filesystem::create_directories(cache_dir);
  save_mobius_cache(file, table);
  return table;
}

CoefficientTable coefficient_table(double x, const MobiusTable& mobius) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("coefficient_table: x must be positive and finite");
  CoefficientTable table;
  table.x = x;
  if (x <= 1.0) return table;
  const double floor_x = std::floor(x);
  if (floor_x > static_cast<double>(kMaxSieveLimit)) throw SizingError("coefficient_table: x overflows the index type");
  const auto top = static_cast<std::size_t>(floor_x);
  if (mobius.limit() < top) throw SizingError("coefficient_table: Mobius table shorter than floor(x)");
  for (std::size_t n = 1; n <= top; ++n) {
    const int mu = mobius.mu(n);
    if (mu == 0) continue;
    table.entries.push_back({static_cast<std::uint32_t>(n), static_cast<std::int8_t>(mu),
                             std::log(x / static_cast<double>(n))});
  }
  return table;
}

}  // namespace mml
