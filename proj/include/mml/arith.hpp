#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace mml {

// mu(n) for 1 <= n <= limit. Immutable once built; safe to share between threads.
class MobiusTable {
 public:
  MobiusTable() = default;
  MobiusTable(std::size_t limit, std::vector<std::int8_t> values);

  std::size_t limit() const { return limit_; }
  int mu(std::size_t n) const { return values_[n]; }
  // Index 0 is unused and holds 0.
  const std::vector<std::int8_t>& values() const { return values_; }

 private:
  std::size_t limit_ = 0;
  std::vector<std::int8_t> values_;
};

// Linear sieve, O(limit). Throws SizingError for limit == 0 or limits that do not
// fit the 32-bit index used by coefficient tables.
MobiusTable mobius_sieve(std::size_t limit);

// Sieve cache file: 8-byte magic "MMLMOBI1", little-endian uint64 limit, then
// limit signed bytes mu(1..limit).
void save_mobius_cache(const std::filesystem::path& file, const MobiusTable& table);
std::optional<MobiusTable> load_mobius_cache(const std::filesystem::path& file);

// Loads <cache_dir>/mobius.bin when it covers `limit`, otherwise sieves and
// (re)writes it. An empty cache_dir disables caching.
MobiusTable mobius_table_cached(std::size_t limit, const std::filesystem::path& cache_dir);

struct CoefficientEntry {
  std::uint32_t n;
  std::int8_t mu;
  double weight;  // log(x/n) >= 0
};

// Summands mu(n) log(x/n) of M_x(s) log x for squarefree n <= x.
// Entries with mu(n) = 0 are omitted. Empty for 0 < x <= 1.
struct CoefficientTable {
  double x = 0.0;
  std::vector<CoefficientEntry> entries;
};

CoefficientTable coefficient_table(double x, const MobiusTable& mobius);

}  // namespace mml
