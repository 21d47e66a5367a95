#pragma once

#include "fjq/numeric.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <utility>
#include <vector>

namespace fjq {

/// Upper-triangular table of W coefficients for one fan-out n: the weights
/// that express the k-th order statistic (k-th smallest) of n jointly
/// identical variables as a linear combination of the maxima of the first
/// k, k+1, ..., n of them.
///
/// A table built by w_table() is complete. A table read from a cache file may
/// hold only some entries; at() throws for absent ones.
class WTable {
  public:
    explicit WTable(int n);

    int n() const noexcept { return n_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool complete() const noexcept;

    bool contains(int k, int i) const;
    const BigInt& at(int k, int i) const;
    void set(int k, int i, BigInt value);

    /// W_k .. W_n for rank k; throws if any entry of the row is missing.
    std::vector<BigInt> row(int k) const;

    const std::map<std::pair<int, int>, BigInt>& entries() const noexcept { return entries_; }

    friend bool operator==(const WTable&, const WTable&) = default;

  private:
    int n_;
    std::map<std::pair<int, int>, BigInt> entries_;
};

/// A_k^{n,k} .. A_n^{n,k} straight from the recurrence, no memoization.
std::vector<BigInt> compute_a_row(int n, int k);

/// Full table without touching the shared store.
WTable compute_w_table(int n);

/// Thread-safe memo of A rows (keyed by (n, k)) and W tables (keyed by n).
/// Rows become visible to readers only once fully computed. With a cache
/// directory, W tables are read from / written to `w<n>.txt` there.
class CoefficientStore {
  public:
    CoefficientStore() = default;
    explicit CoefficientStore(std::filesystem::path cache_dir);

    CoefficientStore(const CoefficientStore&) = delete;
    CoefficientStore& operator=(const CoefficientStore&) = delete;

    std::shared_ptr<const std::vector<BigInt>> a_row(int n, int k);
    std::shared_ptr<const WTable> table(int n);

    std::size_t cached_rows() const;

    static CoefficientStore& shared();

  private:
    std::optional<std::filesystem::path> cache_dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::pair<int, int>, std::shared_ptr<const std::vector<BigInt>>> rows_;
    std::map<int, std::shared_ptr<const WTable>> tables_;
};

BigInt a_coefficient(int n, int k, int i);
BigInt w_coefficient(int n, int k, int i);
WTable w_table(int n);

/// Text cache format: one `n k i value` entry per line, `#` comments,
/// any order. Every entry in one file shares the same n.
void save_table(const WTable& table, std::ostream& out);
void save_table(const WTable& table, const std::filesystem::path& path);
WTable load_table(std::istream& in);
WTable load_table(const std::filesystem::path& path);

}  // namespace fjq
