#include "fjq/coeffs.hpp"

#include "fjq/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace fjq {

namespace {

void check_indices(const char* what, int n, int k, int i) {
    if (n < 1 || k < 1 || k > i || i > n) {
        std::ostringstream msg;
        msg << what << ": require 1 <= k <= i <= n (got n=" << n << ", k=" << k << ", i=" << i << ")";
        throw DomainError(msg.str());
    }
}

void check_n(int n) {
    if (n < 1) throw DomainError("fan-out n must be >= 1 (got " + std::to_string(n) + ")");
}

// pascal[m][j] = C(m, j) for 0 <= j <= m <= n.
std::vector<std::vector<BigInt>> pascal_triangle(int n) {
    std::vector<std::vector<BigInt>> rows(n + 1);
    for (int m = 0; m <= n; ++m) {
        rows[m].resize(m + 1);
        rows[m][0] = rows[m][m] = 1;
        for (int j = 1; j < m; ++j) rows[m][j] = rows[m - 1][j - 1] + rows[m - 1][j];
    }
    return rows;
}

std::vector<BigInt> a_row_with(const std::vector<std::vector<BigInt>>& pascal, int n, int k) {
    // row[i - k] = A_i^{n,k}
    std::vector<BigInt> row(n - k + 1);
    row[0] = 1;
    for (int i = k + 1; i <= n; ++i) {
        BigInt sum = 0;
        for (int j = 1; j <= i - k; ++j) sum += pascal[n - i + j][j] * row[i - j - k];
        row[i - k] = -sum;
    }
    return row;
}

}  // namespace

// ---------------------------------------------------------------------------
// WTable

WTable::WTable(int n) : n_(n) { check_n(n); }

bool WTable::complete() const noexcept {
    return entries_.size() == static_cast<std::size_t>(n_) * (n_ + 1) / 2;
}

bool WTable::contains(int k, int i) const { return entries_.contains({k, i}); }

const BigInt& WTable::at(int k, int i) const {
    check_indices("WTable::at", n_, k, i);
    auto it = entries_.find({k, i});
    if (it == entries_.end()) {
        throw DomainError("W coefficient (n=" + std::to_string(n_) + ", k=" + std::to_string(k) +
                          ", i=" + std::to_string(i) + ") missing from table");
    }
    return it->second;
}

void WTable::set(int k, int i, BigInt value) {
    check_indices("WTable::set", n_, k, i);
    entries_[{k, i}] = std::move(value);
}

std::vector<BigInt> WTable::row(int k) const {
    check_indices("WTable::row", n_, k, k);
    std::vector<BigInt> out;
    out.reserve(n_ - k + 1);
    for (int i = k; i <= n_; ++i) out.push_back(at(k, i));
    return out;
}

// ---------------------------------------------------------------------------
// Direct computation

std::vector<BigInt> compute_a_row(int n, int k) {
    check_indices("compute_a_row", n, k, k);
    return a_row_with(pascal_triangle(n), n, k);
}

WTable compute_w_table(int n) {
    check_n(n);
    const auto pascal = pascal_triangle(n);
    WTable table(n);
    // W_i^{n,k} = sum_{j=k..i} C(n,j) A_i^{n,j}, accumulated from k = n down.
    std::vector<BigInt> acc(n + 1, BigInt(0));
    for (int k = n; k >= 1; --k) {
        const auto a = a_row_with(pascal, n, k);
        for (int i = k; i <= n; ++i) {
            acc[i] += pascal[n][k] * a[i - k];
            table.set(k, i, acc[i]);
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// CoefficientStore

CoefficientStore::CoefficientStore(std::filesystem::path cache_dir) : cache_dir_(std::move(cache_dir)) {}

CoefficientStore& CoefficientStore::shared() {
    static CoefficientStore store;
    return store;
}

std::size_t CoefficientStore::cached_rows() const {
    std::shared_lock lock(mutex_);
    return rows_.size();
}

std::shared_ptr<const std::vector<BigInt>> CoefficientStore::a_row(int n, int k) {
    check_indices("a_row", n, k, k);
    {
        std::shared_lock lock(mutex_);
        if (auto it = rows_.find({n, k}); it != rows_.end()) return it->second;
    }
    auto row = std::make_shared<const std::vector<BigInt>>(compute_a_row(n, k));
    std::unique_lock lock(mutex_);
    return rows_.try_emplace({n, k}, std::move(row)).first->second;
}

std::shared_ptr<const WTable> CoefficientStore::table(int n) {
    check_n(n);
    {
        std::shared_lock lock(mutex_);
        if (auto it = tables_.find(n); it != tables_.end()) return it->second;
    }

    std::shared_ptr<const WTable> table;
    const auto file = cache_dir_ ? std::optional(*cache_dir_ / ("w" + std::to_string(n) + ".txt")) : std::nullopt;
    if (file && std::filesystem::exists(*file)) {
        auto loaded = load_table(*file);
        if (loaded.n() != n || !loaded.complete()) {
            throw MalformedCacheError(0, "cache file " + file->string() + " does not hold the full n=" +
                                             std::to_string(n) + " table");
        }
        table = std::make_shared<const WTable>(std::move(loaded));
    } else {
        WTable built(n);
        std::vector<BigInt> acc(n + 1, BigInt(0));
        for (int k = n; k >= 1; --k) {
            const auto a = a_row(n, k);
            const BigInt c = binomial(n, k);
            for (int i = k; i <= n; ++i) {
                acc[i] += c * (*a)[i - k];
                built.set(k, i, acc[i]);
            }
        }
        if (file) {
            std::filesystem::create_directories(*cache_dir_);
            save_table(built, *file);
        }
        table = std::make_shared<const WTable>(std::move(built));
    }

    std::unique_lock lock(mutex_);
    return tables_.try_emplace(n, std::move(table)).first->second;
}

BigInt a_coefficient(int n, int k, int i) {
    check_indices("a_coefficient", n, k, i);
    return (*CoefficientStore::shared().a_row(n, k))[i - k];
}

BigInt w_coefficient(int n, int k, int i) {
    check_indices("w_coefficient", n, k, i);
    BigInt sum = 0;
    for (int j = k; j <= i; ++j) sum += binomial(n, j) * (*CoefficientStore::shared().a_row(n, j))[i - j];
    return sum;
}

WTable w_table(int n) { return *CoefficientStore::shared().table(n); }

// ---------------------------------------------------------------------------
// Cache file

void save_table(const WTable& table, std::ostream& out) {
    for (const auto& [key, value] : table.entries()) {
        out << table.n() << ' ' << key.first << ' ' << key.second << ' ' << value << '\n';
    }
}

void save_table(const WTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write coefficient cache " + path.string());
    save_table(table, out);
    if (!out) throw Error("write failed for coefficient cache " + path.string());
}

namespace {

int parse_index(const std::string& token, int line) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw MalformedCacheError(line, "expected an integer index, got '" + token + "'");
    }
    return value;
}

BigInt parse_value(const std::string& token, int line) {
    std::string_view digits = token;
    if (!digits.empty() && digits.front() == '-') digits.remove_prefix(1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
        throw MalformedCacheError(line, "expected a decimal integer value, got '" + token + "'");
    }
    return BigInt(token);
}

}  // namespace

WTable load_table(std::istream& in) {
    std::optional<WTable> table;
    std::string text;
    int line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
        std::istringstream fields(text);
        std::vector<std::string> tokens;
        for (std::string token; fields >> token;) tokens.push_back(token);
        if (tokens.empty()) continue;
        if (tokens.size() != 4) {
            throw MalformedCacheError(line, "expected 'n k i value', found " + std::to_string(tokens.size()) + " fields");
        }
        const int n = parse_index(tokens[0], line);
        const int k = parse_index(tokens[1], line);
        const int i = parse_index(tokens[2], line);
        BigInt value = parse_value(tokens[3], line);
        if (n < 1 || k < 1 || i < k || i > n) {
            throw MalformedCacheError(line, "indices violate 1 <= k <= i <= n");
        }
        if (!table) table.emplace(n);
        if (table->n() != n) {
            throw MalformedCacheError(line, "mixed fan-outs in one file (n=" + std::to_string(table->n()) + " and n=" +
                                                std::to_string(n) + ")");
        }
        if (table->contains(k, i) && table->at(k, i) != value) {
            throw MalformedCacheError(line, "conflicting duplicate entry");
        }
        table->set(k, i, std::move(value));
    }
    if (!table) throw MalformedCacheError(line, "no coefficient entries");
    return std::move(*table);
}

WTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open coefficient cache " + path.string());
    return load_table(in);
}

}  // namespace fjq
