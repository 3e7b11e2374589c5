#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aplr {

// Error categories map onto CLI exit codes (config 2, data 3, numeric 4).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense n x p design matrix, column-major, with named columns and
/// optional strictly positive per-row weights.
class EncodedMatrix {
public:
    EncodedMatrix() = default;
    EncodedMatrix(std::size_t rows, std::vector<std::string> column_names)
        : rows_(rows),
          names_(std::move(column_names)),
          values_(rows * names_.size(), 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return names_.size(); }

    double operator()(std::size_t i, std::size_t j) const { return values_[j * rows_ + i]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[j * rows_ + i]; }

    std::span<const double> column(std::size_t j) const {
        return {values_.data() + j * rows_, rows_};
    }
    std::span<double> column(std::size_t j) {
        return {values_.data() + j * rows_, rows_};
    }

    const std::vector<std::string>& column_names() const { return names_; }

    // -1 when the column does not exist.
    std::ptrdiff_t index_of(std::string_view name) const {
        for (std::size_t j = 0; j < names_.size(); ++j)
            if (names_[j] == name) return static_cast<std::ptrdiff_t>(j);
        return -1;
    }

    bool has_weights() const { return !weights_.empty(); }
    std::span<const double> weights() const { return weights_; }
    void set_weights(std::vector<double> w);

    /// New matrix holding the given rows, in the given order.
    EncodedMatrix take_rows(std::span<const std::size_t> idx) const;

    /// Columns rearranged to match `names` (by name); throws data_error on a
    /// missing column. Weights are carried over.
    EncodedMatrix reorder_columns(const std::vector<std::string>& names) const;

    void append_row(std::span<const double> row, double weight = 1.0);

private:
    std::size_t rows_ = 0;
    std::vector<std::string> names_;
    std::vector<double> values_;   // column-major
    std::vector<double> weights_;  // empty = unweighted
};

enum class LabelKind { binary, real };

struct Labels {
    std::vector<double> y;
    LabelKind kind = LabelKind::real;

    std::size_t size() const { return y.size(); }
    /// Throws data_error if kind is binary and y contains values other than 0/1.
    void validate() const;
};

/// Deterministic RNG with a fixed, platform-independent draw algorithm.
/// std::shuffle and the std distributions are implementation-defined, so all
/// randomized code in this project draws through this wrapper.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n), unbiased (rejection sampling).
    std::uint64_t next_below(std::uint64_t n);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

/// Child seed for a named pipeline stage. Every random decision in a run
/// flows from the single config seed through this derivation, so running
/// stages one-by-one agrees with the composed pipeline.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);

/// Worker cap from APLR_THREADS; falls back to the machine default.
unsigned worker_threads();

}  // namespace aplr
