#include "aplr/types.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace aplr {

void EncodedMatrix::set_weights(std::vector<double> w) {
    if (w.empty()) {
        weights_.clear();
        return;
    }
    if (w.size() != rows_)
        throw data_error("weights length does not match row count");
    for (double x : w)
        if (!(x > 0.0)) throw data_error("weights must be strictly positive");
    weights_ = std::move(w);
}

EncodedMatrix EncodedMatrix::take_rows(std::span<const std::size_t> idx) const {
    EncodedMatrix out(idx.size(), names_);
    for (std::size_t j = 0; j < cols(); ++j) {
        auto src = column(j);
        auto dst = out.column(j);
        for (std::size_t r = 0; r < idx.size(); ++r) dst[r] = src[idx[r]];
    }
    if (has_weights()) {
        std::vector<double> w(idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r) w[r] = weights_[idx[r]];
        out.set_weights(std::move(w));
    }
    return out;
}

EncodedMatrix EncodedMatrix::reorder_columns(const std::vector<std::string>& names) const {
    EncodedMatrix out(rows_, names);
    for (std::size_t j = 0; j < names.size(); ++j) {
        auto src = index_of(names[j]);
        if (src < 0) throw data_error("missing column: " + names[j]);
        auto s = column(static_cast<std::size_t>(src));
        std::copy(s.begin(), s.end(), out.column(j).begin());
    }
    out.weights_ = weights_;
    return out;
}

void EncodedMatrix::append_row(std::span<const double> row, double weight) {
    if (row.size() != cols())
        throw data_error("appended row has wrong width");
    std::vector<double> next(values_.size() + cols());
    for (std::size_t j = 0; j < cols(); ++j) {
        auto src = column(j);
        std::copy(src.begin(), src.end(), next.begin() + j * (rows_ + 1));
        next[j * (rows_ + 1) + rows_] = row[j];
    }
    values_ = std::move(next);
    if (!weights_.empty()) weights_.push_back(weight);
    ++rows_;
}

void Labels::validate() const {
    if (kind != LabelKind::binary) return;
    for (double v : y)
        if (v != 0.0 && v != 1.0)
            throw data_error("binary labels may only contain 0 and 1");
}

std::uint64_t Rng::next_below(std::uint64_t n) {
    if (n == 0) throw numeric_error("next_below(0)");
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return x % n;
}

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    return splitmix64(base ^ fnv1a64(tag));
}

unsigned worker_threads() {
    if (const char* env = std::getenv("APLR_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace aplr
