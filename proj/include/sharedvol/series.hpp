#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sharedvol {

/// An ordered real-valued sequence with at least two finite values.
class Series {
public:
    Series() = default;
    explicit Series(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> view() const noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    /// Keeps the last `length` entries.
    Series tail(std::size_t length) const;

private:
    std::vector<double> values_;
};

/// K labelled series sharing one length T.
class Panel {
public:
    Panel() = default;
    Panel(std::vector<Series> series, std::vector<std::string> labels);
    /// Labels default to "s1".."sK".
    explicit Panel(std::vector<Series> series);

    std::size_t size() const noexcept { return series_.size(); }
    std::size_t length() const noexcept { return series_.empty() ? 0 : series_.front().size(); }
    const Series& operator[](std::size_t i) const { return series_[i]; }
    const std::vector<Series>& series() const noexcept { return series_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    std::vector<Series> series_;
    std::vector<std::string> labels_;
};

double mean(std::span<const double> x);
/// Population (divide-by-T) variance around the sample mean.
double variance(std::span<const double> x);
/// Sample (divide-by-(T-1)) standard deviation.
double sample_sd(std::span<const double> x);
/// True when every value equals the first one.
bool is_constant(std::span<const double> x);
/// Pearson correlation of two equal-length sequences.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace sharedvol
