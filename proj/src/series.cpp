#include "sharedvol/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sharedvol/errors.hpp"

namespace sharedvol {

Series::Series(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw InvalidArgument("series needs at least 2 values, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgument("non-finite value at index " + std::to_string(i));
        }
    }
}

Series Series::tail(std::size_t length) const {
    if (length > values_.size()) {
        throw InvalidArgument("tail length exceeds series length");
    }
    return Series(std::vector<double>(values_.end() - static_cast<std::ptrdiff_t>(length), values_.end()));
}

Panel::Panel(std::vector<Series> series, std::vector<std::string> labels)
    : series_(std::move(series)), labels_(std::move(labels)) {
    if (series_.empty()) {
        throw InvalidArgument("panel needs at least one series");
    }
    if (labels_.size() != series_.size()) {
        throw InvalidArgument("panel has " + std::to_string(series_.size()) + " series but " +
                              std::to_string(labels_.size()) + " labels");
    }
    const std::size_t t = series_.front().size();
    for (std::size_t i = 0; i < series_.size(); ++i) {
        if (series_[i].size() != t) {
            throw InvalidArgument("series '" + labels_[i] + "' has length " +
                                  std::to_string(series_[i].size()) + ", expected " + std::to_string(t));
        }
    }
    std::set<std::string> seen;
    for (const auto& label : labels_) {
        if (!seen.insert(label).second) {
            throw InvalidArgument("duplicate series label '" + label + "'");
        }
    }
}

namespace {
std::vector<std::string> default_labels(std::size_t k) {
    std::vector<std::string> labels(k);
    for (std::size_t i = 0; i < k; ++i) labels[i] = "s" + std::to_string(i + 1);
    return labels;
}
}  // namespace

Panel::Panel(std::vector<Series> series) : Panel(series, default_labels(series.size())) {}

double mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    return std::sqrt(variance(x) * n / (n - 1.0));
}

bool is_constant(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double dx = x[t] - mx;
        const double dy = y[t] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace sharedvol
