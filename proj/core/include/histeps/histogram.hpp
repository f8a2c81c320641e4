#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "histeps/snapshot.hpp"

namespace histeps {

struct HistogramRange {
  double log10_lo = -30.0;
  double log10_hi = 10.0;
  std::size_t bins = 256;

  bool operator==(const HistogramRange&) const = default;
};

/// Counts of log10(|z|) over equal-width bins. Values below 10^log10_lo go to
/// `underflow`, values at or above 10^log10_hi go to `overflow`, and exact
/// zeros to `zeros`.
struct LogMagnitudeHistogram {
  HistogramRange range;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;
  std::uint64_t zeros = 0;

  double bin_lo(std::size_t i) const;
  double bin_hi(std::size_t i) const;
  /// Bin holding a positive in-range value, or -1 when out of range.
  std::ptrdiff_t bin_of(double value) const;
  std::uint64_t total() const;

  friend bool operator==(const LogMagnitudeHistogram&, const LogMagnitudeHistogram&) = default;
};

/// Throws ContractError on negative or NaN values.
LogMagnitudeHistogram build_histogram(std::span<const double> values, const HistogramRange& range = {});
inline LogMagnitudeHistogram build_histogram(const ZhatSnapshot& snap, const HistogramRange& range = {}) {
  return build_histogram(snap.values, range);
}

/// `# zeros=Z underflow=U overflow=O` header, then `bin_lo,bin_hi,count` rows.
void write_histogram_csv(std::ostream& out, const LogMagnitudeHistogram& hist);
LogMagnitudeHistogram read_histogram_csv(std::istream& in);

/// Ascending copy of the strictly positive values; sorted once and queried for
/// several percentiles.
class PositiveOrderStatistics {
 public:
  explicit PositiveOrderStatistics(std::span<const double> values);

  std::size_t size() const { return sorted_.size(); }
  /// Nearest-rank percentile: element ceil(p/100 * n) - 1 of the sorted
  /// positives. p in (0, 100); throws EmptyPercentileError when size() == 0.
  double percentile(double p) const;

 private:
  std::vector<double> sorted_;
};

/// Nearest-rank percentile over the strictly positive entries; exact zeros are
/// excluded.
double percentile(std::span<const double> values, double p);
inline double percentile(const ZhatSnapshot& snap, double p) { return percentile(snap.values, p); }

/// Fraction of entries strictly greater than eps; zeros count in the
/// denominator. Returns 0 for an empty span.
double fraction_above(std::span<const double> values, double eps);
inline double fraction_above(const ZhatSnapshot& snap, double eps) { return fraction_above(snap.values, eps); }

/// Number of entries strictly greater than eps.
std::size_t count_above(std::span<const double> values, double eps);

/// Layer key of a variable name: the text before the last '.', or the whole name.
std::string layer_of(const std::string& variable);

}  // namespace histeps
