#include "histeps/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "histeps/error.hpp"

namespace histeps {

namespace {

double bin_width(const HistogramRange& r) { return (r.log10_hi - r.log10_lo) / static_cast<double>(r.bins); }

void check_range(const HistogramRange& r) {
  if (r.bins == 0 || !(r.log10_hi > r.log10_lo)) throw ContractError("histogram range must be non-empty");
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

double LogMagnitudeHistogram::bin_lo(std::size_t i) const {
  return std::pow(10.0, range.log10_lo + bin_width(range) * static_cast<double>(i));
}

double LogMagnitudeHistogram::bin_hi(std::size_t i) const { return bin_lo(i + 1); }

std::ptrdiff_t LogMagnitudeHistogram::bin_of(double value) const {
  if (!(value > 0.0)) return -1;
  const double lg = std::log10(value);
  if (lg < range.log10_lo || lg >= range.log10_hi) return -1;
  auto idx = static_cast<std::ptrdiff_t>(std::floor((lg - range.log10_lo) / bin_width(range)));
  return std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(range.bins) - 1);
}

std::uint64_t LogMagnitudeHistogram::total() const {
  std::uint64_t sum = underflow + overflow + zeros;
  for (auto c : counts) sum += c;
  return sum;
}

LogMagnitudeHistogram build_histogram(std::span<const double> values, const HistogramRange& range) {
  check_range(range);
  LogMagnitudeHistogram h;
  h.range = range;
  h.counts.assign(range.bins, 0);
  for (double x : values) {
    if (!(x >= 0.0)) throw ContractError("build_histogram: negative or NaN magnitude");
    if (x == 0.0) {
      ++h.zeros;
      continue;
    }
    const double lg = std::log10(x);
    if (lg < range.log10_lo) {
      ++h.underflow;
    } else if (lg >= range.log10_hi) {
      ++h.overflow;
    } else {
      ++h.counts[static_cast<std::size_t>(h.bin_of(x))];
    }
  }
  return h;
}

void write_histogram_csv(std::ostream& out, const LogMagnitudeHistogram& hist) {
  out << "# zeros=" << hist.zeros << " underflow=" << hist.underflow << " overflow=" << hist.overflow
      << " log10_lo=" << format_double(hist.range.log10_lo) << " log10_hi=" << format_double(hist.range.log10_hi)
      << " bins=" << hist.range.bins << "\n";
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out << format_double(hist.bin_lo(i)) << ',' << format_double(hist.bin_hi(i)) << ',' << hist.counts[i] << "\n";
  }
}

LogMagnitudeHistogram read_histogram_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw FormatError("histogram CSV: missing header");
  LogMagnitudeHistogram h;
  std::istringstream header(line.substr(2));
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw FormatError("histogram CSV: bad header field " + field);
    const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "zeros") h.zeros = std::stoull(value);
    else if (key == "underflow") h.underflow = std::stoull(value);
    else if (key == "overflow") h.overflow = std::stoull(value);
    else if (key == "log10_lo") h.range.log10_lo = std::stod(value);
    else if (key == "log10_hi") h.range.log10_hi = std::stod(value);
    else if (key == "bins") h.range.bins = std::stoull(value);
  }
  if (!std::getline(in, line) || line != "bin_lo,bin_hi,count") throw FormatError("histogram CSV: missing column row");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto last = line.rfind(',');
    if (last == std::string::npos) throw FormatError("histogram CSV: bad row " + line);
    h.counts.push_back(std::stoull(line.substr(last + 1)));
  }
  if (h.counts.size() != h.range.bins) throw FormatError("histogram CSV: row count differs from bins");
  return h;
}

PositiveOrderStatistics::PositiveOrderStatistics(std::span<const double> values) {
  sorted_.reserve(values.size());
  for (double x : values) {
    if (x > 0.0) sorted_.push_back(x);
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double PositiveOrderStatistics::percentile(double p) const {
  if (!(p > 0.0 && p < 100.0)) throw ContractError("percentile: p must lie in (0, 100)");
  if (sorted_.empty()) throw EmptyPercentileError("percentile: no positive values");
  const double n = static_cast<double>(sorted_.size());
  // p * n is exact for integral p; one rounding in the division.
  auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, sorted_.size());
  return sorted_[rank - 1];
}

double percentile(std::span<const double> values, double p) { return PositiveOrderStatistics(values).percentile(p); }

std::size_t count_above(std::span<const double> values, double eps) {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [eps](double x) { return x > eps; }));
}

double fraction_above(std::span<const double> values, double eps) {
  if (values.empty()) return 0.0;
  return static_cast<double>(count_above(values, eps)) / static_cast<double>(values.size());
}

std::string layer_of(const std::string& variable) {
  const auto dot = variable.rfind('.');
  return dot == std::string::npos ? variable : variable.substr(0, dot);
}

}  // namespace histeps
