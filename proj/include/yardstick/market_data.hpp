#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace yardstick {

using Date = std::chrono::year_month_day;

/// Parses a strict `YYYY-MM-DD` calendar date.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(const Date& date);

/// Dense column-major matrix; column j is one ticker's time series.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t row, std::size_t col) { return data_[col * rows_ + row]; }
    double operator()(std::size_t row, std::size_t col) const { return data_[col * rows_ + row]; }

    std::span<const double> column(std::size_t col) const {
        return {data_.data() + col * rows_, rows_};
    }
    std::span<double> column(std::size_t col) { return {data_.data() + col * rows_, rows_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Closing prices, one row per date and one column per ticker. A missing
/// cell is stored as NaN until `align_calendar` resolves it.
struct PricePanel {
    std::vector<Date> dates;
    std::vector<std::string> tickers;
    Matrix prices;

    std::size_t n_dates() const noexcept { return dates.size(); }
    std::size_t n_tickers() const noexcept { return tickers.size(); }
    bool has_missing() const;
};

enum class ReturnMode { simple, log };

std::string_view to_string(ReturnMode mode);
ReturnMode parse_return_mode(std::string_view text);

/// Daily returns s_i(t). Construction validates: N >= 2, every entry finite,
/// simple returns strictly above -1, dates strictly increasing.
class ReturnPanel {
public:
    ReturnPanel(std::vector<Date> dates, std::vector<std::string> tickers, Matrix returns,
                ReturnMode mode = ReturnMode::simple);

    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<std::string>& tickers() const noexcept { return tickers_; }
    const Matrix& returns() const noexcept { return returns_; }
    ReturnMode mode() const noexcept { return mode_; }

    std::size_t n_dates() const noexcept { return dates_.size(); }
    std::size_t n_tickers() const noexcept { return tickers_.size(); }

    double operator()(std::size_t t, std::size_t i) const { return returns_(t, i); }
    std::span<const double> series(std::size_t i) const { return returns_.column(i); }

    /// Index of `ticker`, or DimensionError.
    std::size_t ticker_index(std::string_view ticker) const;

private:
    std::vector<Date> dates_;
    std::vector<std::string> tickers_;
    Matrix returns_;
    ReturnMode mode_;
};

struct AlignmentPolicy {
    enum class Kind { strict_drop, forward_fill };

    Kind kind = Kind::strict_drop;
    /// Longest run of consecutive missing cells a forward fill may bridge.
    int max_fill_gap = 1;

    static AlignmentPolicy strict() { return {}; }
    static AlignmentPolicy forward_fill(int max_gap) { return {Kind::forward_fill, max_gap}; }
};

/// Reads `date,<T1>,...,<TN>` CSV. Rows are sorted by date; empty cells
/// become missing values.
///
/// Throws ParseError for a malformed header, ragged row or bad date,
/// ValueError (with row and column) for a non-numeric or non-positive price,
/// and DuplicateDateError when a date repeats.
PricePanel parse_price_csv(std::istream& in);
PricePanel parse_price_csv(std::string_view text);

/// Opens `path` and parses it; IoError names the path when it cannot be read.
PricePanel load_price_csv(const std::string& path);

/// Writes prices with shortest round-trip decimals; missing cells are empty.
void write_price_csv(std::ostream& out, const PricePanel& panel);

/// Removes or fills missing cells. Strict-drop removes any date with a
/// missing cell. Forward-fill reuses the last observed price of the ticker
/// when the run of missing cells is at most `max_fill_gap`, and otherwise
/// drops the date (including leading gaps with no prior price).
/// Throws InsufficientDataError if fewer than two dates survive.
PricePanel align_calendar(const PricePanel& panel, const AlignmentPolicy& policy);

/// simple: p(t)/p(t-1) - 1; log: ln(p(t)/p(t-1)). One fewer row than input.
ReturnPanel compute_returns(const PricePanel& panel, ReturnMode mode = ReturnMode::simple);

void write_return_csv(std::ostream& out, const ReturnPanel& panel);
ReturnPanel parse_return_csv(std::istream& in, ReturnMode mode = ReturnMode::simple);

}  // namespace yardstick
