#include "yardstick/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "yardstick/errors.hpp"
#include "yardstick/numeric.hpp"

namespace yardstick {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

struct RawRow {
    Date date;
    std::size_t line = 0;
    std::vector<std::optional<double>> cells;
};

struct RawTable {
    std::vector<std::string> tickers;
    std::vector<RawRow> rows;
};

// Reads header and rows; cell values are parsed but not range-checked.
RawTable read_table(std::istream& in) {
    RawTable table;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty input: missing header line");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3);
    }
    const auto header = split(trim(line), ',');
    if (header.size() < 2 || trim(header[0]) != "date") {
        throw ParseError("malformed header: expected 'date,<TICKER1>,...'");
    }
    std::set<std::string, std::less<>> seen;
    for (std::size_t k = 1; k < header.size(); ++k) {
        std::string ticker(trim(header[k]));
        if (ticker.empty()) throw ParseError("malformed header: empty ticker in column " + std::to_string(k + 1));
        if (!seen.insert(ticker).second) throw ParseError("malformed header: duplicate ticker '" + ticker + "'");
        table.tickers.push_back(std::move(ticker));
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto fields = split(body, ',');
        if (fields.size() != header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
        }
        const auto date = parse_iso_date(trim(fields[0]));
        if (!date) {
            throw ParseError("line " + std::to_string(line_no) + ": invalid date '" + std::string(trim(fields[0])) + "'");
        }
        RawRow row{*date, line_no, {}};
        row.cells.reserve(table.tickers.size());
        for (std::size_t k = 1; k < fields.size(); ++k) {
            const auto cell = trim(fields[k]);
            if (cell.empty()) {
                row.cells.emplace_back(std::nullopt);
                continue;
            }
            double value = 0.0;
            if (!parse_decimal(cell, value) || !std::isfinite(value)) {
                throw ValueError("line " + std::to_string(line_no) + ", column " + table.tickers[k - 1] +
                                 ": non-numeric value '" + std::string(cell) + "'");
            }
            row.cells.emplace_back(value);
        }
        table.rows.push_back(std::move(row));
    }

    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const RawRow& a, const RawRow& b) { return a.date < b.date; });
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        if (table.rows[r].date == table.rows[r - 1].date) {
            throw DuplicateDateError("duplicate date " + format_iso_date(table.rows[r].date) + " on lines " +
                                     std::to_string(table.rows[r - 1].line) + " and " +
                                     std::to_string(table.rows[r].line));
        }
    }
    return table;
}

void write_table(std::ostream& out, const std::vector<Date>& dates, const std::vector<std::string>& tickers,
                 const Matrix& values) {
    out << "date";
    for (const auto& t : tickers) out << ',' << t;
    out << '\n';
    for (std::size_t r = 0; r < dates.size(); ++r) {
        out << format_iso_date(dates[r]);
        for (std::size_t c = 0; c < tickers.size(); ++c) {
            out << ',';
            const double v = values(r, c);
            if (!std::isnan(v)) out << format_shortest(v);
        }
        out << '\n';
    }
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto digits = [&](std::size_t pos, std::size_t len, int& out) {
        out = 0;
        for (std::size_t k = pos; k < pos + len; ++k) {
            if (text[k] < '0' || text[k] > '9') return false;
            out = out * 10 + (text[k] - '0');
        }
        return true;
    };
    int y = 0, m = 0, d = 0;
    if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d)) return std::nullopt;
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_iso_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

bool PricePanel::has_missing() const {
    for (std::size_t c = 0; c < prices.cols(); ++c) {
        for (double v : prices.column(c)) {
            if (std::isnan(v)) return true;
        }
    }
    return false;
}

std::string_view to_string(ReturnMode mode) { return mode == ReturnMode::simple ? "simple" : "log"; }

ReturnMode parse_return_mode(std::string_view text) {
    if (text == "simple") return ReturnMode::simple;
    if (text == "log") return ReturnMode::log;
    throw ValueError("unknown return mode '" + std::string(text) + "' (expected simple|log)");
}

ReturnPanel::ReturnPanel(std::vector<Date> dates, std::vector<std::string> tickers, Matrix returns,
                         ReturnMode mode)
    : dates_(std::move(dates)), tickers_(std::move(tickers)), returns_(std::move(returns)), mode_(mode) {
    if (tickers_.size() < 2) {
        throw InsufficientDataError("return panel needs at least 2 tickers for a leave-one-out peer, got " +
                                    std::to_string(tickers_.size()));
    }
    if (returns_.rows() != dates_.size() || returns_.cols() != tickers_.size()) {
        throw DimensionError("return matrix shape does not match dates x tickers");
    }
    for (std::size_t t = 1; t < dates_.size(); ++t) {
        if (!(dates_[t - 1] < dates_[t])) throw ValueError("return panel dates must be strictly increasing");
    }
    for (std::size_t i = 0; i < tickers_.size(); ++i) {
        for (std::size_t t = 0; t < dates_.size(); ++t) {
            const double v = returns_(t, i);
            if (!std::isfinite(v)) {
                throw ValueError("non-finite return for " + tickers_[i] + " on " + format_iso_date(dates_[t]));
            }
            if (mode_ == ReturnMode::simple && !(v > -1.0)) {
                throw ValueError("simple return <= -1 for " + tickers_[i] + " on " + format_iso_date(dates_[t]));
            }
        }
    }
}

std::size_t ReturnPanel::ticker_index(std::string_view ticker) const {
    const auto it = std::find(tickers_.begin(), tickers_.end(), ticker);
    if (it == tickers_.end()) throw DimensionError("unknown ticker '" + std::string(ticker) + "'");
    return static_cast<std::size_t>(it - tickers_.begin());
}

PricePanel parse_price_csv(std::istream& in) {
    RawTable table = read_table(in);
    PricePanel panel;
    panel.tickers = std::move(table.tickers);
    panel.prices = Matrix(table.rows.size(), panel.tickers.size(), kMissing);
    panel.dates.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        panel.dates.push_back(row.date);
        for (std::size_t c = 0; c < row.cells.size(); ++c) {
            if (!row.cells[c]) continue;
            const double price = *row.cells[c];
            if (!(price > 0.0)) {
                throw ValueError("line " + std::to_string(row.line) + ", column " + panel.tickers[c] +
                                 ": price must be positive, got " + format_shortest(price));
            }
            panel.prices(r, c) = price;
        }
    }
    return panel;
}

PricePanel parse_price_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_price_csv(in);
}

PricePanel load_price_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input file: " + path);
    try {
        return parse_price_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const DuplicateDateError& e) {
        throw DuplicateDateError(path + ": " + e.what());
    } catch (const ValueError& e) {
        throw ValueError(path + ": " + e.what());
    }
}

void write_price_csv(std::ostream& out, const PricePanel& panel) {
    write_table(out, panel.dates, panel.tickers, panel.prices);
}

PricePanel align_calendar(const PricePanel& panel, const AlignmentPolicy& policy) {
    if (policy.kind == AlignmentPolicy::Kind::forward_fill && policy.max_fill_gap < 1) {
        throw ValueError("forward-fill requires max_fill_gap >= 1");
    }
    const std::size_t n = panel.n_tickers();
    std::vector<std::size_t> keep;
    Matrix filled = panel.prices;

    std::vector<double> last_seen(n, kMissing);
    std::vector<int> run(n, 0);
    for (std::size_t r = 0; r < panel.n_dates(); ++r) {
        bool complete = true;
        for (std::size_t c = 0; c < n; ++c) {
            const double v = panel.prices(r, c);
            if (!std::isnan(v)) {
                last_seen[c] = v;
                run[c] = 0;
                continue;
            }
            ++run[c];
            const bool fillable = policy.kind == AlignmentPolicy::Kind::forward_fill &&
                                  !std::isnan(last_seen[c]) && run[c] <= policy.max_fill_gap;
            if (fillable) {
                filled(r, c) = last_seen[c];
            } else {
                complete = false;
            }
        }
        if (complete) keep.push_back(r);
    }

    if (keep.size() < 2) {
        throw InsufficientDataError("only " + std::to_string(keep.size()) +
                                    " complete date(s) remain after alignment; need at least 2");
    }
    PricePanel out;
    out.tickers = panel.tickers;
    out.prices = Matrix(keep.size(), n);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.dates.push_back(panel.dates[keep[k]]);
        for (std::size_t c = 0; c < n; ++c) out.prices(k, c) = filled(keep[k], c);
    }
    return out;
}

ReturnPanel compute_returns(const PricePanel& panel, ReturnMode mode) {
    if (panel.n_tickers() < 2) {
        throw InsufficientDataError("need at least 2 tickers to compute a return panel, got " +
                                    std::to_string(panel.n_tickers()));
    }
    if (panel.n_dates() < 2) {
        throw InsufficientDataError("need at least 2 dates to compute returns, got " +
                                    std::to_string(panel.n_dates()));
    }
    if (panel.has_missing()) throw ValueError("price panel has missing cells; align it first");

    const std::size_t rows = panel.n_dates() - 1;
    Matrix returns(rows, panel.n_tickers());
    for (std::size_t c = 0; c < panel.n_tickers(); ++c) {
        const auto p = panel.prices.column(c);
        for (std::size_t t = 0; t < rows; ++t) {
            returns(t, c) = mode == ReturnMode::simple ? p[t + 1] / p[t] - 1.0 : std::log(p[t + 1] / p[t]);
        }
    }
    std::vector<Date> dates(panel.dates.begin() + 1, panel.dates.end());
    return ReturnPanel(std::move(dates), panel.tickers, std::move(returns), mode);
}

void write_return_csv(std::ostream& out, const ReturnPanel& panel) {
    write_table(out, panel.dates(), panel.tickers(), panel.returns());
}

ReturnPanel parse_return_csv(std::istream& in, ReturnMode mode) {
    RawTable table = read_table(in);
    Matrix returns(table.rows.size(), table.tickers.size());
    std::vector<Date> dates;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        dates.push_back(table.rows[r].date);
        for (std::size_t c = 0; c < table.tickers.size(); ++c) {
            if (!table.rows[r].cells[c]) {
                throw ValueError("line " + std::to_string(table.rows[r].line) + ", column " + table.tickers[c] +
                                 ": missing return");
            }
            returns(r, c) = *table.rows[r].cells[c];
        }
    }
    return ReturnPanel(std::move(dates), std::move(table.tickers), std::move(returns), mode);
}

}  // namespace yardstick
