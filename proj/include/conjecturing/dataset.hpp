#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"

namespace conjecturing {

enum class ColumnKind : std::uint8_t { Numeric, Boolean, Categorical };

inline std::string to_string(ColumnKind k) {
    switch (k) {
    case ColumnKind::Numeric: return "numeric";
    case ColumnKind::Boolean: return "boolean";
    case ColumnKind::Categorical: return "categorical";
    }
    return "?";
}

// Boolean cells: 1 true, 0 false, -1 missing. Categorical cells: level code,
// -1 missing.
inline constexpr std::int8_t kBoolMissing = -1;
inline constexpr std::int32_t kLevelMissing = -1;

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<double> numeric;
    std::vector<std::int8_t> boolean;
    std::vector<std::int32_t> codes;
    std::vector<std::string> levels;  // in order of first appearance

    std::size_t size() const {
        switch (kind) {
        case ColumnKind::Numeric: return numeric.size();
        case ColumnKind::Boolean: return boolean.size();
        case ColumnKind::Categorical: return codes.size();
        }
        return 0;
    }

    bool missing(std::size_t row) const {
        switch (kind) {
        case ColumnKind::Numeric: return is_missing(numeric[row]);
        case ColumnKind::Boolean: return boolean[row] == kBoolMissing;
        case ColumnKind::Categorical: return codes[row] == kLevelMissing;
        }
        return true;
    }

    static Column make_numeric(std::string name, std::vector<double> values) {
        Column c;
        c.name = std::move(name);
        c.kind = ColumnKind::Numeric;
        c.numeric = std::move(values);
        return c;
    }

    static Column make_boolean(std::string name, std::vector<std::int8_t> values) {
        Column c;
        c.name = std::move(name);
        c.kind = ColumnKind::Boolean;
        c.boolean = std::move(values);
        return c;
    }

    static Column make_categorical(std::string name, std::vector<std::int32_t> codes, std::vector<std::string> levels) {
        Column c;
        c.name = std::move(name);
        c.kind = ColumnKind::Categorical;
        c.codes = std::move(codes);
        c.levels = std::move(levels);
        return c;
    }
};

// Column-major typed table. Immutable once built; all mutating helpers return
// a new Dataset.
class Dataset {
public:
    Dataset() = default;

    explicit Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
        std::unordered_set<std::string> names;
        rows_ = columns_.empty() ? 0 : columns_.front().size();
        for (const auto& c : columns_) {
            if (!names.insert(c.name).second) throw InputError("duplicate column name: " + c.name);
            if (c.size() != rows_) throw InputError("column '" + c.name + "' has a different row count");
        }
        missing_.reserve(columns_.size());
        for (const auto& c : columns_) {
            std::size_t m = 0;
            for (std::size_t r = 0; r < rows_; ++r) m += c.missing(r) ? 1 : 0;
            missing_.push_back(rows_ == 0 ? 0.0 : static_cast<double>(m) / static_cast<double>(rows_));
        }
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return columns_.size(); }
    const std::vector<Column>& columns() const noexcept { return columns_; }
    const Column& column(std::size_t i) const { return columns_.at(i); }

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (columns_[i].name == name) return i;
        return std::nullopt;
    }

    std::size_t index_of(std::string_view name) const {
        if (auto i = find(name)) return *i;
        throw ConfigError("no column named '" + std::string(name) + "'");
    }

    double missing_fraction(std::size_t col) const { return missing_.at(col); }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& c : columns_) out.push_back(c.name);
        return out;
    }

    // Numeric cell, or kMissing for missing or non-numeric columns.
    double number(std::size_t row, std::size_t col) const {
        const Column& c = columns_.at(col);
        return c.kind == ColumnKind::Numeric ? c.numeric.at(row) : kMissing;
    }

    // One row in column order; non-numeric columns read as missing.
    std::vector<double> numeric_row(std::size_t row) const {
        std::vector<double> out(columns_.size(), kMissing);
        for (std::size_t c = 0; c < columns_.size(); ++c)
            if (columns_[c].kind == ColumnKind::Numeric) out[c] = columns_[c].numeric.at(row);
        return out;
    }

    Dataset select_rows(const std::vector<std::size_t>& rows) const {
        std::vector<Column> out;
        for (const auto& c : columns_) {
            Column n = c;
            n.numeric.clear();
            n.boolean.clear();
            n.codes.clear();
            for (const auto r : rows) {
                switch (c.kind) {
                case ColumnKind::Numeric: n.numeric.push_back(c.numeric.at(r)); break;
                case ColumnKind::Boolean: n.boolean.push_back(c.boolean.at(r)); break;
                case ColumnKind::Categorical: n.codes.push_back(c.codes.at(r)); break;
                }
            }
            out.push_back(std::move(n));
        }
        return Dataset(std::move(out));
    }

    Dataset head(std::size_t n) const {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < std::min(n, rows_); ++r) rows.push_back(r);
        return select_rows(rows);
    }

    Dataset with_column(Column c) const {
        auto cols = columns_;
        cols.push_back(std::move(c));
        return Dataset(std::move(cols));
    }

    // Columns whose missing fraction does not exceed `skips`.
    std::vector<std::uint32_t> eligible_numeric(double skips) const {
        std::vector<std::uint32_t> out;
        for (std::size_t c = 0; c < columns_.size(); ++c)
            if (columns_[c].kind == ColumnKind::Numeric && !(missing_[c] > skips))
                out.push_back(static_cast<std::uint32_t>(c));
        return out;
    }

private:
    std::vector<Column> columns_;
    std::vector<double> missing_;
    std::size_t rows_ = 0;
};

// ---------------------------------------------------------------------------
// CSV input/output

struct ColumnHint {
    ColumnKind kind = ColumnKind::Numeric;
    // For boolean hints: the literal spellings of true and false.
    std::optional<std::string> true_token;
    std::optional<std::string> false_token;
};

using SchemaHints = std::map<std::string, ColumnHint, std::less<>>;

namespace detail {

inline std::optional<double> parse_number(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool is_missing_cell(std::string_view s) {
    s = trim(s);
    return s.empty() || s == "NaN";
}

inline std::optional<bool> parse_bool_token(std::string_view s) {
    s = trim(s);
    if (s == "true" || s == "TRUE" || s == "True" || s == "1") return true;
    if (s == "false" || s == "FALSE" || s == "False" || s == "0") return false;
    return std::nullopt;
}

// RFC-4180 records: quoted fields may contain commas, doubled quotes and
// line breaks.
inline std::vector<std::vector<std::string>> read_records(std::istream& in) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    char ch = 0;
    auto end_field = [&]() {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&]() {
        end_field();
        if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
        record.clear();
    };
    while (in.get(ch)) {
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        if (ch == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (ch == ',') {
            end_field();
        } else if (ch == '\n') {
            end_record();
        } else if (ch != '\r') {
            field += ch;
            field_started = true;
        }
    }
    if (quoted) throw InputError("unterminated quoted field at end of file");
    if (field_started || !field.empty() || !record.empty()) end_record();
    return records;
}

inline Column build_column(std::string name, const std::vector<std::string_view>& cells, const ColumnHint* hint) {
    const std::size_t n = cells.size();
    auto as_numeric = [&]() -> std::optional<Column> {
        std::vector<double> v(n, kMissing);
        for (std::size_t r = 0; r < n; ++r) {
            if (is_missing_cell(cells[r])) continue;
            auto x = parse_number(cells[r]);
            if (!x) return std::nullopt;
            v[r] = *x;
        }
        return Column::make_numeric(name, std::move(v));
    };
    auto as_boolean = [&](const ColumnHint* h) -> std::optional<Column> {
        std::vector<std::int8_t> v(n, kBoolMissing);
        for (std::size_t r = 0; r < n; ++r) {
            if (is_missing_cell(cells[r])) continue;
            const auto cell = trim(cells[r]);
            if (h && h->true_token && cell == *h->true_token) {
                v[r] = 1;
            } else if (h && h->false_token && cell == *h->false_token) {
                v[r] = 0;
            } else if (auto b = parse_bool_token(cell)) {
                v[r] = *b ? 1 : 0;
            } else {
                return std::nullopt;
            }
        }
        return Column::make_boolean(name, std::move(v));
    };
    auto as_categorical = [&]() {
        std::vector<std::int32_t> codes(n, kLevelMissing);
        std::vector<std::string> levels;
        std::unordered_map<std::string, std::int32_t> index;
        for (std::size_t r = 0; r < n; ++r) {
            if (is_missing_cell(cells[r])) continue;
            std::string cell(trim(cells[r]));
            auto [it, fresh] = index.emplace(cell, static_cast<std::int32_t>(levels.size()));
            if (fresh) levels.push_back(cell);
            codes[r] = it->second;
        }
        return Column::make_categorical(name, std::move(codes), std::move(levels));
    };

    if (hint) {
        switch (hint->kind) {
        case ColumnKind::Numeric:
            if (auto c = as_numeric()) return std::move(*c);
            throw InputError("column '" + name + "' hinted numeric but holds non-numeric values");
        case ColumnKind::Boolean:
            if (auto c = as_boolean(hint)) return std::move(*c);
            throw InputError("column '" + name + "' hinted boolean but holds other values");
        case ColumnKind::Categorical: return as_categorical();
        }
    }
    if (auto c = as_numeric()) return std::move(*c);
    if (auto c = as_boolean(nullptr)) return std::move(*c);
    return as_categorical();
}

} // namespace detail

inline Dataset read_csv(std::istream& in, const SchemaHints& hints = {}) {
    const auto records = detail::read_records(in);
    if (records.empty()) throw InputError("missing header row");
    const auto& header = records.front();
    {
        std::unordered_set<std::string> seen;
        for (const auto& h : header)
            if (!seen.insert(std::string(detail::trim(h))).second)
                throw InputError("duplicate header name: " + h);
    }
    for (std::size_t r = 1; r < records.size(); ++r)
        if (records[r].size() != header.size())
            throw InputError("row " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) +
                             " cells, expected " + std::to_string(header.size()));
    std::vector<Column> cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        std::vector<std::string_view> cells;
        cells.reserve(records.size() - 1);
        for (std::size_t r = 1; r < records.size(); ++r) cells.emplace_back(records[r][c]);
        const std::string name(detail::trim(header[c]));
        const auto it = hints.find(name);
        cols.push_back(detail::build_column(name, cells, it == hints.end() ? nullptr : &it->second));
    }
    return Dataset(std::move(cols));
}

inline Dataset load_csv(const std::string& path, const SchemaHints& hints = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    return read_csv(in, hints);
}

// Whitespace-separated numeric table, one example per line, target last. A
// first line that is not fully numeric is taken as a header; otherwise the
// columns are named x1..x(n-1) and `target`.
inline Dataset read_whitespace(std::istream& in) {
    std::vector<std::vector<std::string>> lines;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::vector<std::string> toks;
        std::string t;
        while (ss >> t) toks.push_back(t);
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    if (lines.empty()) throw InputError("empty whitespace table");
    std::vector<std::string> names;
    std::size_t first = 0;
    const bool header = std::any_of(lines[0].begin(), lines[0].end(), [](const std::string& s) {
        return !detail::is_missing_cell(s) && !detail::parse_number(s);
    });
    if (header) {
        names = lines[0];
        first = 1;
    } else {
        for (std::size_t c = 0; c + 1 < lines[0].size(); ++c) names.push_back("x" + std::to_string(c + 1));
        names.push_back("target");
    }
    std::vector<std::vector<double>> data(names.size());
    for (std::size_t r = first; r < lines.size(); ++r) {
        if (lines[r].size() != names.size())
            throw InputError("line " + std::to_string(r + 1) + " has " + std::to_string(lines[r].size()) +
                             " values, expected " + std::to_string(names.size()));
        for (std::size_t c = 0; c < names.size(); ++c) {
            if (detail::is_missing_cell(lines[r][c])) {
                data[c].push_back(kMissing);
                continue;
            }
            auto v = detail::parse_number(lines[r][c]);
            if (!v) throw InputError("line " + std::to_string(r + 1) + ": not a number: " + lines[r][c]);
            data[c].push_back(*v);
        }
    }
    std::vector<Column> cols;
    for (std::size_t c = 0; c < names.size(); ++c) cols.push_back(Column::make_numeric(names[c], std::move(data[c])));
    return Dataset(std::move(cols));
}

inline Dataset load_whitespace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return read_whitespace(in);
}

// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
    if (is_missing(v)) return "";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace detail {

inline std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace detail

inline void write_csv(std::ostream& out, const Dataset& data) {
    const auto& cols = data.columns();
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << detail::quote_if_needed(cols[c].name);
    out << '\n';
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out << ',';
            const Column& col = cols[c];
            if (col.missing(r)) continue;
            switch (col.kind) {
            case ColumnKind::Numeric: out << format_double(col.numeric[r]); break;
            case ColumnKind::Boolean: out << (col.boolean[r] ? "true" : "false"); break;
            case ColumnKind::Categorical:
                out << detail::quote_if_needed(col.levels[static_cast<std::size_t>(col.codes[r])]);
                break;
            }
        }
        out << '\n';
    }
}

inline void save_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    write_csv(out, data);
}

// ---------------------------------------------------------------------------
// Transformations

// Replaces a categorical column by one boolean column per level, named
// `<col>__<level>`, at the same position.
inline Dataset one_hot(const Dataset& data, std::string_view column) {
    const auto idx = data.index_of(column);
    const Column& src = data.column(idx);
    if (src.kind != ColumnKind::Categorical)
        throw ConfigError("one-hot expansion needs a categorical column; '" + src.name + "' is " + to_string(src.kind));
    std::vector<Column> cols;
    for (std::size_t c = 0; c < data.cols(); ++c) {
        if (c != idx) {
            cols.push_back(data.column(c));
            continue;
        }
        for (std::size_t level = 0; level < src.levels.size(); ++level) {
            std::vector<std::int8_t> v(data.rows());
            for (std::size_t r = 0; r < data.rows(); ++r)
                v[r] = src.codes[r] == kLevelMissing ? kBoolMissing
                                                     : static_cast<std::int8_t>(src.codes[r] == static_cast<std::int32_t>(level));
            cols.push_back(Column::make_boolean(src.name + "__" + src.levels[level], std::move(v)));
        }
    }
    return Dataset(std::move(cols));
}

enum class DerivedFn : std::uint8_t { Square, Cube, Pow4, Pow5, Pow6, Sin, Cos, Sqrt };

inline std::optional<DerivedFn> derived_fn_from_string(std::string_view s) {
    static const std::map<std::string, DerivedFn, std::less<>> table{
        {"square", DerivedFn::Square}, {"cube", DerivedFn::Cube}, {"pow4", DerivedFn::Pow4},
        {"pow5", DerivedFn::Pow5},     {"pow6", DerivedFn::Pow6}, {"sin", DerivedFn::Sin},
        {"cos", DerivedFn::Cos},       {"sqrt", DerivedFn::Sqrt},
    };
    if (auto it = table.find(s); it != table.end()) return it->second;
    return std::nullopt;
}

inline double apply_derived(DerivedFn fn, double x) {
    switch (fn) {
    case DerivedFn::Square: return x * x;
    case DerivedFn::Cube: return x * x * x;
    case DerivedFn::Pow4: return x * x * x * x;
    case DerivedFn::Pow5: return x * x * x * x * x;
    case DerivedFn::Pow6: return x * x * x * x * x * x;
    case DerivedFn::Sin: return std::sin(x);
    case DerivedFn::Cos: return std::cos(x);
    case DerivedFn::Sqrt: return std::sqrt(x);
    }
    return kMissing;
}

struct DerivedColumn {
    std::string name;
    std::string source;
    DerivedFn fn = DerivedFn::Square;
};

struct ConstantColumn {
    std::string name;
    double value = 0.0;
};

struct AugmentationSpec {
    std::vector<DerivedColumn> derived;
    std::vector<ConstantColumn> constants;
};

// Appends derived columns (in spec order) and then constant columns. A
// domain violation on a row leaves that cell missing.
inline Dataset inject(const Dataset& data, const AugmentationSpec& spec) {
    auto cols = data.columns();
    for (const auto& d : spec.derived) {
        const auto src = data.index_of(d.source);
        if (data.column(src).kind != ColumnKind::Numeric)
            throw ConfigError("derived column source '" + d.source + "' is not numeric");
        std::vector<double> v(data.rows(), kMissing);
        for (std::size_t r = 0; r < data.rows(); ++r) {
            const double x = data.column(src).numeric[r];
            if (is_missing(x)) continue;
            const double y = apply_derived(d.fn, x);
            v[r] = std::isfinite(y) ? y : kMissing;
        }
        cols.push_back(Column::make_numeric(d.name, std::move(v)));
    }
    for (const auto& k : spec.constants)
        cols.push_back(Column::make_numeric(k.name, std::vector<double>(data.rows(), k.value)));
    return Dataset(std::move(cols));
}

} // namespace conjecturing
