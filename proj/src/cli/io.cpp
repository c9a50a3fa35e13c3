#include "smoothmax/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace smoothmax::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view cell) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t                   start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

PointCloud parse_points_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t                      line_number = 0;
    bool                             first_line  = true;
    std::size_t                      columns     = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto        newline = text.find('\n', pos);
        const std::size_t end     = newline == std::string_view::npos ? text.size() : newline;
        const std::string_view line = trim(text.substr(pos, end - pos));
        pos                         = end + 1;
        ++line_number;
        if (line.empty()) {
            if (newline == std::string_view::npos) {
                break;
            }
            continue;
        }

        const std::vector<std::string_view> cells = split(line);
        if (first_line) {
            first_line = false;
            if (!parse_number(cells.front())) {
                continue;  // header
            }
        }
        if (columns == 0) {
            columns = cells.size();
        } else if (cells.size() != columns) {
            throw ParseError("line " + std::to_string(line_number) + ": expected " + std::to_string(columns) +
                                 " columns, found " + std::to_string(cells.size()),
                             line_number, 0);
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto value = parse_number(cells[c]);
            if (!value) {
                throw ParseError("line " + std::to_string(line_number) + ", column " + std::to_string(c + 1) +
                                     ": not a finite number: '" + std::string(trim(cells[c])) + "'",
                                 line_number, c + 1);
            }
            row.push_back(*value);
        }
        rows.push_back(std::move(row));
        if (newline == std::string_view::npos) {
            break;
        }
    }
    if (rows.empty()) {
        throw EmptyInputError("input contains no points");
    }
    return PointCloud::from_rows(rows);
}

PointCloud read_points_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open input file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_points_csv(buffer.str());
}

}  // namespace smoothmax::cli
