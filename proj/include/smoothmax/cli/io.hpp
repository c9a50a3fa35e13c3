#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "smoothmax/errors.hpp"
#include "smoothmax/point_cloud.hpp"

namespace smoothmax::cli {

/// Unreadable or malformed input.
class InputError : public Error {
  public:
    using Error::Error;
};

/// Malformed CSV input. line and column are 1-based; column is 0 when the whole row is at fault.
class ParseError : public InputError {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(what)
      , line_{line}
      , column_{column} {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// The input contained no data rows.
class EmptyInputError : public InputError {
  public:
    using InputError::InputError;
};

/// One point per line, comma-separated coordinates. A first line whose first cell is not a
/// number is treated as a header. Blank lines are ignored.
PointCloud parse_points_csv(std::string_view text);

/// Reads the file and parses it; unreadable files raise InputError.
PointCloud read_points_csv(const std::filesystem::path& path);

}  // namespace smoothmax::cli
