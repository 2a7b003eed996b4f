#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinwehrl {

/// Named columns of doubles.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of `name`; throws std::out_of_range if absent.
  [[nodiscard]] std::size_t column(const std::string& name) const;
  [[nodiscard]] std::vector<double> column_values(const std::string& name) const;
};

/// 17 significant digits; infinities as "inf" / "-inf", NaN as "nan".
std::string format_double(double x);

void write_csv(const Table& table, std::ostream& out);

}  // namespace spinwehrl
