#pragma once

#include <stdexcept>
#include <string>

namespace dhdiag::store {

// Source file missing or unreadable. Fatal for an ingest run.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad schema config, or a source file lacking a mapped column.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownColumnError : public std::out_of_range {
 public:
  explicit UnknownColumnError(std::string column)
      : std::out_of_range("unknown column: " + column), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class UnknownMeterError : public std::out_of_range {
 public:
  explicit UnknownMeterError(std::string meter)
      : std::out_of_range("unknown meter: " + meter), meter_(std::move(meter)) {}
  const std::string& meter() const noexcept { return meter_; }

 private:
  std::string meter_;
};

}  // namespace dhdiag::store
