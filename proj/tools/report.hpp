#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "necrotic/config.hpp"
#include "necrotic/model.hpp"

namespace necrotic::cli {

using nlohmann::ordered_json;

/// Output sink for one command: every file starts with the same header.
class Reporter {
 public:
  Reporter(std::string command, const RunConfig& cfg);

  /// Writes a CSV with a '#' comment header echoing version, params and config.
  void write_csv(const std::string& name, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) const;
  /// Writes {"header": ..., "result": ..., "failures": [...]}.
  void write_json(const std::string& name, const ordered_json& result) const;

  void fail(const std::string& what) { failures_.push_back(what); }
  const std::vector<std::string>& failures() const { return failures_; }

  ordered_json header() const;
  std::string path(const std::string& name) const;

 private:
  std::string command_;
  RunConfig cfg_;
  std::vector<std::string> failures_;
};

/// NaN and infinities become null.
ordered_json number(double x);

}  // namespace necrotic::cli
