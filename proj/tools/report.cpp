#include "report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "necrotic/types.hpp"

namespace necrotic::cli {

namespace {

// Shortest text that reads back to the same double.
std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::ofstream open_for_write(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

Reporter::Reporter(std::string command, const RunConfig& cfg)
    : command_(std::move(command)), cfg_(cfg) {}

std::string Reporter::path(const std::string& name) const {
  return (std::filesystem::path(cfg_.out_dir) / name).string();
}

ordered_json Reporter::header() const {
  ordered_json h;
  h["artifact"] = "necrotic";
  h["version"] = kVersion;
  h["command"] = command_;
  ordered_json cfg;
  for (const auto& [k, v] : config_echo(cfg_)) cfg[k] = v;
  h["config"] = cfg;
  return h;
}

void Reporter::write_csv(const std::string& name, const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows) const {
  std::ofstream out = open_for_write(path(name));
  out << "# necrotic " << kVersion << " " << command_ << "\n";
  for (const auto& [k, v] : config_echo(cfg_)) out << "# " << k << " = " << v << "\n";
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt(row[c]);
    out << "\n";
  }
}

void Reporter::write_json(const std::string& name, const ordered_json& result) const {
  ordered_json doc;
  doc["header"] = header();
  doc["result"] = result;
  doc["failures"] = failures_;
  std::ofstream out = open_for_write(path(name));
  out << doc.dump(2) << "\n";
}

}  // namespace necrotic::cli
