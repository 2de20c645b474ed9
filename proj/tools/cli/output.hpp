#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace optomech::cli {

/// Collects output files under temporary names and renames them into place
/// on commit(); anything not committed is removed on destruction.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  void add_csv(const std::string& name, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
  void add_json(const std::string& name, const nlohmann::json& doc);
  void commit();

  const std::filesystem::path& dir() const { return dir_; }

 private:
  void add_file(const std::string& name, const std::string& contents);

  std::filesystem::path dir_;
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged_;  // tmp, final
  bool committed_ = false;
};

std::string csv_field(const std::string& s);

}  // namespace optomech::cli
