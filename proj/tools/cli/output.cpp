#include "output.hpp"

#include <fstream>
#include <system_error>

#include "optomech/error.hpp"

namespace optomech::cli {

namespace fs = std::filesystem;

OutputSet::OutputSet(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    throw Error(ErrorCode::Config, "output directory '" + dir_.string() + "' is not writable");
  }
}

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& [tmp, final_path] : staged_) fs::remove(tmp, ec);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void OutputSet::add_csv(const std::string& name, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) text += ',';
      text += csv_field(fields[i]);
    }
    text += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  add_file(name, text);
}

void OutputSet::add_json(const std::string& name, const nlohmann::json& doc) {
  add_file(name, doc.dump(2) + "\n");
}

void OutputSet::add_file(const std::string& name, const std::string& contents) {
  const fs::path final_path = dir_ / name;
  const fs::path tmp = dir_ / ("." + name + ".partial");
  staged_.emplace_back(tmp, final_path);
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  if (!out) throw Error(ErrorCode::Config, "cannot write '" + tmp.string() + "'");
}

void OutputSet::commit() {
  for (std::size_t i = 0; i < staged_.size(); ++i) {
    std::error_code ec;
    fs::rename(staged_[i].first, staged_[i].second, ec);
    if (ec) {
      std::error_code ignored;
      for (std::size_t j = 0; j < i; ++j) fs::remove(staged_[j].second, ignored);
      throw Error(ErrorCode::Config, "cannot write '" + staged_[i].second.string() + "': " + ec.message());
    }
  }
  committed_ = true;
}

}  // namespace optomech::cli
