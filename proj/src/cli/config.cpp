#include "dfsim/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "dfsim/errors.hpp"
#include "dfsim/state_spec.hpp"

namespace dfsim::cli {

Config Config::parse(std::string_view text) {
  Config cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    if (cfg.entries_.count(key)) throw ValidationError("config line " + std::to_string(line_no) + ": duplicate key " + key);
    cfg.entries_[key] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Config::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw UsageError("expected key=value, got '" + std::string(assignment) + "'");
  const std::string key(trim(assignment.substr(0, eq)));
  if (key.empty()) throw UsageError("empty key in '" + std::string(assignment) + "'");
  set(key, std::string(trim(assignment.substr(eq + 1))));
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

const std::string* Config::lookup(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto* v = lookup(key);
  return v ? *v : fallback;
}

std::string Config::require_string(const std::string& key) const {
  const auto* v = lookup(key);
  if (!v) throw ValidationError("missing required key '" + key + "'");
  return *v;
}

namespace {

template <class F>
auto typed(const std::string& key, const std::string& value, F&& parse) {
  try {
    return parse(value);
  } catch (const ValidationError& e) {
    throw ValidationError("key '" + key + "': " + e.what());
  }
}

}  // namespace

double Config::get_real(const std::string& key, double fallback) const {
  const auto* v = lookup(key);
  return v ? typed(key, *v, [](const std::string& s) { return parse_real(s); }) : fallback;
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto* v = lookup(key);
  return v ? typed(key, *v, [](const std::string& s) { return parse_int(s); }) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto* v = lookup(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ValidationError("key '" + key + "': expected a boolean, got '" + *v + "'");
}

cplx Config::get_complex(const std::string& key, cplx fallback) const {
  const auto* v = lookup(key);
  return v ? typed(key, *v, [](const std::string& s) { return parse_complex(s); }) : fallback;
}

std::vector<double> Config::get_real_list(const std::string& key, std::vector<double> fallback) const {
  const auto* v = lookup(key);
  if (!v) return fallback;
  return typed(key, *v, [](const std::string& s) {
    std::vector<double> out;
    for (const auto& item : parse_list(s)) out.push_back(parse_real(item));
    return out;
  });
}

std::vector<cplx> Config::get_complex_list(const std::string& key) const {
  const auto* v = lookup(key);
  if (!v) throw ValidationError("missing required key '" + key + "'");
  return typed(key, *v, [](const std::string& s) {
    std::vector<cplx> out;
    for (const auto& item : parse_list(s)) out.push_back(parse_complex(item));
    return out;
  });
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) {
    if (!used_.count(k)) out.push_back(k);
  }
  return out;
}

}  // namespace dfsim::cli
