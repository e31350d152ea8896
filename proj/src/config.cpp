#include "fieldmix/config.hpp"

#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace fieldmix {

Settings Settings::from_ini_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read config " + path + ": " + e.message());
  }
  Settings s;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      s.set("run." + section, body.data());
      continue;
    }
    for (const auto& [key, value] : body) s.set(section + "." + key, value.data());
  }
  return s;
}

std::optional<std::string> Settings::lookup(const std::string& task, const std::string& key) const {
  for (const std::string& section : {std::string("flag"), task, std::string("run"), std::string("model")}) {
    const auto it = values_.find(section + "." + key);
    if (it != values_.end()) return it->second;
  }
  return std::nullopt;
}

std::string Settings::text(const std::string& task, const std::string& key, const std::string& fallback) const {
  return lookup(task, key).value_or(fallback);
}

double Settings::number(const std::string& task, const std::string& key, double fallback) const {
  const auto v = lookup(task, key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const double x = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + *v + "'");
  }
}

long long Settings::integer(const std::string& task, const std::string& key, long long fallback) const {
  const auto v = lookup(task, key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const long long x = std::stoll(*v, &used);
    if (used != v->size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + *v + "'");
  }
}

std::optional<std::uint64_t> Settings::seed(const std::string& task) const {
  const auto v = lookup(task, "seed");
  if (!v) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(*v, &used);
    if (used != v->size() || v->front() == '-') throw std::invalid_argument("bad seed");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("seed must be a nonnegative integer, got '" + *v + "'");
  }
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    try {
      out.push_back(std::stod(item.substr(first)));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "'");
    }
  }
  return out;
}

std::vector<double> Settings::grid(const std::string& task, const std::string& key,
                                   const std::vector<double>& fallback) const {
  const auto v = lookup(task, key);
  if (!v) return fallback;
  auto out = parse_number_list(*v);
  if (out.empty()) throw ConfigError("grid '" + key + "' is empty");
  return out;
}

}  // namespace fieldmix
