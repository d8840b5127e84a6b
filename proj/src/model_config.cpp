// SPDX-License-Identifier: Apache-2.0
#include "hillband/model_config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace hillband {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("model config: value of '" + key +
                          "' is not a number: '" + text + "'");
  }
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PeriodicCoefficients parse_model_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::vector<Segment> segments;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("model config: line " + std::to_string(lineno) +
                            " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ValidationError("model config: line " + std::to_string(lineno) +
                            " has an empty key or value");
    if (key == "segment") {
      std::vector<double> fields;
      std::istringstream fs(value);
      std::string item;
      while (std::getline(fs, item, ','))
        fields.push_back(parse_number("segment", trim(item)));
      if (fields.size() != 4)
        throw ValidationError(
            "model config: 'segment' needs exactly four fields width,p,q,s");
      segments.push_back({fields[0], fields[1], fields[2], fields[3]});
    } else {
      if (kv.count(key))
        throw ValidationError("model config: duplicate key '" + key + "'");
      kv[key] = value;
    }
  }

  auto take = [&kv](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ValidationError("model config: missing required key '" + key + "'");
    const std::string v = it->second;
    kv.erase(it);
    return v;
  };

  const std::string model = take("model");
  const double period = parse_number("period", take("period"));

  PeriodicCoefficients coeffs;
  if (model == "free_particle") {
    coeffs = PeriodicCoefficients::free_particle(period);
  } else if (model == "constant_shift") {
    coeffs = PeriodicCoefficients::constant_shift(period,
                                                  parse_number("v0", take("v0")));
  } else if (model == "kronig_penney") {
    const double height = parse_number("barrier_height", take("barrier_height"));
    const double width = parse_number("barrier_width", take("barrier_width"));
    coeffs = PeriodicCoefficients::kronig_penney(period, height, width);
  } else if (model == "mathieu") {
    coeffs = PeriodicCoefficients::mathieu(
        period, parse_number("amplitude", take("amplitude")));
  } else if (model == "piecewise_constant") {
    if (segments.empty())
      throw ValidationError(
          "model config: piecewise_constant requires at least one 'segment' line");
    coeffs = PeriodicCoefficients::piecewise(period, segments);
  } else {
    throw ValidationError("model config: unknown model '" + model + "'");
  }
  if (!segments.empty() && model != "piecewise_constant")
    throw ValidationError("model config: 'segment' lines are only valid for "
                          "piecewise_constant");
  if (!kv.empty())
    throw ValidationError("model config: unknown key '" + kv.begin()->first + "'");
  return coeffs;
}

PeriodicCoefficients load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_config(buf.str());
}

std::string canonical_model_string(const PeriodicCoefficients& coeffs) {
  std::ostringstream out;
  out << "model=" << model_kind_name(coeffs.kind) << ";period=" << g17(coeffs.period);
  switch (coeffs.kind) {
    case ModelKind::free_particle:
      break;
    case ModelKind::constant_shift:
      out << ";v0=" << g17(coeffs.v0);
      break;
    case ModelKind::kronig_penney:
      out << ";barrier_height=" << g17(coeffs.barrier_height)
          << ";barrier_width=" << g17(coeffs.barrier_width);
      break;
    case ModelKind::mathieu:
      out << ";amplitude=" << g17(coeffs.amplitude);
      break;
    case ModelKind::piecewise_constant:
      for (const Segment& s : coeffs.segments)
        out << ";segment=" << g17(s.width) << "," << g17(s.p) << "," << g17(s.q)
            << "," << g17(s.s);
      break;
  }
  return out.str();
}

std::string model_hash(const PeriodicCoefficients& coeffs) {
  const std::string s = canonical_model_string(coeffs);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hillband
