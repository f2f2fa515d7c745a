#include "magpol/param_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "magpol/errors.hpp"

namespace magpol {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::size_t line_no, std::string_view key) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(fmt::format("line {}: value '{}' for key '{}' is not a number", line_no, text, key));
  }
  return value;
}

}  // namespace

ParamFile parse_param_file(std::istream& in) {
  ParamFile out;
  std::map<std::string, double, std::less<>> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value_text = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", line_no));
    if (seen.contains(key)) throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_no, key));
    seen.emplace(std::string(key), parse_number(value_text, line_no, key));
    const double v = seen.find(key)->second;

    auto& p = out.params;
    if (key == "omega_c") p.omega_c = v;
    else if (key == "kappa_i") p.kappa_i = v;
    else if (key == "kappa_o") p.kappa_o = v;
    else if (key == "kappa_int") p.kappa_int = v;
    else if (key == "gamma") p.gamma = v;
    else if (key == "g") p.g = v;
    else if (key == "n_spins") p.n_spins = v;
    else if (key == "a_parallel") p.a_parallel = v;
    else if (key == "gamma_e") p.gamma_e = v;
    else if (key == "calibration_c") out.calibration_c = v;
    else if (key == "omega_d") out.omega_d = v;
    else if (key == "power_dbm") out.power_dbm = v;
    else if (key == "amplitude_u") out.amplitude_u = v;
    else throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
  }

  for (std::string_view required :
       {"omega_c", "kappa_i", "kappa_o", "gamma", "g", "n_spins", "a_parallel", "gamma_e"}) {
    if (!seen.contains(required)) {
      throw ConfigError(fmt::format("missing required key '{}'", required));
    }
  }
  if (out.power_dbm && out.amplitude_u) {
    throw ConfigError("power_dbm and amplitude_u are mutually exclusive");
  }
  out.params.validate();
  if (out.calibration_c && !(*out.calibration_c > 0.0)) {
    throw ConfigError("calibration_c must be > 0");
  }
  return out;
}

ParamFile load_param_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open parameter file '{}'", path.string()));
  try {
    return parse_param_file(in);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_param_file(std::ostream& out, const ParamFile& file) {
  const auto& p = file.params;
  auto line = [&out](std::string_view key, double v) { fmt::print(out, "{} = {:.17g}\n", key, v); };
  line("omega_c", p.omega_c);
  line("kappa_i", p.kappa_i);
  line("kappa_o", p.kappa_o);
  line("kappa_int", p.kappa_int);
  line("gamma", p.gamma);
  line("g", p.g);
  if (p.n_spins) line("n_spins", *p.n_spins);
  line("a_parallel", p.a_parallel);
  line("gamma_e", p.gamma_e);
  if (file.calibration_c) line("calibration_c", *file.calibration_c);
  if (file.omega_d) line("omega_d", *file.omega_d);
  if (file.power_dbm) line("power_dbm", *file.power_dbm);
  if (file.amplitude_u) line("amplitude_u", *file.amplitude_u);
}

}  // namespace magpol
