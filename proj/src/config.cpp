#include "fracspline/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace fracspline {

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string current;
  for (char ch : s) {
    if (seps.find(ch) != std::string::npos) {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& message) const {
    throw ConfigError(source_, line, message);
  }

  double to_double(const Entry& e, const std::string& key) const {
    return to_double(e.value, e.line, key);
  }
  double to_double(const std::string& text, int line, const std::string& key) const {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
      fail(line, "'" + key + "': expected a number, got '" + text + "'");
    }
    return v;
  }
  int to_int(const Entry& e, const std::string& key) const {
    const std::string t = trim(e.value);
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || v < -1'000'000 ||
        v > 1'000'000) {
      fail(e.line, "'" + key + "': expected an integer, got '" + e.value + "'");
    }
    return static_cast<int>(v);
  }
  std::vector<double> to_list(const Entry& e, const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : split(e.value, " \t,")) out.push_back(to_double(item, e.line, key));
    return out;
  }
  TermList to_terms(const Entry& e, const std::string& key) const {
    TermList terms;
    for (const std::string& raw : split(e.value, ";")) {
      const std::vector<std::string> parts = split(raw, " \t");
      if (parts.empty()) continue;
      if (parts.size() != 3) {
        fail(e.line, "'" + key + "': term must read '<poly|caputo_power> <power> <coef>', got '" +
                         trim(raw) + "'");
      }
      ForcingTerm term;
      if (parts[0] == "poly") {
        term.kind = ForcingTerm::Kind::poly;
      } else if (parts[0] == "caputo_power") {
        term.kind = ForcingTerm::Kind::caputo_power;
      } else {
        fail(e.line, "'" + key + "': unknown term kind '" + parts[0] + "'");
      }
      term.power = to_double(parts[1], e.line, key);
      term.coef = to_double(parts[2], e.line, key);
      terms.push_back(term);
    }
    return terms;
  }

 private:
  std::string source_;
};

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"problem", {"m", "A", "X0", "gamma", "T"}},
      {"discretization", {"n", "j", "s", "ic_weight"}},
      {"output", {"dir", "grid_level"}},
  };
  return keys;
}

bool is_indexed_key(const std::string& section, const std::string& key) {
  return section == "problem" && (key.rfind("forcing.", 0) == 0 || key.rfind("exact.", 0) == 0);
}

std::string dump_terms(const TermList& terms) {
  std::string out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (k > 0) out += "; ";
    out += terms[k].kind == ForcingTerm::Kind::poly ? "poly " : "caputo_power ";
    out += format_double(terms[k].power) + " " + format_double(terms[k].coef);
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
  Parser parser(source);
  std::map<std::string, Entry> entries;  // "section.key"
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parser.fail(line_no, "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_keys().count(section)) parser.fail(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) parser.fail(line_no, "expected 'key = value', got '" + line + "'");
    if (section.empty()) parser.fail(line_no, "key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& allowed = known_keys().at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end() &&
        !is_indexed_key(section, key)) {
      parser.fail(line_no, "unknown key '" + key + "' in [" + section + "]");
    }
    const std::string full = section + "." + key;
    if (entries.count(full)) {
      parser.fail(line_no, "duplicate key '" + key + "' (first set on line " +
                               std::to_string(entries[full].line) + ")");
    }
    entries[full] = Entry{value, line_no};
  }

  const int last_line = std::max(line_no, 1);
  auto require = [&](const std::string& full) -> const Entry& {
    const auto it = entries.find(full);
    if (it == entries.end()) parser.fail(last_line, "missing required key '" + full + "'");
    return it->second;
  };

  RunConfig config;
  auto& prob = config.problem;

  const Entry& m_entry = require("problem.m");
  prob.m = parser.to_int(m_entry, "m");
  if (prob.m < 1) parser.fail(m_entry.line, "'m' must be >= 1");

  const Entry& a_entry = require("problem.A");
  prob.a = parser.to_list(a_entry, "A");
  if (prob.a.size() != static_cast<std::size_t>(prob.m) * prob.m) {
    parser.fail(a_entry.line, "'A' needs m*m = " + std::to_string(prob.m * prob.m) +
                                  " entries, got " + std::to_string(prob.a.size()));
  }
  const Entry& x0_entry = require("problem.X0");
  prob.x0 = parser.to_list(x0_entry, "X0");
  if (prob.x0.size() != static_cast<std::size_t>(prob.m)) {
    parser.fail(x0_entry.line, "'X0' needs m = " + std::to_string(prob.m) + " entries, got " +
                                   std::to_string(prob.x0.size()));
  }
  const Entry& gamma_entry = require("problem.gamma");
  prob.gamma = parser.to_double(gamma_entry, "gamma");
  if (!(prob.gamma > 0.0 && prob.gamma <= 1.0)) {
    parser.fail(gamma_entry.line, "'gamma' must satisfy 0 < gamma <= 1");
  }
  if (const auto it = entries.find("problem.T"); it != entries.end()) {
    prob.horizon = parser.to_int(it->second, "T");
    if (prob.horizon < 1) parser.fail(it->second.line, "'T' must be a positive integer");
  }

  prob.forcing.assign(static_cast<std::size_t>(prob.m), {});
  std::vector<std::optional<TermList>> exact(static_cast<std::size_t>(prob.m));
  int exact_line = 0;
  for (const auto& [full, entry] : entries) {
    for (const std::string prefix : {"problem.forcing.", "problem.exact."}) {
      if (full.rfind(prefix, 0) != 0) continue;
      const std::string key = full.substr(std::string("problem.").size());
      const Entry index_entry{full.substr(prefix.size()), entry.line};
      const int index = parser.to_int(index_entry, key);
      if (index < 1 || index > prob.m) {
        parser.fail(entry.line, "'" + key + "': component index must lie in 1.." +
                                    std::to_string(prob.m));
      }
      TermList terms = parser.to_terms(entry, key);
      for (const ForcingTerm& term : terms) {
        if (term.kind == ForcingTerm::Kind::caputo_power && term.power < 1.0) {
          parser.fail(entry.line, "'" + key + "': caputo_power needs power >= 1");
        }
        if (term.kind == ForcingTerm::Kind::poly && term.power < 0.0) {
          parser.fail(entry.line, "'" + key + "': poly needs power >= 0");
        }
      }
      if (prefix == "problem.forcing.") {
        prob.forcing[index - 1] = std::move(terms);
      } else {
        for (const ForcingTerm& term : terms) {
          if (term.kind != ForcingTerm::Kind::poly) {
            parser.fail(entry.line, "'" + key + "': exact solutions accept only poly terms");
          }
        }
        exact[index - 1] = std::move(terms);
        exact_line = std::max(exact_line, entry.line);
      }
    }
  }
  if (exact_line > 0) {
    for (std::size_t i = 0; i < exact.size(); ++i) {
      if (!exact[i]) {
        parser.fail(exact_line, "exact solution given for some components but not for component " +
                                    std::to_string(i + 1));
      }
      prob.exact.push_back(*exact[i]);
    }
  }

  auto& disc = config.discretization;
  const Entry& n_entry = require("discretization.n");
  disc.degree = parser.to_int(n_entry, "n");
  if (disc.degree < 1 || disc.degree > 12) parser.fail(n_entry.line, "'n' must lie in 1..12");
  const Entry& j_entry = require("discretization.j");
  disc.level = parser.to_int(j_entry, "j");
  if (disc.level < 0 || disc.level > 16) parser.fail(j_entry.line, "'j' must lie in 0..16");
  int level_line = j_entry.line;
  if (const auto it = entries.find("discretization.s"); it != entries.end()) {
    level_line = std::max(level_line, it->second.line);
    std::string v = it->second.value;
    v.erase(std::remove_if(v.begin(), v.end(), [](char ch) { return ch == ' ' || ch == '\t'; }),
            v.end());
    if (v != "j+1") {
      disc.colloc_level = parser.to_int(it->second, "s");
      if (*disc.colloc_level < 0 || *disc.colloc_level > 18) {
        parser.fail(it->second.line, "'s' must lie in 0..18 or read 'j+1'");
      }
    }
  }
  if (const auto it = entries.find("discretization.ic_weight"); it != entries.end()) {
    disc.ic_weight = parser.to_double(it->second, "ic_weight");
    if (!(disc.ic_weight > 0.0)) parser.fail(it->second.line, "'ic_weight' must be positive");
  }
  if (!config.to_collocation().solvable()) {
    const CollocationConfig c = config.to_collocation();
    parser.fail(level_line, "solvability condition 2^s*T + 1 >= 2^j*T + n violated (" +
                                std::to_string((1 << c.colloc_level) * c.horizon + 1) + " < " +
                                std::to_string(c.cols()) + ")");
  }

  if (const auto it = entries.find("output.dir"); it != entries.end()) {
    if (it->second.value.empty()) parser.fail(it->second.line, "'dir' must not be empty");
    config.output.dir = it->second.value;
  }
  if (const auto it = entries.find("output.grid_level"); it != entries.end()) {
    config.output.grid_level = parser.to_int(it->second, "grid_level");
    if (*config.output.grid_level < 0 || *config.output.grid_level > 20) {
      parser.fail(it->second.line, "'grid_level' must lie in 0..20");
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  return parse_config(in, path);
}

std::string dump_config(const RunConfig& config) {
  std::ostringstream out;
  const auto& prob = config.problem;
  out << "[problem]\n";
  out << "m = " << prob.m << "\n";
  out << "A =";
  for (double v : prob.a) out << ' ' << format_double(v);
  out << "\nX0 =";
  for (double v : prob.x0) out << ' ' << format_double(v);
  out << "\ngamma = " << format_double(prob.gamma) << "\n";
  out << "T = " << prob.horizon << "\n";
  for (std::size_t i = 0; i < prob.forcing.size(); ++i) {
    if (!prob.forcing[i].empty()) {
      out << "forcing." << i + 1 << " = " << dump_terms(prob.forcing[i]) << "\n";
    }
  }
  for (std::size_t i = 0; i < prob.exact.size(); ++i) {
    out << "exact." << i + 1 << " = " << dump_terms(prob.exact[i]) << "\n";
  }
  const auto& disc = config.discretization;
  out << "\n[discretization]\n";
  out << "n = " << disc.degree << "\n";
  out << "j = " << disc.level << "\n";
  out << "s = " << (disc.colloc_level ? std::to_string(*disc.colloc_level) : "j+1") << "\n";
  out << "ic_weight = " << format_double(disc.ic_weight) << "\n";
  out << "\n[output]\n";
  out << "dir = " << config.output.dir << "\n";
  if (config.output.grid_level) out << "grid_level = " << *config.output.grid_level << "\n";
  return out.str();
}

FractionalProblem RunConfig::to_problem() const {
  FractionalProblem p;
  const int m = problem.m;
  p.a = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      problem.a.data(), m, m);
  p.x0 = Eigen::Map<const Eigen::VectorXd>(problem.x0.data(), m);
  p.gamma = FractionalOrder(problem.gamma);
  p.horizon = problem.horizon;
  p.forcing = problem.forcing;
  return p;
}

CollocationConfig RunConfig::to_collocation() const {
  CollocationConfig c;
  c.degree = discretization.degree;
  c.level = discretization.level;
  c.colloc_level = discretization.colloc_level.value_or(discretization.level + 1);
  c.horizon = problem.horizon;
  c.ic_weight = discretization.ic_weight;
  return c;
}

int RunConfig::sample_grid_level() const {
  return output.grid_level.value_or(to_collocation().colloc_level + 2);
}

}  // namespace fracspline
